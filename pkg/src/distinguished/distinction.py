"""Distinction of principal series pi(chi_1, ..., chi_n) of GL(n, K).

pi(chi) is distinguished iff the indices split into pairs {i, j} with
chi_j = chi_i^{-sigma} and singletons i with chi_i trivial on F*.  Read
literally the criterion fixes an order (pairs first, adjacent); up to
isomorphism it only depends on the multiset of characters, which is what
``is_distinguished`` decides.  Certificate indices are 1-based.
"""

import logging
import os
from collections import Counter, defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations

from .characters import (
    TameCharacter,
    abs_K,
    characters_restricting_to,
    extend_from_F,
    is_trivial_on_F,
    sigma_dual,
    trivial_F,
)
from .extension import eta_character

log = logging.getLogger(__name__)

BRUTE_FORCE_MAX_N = 10


class ReducibleDatumError(ValueError):
    def __init__(self, i, j, quotient):
        self.i, self.j = i, j
        super().__init__("chi_%d / chi_%d = %s: principal series is reducible" % (i, j, quotient))


@dataclass(frozen=True)
class PrincipalSeriesDatum:
    chars: tuple

    def __post_init__(self):
        chars = tuple(self.chars)
        if not chars:
            raise ValueError("empty principal series datum")
        ext = chars[0].ext
        for chi in chars:
            if not isinstance(chi, TameCharacter):
                raise TypeError("expected TameCharacter, got %r" % (chi,))
            if chi.ext != ext:
                raise ValueError("characters live over different extensions")
        object.__setattr__(self, "chars", chars)

    @property
    def ext(self):
        return self.chars[0].ext

    @property
    def n(self):
        return len(self.chars)

    def twist(self, mu):
        return PrincipalSeriesDatum(tuple(chi * mu for chi in self.chars))

    def permuted(self, perm):
        return PrincipalSeriesDatum(tuple(self.chars[i] for i in perm))

    def __str__(self):
        return ";".join(str(chi) for chi in self.chars)


def as_datum(chars):
    if isinstance(chars, PrincipalSeriesDatum):
        return chars
    return PrincipalSeriesDatum(tuple(chars))


@dataclass(frozen=True)
class DistinctionVerdict:
    distinguished: bool
    pairs: tuple = None
    singletons: tuple = None

    @property
    def r(self):
        return len(self.pairs) if self.distinguished else None

    @property
    def certificate(self):
        if not self.distinguished:
            return None
        return {"pairs": [list(p) for p in self.pairs], "singletons": list(self.singletons)}

    def __bool__(self):
        return self.distinguished


def irreducibility_violation(datum):
    """First (i, j) (1-based) with chi_i / chi_j = |.|_K^{+-1}, else None."""
    datum = as_datum(datum)
    a = abs_K(datum.ext)
    bad = {a, a.inverse()}
    for i, x in enumerate(datum.chars):
        for j, y in enumerate(datum.chars):
            if i != j and x / y in bad:
                return i + 1, j + 1
    return None


def check_irreducible(datum):
    return irreducibility_violation(datum) is None


def require_irreducible(datum):
    datum = as_datum(datum)
    bad = irreducibility_violation(datum)
    if bad is not None:
        i, j = bad
        q = datum.chars[i - 1] / datum.chars[j - 1]
        raise ReducibleDatumError(i, j, "|.|_K" if q.mag == 1 else "|.|_K^-1")
    return datum


def literal_pattern_check(datum):
    """Largest r <= n/2 with chi_{i+1} = chi_i^{-sigma} for i = 1, 3, .., 2r-1
    and chi_i trivial on F* for i > 2r, in the given order; None if no r works."""
    chars = as_datum(datum).chars
    n = len(chars)
    for r in range(n // 2, -1, -1):
        if all(chars[2 * k + 1] == sigma_dual(chars[2 * k]) for k in range(r)) and \
                all(is_trivial_on_F(chi) for chi in chars[2 * r:]):
            return r
    return None


def is_distinguished(datum):
    """Decide distinction by matching value classes chi <-> chi^{-sigma}."""
    datum = require_irreducible(datum)
    classes = defaultdict(list)
    for i, chi in enumerate(datum.chars, 1):
        classes[chi].append(i)

    pairs, singles = [], []
    done = set()
    for chi in sorted(classes, key=TameCharacter.sort_key):
        if chi in done:
            continue
        dual = sigma_dual(chi)
        done.update((chi, dual))
        mine = classes[chi]
        if dual == chi:
            k = len(mine) // 2
            pairs += [(mine[2 * t], mine[2 * t + 1]) for t in range(k)]
            leftover = mine[2 * k:]
        else:
            theirs = classes.get(dual, [])
            k = min(len(mine), len(theirs))
            pairs += list(zip(mine[:k], theirs[:k]))
            leftover = mine[k:] + theirs[k:]
        for i in leftover:
            if not is_trivial_on_F(datum.chars[i - 1]):
                return DistinctionVerdict(False)
            singles.append(i)
    pairs = tuple(sorted(tuple(sorted(p)) for p in pairs))
    return DistinctionVerdict(True, pairs, tuple(sorted(singles)))


def brute_force_distinguished(datum):
    """Exhaustive search over partitions into pairs and singletons (n <= 10)."""
    chars = as_datum(datum).chars
    n = len(chars)
    if n > BRUTE_FORCE_MAX_N:
        raise ValueError("brute force limited to n <= %d" % BRUTE_FORCE_MAX_N)

    def search(rest):
        if not rest:
            return [], []
        i, others = rest[0], rest[1:]
        if is_trivial_on_F(chars[i]):
            found = search(others)
            if found is not None:
                return found[0], [i] + found[1]
        want = sigma_dual(chars[i])
        for j in others:
            if chars[j] == want:
                found = search(tuple(k for k in others if k != j))
                if found is not None:
                    return [(i, j)] + found[0], found[1]
        return None

    found = search(tuple(range(n)))
    if found is None:
        return DistinctionVerdict(False)
    pairs = tuple(sorted((i + 1, j + 1) for i, j in found[0]))
    return DistinctionVerdict(True, pairs, tuple(sorted(i + 1 for i in found[1])))


def validate_certificate(datum, verdict):
    """Re-check every pair and singleton condition of a positive verdict."""
    chars = as_datum(datum).chars
    if not verdict.distinguished:
        return verdict.pairs is None and verdict.singletons is None
    used = [i for p in verdict.pairs for i in p] + list(verdict.singletons)
    if sorted(used) != list(range(1, len(chars) + 1)):
        return False
    ok_pairs = all(chars[j - 1] == sigma_dual(chars[i - 1]) for i, j in verdict.pairs)
    ok_single = all(is_trivial_on_F(chars[i - 1]) for i in verdict.singletons)
    return ok_pairs and ok_single


def eta_extension(ext):
    return extend_from_F(eta_character(ext))


def is_eta_distinguished(datum, mu=None):
    """eta-distinction via distinction of the twist chi_i * mu^{-1}, where mu
    is any character of K* restricting to eta on F*."""
    datum = require_irreducible(datum)
    if mu is None:
        mu = eta_extension(datum.ext)
    elif mu.restrict_to_F() != eta_character(datum.ext):
        raise ValueError("twisting character must restrict to eta_{K/F}")
    return is_distinguished(datum.twist(mu.inverse()))


def sigma_selfdual(datum):
    chars = as_datum(datum).chars
    return Counter(sigma_dual(chi) for chi in chars) == Counter(chars)


def central_character(datum):
    chars = as_datum(datum).chars
    out = chars[0]
    for chi in chars[1:]:
        out = out * chi
    return out


def central_character_trivial_on_F(datum):
    return is_trivial_on_F(central_character(datum))


@dataclass
class CounterexampleReport:
    datum: PrincipalSeriesDatum
    sigma_selfdual: bool
    central_trivial: bool
    distinguished: bool
    eta_distinguished: bool

    @property
    def verified(self):
        return (self.sigma_selfdual and self.central_trivial
                and not self.distinguished and not self.eta_distinguished)


@dataclass
class CounterexampleSearch:
    n: int
    ext: object
    budget: int
    items: list = field(default_factory=list)
    examined: int = 0
    diagnostic: str = ""


def verify_counterexample(datum):
    datum = require_irreducible(datum)
    return CounterexampleReport(
        datum,
        sigma_selfdual(datum),
        central_character_trivial_on_F(datum),
        is_distinguished(datum).distinguished,
        is_eta_distinguished(datum).distinguished,
    )


def _candidates(n, ext):
    eta_pool = characters_restricting_to(eta_character(ext))
    triv_pool = characters_restricting_to(trivial_F(ext))
    for head in combinations(eta_pool, 2):
        for tail in combinations(triv_pool, n - 2):
            yield PrincipalSeriesDatum(head + tail)


def default_workers():
    try:
        return max(1, int(os.environ.get("DISTINGUISHED_THREADS", "1")))
    except ValueError:
        return 1


def jacquet_counterexample_search(n, ext, budget=16, workers=None):
    """Distinct chi_1, chi_2 restricting to eta and chi_3..chi_n restricting to 1;
    each candidate is re-verified before being emitted."""
    if n < 3:
        raise ValueError("counter-examples need n >= 3 (got n=%d)" % n)
    result = CounterexampleSearch(n, ext, budget)
    cands = [d for d in _candidates(n, ext) if check_irreducible(d)]
    result.examined = len(cands)
    workers = workers or default_workers()
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            reports = list(pool.map(verify_counterexample, cands))
    else:
        reports = map(verify_counterexample, cands)
    for rep in reports:
        if len(result.items) >= budget:
            break
        if rep.verified:
            result.items.append(rep)
        else:
            log.warning("candidate %s failed verification", rep.datum)
    if not result.items:
        if not cands:
            result.diagnostic = (
                "no candidates over %s: need 2 distinct characters restricting to eta and "
                "%d distinct characters trivial on F*" % (ext, n - 2))
        else:
            result.diagnostic = "none of %d candidates verified" % len(cands)
    return result
