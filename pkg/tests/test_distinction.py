import random
from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

from distinguished.characters import (
    TameCharacter, TameCharacterF, abs_K, characters_restricting_to, characters_trivial_on_F,
    extend_from_F, is_trivial_on_F, sigma_dual, trivial,
)
from distinguished.distinction import (
    PrincipalSeriesDatum, ReducibleDatumError, brute_force_distinguished, central_character_trivial_on_F,
    check_irreducible, is_distinguished, is_eta_distinguished, jacquet_counterexample_search,
    literal_pattern_check, sigma_selfdual, validate_certificate, verify_counterexample,
)
from distinguished.extension import eta_character, ram, unram

E3 = unram(3)
H = Fraction(1, 2)
COR_TUPLE = (TameCharacter(E3, 0, H), TameCharacter(E3, 4, H), TameCharacter(E3, 0))
MU = TameCharacter(E3, 1, Fraction(1, 3))
EXTS = [unram(3), unram(5), ram(3, 0), ram(3, 1), ram(5, 0), ram(5, 1)]


def random_tuple(rng, ext, n):
    """Tame tuple with planted dual pairs and F-trivial entries, so both verdicts occur."""
    triv = characters_trivial_on_F(ext)
    phases = [Fraction(k, 4) for k in range(4)]
    out = []
    while len(out) < n:
        roll = rng.random()
        if roll < 0.35 and len(out) <= n - 2:
            mu = TameCharacter(ext, rng.randrange(ext.q_K - 1), rng.choice(phases))
            out += [mu, sigma_dual(mu)]
        elif roll < 0.65:
            out.append(rng.choice(triv))
        else:
            out.append(TameCharacter(ext, rng.randrange(ext.q_K - 1), rng.choice(phases)))
    rng.shuffle(out)
    return PrincipalSeriesDatum(tuple(out))


def test_irreducibility_examples():
    chi = TameCharacter(E3, 1)
    assert not check_irreducible((chi, chi * abs_K(E3)))
    assert not check_irreducible((chi * abs_K(E3), chi))
    assert check_irreducible((chi, chi))
    assert check_irreducible(COR_TUPLE)
    with pytest.raises(ReducibleDatumError) as err:
        is_distinguished((chi, chi * abs_K(E3)))
    assert (err.value.i, err.value.j) == (1, 2)


def test_literal_pattern_examples():
    assert literal_pattern_check((MU, sigma_dual(MU))) == 1
    assert literal_pattern_check((trivial(E3),)) == 0
    assert literal_pattern_check((sigma_dual(MU), MU)) == 1
    assert literal_pattern_check((MU,)) is None


def test_distinction_examples():
    for decide in (is_distinguished, brute_force_distinguished):
        v = decide((MU, sigma_dual(MU)))
        assert v.distinguished and v.r == 1 and v.pairs == ((1, 2),)
        assert decide((trivial(E3),)).distinguished
        assert not decide(COR_TUPLE).distinguished
    assert is_distinguished(COR_TUPLE).certificate is None


def test_eta_distinction_examples():
    assert not is_eta_distinguished(COR_TUPLE).distinguished
    twisted = PrincipalSeriesDatum(COR_TUPLE).twist(extend_from_F(eta_character(E3)).inverse())
    assert twisted.chars == (TameCharacter(E3, 0), TameCharacter(E3, 4), TameCharacter(E3, 0, H))
    assert not brute_force_distinguished(twisted).distinguished
    chi = TameCharacter(E3, 4, H)
    assert is_eta_distinguished((chi,)).distinguished
    # (mu, mu^-sigma eta~): pinned against the oracle on the twisted tuple
    eta_t = extend_from_F(eta_character(E3))
    datum = PrincipalSeriesDatum((MU, sigma_dual(MU) * eta_t))
    assert is_eta_distinguished(datum).distinguished == \
        brute_force_distinguished(datum.twist(eta_t.inverse())).distinguished


def test_eta_independent_of_extension():
    rng = random.Random(7)
    for ext in EXTS:
        lifts = characters_restricting_to(eta_character(ext))
        assert len(lifts) >= 2
        for _ in range(60):
            d = random_tuple(rng, ext, rng.randrange(1, 5))
            if not check_irreducible(d):
                continue
            verdicts = {is_eta_distinguished(d, mu).distinguished for mu in lifts[:3]}
            assert len(verdicts) == 1
    with pytest.raises(ValueError):
        is_eta_distinguished(COR_TUPLE, trivial(E3))


def test_selfdual_and_central_examples():
    assert sigma_selfdual((MU, sigma_dual(MU)))
    assert sigma_selfdual(COR_TUPLE)
    assert not sigma_selfdual((MU,))
    assert central_character_trivial_on_F(COR_TUPLE)
    assert central_character_trivial_on_F((MU, sigma_dual(MU)))
    assert not central_character_trivial_on_F((abs_K(E3),))


@pytest.mark.parametrize("ext", EXTS, ids=str)
def test_counting_matches_brute_force(ext):
    rng = random.Random(str(ext))
    seen = set()
    for _ in range(300):
        d = random_tuple(rng, ext, rng.randrange(1, 7))
        if not check_irreducible(d):
            continue
        fast, slow = is_distinguished(d), brute_force_distinguished(d)
        assert fast.distinguished == slow.distinguished
        assert validate_certificate(d, fast) and validate_certificate(d, slow)
        if fast:
            assert 2 * fast.r + len(fast.singletons) == d.n
            assert sigma_selfdual(d)
        seen.add(fast.distinguished)
    assert seen == {True, False}


def test_literal_pattern_over_all_permutations():
    rng = random.Random(3)
    for ext in (unram(3), ram(3, 1)):
        for _ in range(40):
            d = random_tuple(rng, ext, rng.randrange(1, 6))
            if not check_irreducible(d):
                continue
            some = any(literal_pattern_check(d.permuted(p)) is not None for p in permutations(range(d.n)))
            assert some == is_distinguished(d).distinguished


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(EXTS), st.integers(2, 6))
def test_permutation_invariance(seed, ext, n):
    rng = random.Random(seed)
    d = random_tuple(rng, ext, n)
    if not check_irreducible(d):
        return
    perm = list(range(n))
    rng.shuffle(perm)
    assert is_distinguished(d).distinguished == is_distinguished(d.permuted(perm)).distinguished


def test_brute_force_guard():
    with pytest.raises(ValueError):
        brute_force_distinguished((trivial(E3),) * 11)


def test_counterexample_search():
    res = jacquet_counterexample_search(3, E3, budget=1000)
    assert res.items and not res.diagnostic
    assert any(rep.datum.chars == COR_TUPLE for rep in res.items)
    for rep in res.items:
        assert rep.verified
        assert verify_counterexample(rep.datum).verified
        assert len(set(rep.datum.chars)) == 3
    assert jacquet_counterexample_search(4, E3, budget=2).items
    with pytest.raises(ValueError):
        jacquet_counterexample_search(2, E3)


def test_counterexample_search_threads_deterministic(monkeypatch):
    a = jacquet_counterexample_search(4, E3, budget=5, workers=1)
    monkeypatch.setenv("DISTINGUISHED_THREADS", "4")
    b = jacquet_counterexample_search(4, E3, budget=5)
    assert [r.datum for r in a.items] == [r.datum for r in b.items]


def test_datum_validation():
    with pytest.raises(ValueError):
        PrincipalSeriesDatum(())
    with pytest.raises(ValueError):
        PrincipalSeriesDatum((trivial(E3), trivial(unram(5))))
    with pytest.raises(TypeError):
        PrincipalSeriesDatum((TameCharacterF(E3),))
