"""Exact tame characters of K* and F*.

A tame character chi of K* is fixed by

* its residue exponent c: chi([g**k]) = zeta_{q_K - 1}**(c*k), and
* its value at the uniformizer: chi(varpi_K) = exp(2 pi i phase) * q_K**(-mag),

with phase and mag rational.  Characters of F* have the same shape with
modulus q - 1, generator g_F and uniformizer p.  Everything here is exact;
floating point only appears in ``CharValue.to_complex``.
"""

import cmath
import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .extension import ExtensionData, eta_character


class IncompatibleExtensionsError(ValueError):
    pass


def as_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


@dataclass(frozen=True)
class CharValue:
    """exp(2 pi i phase) * p**log_abs, exactly."""

    p: int
    phase: Fraction
    log_abs: Fraction

    def __post_init__(self):
        object.__setattr__(self, "phase", as_fraction(self.phase) % 1)
        object.__setattr__(self, "log_abs", as_fraction(self.log_abs))

    def __mul__(self, other):
        assert self.p == other.p
        return CharValue(self.p, self.phase + other.phase, self.log_abs + other.log_abs)

    def inverse(self):
        return CharValue(self.p, -self.phase, -self.log_abs)

    @property
    def is_one(self):
        return self.phase == 0 and self.log_abs == 0

    def to_complex(self):
        mod = math.exp(float(self.log_abs) * math.log(self.p))
        return mod * cmath.exp(2j * math.pi * float(self.phase))


class _CharacterBase:
    # shared group law; subclasses set modulus / uniformizer scale

    def _check(self, other):
        if self.ext != other.ext:
            raise IncompatibleExtensionsError(
                "characters over %s and %s cannot be combined" % (self.ext, other.ext))

    def __mul__(self, other):
        self._check(other)
        return type(self)(self.ext, self.c + other.c, self.phase + other.phase,
                          self.mag + other.mag)

    def __truediv__(self, other):
        return self * other.inverse()

    def inverse(self):
        return type(self)(self.ext, -self.c, -self.phase, -self.mag)

    def __pow__(self, k):
        return type(self)(self.ext, self.c * k, self.phase * k, self.mag * k)

    @property
    def is_trivial(self):
        return self.c == 0 and self.phase == 0 and self.mag == 0

    @property
    def is_unitary(self):
        return self.mag == 0

    @property
    def is_unramified(self):
        return self.c == 0

    def sort_key(self):
        return (self.c, self.phase.denominator, self.phase.numerator, self.mag)

    def __str__(self):
        s = "c=%d" % self.c
        if self.phase:
            s += ",phase=%s" % self.phase
        if self.mag:
            s += ",mag=%s" % self.mag
        return s


@dataclass(frozen=True, eq=True)
class TameCharacter(_CharacterBase):
    ext: ExtensionData
    c: int = 0
    phase: Fraction = Fraction(0)
    mag: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "c", int(self.c) % self.modulus)
        object.__setattr__(self, "phase", as_fraction(self.phase) % 1)
        object.__setattr__(self, "mag", as_fraction(self.mag))

    @property
    def modulus(self):
        return self.ext.q_K - 1

    def value_at_uniformizer(self):
        return CharValue(self.ext.p, self.phase, -self.mag * self.ext.e_K)

    def evaluate(self, v, r):
        """chi(varpi_K**v [r]) for a residue element r."""
        if r.is_zero:
            raise ValueError("zero is not in K*")
        return CharValue(self.ext.p, v * self.phase + Fraction(self.c * r.dlog, self.modulus),
                         -v * self.mag * self.ext.e_K)

    def galois(self):
        return galois(self)

    def restrict_to_F(self):
        return restrict_to_F(self)

    def __repr__(self):
        return "TameCharacter(%s | %s)" % (self, self.ext)


@dataclass(frozen=True, eq=True)
class TameCharacterF(_CharacterBase):
    ext: ExtensionData
    c: int = 0
    phase: Fraction = Fraction(0)
    mag: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "c", int(self.c) % self.modulus)
        object.__setattr__(self, "phase", as_fraction(self.phase) % 1)
        object.__setattr__(self, "mag", as_fraction(self.mag))

    @property
    def modulus(self):
        return self.ext.q - 1

    def evaluate(self, v, r):
        """chi(p**v [r]) for r a residue of F (dlog w.r.t. g_F)."""
        if r.is_zero:
            raise ValueError("zero is not in F*")
        return CharValue(self.ext.p, v * self.phase + Fraction(self.c * r.dlog, self.modulus),
                         -v * self.mag * self.ext.f)

    def __repr__(self):
        return "TameCharacterF(%s | %s)" % (self, self.ext)


def trivial(ext):
    return TameCharacter(ext)


def trivial_F(ext):
    return TameCharacterF(ext)


def mul(a, b):
    return a * b


def inv(a):
    return a.inverse()


def galois(chi):
    """chi^sigma, i.e. x -> chi(sigma(x))."""
    ext = chi.ext
    if not ext.ramified:
        # sigma(p) = p, Frobenius on residue units
        return TameCharacter(ext, chi.c * ext.q, chi.phase, chi.mag)
    # sigma(delta) = -delta = delta * [-1], chi([-1]) = (-1)**c
    return TameCharacter(ext, chi.c, chi.phase + Fraction(chi.c, 2), chi.mag)


def sigma_dual(chi):
    """chi^{-sigma} = (chi^sigma)^{-1}"""
    return galois(chi).inverse()


def restrict_to_F(chi):
    ext = chi.ext
    if not ext.ramified:
        # g_F = g^(q+1);  chi(p) = chi(varpi_K), with q_K^-mag = q^-2mag
        return TameCharacterF(ext, chi.c, chi.phase, 2 * chi.mag)
    # p = delta^2 * [g^-u0]
    q = ext.q
    return TameCharacterF(ext, chi.c, 2 * chi.phase - Fraction(chi.c * ext.u0, q - 1),
                          2 * chi.mag)


def is_trivial_on_F(chi):
    return restrict_to_F(chi).is_trivial


def equals_eta_on_F(chi):
    return restrict_to_F(chi) == eta_character(chi.ext)


def abs_K(ext):
    """|.|_K : chi(varpi_K) = q_K**-1."""
    return TameCharacter(ext, 0, 0, 1)


def extend_from_F(chi_F):
    """Deterministic minimal tame chi of K* with restrict_to_F(chi) == chi_F."""
    ext = chi_F.ext
    if not ext.ramified:
        chi = TameCharacter(ext, chi_F.c, chi_F.phase, chi_F.mag / 2)
    else:
        q = ext.q
        x = (chi_F.phase + Fraction(chi_F.c * ext.u0, q - 1)) % 1
        chi = TameCharacter(ext, chi_F.c, x / 2, chi_F.mag / 2)
    if restrict_to_F(chi) != chi_F:
        raise AssertionError("extend_from_F failed for %r (bug)" % (chi_F,))
    return chi


def phase_grid(ext):
    """Phases k / (2 (q_K - 1)): enough to reach every unitary character of
    order dividing 2 (q_K - 1) at the uniformizer."""
    N = 2 * (ext.q_K - 1)
    return [Fraction(k, N) for k in range(N)]


def unitary_characters(ext, phases=None):
    """All unitary tame characters with phase on the given grid, in
    (c, phase-denominator) order."""
    if phases is None:
        phases = phase_grid(ext)
    chars = [TameCharacter(ext, c, ph) for c in range(ext.q_K - 1) for ph in phases]
    return sorted(set(chars), key=TameCharacter.sort_key)


def characters_trivial_on_F(ext):
    """The finite group of tame characters of K*/F*, sorted."""
    return [chi for chi in unitary_characters(ext) if is_trivial_on_F(chi)]


def characters_restricting_to(chi_F):
    """All tame characters of K* whose restriction to F* is chi_F, sorted."""
    base = extend_from_F(chi_F)
    out = {base * lam for lam in characters_trivial_on_F(chi_F.ext)}
    return sorted(out, key=TameCharacter.sort_key)


_CHAR_KEYS = ("c", "phase", "mag")
_ITEM_RE = re.compile(r"^\s*(\w+)\s*=\s*(\S+)\s*$")


def parse_character(text, ext):
    """Parse ``c=<int>[,phase=<num>/<den>][,mag=<num>/<den>]``."""
    vals = {}
    for item in text.split(","):
        m = _ITEM_RE.match(item)
        if not m:
            raise ValueError("bad character field %r in %r" % (item, text))
        key, val = m.groups()
        if key not in _CHAR_KEYS or key in vals:
            raise ValueError("unexpected or repeated key %r in %r" % (key, text))
        try:
            vals[key] = int(val) if key == "c" else Fraction(val)
        except (ValueError, ZeroDivisionError):
            raise ValueError("bad value %r for %s in %r" % (val, key, text)) from None
    if "c" not in vals:
        raise ValueError("character %r needs c=<int>" % text)
    return TameCharacter(ext, vals["c"], vals.get("phase", 0), vals.get("mag", 0))


def parse_characters(text, ext):
    """Parse a ';'-separated tuple of characters.  Errors name the 1-based position."""
    out = []
    for pos, part in enumerate(text.split(";"), 1):
        try:
            out.append(parse_character(part, ext))
        except ValueError as e:
            raise ValueError("character %d: %s" % (pos, e)) from None
    return tuple(out)


def format_characters(chars):
    return ";".join(str(chi) for chi in chars)
