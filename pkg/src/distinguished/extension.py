"""Quadratic extensions K/F of p-adic fields at tame level.

F is the degree-f unramified extension of Q_p, with uniformizer p and residue
field F_q (q = p**f).  K = F(delta) with delta**2 = d in F*:

* ``unram``: d is a nonsquare unit, K/F is unramified, the residue field of K
  is F_{q^2} and p is also a uniformizer of K.
* ``ram``:  d = p * [g**u0] (Teichmuller unit), K/F is ramified, the residue
  field of K is F_q and delta is a uniformizer of K with sigma(delta) = -delta.

A tame element of K* is written  varpi_K**v * [r]  with r a residue element;
characters never see the 1-units, so this is all the data they need.
"""

import re
from dataclasses import dataclass, field as dc_field

from .ffield import field, is_prime

UNRAMIFIED = "unram"
RAMIFIED = "ram"


@dataclass(frozen=True)
class ExtensionData:
    p: int
    f: int = 1
    kind: str = UNRAMIFIED
    u0: int = 0

    def __post_init__(self):
        if self.p == 2:
            raise ValueError("even residue characteristic unsupported (p=2)")
        if not is_prime(self.p):
            raise ValueError("p=%d is not prime" % self.p)
        if self.f < 1:
            raise ValueError("residue degree f must be >= 1")
        if self.kind not in (UNRAMIFIED, RAMIFIED):
            raise ValueError("unknown extension kind %r" % (self.kind,))
        u0 = self.u0 % (self.q - 1) if self.kind == RAMIFIED else 0
        object.__setattr__(self, "u0", u0)
        g = self.g
        assert self.residue_field.element_order(g) == self.q_K - 1

    @property
    def ramified(self):
        return self.kind == RAMIFIED

    @property
    def q(self):
        return self.p ** self.f

    @property
    def q_K(self):
        return self.q if self.ramified else self.q ** 2

    @property
    def e_K(self):
        """q_K == p**e_K"""
        return self.f if self.ramified else 2 * self.f

    @property
    def residue_field(self):
        return field(self.p, self.e_K)

    @property
    def g(self):
        """Least-code generator of the residue field of K."""
        return self.residue_field.gen

    @property
    def g_F(self):
        """Generator of the residue field of F, as an element of k_K."""
        k = self.residue_field
        return k.gen if self.ramified else k.element(self.q + 1)

    def describe(self):
        if self.ramified:
            s = "ram:p=%d,u0=%d" % (self.p, self.u0)
        else:
            s = "unram:p=%d" % self.p
        if self.f != 1:
            s += ",f=%d" % self.f
        return s

    def __str__(self):
        return self.describe()


def unram(p, f=1):
    return ExtensionData(p, f, UNRAMIFIED)


def ram(p, u0=0, f=1):
    return ExtensionData(p, f, RAMIFIED, u0)


_EXT_RE = re.compile(r"^\s*(unram|ram)\s*:\s*(.*)$")


def parse_extension(text):
    """Parse ``unram:p=<prime>[,f=<int>]`` or ``ram:p=<prime>,u0=<int>[,f=<int>]``."""
    m = _EXT_RE.match(text)
    if not m:
        raise ValueError("bad extension descriptor %r (expected unram:... or ram:...)" % text)
    kind, rest = m.groups()
    opts = {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        if "=" not in item:
            raise ValueError("bad field %r in extension descriptor" % item)
        key, val = (s.strip() for s in item.split("=", 1))
        if key not in ("p", "f", "u0") or key in opts:
            raise ValueError("unexpected or repeated key %r in extension descriptor" % key)
        try:
            opts[key] = int(val)
        except ValueError:
            raise ValueError("value of %s must be an integer, got %r" % (key, val)) from None
    if "p" not in opts:
        raise ValueError("extension descriptor needs p=<prime>")
    if kind == UNRAMIFIED and "u0" in opts:
        raise ValueError("u0 only applies to ramified extensions")
    if kind == RAMIFIED and "u0" not in opts:
        raise ValueError("ramified extension needs u0=<int> (d = p * g^u0)")
    if opts["p"] % 2 == 0:
        raise ValueError("even residue characteristic unsupported (p=%d)" % opts["p"])
    return ExtensionData(opts["p"], opts.get("f", 1), kind, opts.get("u0", 0))


@dataclass(frozen=True)
class ResidueElement:
    """Nonzero residue element g**dlog, or zero (dlog is None)."""

    dlog: "int | None"
    modulus: int = dc_field(default=0, compare=False)

    def __post_init__(self):
        if self.dlog is not None and self.modulus:
            object.__setattr__(self, "dlog", self.dlog % self.modulus)

    @property
    def is_zero(self):
        return self.dlog is None


def residue(ext, dlog):
    return ResidueElement(None if dlog is None else dlog % (ext.q_K - 1), ext.q_K - 1)


def residue_F(ext, dlog):
    return ResidueElement(None if dlog is None else dlog % (ext.q - 1), ext.q - 1)


def frobenius(x, ext):
    """sigma on the residue field of K."""
    if x.is_zero or ext.ramified:
        return x
    return residue(ext, x.dlog * ext.q)


def norm_tame(v, r, ext):
    """N_{K/F}(varpi_K**v [r]) as (valuation, residue over F w.r.t. g_F)."""
    if r.is_zero:
        raise ValueError("zero is not in K*")
    q = ext.q
    if not ext.ramified:
        # N(p) = p^2, N[r] = [r^(q+1)] and g^(q+1) = g_F
        return 2 * v, residue_F(ext, r.dlog)
    # N(delta) = -d = p * [-g^u0]
    minus_one = (q - 1) // 2
    return v, residue_F(ext, v * (minus_one + ext.u0) + 2 * r.dlog)


def eta_character(ext):
    """The order-2 character of F* killing N_{K/F}(K*)."""
    from fractions import Fraction
    from .characters import TameCharacterF

    if not ext.ramified:
        return TameCharacterF(ext, 0, Fraction(1, 2), 0)
    q = ext.q
    # Legendre symbol on units; eta(p) chosen so that eta(-d) = 1
    sign_exp = ((q - 1) // 2 + ext.u0) % 2
    return TameCharacterF(ext, (q - 1) // 2, Fraction(sign_exp, 2), 0)
