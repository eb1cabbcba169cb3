"""Abelian Tate gamma factors for tame characters, via residue Gauss sums.

Only unramified K/F.  The additive character is psi(x) = psi_F(Tr(beta x))
with beta the residue of delta, so psi is trivial on F.  At residue level

    psibar(t) = exp(2 pi i Tr_{k_K/F_p}(beta t) / p).

Conventions (chosen so that gamma(s, chi, psi) gamma(1-s, chi^-1, psi^-1) = 1):

    L(s, chi)        = (1 - chi(varpi) q_K^-s)^-1   if chi unramified, else 1
    eps(s, chi, psi) = 1                            if chi unramified
                     = chi(varpi) q_K^-s G(chi^-1, psibar)   if tamely ramified
    gamma            = eps(s, chi, psi) L(1-s, chi^-1) / L(s, chi)
"""

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy

from .characters import as_fraction, is_trivial_on_F, sigma_dual
from .distinction import ReducibleDatumError, is_distinguished

TOLERANCE = 1e-9


class UnsupportedExtensionError(ValueError):
    pass


class LFactorPole(ArithmeticError):
    def __init__(self, chi, s):
        self.chi, self.s = chi, s
        super().__init__("L-factor pole: %s at s=%s" % (chi, s))


def _require_unramified(ext):
    if ext.ramified:
        raise UnsupportedExtensionError(
            "ramified %s is unsupported in the gamma module (unramified K/F only)" % ext)


@dataclass(frozen=True)
class AdditiveCharacter:
    """psibar(t) = exp(2 pi i Tr(beta t) / p) on the residue field of K."""

    ext: object
    beta: int

    def __post_init__(self):
        _require_unramified(self.ext)
        k = self.ext.residue_field
        if self.beta == 0:
            raise ValueError("beta must be nonzero")
        frob = int(k.frobenius_table(self.ext.f)[self.beta])
        if frob != int(k.neg_t[self.beta]):
            raise ValueError("beta^q != -beta: psi would not be trivial on F")

    def inverse(self):
        return AdditiveCharacter(self.ext, int(self.ext.residue_field.neg_t[self.beta]))

    def conjugate(self):
        """psi^sigma, i.e. t -> psibar(t^q)."""
        k = self.ext.residue_field
        return AdditiveCharacter(self.ext, int(k.frobenius_table(self.ext.f)[self.beta]))

    def values(self):
        """psibar(g^k) for k = 0 .. q_K - 2."""
        return _psi_values(self.ext, self.beta)

    def __call__(self, t):
        k = self.ext.residue_field
        tr = int(k.trace_table()[k.mul_t[self.beta, t]])
        return cmath.exp(2j * math.pi * tr / self.ext.p)


def delta_residue(ext):
    """Least-code nonzero residue element beta with beta^q = -beta."""
    k = ext.residue_field
    frob = k.frobenius_table(ext.f)
    for b in range(1, k.order):
        if frob[b] == k.neg_t[b]:
            return b
    raise AssertionError("no anti-invariant element found")


def standard_psi(ext):
    _require_unramified(ext)
    return AdditiveCharacter(ext, delta_residue(ext))


@lru_cache(maxsize=None)
def _psi_values(ext, beta):
    k = ext.residue_field
    ts = k.exp_t
    tr = k.trace_table()[k.mul_t[beta, ts]]
    return numpy.exp(2j * numpy.pi * tr / ext.p)


@lru_cache(maxsize=None)
def _gauss_sum(ext, c, beta):
    N = ext.q_K - 1
    ks = numpy.arange(N)
    chi = numpy.exp(2j * numpy.pi * ((c * ks) % N) / N)
    return complex(numpy.sum(chi * _psi_values(ext, beta)))


def gauss_sum(c, psi):
    """sum over t in k_K^* of zeta_{q_K-1}^{c dlog t} psibar(t)."""
    N = psi.ext.q_K - 1
    if c % N == 0:
        raise ValueError("degenerate Gauss sum (c = 0 mod q_K - 1)")
    return _gauss_sum(psi.ext, c % N, psi.beta)


def _uniformizer_term(chi, s):
    # chi(varpi) * q_K^-s, exact data then complex
    val = chi.value_at_uniformizer()
    return val.phase, val.log_abs - s * chi.ext.e_K, val


def l_factor(chi, s):
    """Tate L-factor L(s, chi); raises LFactorPole at a pole."""
    s = as_fraction(s)
    if not chi.is_unramified:
        return complex(1.0)
    phase, log_abs, _ = _uniformizer_term(chi, s)
    if phase == 0 and log_abs == 0:
        raise LFactorPole(chi, s)
    x = math.exp(float(log_abs) * math.log(chi.ext.p)) * cmath.exp(2j * math.pi * float(phase))
    return 1 / (1 - x)


def epsilon_factor(chi, psi, s):
    s = as_fraction(s)
    if chi.is_unramified:
        return complex(1.0)
    w = chi.value_at_uniformizer().to_complex()
    qs = chi.ext.q_K ** -float(s)
    return w * qs * gauss_sum(-chi.c, psi)


@dataclass(frozen=True)
class GammaValue:
    value: complex
    l_num: complex
    l_den: complex
    epsilon: complex
    gauss_summand_count: int

    @property
    def parts(self):
        return {"l_num": self.l_num, "l_den": self.l_den, "epsilon": self.epsilon,
                "gauss_summand_count": self.gauss_summand_count}


def gamma_factor(chi, psi, s):
    """gamma(s, chi, psi) = eps(s, chi, psi) L(1-s, chi^-1) / L(s, chi)."""
    _require_unramified(chi.ext)
    if chi.ext != psi.ext:
        raise ValueError("character and additive character over different extensions")
    s = as_fraction(s)
    num = l_factor(chi.inverse(), 1 - s)
    den = l_factor(chi, s)
    eps = epsilon_factor(chi, psi, s)
    count = 0 if chi.is_unramified else chi.ext.q_K - 1
    return GammaValue(eps * num / den, num, den, eps, count)


def gl2_gamma_product(mu, chi, psi, strict=True):
    """gamma(mu chi, psi) gamma(mu^{-sigma} chi, psi) at s = 1/2."""
    if strict and not is_trivial_on_F(chi):
        raise ValueError("hypothesis failed: chi (%s) is not trivial on F*" % chi)
    half = Fraction(1, 2)
    a = gamma_factor(mu * chi, psi, half)
    b = gamma_factor(sigma_dual(mu) * chi, psi, half)
    return a.value * b.value


@dataclass
class GammaSweepRow:
    chi: object
    product: complex = None
    deviation: float = None
    excluded: str = ""


@dataclass
class GammaSweepReport:
    mu: object
    rows: list = field(default_factory=list)
    all_products_one: bool = False
    worst_deviation: float = 0.0
    witnesses: list = field(default_factory=list)
    distinguished: "bool | None" = None
    agrees: bool = False
    tolerance: float = TOLERANCE

    @property
    def sweep_size(self):
        return len(self.rows)

    @property
    def excluded(self):
        return [row for row in self.rows if row.excluded]


def gl2_distinction_by_gamma(mu, psi, chis=None, tol=TOLERANCE):
    """Sweep all tame chi trivial on F* and compare with is_distinguished((mu, mu^{-sigma}))."""
    from .characters import characters_trivial_on_F

    if chis is None:
        chis = characters_trivial_on_F(mu.ext)
    rep = GammaSweepReport(mu, tolerance=tol)
    for chi in chis:
        row = GammaSweepRow(chi)
        try:
            row.product = gl2_gamma_product(mu, chi, psi)
        except LFactorPole as e:
            row.excluded = str(e)
        else:
            row.deviation = abs(row.product - 1)
            rep.worst_deviation = max(rep.worst_deviation, row.deviation)
            if row.deviation > tol:
                rep.witnesses.append(chi)
        rep.rows.append(row)
    rep.all_products_one = not rep.witnesses
    try:
        rep.distinguished = is_distinguished((mu, sigma_dual(mu))).distinguished
    except ReducibleDatumError:
        rep.distinguished = None
    rep.agrees = rep.distinguished is not None and rep.distinguished == rep.all_products_one
    return rep
