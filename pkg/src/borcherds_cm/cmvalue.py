"""Averaged CM values of the theta lift: contraction coefficients, the
constants kappa_eta(m), the averaged Phi value, and the rational /
transcendental factorization of the product of Petersson norms.

All exact data flows through KappaValue (FactoredLog plus a rational
multiple of the constant k0(0)); the transcendental part exponentiates
k0(0) and is evaluated numerically only on request.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp

from .arith import FactoredLog
from .forms import m_max
from .kappa import KAPPA_ZERO, KappaValue, kappa_at
from .lattice import coset_of_element, _is_integral
from .quadfield import INERT


def _vector_counts(sl, plus_coset, bound):
    """Q-value -> count for vectors in plus_coset + L_+ with Q <= bound."""
    return sl.plus.vector_norms_up_to(plus_coset, bound)


def _coset_sum(a, b):
    return tuple(Fraction(x) + Fraction(y) for x, y in zip(a, b))


def contraction_coeffs(form, sl, m_values):
    """The table C_{eta, lambda}(m) = sum_{m1+m2=m} c_eta(m1) d_{eta_+ +
    lambda_+}(m2), for m in m_values.

    Returns a dict (eta_label, lambda_index, m) -> rational.  The m1 sum
    runs over the finite support of c_eta; d counts vectors of norm m2 >= 0.
    """
    table = {}
    for eta in sl.etas:
        support = [
            (m1, c)
            for (label, m1), c in form.coeffs.items()
            if label == eta.label
        ]
        if not support:
            continue
        for li, lam in enumerate(sl.glue):
            coset = _coset_sum(eta.plus, lam.plus)
            for m in m_values:
                m = Fraction(m)
                total = Fraction(0)
                for m1, c in support:
                    m2 = m - m1
                    if m2 >= 0:
                        total += c * sl.plus.count_vectors(coset, m2)
                if total:
                    table[(eta.label, li, m)] = total
    return table


def c00_contraction(form, sl):
    """The zeroth coefficient of <F, theta_+>:
    sum_eta sum_{lambda : eta_- + lambda_- = 0} C_{eta, lambda_+}(0)."""
    total = Fraction(0)
    for (label, m1), c in form.coeffs.items():
        if m1 > 0:
            continue
        eta = sl.etas[label]
        for lam in sl.glue:
            if not _is_integral(_coset_sum(eta.minus, lam.minus)):
                continue
            coset = _coset_sum(eta.plus, lam.plus)
            total += c * sl.plus.count_vectors(coset, -m1)
    return total


def kappa_eta(fld, sl, eta_label, m):
    """kappa_eta(m) = sum_lambda sum_{x in eta_+ + lambda_+ + L_+}
    kappa_{eta_- + lambda_-}(m - Q(x)), a finite sum since Q(x) >= 0 and
    kappa vanishes at negative arguments."""
    m = Fraction(m)
    if m < 0:
        return KAPPA_ZERO
    eta = sl.etas[eta_label]
    total = KAPPA_ZERO
    for lam in sl.glue:
        mu = coset_of_element(sl.minus, _coset_sum(eta.minus, lam.minus))
        norms = _vector_counts(sl, _coset_sum(eta.plus, lam.plus), m)
        for qx, count in norms.items():
            term = kappa_at(fld, sl.minus, mu, m - qx)
            if not term.is_zero():
                total = total + count * term
    return total


def _inner_sum(form, sl, fld):
    """sum_eta sum_{m >= 0} c_eta(-m) kappa_eta(m) over the principal part
    and constant terms of the form."""
    total = KAPPA_ZERO
    for (label, m1), c in form.coeffs.items():
        if m1 > 0:
            continue
        term = kappa_eta(fld, sl, label, -m1)
        if not term.is_zero():
            total = total + c * term
    return total


@dataclass(frozen=True)
class PhiAverage:
    """Both normalizations of the averaged theta lift."""

    inner: KappaValue      # sum_eta sum_{m>=0} c_eta(-m) kappa_eta(m)
    value: KappaValue      # 2 * inner (the SO(U) integral)
    cycle_sum: KappaValue  # (4 / vol_KT) * inner (sum over Z(U)_K)
    vol_kt: Fraction


def default_vol_kt(fld):
    return Fraction(2, fld.h)


def phi_average(form, sl, fld, vol_kt=None):
    if vol_kt is None:
        vol_kt = default_vol_kt(fld)
    vol_kt = Fraction(vol_kt)
    if vol_kt <= 0:
        raise ValueError("vol_KT must be positive")
    inner = _inner_sum(form, sl, fld)
    return PhiAverage(
        inner=inner,
        value=2 * inner,
        cycle_sum=Fraction(4) / vol_kt * inner,
        vol_kt=vol_kt,
    )


@dataclass(frozen=True)
class CMValueReport:
    """The factorization  prod ||Psi(z)||^2 = rat * base^exponent  with
    base = (4 d pi)^{-1} exp(2 sum_a chi(a) log Gamma(a/d) * w/(2h)).

    rational_part is log(rat); kzero_coeff is the coefficient of k0(0) in
    the log of the product, so exponent = -kzero_coeff.
    """

    rational_part: FactoredLog
    kzero_coeff: Fraction
    c00: Fraction
    degree: int
    vol_kt: Fraction
    d: int

    @property
    def transcendental_exponent(self):
        return -self.kzero_coeff

    def is_rational(self):
        return self.kzero_coeff == 0

    def rational_value(self):
        """exp(rational_part) as an exact Fraction when possible."""
        return self.rational_part.exp_rational()

    def numeric(self, fld, prec=64):
        """sum_z log ||Psi(z)||^2 at prec digits."""
        from .quadfield import kappa_zero_constant

        with mp.workdps(prec + 20):
            val = self.rational_part.numeric(prec)
            if self.kzero_coeff:
                k0, _ = kappa_zero_constant(fld, prec)
                val += (
                    k0
                    * self.kzero_coeff.numerator
                    / self.kzero_coeff.denominator
                )
            return +val


def log_psi_product(form, sl, fld, vol_kt=None):
    """CMValueReport for sum_z log ||Psi(z; F)||^2 = (-2 / vol_KT) *
    sum_eta sum_{m>=0} c_eta(-m) kappa_eta(m)."""
    if vol_kt is None:
        vol_kt = default_vol_kt(fld)
    vol_kt = Fraction(vol_kt)
    if vol_kt <= 0:
        raise ValueError("vol_KT must be positive")
    inner = _inner_sum(form, sl, fld)
    scaled = Fraction(-2) / vol_kt * inner
    return CMValueReport(
        rational_part=scaled.log_part,
        kzero_coeff=scaled.kzero_multiple,
        c00=c00_contraction(form, sl),
        degree=2 * fld.h,
        vol_kt=vol_kt,
        d=fld.d,
    )


def transcendental_base(fld, prec=64):
    """The base (4 d pi)^{-1} e^{2 L'(0)/L(0)} of the transcendental factor,
    in both forms: the exponential form and the Gamma-product
    [(4 d pi)^{-h} prod_a Gamma(a/d)^{w chi(a)}]^{1/h}."""
    from .quadfield import chowla_selberg_log_deriv

    with mp.workdps(prec + 20):
        cs = chowla_selberg_log_deriv(fld, prec)
        form1 = mp.exp(2 * cs) / (4 * fld.d * mp.pi)
        prod = mp.mpf(1)
        for a in range(1, fld.d):
            c = fld.chi_of_prime(a)
            if c:
                prod *= mp.gamma(mp.mpf(a) / fld.d) ** (fld.w * c)
        form2 = mp.power(prod / mp.power(4 * fld.d * mp.pi, fld.h), mp.mpf(1) / fld.h)
        return +form1, +form2


def check_prime_support(report, fld, form):
    """Verify that every prime in the rational part is ramified, or inert
    with p <= d * m_max(F).  Returns (ok, violations)."""
    bound = fld.d * m_max(form)
    violations = []
    for p in report.rational_part.primes():
        if fld.d % p == 0:
            continue
        if fld.splitting(p) == INERT and p <= bound:
            continue
        violations.append(p)
    return not violations, violations
