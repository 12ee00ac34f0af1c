"""The closed-form constants kappa(t, mu, a) for an ideal lattice in an
imaginary quadratic field.

For t > 0 these are exact rational combinations of logarithms of primes;
at t = 0 the zero coset contributes the symbolic constant k0(0), kept as a
rational multiple so that rationality of downstream sums stays decidable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import FactoredLog, ZERO_LOG, factorize, valuation
from .quadfield import INERT


@dataclass(frozen=True)
class KappaValue:
    """An exact value  log_part + kzero_multiple * k0(0)."""

    log_part: FactoredLog
    kzero_multiple: Fraction = Fraction(0)

    def __add__(self, other):
        return KappaValue(
            self.log_part + other.log_part,
            self.kzero_multiple + other.kzero_multiple,
        )

    def __mul__(self, c):
        c = Fraction(c)
        return KappaValue(c * self.log_part, c * self.kzero_multiple)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def is_zero(self):
        return self.log_part.is_zero() and self.kzero_multiple == 0

    def numeric(self, fld, prec=50):
        """Evaluate numerically, substituting k0(0) for its symbol."""
        from .quadfield import kappa_zero_constant

        val = self.log_part.numeric(prec)
        if self.kzero_multiple:
            k0, _ = kappa_zero_constant(fld, prec)
            val += k0 * self.kzero_multiple.numerator / self.kzero_multiple.denominator
        return val

    def render(self):
        parts = []
        if self.log_part:
            parts.append(self.log_part.log_string())
        if self.kzero_multiple:
            c = self.kzero_multiple
            term = "k0(0)" if c == 1 else f"{c}*k0(0)"
            parts.append(term if not parts else f"+ {term}")
        return " ".join(parts) if parts else "0"


KAPPA_ZERO = KappaValue(ZERO_LOG, Fraction(0))


class UnsupportedLatticeError(ValueError):
    """Raised when the lattice is not an integral O_k-ideal with Q = -Nx/Na."""


def _check_lattice(lat):
    if lat is not None and not getattr(lat, "is_integral_ideal", False):
        raise UnsupportedLatticeError(
            "kappa formulas require an integral-ideal lattice"
        )


def eta_q(fld, t, mu, q, norm=1):
    """(1 - chi_q(-t*Na)) * prod over other ramified q' with mu_{q'} = 0 of
    (1 + chi_{q'}(-t*Na)).  Only defined when mu_q = 0.

    The twist by Na (trivial for the unit ideal, and for every ideal in a
    genus whose norms are local norms at each ramified prime) carries the
    unit scaling of the local form -Nx/Na; chi_q(d) = 1 absorbs any
    ramified part of Na.
    """
    if not mu.local_zero(q):
        raise ValueError(f"eta_q requires mu_{q} = 0")
    tn = -Fraction(t) * Fraction(norm)
    result = 1 - fld.chi(tn, q)
    for q2 in fld.ramified_primes:
        if q2 != q and mu.local_zero(q2):
            result *= 1 + fld.chi(tn, q2)
    return result


def eta_0(fld, t, mu, norm=1):
    """prod over ramified q with mu_q = 0 of (1 + chi_q(-t*Na)); 1 when
    the index set is empty."""
    tn = -Fraction(t) * Fraction(norm)
    result = 1
    for q in fld.ramified_primes:
        if mu.local_zero(q):
            result *= 1 + fld.chi(tn, q)
    return result


def kappa_positive(fld, lat, mu, t):
    """kappa(t, mu, a) for t > 0, as an exact FactoredLog-valued KappaValue.

    kappa = -(1/h_k) * prod_q char(Q(mu_q) + Z_q)(t) * [
        rho(dt) * sum_{q | d, mu_q = 0} eta_q(t,mu) (ord_q(t)+1) log q
        + eta_0(t,mu) * sum_{p inert} (ord_p(t)+1) rho(dt/p) log p ].

    The inert sum runs only over primes dividing the numerator of dt; all
    others contribute zero through rho(dt/p).
    """
    _check_lattice(lat)
    t = Fraction(t)
    if t <= 0:
        raise ValueError("kappa_positive requires t > 0")
    d = fld.d
    norm = lat.norm if lat is not None else 1
    # char conditions at ramified primes (Q(mu_q) = 0 mod Z_q when mu_q = 0)
    for q in fld.ramified_primes:
        target = Fraction(0) if mu.local_zero(q) else Fraction(mu.q_value)
        diff = t - target
        if diff != 0 and valuation(diff, q) < 0:
            return KAPPA_ZERO
    dt = d * t
    if dt.denominator != 1:
        # a negative valuation survives at an unramified prime: both the
        # q-sum (through rho(dt)) and every inert term vanish
        return KAPPA_ZERO
    dt_factors = factorize(dt.numerator)
    rho_dt = 1
    for p, a in dt_factors:
        rho_dt *= fld.rho_local(p, a)
        if rho_dt == 0:
            break
    terms = {}
    if rho_dt:
        for q in fld.ramified_primes:
            if not mu.local_zero(q):
                continue
            e = eta_q(fld, t, mu, q, norm)
            if e:
                terms[q] = Fraction(e * (valuation(t, q) + 1) * rho_dt)
    e0 = eta_0(fld, t, mu, norm)
    if e0:
        for p, a in dt_factors:
            if d % p == 0 or fld.splitting(p) != INERT:
                continue
            # rho(dt/p): the factor at p becomes rho_local(p, a-1); others as in dt
            rho_rest = 1
            for p2, a2 in dt_factors:
                rho_rest *= fld.rho_local(p2, a2 - 1 if p2 == p else a2)
                if rho_rest == 0:
                    break
            if rho_rest:
                terms[p] = terms.get(p, Fraction(0)) + Fraction(
                    e0 * (a + 1) * rho_rest
                )
    if not terms:
        return KAPPA_ZERO
    scale = Fraction(-1, fld.h)
    return KappaValue(FactoredLog({p: scale * c for p, c in terms.items()}))


def kappa_at(fld, lat, mu, m):
    """kappa(m, mu, a) for any rational m: kappa_positive for m > 0, the
    symbolic k0(0) multiple [mu = 0] at m = 0, and zero for m < 0."""
    m = Fraction(m)
    if m > 0:
        return kappa_positive(fld, lat, mu, m)
    if m == 0:
        _check_lattice(lat)
        if mu.is_zero:
            return KappaValue(ZERO_LOG, Fraction(1))
        return KAPPA_ZERO
    return KAPPA_ZERO
