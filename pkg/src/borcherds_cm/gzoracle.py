"""Numerical verification channel via singular moduli.

Enumerates CM points through reduced binary quadratic forms, evaluates the
j-function from its exact q-expansion with certified tails, forms the
product of differences of singular moduli over two class groups, recognizes
the integer, factors it, and checks the prime-support prediction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from mpmath import mp

from .arith import is_prime, kronecker
from .forms import classical_qexp
from .quadfield import reduced_forms


class RoundingFailure(ArithmeticError):
    """The product did not round to an integer within the margin, even
    after precision doubling up to the cap."""


@dataclass(frozen=True)
class GZResult:
    d1: int
    d2: int
    product: int
    factorization: tuple  # ((p, e), ...); sign carried by product
    precision_used: int
    margin: float

    def factored_string(self):
        sign = "-" if self.product < 0 else ""
        if not self.factorization:
            return f"{self.product}"
        body = " * ".join(
            f"{p}^{e}" if e > 1 else f"{p}" for p, e in self.factorization
        )
        return sign + body


def _num_j_terms(abs_log_q, digits):
    """Smallest safe truncation order: the coefficient growth e^{4 pi
    sqrt(n)} must lose to |q|^n by a 10^{-digits} margin."""
    target = digits * math.log(10) + 15
    n = 20
    while n * abs_log_q - 4 * math.pi * math.sqrt(n) < target:
        n += 25
    return n


def j_value(form, d, prec=64):
    """j((-b + sqrt(-d)) / (2a)) from the exact q-expansion of j.

    Accurate to roughly 10^{-prec} absolute; the tail is controlled via
    |q| = e^{-pi sqrt(d)/a} and the e^{4 pi sqrt(n)} coefficient bound.
    """
    if prec < 30:
        raise ValueError("j_value requires prec >= 30")
    a, b, c = form
    if b * b - 4 * a * c != -d:
        raise ValueError("form discriminant does not match -d")
    n_terms = _num_j_terms(math.pi * math.sqrt(d) / a, prec)
    n_terms = 50 * ((n_terms + 49) // 50)  # bucket to reuse cached expansions
    jq = classical_qexp("j", n_terms)
    with mp.workdps(prec + 15 + n_terms // 8):
        tau = (-b + mp.sqrt(-d)) / (2 * a)
        q = mp.exp(2j * mp.pi * tau)
        # Horner from the top coefficient down to q^{-1}
        acc = mp.mpc(0)
        for coeff in reversed(jq.coeffs):
            acc = acc * q + int(coeff)
        acc = acc / q
        return +acc


_MAX_DOUBLINGS = 4


def gz_product(d1, d2, prec=None):
    """prod over CM point pairs of (j(tau_1) - j(tau_2)), recognized as an
    exact integer and factored.

    d1, d2 must be coprime with -d1, -d2 odd fundamental discriminants.
    Precision is chosen from the a-priori size bound log|product| <=
    h1 h2 (pi sqrt(d_max) + 30) and doubled on rounding failure.
    """
    d1, d2 = int(d1), int(d2)
    if math.gcd(d1, d2) != 1:
        raise ValueError(f"d1={d1}, d2={d2} are not coprime")
    forms1 = reduced_forms(d1)
    forms2 = reduced_forms(d2)
    h1, h2 = len(forms1), len(forms2)
    size_bound = h1 * h2 * (math.pi * math.sqrt(max(d1, d2)) + 30)
    digits = int(size_bound / math.log(10)) + 40
    if prec:
        digits = max(digits, int(prec))
    for attempt in range(_MAX_DOUBLINGS + 1):
        with mp.workdps(digits + 20):
            j1 = [j_value(f, d1, digits) for f in forms1]
            j2 = [j_value(f, d2, digits) for f in forms2]
            product = mp.mpc(1)
            for x in j1:
                for y in j2:
                    product *= x - y
            nearest = int(mp.nint(product.real))
            margin = max(abs(product.real - nearest), abs(product.imag))
            threshold = mp.mpf(10) ** -20
            if margin < threshold:
                return GZResult(
                    d1=d1,
                    d2=d2,
                    product=nearest,
                    factorization=_factor_support(nearest),
                    precision_used=digits,
                    margin=float(margin),
                )
        digits *= 2
    raise RoundingFailure(
        f"gz_product({d1},{d2}) failed to round at {digits // 2} digits"
    )


def _factor_support(n):
    """Factor an integer expected to be smooth; trial division with a
    primality fallback for any large cofactor."""
    n = abs(int(n))
    if n <= 1:
        return ()
    out = []
    p = 2
    while p * p <= n and p < 10**7:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        if not is_prime(n):
            raise ArithmeticError(f"unexpected hard cofactor {n}")
        out.append((n, 1))
    return tuple(out)


def gz_support_check(result):
    """Every prime factor must be non-split in both Q(sqrt(-d1)) and
    Q(sqrt(-d2)), and bounded by d1*d2/4.  Returns (ok, violations)."""
    bound = result.d1 * result.d2 / 4
    violations = []
    for p, _ in result.factorization:
        if kronecker(-result.d1, p) == 1 or kronecker(-result.d2, p) == 1:
            violations.append((p, "split"))
        elif p > bound:
            violations.append((p, "too-large"))
    return not violations, violations
