"""Exact integer and rational arithmetic primitives.

Factorization, p-adic valuations, Kronecker and local Hilbert symbols, and
the FactoredLog value type: a finite rational-coefficient combination
sum_p e_p * log(p) over distinct primes, with exact (decidable) equality.
"""

from __future__ import annotations

import math
from fractions import Fraction

INFINITE_PLACE = math.inf

_POLLARD_THRESHOLD = 10**12


class UndefinedValuationError(ValueError):
    """Raised when the valuation of zero is requested."""


def is_prime(n):
    """Deterministic Miller-Rabin for 64-bit-scale inputs."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n):
    # Brent's cycle-finding variant; n must be composite and odd.
    if n % 2 == 0:
        return 2
    c = 1
    while True:
        x = y = 2
        d = 1
        f = lambda v: (v * v + c) % n
        while d == 1:
            x = f(x)
            y = f(f(y))
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d
        c += 1


def factorize(n):
    """Factor a positive integer into a sorted list of (prime, exponent).

    Trial division up to 10^6; Pollard rho only for cofactors above 10^12.
    """
    if n < 1:
        raise ValueError(f"factorize requires n >= 1, got {n}")
    n = int(n)
    factors = {}
    for p in (2, 3, 5):
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    # wheel over 6k +/- 1
    p = 7
    incs = (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while p * p <= n and p < 10**6:
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
        p += incs[i]
        i = (i + 1) % 8
    if n > 1:
        stack = [n]
        while stack:
            m = stack.pop()
            if m == 1:
                continue
            if is_prime(m):
                factors[m] = factors.get(m, 0) + 1
            elif m > _POLLARD_THRESHOLD:
                d = _pollard_rho(m)
                stack.extend((d, m // d))
            else:
                # composite below the rho threshold but above the trial bound
                q = 10**6 + 3
                while m % q:
                    q += 2
                factors[q] = factors.get(q, 0) + 1
                stack.append(m // q)
    return sorted(factors.items())


def valuation(t, p):
    """The p-adic valuation of a nonzero rational."""
    t = Fraction(t)
    if t == 0:
        raise UndefinedValuationError("valuation of 0 is undefined")
    v = 0
    num, den = t.numerator, t.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def prime_unit_part(t, p):
    """Write t = p^v * u with u a p-unit; return (v, u) for rational t."""
    v = valuation(t, p)
    return v, Fraction(t) / Fraction(p) ** v


def kronecker(a, n):
    """The Kronecker symbol (a|n) for integers a, n."""
    a, n = int(a), int(n)
    if n == 0:
        return 1 if a in (1, -1) else 0
    sign = 1
    if n < 0:
        n = -n
        if a < 0:
            sign = -1
    # pull out factors of 2 in n
    t = 0
    while n % 2 == 0:
        n //= 2
        t += 1
    if t:
        if a % 2 == 0:
            return 0
        if t % 2 and a % 8 in (3, 5):
            sign = -sign
    a %= n
    # Jacobi symbol (a|n) for odd n > 0
    result = sign
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _legendre(u, p):
    # u a p-unit rational, p odd prime
    u = Fraction(u)
    return kronecker(u.numerator * u.denominator % p, p)


def hilbert_symbol(a, b, p):
    """The local quadratic Hilbert symbol (a, b)_p in {+1, -1}.

    p is a prime or INFINITE_PLACE (math.inf) for the real place.
    """
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol requires nonzero arguments")
    if p == INFINITE_PLACE:
        return -1 if (a < 0 and b < 0) else 1
    alpha, u = prime_unit_part(a, p)
    beta, v = prime_unit_part(b, p)
    if p == 2:
        # u, v odd rationals; reduce to odd integers mod 8
        ui = u.numerator * u.denominator % 8
        vi = v.numerator * v.denominator % 8
        eps_u = (ui - 1) // 2
        eps_v = (vi - 1) // 2
        om_u = (ui * ui - 1) // 8
        om_v = (vi * vi - 1) // 8
        e = eps_u * eps_v + alpha * om_v + beta * om_u
        return -1 if e % 2 else 1
    sign = 1
    if (alpha * beta) % 2 and p % 4 == 3:
        sign = -1
    if beta % 2:
        sign *= _legendre(u, p)
    if alpha % 2:
        sign *= _legendre(v, p)
    return sign


class FactoredLog:
    """An exact finite sum  sum_p e_p * log(p)  with rational exponents e_p.

    Values are immutable; addition, rational scaling, and equality are exact.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for p, e in dict(terms).items():
                e = Fraction(e)
                if e == 0:
                    continue
                p = int(p)
                if p < 2 or not is_prime(p):
                    raise ValueError(f"FactoredLog key {p} is not prime")
                clean[p] = e
        self._terms = clean

    @property
    def terms(self):
        return dict(self._terms)

    def primes(self):
        return sorted(self._terms)

    def __getitem__(self, p):
        return self._terms.get(p, Fraction(0))

    def is_zero(self):
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if not isinstance(other, FactoredLog):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __add__(self, other):
        if not isinstance(other, FactoredLog):
            return NotImplemented
        terms = dict(self._terms)
        for p, e in other._terms.items():
            terms[p] = terms.get(p, Fraction(0)) + e
        return FactoredLog(terms)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return FactoredLog({p: -e for p, e in self._terms.items()})

    def __mul__(self, c):
        c = Fraction(c)
        return FactoredLog({p: c * e for p, e in self._terms.items()})

    __rmul__ = __mul__

    def __repr__(self):
        return f"FactoredLog({self._terms!r})"

    def serialize(self):
        """Canonical text form: "p^(a/b)" terms joined by "*"; "1" if empty."""
        if not self._terms:
            return "1"
        parts = []
        for p in sorted(self._terms):
            e = self._terms[p]
            parts.append(f"{p}^({e.numerator}/{e.denominator})")
        return "*".join(parts)

    @classmethod
    def deserialize(cls, text):
        text = text.strip()
        if text == "1":
            return cls()
        terms = {}
        for part in text.split("*"):
            base, _, exp = part.partition("^")
            exp = exp.strip()
            if not (exp.startswith("(") and exp.endswith(")")):
                raise ValueError(f"malformed FactoredLog term {part!r}")
            terms[int(base)] = Fraction(exp[1:-1])
        return cls(terms)

    def log_string(self):
        """Human-readable form like "-2*log(7) + 1/2*log(3)"; "0" if empty."""
        if not self._terms:
            return "0"
        parts = []
        for p in sorted(self._terms):
            e = self._terms[p]
            term = f"log({p})" if e == 1 else f"{e}*log({p})"
            if not parts:
                parts.append(term if e > 0 or e == 1 else term)
            else:
                if term.startswith("-"):
                    parts.append(f"- {term[1:]}")
                else:
                    parts.append(f"+ {term}")
        return " ".join(parts)

    def exp_rational(self):
        """exp(self) as an exact Fraction; requires all integer exponents."""
        num = Fraction(1)
        for p, e in self._terms.items():
            if e.denominator != 1:
                raise ValueError("non-integer exponent; value is irrational")
            num *= Fraction(p) ** e.numerator
        return num

    def numeric(self, prec=50):
        """Evaluate as an mpmath real at prec decimal digits."""
        from mpmath import mp

        with mp.workdps(prec + 10):
            total = mp.mpf(0)
            for p, e in self._terms.items():
                total += mp.mpf(e.numerator) / e.denominator * mp.log(p)
            return +total


ZERO_LOG = FactoredLog()


def flog_combine(pairs):
    """Exact linear combination sum_i c_i * F_i of FactoredLog values."""
    terms = {}
    for c, flog in pairs:
        c = Fraction(c)
        for p, e in flog.terms.items():
            terms[p] = terms.get(p, Fraction(0)) + c * e
    return FactoredLog(terms)
