"""Lattice machinery for the splitting V = V_+ (+) U.

Ideal lattices in an imaginary quadratic field carry the negative-definite
side (Q(x) = -Nx/Na); PosLattice carries a positive-definite Gram matrix
with exact vector enumeration; SplitLattice glues both along a possibly
non-split integral lattice L with L_+ + L_- <= L <= L^v.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


class NotAnIdealError(ValueError):
    """Basis is not omega-stable or not contained in O_k."""


class InconsistentEmbeddingError(ValueError):
    """Provided L-basis violates L_+ = V_+ cap L or L_- = U cap L, or L is
    not integral."""


# ---------------------------------------------------------------------------
# Exact small-matrix helpers (rows of tuples of Fraction)
# ---------------------------------------------------------------------------


def mat_mul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    return tuple(
        tuple(sum(A[i][t] * B[t][j] for t in range(k)) for j in range(m))
        for i in range(n)
    )


def mat_vec(v, A):
    # row vector times matrix
    return tuple(
        sum(v[t] * A[t][j] for t in range(len(A))) for j in range(len(A[0]))
    )


def mat_inv(A):
    n = len(A)
    aug = [[Fraction(A[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


def mat_det(A):
    n = len(A)
    M = [[Fraction(x) for x in row] for row in A]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            det = -det
        det *= M[col][col]
        inv = 1 / M[col][col]
        for r in range(col + 1, n):
            if M[r][col]:
                f = M[r][col] * inv
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return det


def _is_integral(v):
    return all(Fraction(x).denominator == 1 for x in v)


def smith_normal_form(M):
    """Smith normal form of a nonsingular integer matrix.

    Returns (diag, U, V) with U*M*V = diag(d_1..d_k), d_i > 0, d_i | d_{i+1},
    and U, V unimodular.
    """
    k = len(M)
    A = [[int(x) for x in row] for row in M]
    U = [[int(i == j) for j in range(k)] for i in range(k)]
    V = [[int(i == j) for j in range(k)] for i in range(k)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, c):
        A[dst] = [a + c * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + c * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, c):
        for row in A:
            row[dst] += c * row[src]
        for row in V:
            row[dst] += c * row[src]

    for t in range(k):
        while True:
            # find smallest nonzero pivot in the trailing block
            best = None
            for i in range(t, k):
                for j in range(t, k):
                    if A[i][j] and (best is None or abs(A[i][j]) < best[0]):
                        best = (abs(A[i][j]), i, j)
            if best is None:
                raise ValueError("singular matrix in SNF")
            _, bi, bj = best
            if bi != t:
                swap_rows(t, bi)
            if bj != t:
                swap_cols(t, bj)
            done = True
            for i in range(t + 1, k):
                if A[i][t]:
                    add_row(t, i, -(A[i][t] // A[t][t]))
                    done = False
            for j in range(t + 1, k):
                if A[t][j]:
                    add_col(t, j, -(A[t][j] // A[t][t]))
                    done = False
            if done and all(A[i][t] == 0 for i in range(t + 1, k)) and all(
                A[t][j] == 0 for j in range(t + 1, k)
            ):
                # enforce divisibility d_t | trailing entries
                bad = None
                for i in range(t + 1, k):
                    for j in range(t + 1, k):
                        if A[i][j] % A[t][t]:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                add_row(bad, t, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
    diag = tuple(A[i][i] for i in range(k))
    return diag, tuple(map(tuple, U)), tuple(map(tuple, V))


class IntegerQuotient:
    """The finite abelian group Z^k / (Z^k * M) for a nonsingular integer
    matrix M (row convention), with canonical mixed-radix labels."""

    def __init__(self, M):
        self.k = len(M)
        diag, _, V = smith_normal_form(M)
        self.diag = diag
        self.V = V
        self.Vinv = tuple(
            tuple(int(x) for x in row) for row in mat_inv(V)
        )
        self.order = math.prod(diag)

    def reps(self):
        """Yield (label, coordinate row vector) for each coset, label 0 first."""
        radices = self.diag

        def rec(i, w):
            if i == self.k:
                yield tuple(w)
                return
            for wi in range(radices[i]):
                yield from rec(i + 1, w + [wi])

        for w in rec(0, []):
            yield self.label_of_normal(w), mat_vec(w, self.Vinv)

    def label_of_normal(self, w):
        label = 0
        for i in range(self.k):
            label = label * self.diag[i] + (w[i] % self.diag[i])
        return label

    def label_of(self, y):
        """Canonical label of an integer coordinate vector y."""
        w = mat_vec(tuple(int(x) for x in y), self.V)
        return self.label_of_normal(list(w))


# ---------------------------------------------------------------------------
# Ideal lattices in k = Q(sqrt(-d))
# ---------------------------------------------------------------------------
# Elements of k are coordinate pairs (u, v) meaning u + v*omega with
# omega = (1 + sqrt(-d))/2, so omega^2 = omega - (1+d)/4.


def elt_norm(x, d):
    u, v = Fraction(x[0]), Fraction(x[1])
    return u * u + u * v + v * v * (1 + d) / 4

def elt_conj(x):
    u, v = x
    return (Fraction(u) + Fraction(v), -Fraction(v))

def elt_mul(x, y, d):
    u1, v1 = map(Fraction, x)
    u2, v2 = map(Fraction, y)
    return (u1 * u2 - v1 * v2 * Fraction(1 + d, 4),
            u1 * v2 + u2 * v1 + v1 * v2)

def elt_trace(x):
    return 2 * Fraction(x[0]) + Fraction(x[1])


class IdealLattice:
    """An integral O_k-ideal a viewed as a rank-2 lattice with
    Q(x) = -N(x)/N(a), so that the dual lattice is D^{-1} a."""

    is_integral_ideal = True

    def __init__(self, field, basis):
        self.field = field
        d = field.d
        basis = tuple(
            tuple(Fraction(x) for x in row) for row in basis
        )
        if len(basis) != 2 or any(len(r) != 2 for r in basis):
            raise NotAnIdealError("ideal basis must be two elements of k")
        det = mat_det(basis)
        if det == 0:
            raise NotAnIdealError("basis elements are linearly dependent")
        if not all(_is_integral(row) for row in basis):
            raise NotAnIdealError("ideal is not contained in O_k")
        inv = mat_inv(basis)
        omega = (Fraction(0), Fraction(1))
        for row in basis:
            image = elt_mul(omega, row, d)
            if not _is_integral(mat_vec(image, inv)):
                raise NotAnIdealError("basis is not omega-stable")
        self.basis = basis
        self.norm = abs(det)
        # Gram of the bilinear form (x, y) = -Tr(x * conj(y)) / Na
        gram = []
        for bi in basis:
            row = []
            for bj in basis:
                val = -elt_trace(elt_mul(bi, elt_conj(bj), d)) / self.norm
                if val.denominator != 1:
                    raise NotAnIdealError("non-integral Gram entry")
                row.append(int(val))
            gram.append(tuple(row))
        self.gram = tuple(gram)
        self.gram_inv = mat_inv(self.gram)
        self._quotient = None

    @property
    def quotient(self):
        if self._quotient is None:
            self._quotient = IntegerQuotient(self.gram)
        return self._quotient

    def dual_index(self):
        """|L^v / L| = N(D) = d."""
        return abs(int(mat_det(self.gram)))

    def q_of(self, coords):
        """Q at an element given in a-basis coordinates."""
        elt = mat_vec(tuple(map(Fraction, coords)), self.basis)
        return -elt_norm(elt, self.field.d) / self.norm

    def element_of(self, coords):
        return mat_vec(tuple(map(Fraction, coords)), self.basis)


class DualCoset:
    """A coset mu of D^{-1}a / a, with its local data at ramified primes."""

    def __init__(self, lattice, coords, label):
        self.lattice = lattice
        self.coords = tuple(Fraction(x) for x in coords)
        self.label = label
        self.is_zero = _is_integral(self.coords)
        q_raw = lattice.q_of(self.coords)
        self.q_value = q_raw - math.floor(q_raw)
        self._zero_at = {
            q: all(c.denominator % q for c in self.coords)
            for q in lattice.field.ramified_primes
        }

    def local_zero(self, q):
        """Whether the image mu_q in D^{-1}a_q / a_q is zero."""
        return self._zero_at[q]

    def __repr__(self):
        return f"DualCoset(label={self.label}, coords={self.coords})"


def make_ideal_lattice(field, spec="unit"):
    """Build an IdealLattice from a spec: "unit", "prime:p", ("prime", p),
    or an explicit 2x2 basis matrix in {1, omega} coordinates."""
    if spec is None or spec == "unit":
        return IdealLattice(field, ((1, 0), (0, 1)))
    if isinstance(spec, str) and spec.startswith("prime:"):
        spec = ("prime", int(spec.split(":", 1)[1]))
    if isinstance(spec, tuple) and len(spec) == 2 and spec[0] == "prime":
        p = int(spec[1])
        d = field.d
        # prime ideal (p, omega - r) with r^2 - r + (1+d)/4 = 0 mod p
        c = (1 + d) // 4
        r = next(
            (r for r in range(p) if (r * r - r + c) % p == 0), None
        )
        if r is None:
            raise NotAnIdealError(f"{p} is inert; no prime ideal of norm {p}")
        return IdealLattice(field, ((p, 0), (-r, 1)))
    if isinstance(spec, str) and spec.startswith("basis:"):
        rows = spec.split(":", 1)[1].split(";")
        spec = tuple(tuple(Fraction(x) for x in row.split(",")) for row in rows)
    return IdealLattice(field, spec)


def enumerate_dual_cosets(lat):
    """All d cosets of D^{-1}a / a with canonical labels; label 0 is mu = 0."""
    cosets = []
    for label, y in lat.quotient.reps():
        coords = mat_vec(tuple(map(Fraction, y)), lat.gram_inv)
        cosets.append(DualCoset(lat, coords, label))
    cosets.sort(key=lambda c: c.label)
    return cosets


def coset_of_element(lat, coords):
    """The DualCoset containing an element of D^{-1}a given in a-basis
    coordinates."""
    y = mat_vec(tuple(map(Fraction, coords)), lat.gram)
    if not _is_integral(y):
        raise ValueError("element is not in the dual lattice D^{-1}a")
    label = lat.quotient.label_of(y)
    return DualCoset(lat, coords, label)


def q_of_coset(mu):
    """Q(mu) mod 1, as a rational in [0, 1)."""
    return mu.q_value


# ---------------------------------------------------------------------------
# Positive definite lattices with exact vector enumeration
# ---------------------------------------------------------------------------


class PosLattice:
    """A positive-definite lattice of rank n given by the Gram matrix of the
    bilinear form; Q(x) = (x, x)/2."""

    def __init__(self, gram):
        gram = tuple(tuple(Fraction(x) for x in row) for row in gram)
        n = len(gram)
        for i in range(n):
            if len(gram[i]) != n:
                raise ValueError("gram must be square")
            for j in range(n):
                if gram[i][j] != gram[j][i]:
                    raise ValueError("gram must be symmetric")
        for k in range(1, n + 1):
            minor = tuple(row[:k] for row in gram[:k])
            if mat_det(minor) <= 0:
                raise ValueError("gram must be positive definite")
        self.rank = n
        self.gram = gram
        self._ldl = None
        self._quotient = None

    def q_of(self, x):
        x = tuple(map(Fraction, x))
        return sum(
            (
                self.gram[i][j] * x[i] * x[j]
                for i in range(self.rank)
                for j in range(self.rank)
            ),
            Fraction(0),
        ) / 2

    def _decomposition(self):
        # q[i][i] * (x_i + sum_{j>i} q[i][j] x_j)^2 decomposition of Q
        if self._ldl is None:
            n = self.rank
            q = [[self.gram[i][j] / 2 for j in range(n)] for i in range(n)]
            for i in range(n):
                for j in range(i + 1, n):
                    q[j][i] = q[i][j]
                    q[i][j] = q[i][j] / q[i][i]
                for k in range(i + 1, n):
                    for l in range(k, n):
                        q[k][l] -= q[k][i] * q[i][l]
            self._ldl = q
        return self._ldl

    def vector_norms_up_to(self, coset, bound):
        """Multiset {Q(x) : x in coset + Z^n, Q(x) <= bound} as a dict
        Q-value -> count.  Exact; coset is a rational offset vector."""
        bound = Fraction(bound)
        result = {}
        if bound < 0:
            return result
        n = self.rank
        if n == 0:
            result[Fraction(0)] = 1
            return result
        coset = tuple(map(Fraction, coset))
        q = self._decomposition()

        def rec(i, partial, xs):
            if i < 0:
                result[partial] = result.get(partial, 0) + 1
                return
            c = coset[i] + sum(q[i][j] * xs[j] for j in range(i + 1, n))
            rem = bound - partial
            radius = math.sqrt(float(rem / q[i][i])) if rem > 0 else 0.0
            lo = math.floor(-float(c) - radius) - 1
            hi = math.ceil(-float(c) + radius) + 1
            for y in range(lo, hi + 1):
                term = q[i][i] * (y + c) ** 2
                if partial + term <= bound:
                    xs[i] = y + coset[i]
                    rec(i - 1, partial + term, xs)
            xs[i] = Fraction(0)

        rec(n - 1, Fraction(0), [Fraction(0)] * n)
        return result

    def count_vectors(self, coset, m):
        """#{x in coset + Z^n : Q(x) = m}; zero for m < 0."""
        m = Fraction(m)
        if m < 0:
            return 0
        return self.vector_norms_up_to(coset, m).get(m, 0)

    @property
    def quotient(self):
        if self._quotient is None:
            if not all(_is_integral(row) for row in self.gram):
                raise ValueError("dual cosets require an integral Gram matrix")
            self._quotient = IntegerQuotient(
                tuple(tuple(int(x) for x in row) for row in self.gram)
            )
        return self._quotient

    def dual_cosets(self):
        """Representatives of L^v/L in lattice coordinates, canonically
        labeled."""
        if self.rank == 0:
            return [(0, ())]
        inv = mat_inv(self.gram)
        out = []
        for label, y in self.quotient.reps():
            out.append((label, mat_vec(tuple(map(Fraction, y)), inv)))
        out.sort(key=lambda t: t[0])
        return out


def count_vectors(pl, coset, m):
    return pl.count_vectors(coset, m)


# ---------------------------------------------------------------------------
# Glued lattices for V = V_+ (+) U
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GlueVector:
    plus: tuple
    minus: tuple


@dataclass(frozen=True)
class EtaCoset:
    label: int
    plus: tuple
    minus: tuple
    q_mod_one: Fraction


class SplitLattice:
    """A lattice L with L_+ + L_- <= L <= L^v in V = V_+ (+) U.

    Ambient coordinates: first n entries in the L_+ basis, last two in the
    a-basis of the ideal lattice, so L_+ = Z^n and L_- = Z^2 exactly.
    """

    def __init__(self, plus, minus, basis=None):
        self.plus = plus
        self.minus = minus
        n = plus.rank
        N = n + 2
        if basis is None:
            basis = tuple(
                tuple(Fraction(int(i == j)) for j in range(N)) for i in range(N)
            )
        basis = tuple(tuple(Fraction(x) for x in row) for row in basis)
        if len(basis) != N or any(len(r) != N for r in basis):
            raise InconsistentEmbeddingError(
                f"L basis must be {N}x{N} in ambient coordinates"
            )
        if mat_det(basis) == 0:
            raise InconsistentEmbeddingError("L basis is singular")
        self.basis = basis
        # ambient bilinear Gram: block diag of plus gram and ideal gram
        B = [[Fraction(0)] * N for _ in range(N)]
        for i in range(n):
            for j in range(n):
                B[i][j] = plus.gram[i][j]
        for i in range(2):
            for j in range(2):
                B[n + i][n + j] = Fraction(minus.gram[i][j])
        self.gram_ambient = tuple(map(tuple, B))
        basis_inv = mat_inv(basis)
        # L must contain L_+ + L_-
        for i in range(N):
            if not _is_integral(basis_inv[i]):
                raise InconsistentEmbeddingError(
                    "L does not contain L_+ + L_-"
                )
        gram_L = mat_mul(mat_mul(basis, self.gram_ambient), _transpose(basis))
        if not all(_is_integral(row) for row in gram_L):
            raise InconsistentEmbeddingError("L is not an integral lattice")
        self.gram_L = tuple(
            tuple(int(x) for x in row) for row in gram_L
        )
        # glue group L / (L_+ + L_-)
        M0 = tuple(tuple(int(x) for x in row) for row in basis_inv)
        self.glue = []
        for label, y in sorted(IntegerQuotient(M0).reps()):
            amb = mat_vec(tuple(map(Fraction, y)), basis)
            lp, lm = amb[:n], amb[n:]
            if _is_integral(lm) and not _is_integral(lp):
                raise InconsistentEmbeddingError("V_+ cap L exceeds L_+")
            if _is_integral(lp) and not _is_integral(lm):
                raise InconsistentEmbeddingError("U cap L exceeds L_-")
            self.glue.append(GlueVector(lp, lm))
        # dual cosets L^v / L
        dual_basis = mat_mul(mat_inv(tuple(map(tuple, gram_L))), basis)
        self.etas = []
        for label, y in sorted(IntegerQuotient(self.gram_L).reps()):
            amb = mat_vec(tuple(map(Fraction, y)), dual_basis)
            ep, em = amb[:n], amb[n:]
            q = self.q_ambient(amb)
            self.etas.append(
                EtaCoset(label, ep, em, q - math.floor(q))
            )

    @property
    def rank_plus(self):
        return self.plus.rank

    def q_ambient(self, x):
        x = tuple(map(Fraction, x))
        n = self.plus.rank
        return self.plus.q_of(x[:n]) + self.minus.q_of(x[n:])

    def eta(self, label):
        return self.etas[label]

    def num_etas(self):
        return len(self.etas)


def _transpose(A):
    return tuple(tuple(A[i][j] for i in range(len(A))) for j in range(len(A[0])))


def glue_group(plus, minus, basis=None):
    """Build a SplitLattice from embedding data: the PosLattice, the
    IdealLattice, and a Z-basis of L in ambient coordinates (defaults to the
    split lattice L = L_+ + L_-)."""
    return SplitLattice(plus, minus, basis)


# ---------------------------------------------------------------------------
# Lattice file format
# ---------------------------------------------------------------------------


def _parse_rows(text):
    return tuple(
        tuple(Fraction(x) for x in row.split(",")) for row in text.split(";")
    )


def load_lattice(path, field_cache=None):
    """Read a lattice file: key=value lines with keys d, ideal, rank, gram,
    basis (gram/basis rows ';'-separated, entries ','-separated)."""
    from .quadfield import make_field

    keys = {}
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            k, _, v = line.partition("=")
            keys[k.strip()] = v.strip()
    if "d" not in keys:
        raise ValueError("lattice file missing d=")
    fld = make_field(int(keys["d"]))
    minus = make_ideal_lattice(fld, keys.get("ideal", "unit"))
    rank = int(keys.get("rank", "0"))
    if rank:
        plus = PosLattice(_parse_rows(keys["gram"]))
        if plus.rank != rank:
            raise ValueError("rank does not match gram size")
    else:
        plus = PosLattice(())
    basis = _parse_rows(keys["basis"]) if "basis" in keys else None
    return fld, SplitLattice(plus, minus, basis)
