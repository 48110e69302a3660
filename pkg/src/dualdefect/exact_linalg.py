"""Exact integer and rational linear algebra.

Everything here works with arbitrary-precision Python ints and
``fractions.Fraction``; there is deliberately no floating-point path.
Matrices are plain lists of lists in row-major order, and all lattice
maps act on row vectors (u * m = h convention for normal forms).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

IntMat = list[list[int]]
RatMat = list[list[Fraction]]


def identity(n: int) -> IntMat:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zeros(rows: int, cols: int) -> IntMat:
    return [[0] * cols for _ in range(rows)]


def mat_mul(a, b):
    """Matrix product; works for int and Fraction entries."""
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    assert not a or len(a[0]) == inner, "dimension mismatch"
    return [
        [sum(row[k] * b[k][j] for k in range(inner)) for j in range(cols)]
        for row in a
    ]


def mat_vec(m, v):
    """m * v for a column vector v."""
    return [sum(row[j] * v[j] for j in range(len(v))) for row in m]


def transpose(m):
    if not m:
        return []
    return [list(col) for col in zip(*m)]


def copy_mat(m):
    return [list(row) for row in m]


def det(m: IntMat) -> int:
    """Exact determinant via fraction-free Bareiss elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = copy_mat(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[-1][-1]


def hnf(m: IntMat) -> tuple[IntMat, IntMat]:
    """Row-style Hermite normal form.

    Returns (h, u) with u unimodular and u * m = h, where h is in
    staircase form with positive pivots and entries above each pivot
    reduced into [0, pivot).
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    h = copy_mat(m)
    u = identity(rows)
    piv_row = 0
    pivots = []
    for col in range(cols):
        # find a nonzero entry at or below piv_row
        pivot = None
        for i in range(piv_row, rows):
            if h[i][col] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        if pivot != piv_row:
            h[piv_row], h[pivot] = h[pivot], h[piv_row]
            u[piv_row], u[pivot] = u[pivot], u[piv_row]
        # clear entries below with extended-gcd row operations
        for i in range(piv_row + 1, rows):
            while h[i][col] != 0:
                q = h[piv_row][col] // h[i][col]
                for j in range(cols):
                    h[piv_row][j] -= q * h[i][j]
                for j in range(rows):
                    u[piv_row][j] -= q * u[i][j]
                h[piv_row], h[i] = h[i], h[piv_row]
                u[piv_row], u[i] = u[i], u[piv_row]
        if h[piv_row][col] < 0:
            h[piv_row] = [-x for x in h[piv_row]]
            u[piv_row] = [-x for x in u[piv_row]]
        pivots.append((piv_row, col))
        piv_row += 1
    # reduce entries above each pivot into [0, pivot)
    for r, c in pivots:
        p = h[r][c]
        for i in range(r):
            q = h[i][c] // p
            if q:
                for j in range(cols):
                    h[i][j] -= q * h[r][j]
                for j in range(rows):
                    u[i][j] -= q * u[r][j]
    return h, u


def hnf_basis(m: IntMat) -> IntMat:
    """Nonzero rows of the HNF: a canonical basis of the row lattice."""
    h, _ = hnf(m)
    return [row for row in h if any(row)]


def snf(m: IntMat) -> tuple[IntMat, IntMat, IntMat]:
    """Smith normal form.

    Returns (s, u, v) with u, v unimodular, u * m * v = s diagonal,
    nonnegative diagonal entries and d1 | d2 | ... .
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    s = copy_mat(m)
    u = identity(rows)
    v = identity(cols)

    def row_op(i, k, q):  # row i -= q * row k
        for j in range(cols):
            s[i][j] -= q * s[k][j]
        for j in range(rows):
            u[i][j] -= q * u[k][j]

    def col_op(j, k, q):  # col j -= q * col k
        for i in range(rows):
            s[i][j] -= q * s[i][k]
        for i in range(cols):
            v[i][j] -= q * v[i][k]

    def swap_rows(i, k):
        s[i], s[k] = s[k], s[i]
        u[i], u[k] = u[k], u[i]

    def swap_cols(j, k):
        for i in range(rows):
            s[i][j], s[i][k] = s[i][k], s[i][j]
        for i in range(cols):
            v[i][j], v[i][k] = v[i][k], v[i][j]

    t = 0
    while t < min(rows, cols):
        # move a nonzero entry of the remaining block to (t, t)
        pr = pc = None
        for i in range(t, rows):
            for j in range(t, cols):
                if s[i][j] != 0:
                    pr, pc = i, j
                    break
            if pr is not None:
                break
        if pr is None:
            break
        if pr != t:
            swap_rows(t, pr)
        if pc != t:
            swap_cols(t, pc)
        while True:
            # shrink the pivot (by strict |.| descent) until it divides
            # everything in its row and column, then clear exactly
            improved = True
            while improved:
                improved = False
                for i in range(t + 1, rows):
                    if s[i][t] % s[t][t] != 0:
                        row_op(i, t, s[i][t] // s[t][t])
                        swap_rows(i, t)
                        improved = True
                        break
                if improved:
                    continue
                for j in range(t + 1, cols):
                    if s[t][j] % s[t][t] != 0:
                        col_op(j, t, s[t][j] // s[t][t])
                        swap_cols(j, t)
                        improved = True
                        break
            for i in range(t + 1, rows):
                if s[i][t] != 0:
                    row_op(i, t, s[i][t] // s[t][t])
            for j in range(t + 1, cols):
                if s[t][j] != 0:
                    col_op(j, t, s[t][j] // s[t][t])
            # enforce d_t | remaining block, re-shrinking if needed
            bad = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if s[i][j] % s[t][t] != 0:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_op(t, bad, -1)  # pull the offending row into row t
        if s[t][t] < 0:
            s[t] = [-x for x in s[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return s, u, v


def rank_int(m: IntMat) -> int:
    """Rank over Q of an integer matrix."""
    return len(hnf_basis(m))


def kernel_basis_int(m: IntMat) -> IntMat:
    """Basis of the saturated integer kernel {x : m * x^T = 0}.

    The returned rows are rows of a unimodular matrix, so they form a
    basis of a saturated sublattice of Z^cols and extend to a basis of
    the full lattice.
    """
    cols = len(m[0]) if m else 0
    if not m:
        return identity(cols)
    # x * m^T = 0  <=>  rows of u mapping m^T to zero rows of its HNF
    h, u = hnf(transpose(m))
    return [u[i] for i in range(len(h)) if not any(h[i])]


def saturate(gens: IntMat) -> IntMat:
    """HNF basis of span_Q(gens) intersected with Z^cols.

    The double integer kernel of the generator matrix is exactly the
    saturation of the row lattice.
    """
    cols = len(gens[0]) if gens else 0
    if not gens or all(not any(row) for row in gens):
        return []
    ann = kernel_basis_int(gens)
    if not ann:
        return identity(cols)
    return hnf_basis(kernel_basis_int(ann))


def solve_int(m: IntMat, b: list[int]) -> list[int] | None:
    """Solve m * x = b over the integers; None if no solution."""
    rows = len(m)
    cols = len(m[0]) if rows else 0
    assert len(b) == rows
    if cols == 0:
        return [] if all(x == 0 for x in b) else None
    s, u, v = snf(m)
    c = mat_vec(u, b)
    y = [0] * cols
    for i in range(rows):
        d = s[i][i] if i < cols else 0
        if d == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % d != 0:
                return None
            y[i] = c[i] // d
    return mat_vec(v, y)


def solve_int_left(m: IntMat, b: list[int]) -> list[int] | None:
    """Solve x * m = b over the integers (row-vector convention)."""
    return solve_int(transpose(m), b)


def lattice_contains(basis: IntMat, v: list[int]) -> bool:
    """Whether v lies in the row lattice spanned by basis."""
    if not basis:
        return not any(v)
    return solve_int_left(basis, v) is not None


def lattice_leq(a: IntMat, b: IntMat) -> bool:
    """Whether the row lattice of a is contained in that of b."""
    return all(lattice_contains(b, row) for row in a)


def lattice_eq(a: IntMat, b: IntMat) -> bool:
    return hnf_basis(a) == hnf_basis(b)


def is_unimodular(m: IntMat) -> bool:
    return len(m) == (len(m[0]) if m else 0) and abs(det(m)) == 1


def is_surjective(m: IntMat) -> bool:
    """Whether v -> m * v maps Z^cols onto Z^rows (all SNF factors 1)."""
    rows = len(m)
    if rows == 0:
        return True
    s, _, _ = snf(m)
    return all(i < (len(m[0]) if m else 0) and s[i][i] == 1 for i in range(rows))


# --- rational row reduction ------------------------------------------------


def rref(m: RatMat) -> tuple[RatMat, list[int]]:
    """Reduced row-echelon form over Q; returns (rref, pivot columns)."""
    a = [[Fraction(x) for x in row] for row in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    piv_cols = []
    r = 0
    for c in range(cols):
        pivot = None
        for i in range(r, rows):
            if a[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        p = a[r][c]
        a[r] = [x / p for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        piv_cols.append(c)
        r += 1
    return [row for row in a[:r]], piv_cols


def rank_rat(m: RatMat) -> int:
    return len(rref(m)[0])


def kernel_basis_rat(m: RatMat) -> RatMat:
    """Basis of {x : x applied to rows, i.e. m * x^T = 0} over Q."""
    rows = len(m)
    cols = len(m[0]) if rows else 0
    if rows == 0:
        return [[Fraction(1 if i == j else 0) for j in range(cols)]
                for i in range(cols)]
    red, piv = rref(m)
    free = [c for c in range(cols) if c not in piv]
    basis = []
    for f in free:
        vec = [Fraction(0)] * cols
        vec[f] = Fraction(1)
        for i, c in enumerate(piv):
            vec[c] = -red[i][f]
        basis.append(vec)
    return basis


def clear_denominators(m: RatMat) -> IntMat:
    """Scale each row to a primitive integer vector with the same span."""
    out = []
    for row in m:
        if not any(row):
            out.append([0] * len(row))
            continue
        denom = 1
        for x in row:
            denom = denom * x.denominator // gcd(denom, x.denominator)
        ints = [int(x * denom) for x in row]
        g = 0
        for x in ints:
            g = gcd(g, x)
        out.append([x // g for x in ints])
    return out


@dataclass(frozen=True)
class RationalSubspace:
    """A subspace of Q^n represented by its canonical RREF basis."""

    ambient_dim: int
    basis: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def from_rows(cls, ambient_dim: int, rows) -> "RationalSubspace":
        red, _ = rref([[Fraction(x) for x in row] for row in rows])
        return cls(ambient_dim, tuple(tuple(r) for r in red))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v) -> bool:
        stacked = [list(row) for row in self.basis]
        return rank_rat(stacked + [[Fraction(x) for x in v]]) == self.dim

    def __le__(self, other: "RationalSubspace") -> bool:
        return all(other.contains(row) for row in self.basis)

    def integer_lattice(self) -> IntMat:
        """HNF basis of (this subspace) intersected with Z^n."""
        if not self.basis:
            return []
        return saturate(clear_denominators([list(r) for r in self.basis]))
