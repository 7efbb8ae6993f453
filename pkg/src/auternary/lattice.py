"""Exact integer Gram-matrix algebra for ranks 2 and 3.

Matrices are immutable tuples of tuples of Python ints, wrapped in a small
dataclass that enforces symmetry and nondegeneracy at construction time.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .exactmath import ordp

Vector = tuple[int, ...]


@dataclass(frozen=True)
class GramMatrix:
    """Symmetric nondegenerate integer Gram matrix of rank 2 or 3."""

    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        n = len(self.entries)
        if n not in (2, 3):
            raise ValueError(f"rank must be 2 or 3, got {n}")
        for row in self.entries:
            if len(row) != n:
                raise ValueError("entries must be square")
            for x in row:
                if not isinstance(x, int) or isinstance(x, bool):
                    raise ValueError("entries must be plain integers")
        for i in range(n):
            for j in range(i):
                if self.entries[i][j] != self.entries[j][i]:
                    raise ValueError("entries must be symmetric")
        if determinant(self) == 0:
            raise ValueError("Gram matrix must be nondegenerate")

    @property
    def rank(self) -> int:
        return len(self.entries)

    @classmethod
    def diagonal(cls, *diag: int) -> "GramMatrix":
        n = len(diag)
        return cls(tuple(tuple(diag[i] if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def from_upper(cls, upper: tuple[int, ...]) -> "GramMatrix":
        """Build from the upper triangle read row by row (3 or 6 numbers)."""
        if len(upper) == 6:
            a, b, c, d, e, f = upper
            rows = ((a, b, c), (b, d, e), (c, e, f))
        elif len(upper) == 3:
            a, b, d = upper
            rows = ((a, b), (b, d))
        else:
            raise ValueError("upper triangle must have 3 or 6 entries")
        return cls(rows)

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i]


def determinant(gram: GramMatrix) -> int:
    m = gram.entries
    if len(m) == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def is_positive_definite(gram: GramMatrix) -> bool:
    """Exact Sylvester criterion on leading principal minors."""
    m = gram.entries
    if m[0][0] <= 0:
        return False
    minor2 = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    if minor2 <= 0:
        return False
    if gram.rank == 2:
        return True
    return determinant(gram) > 0


def eval_quadratic(gram: GramMatrix, x: Vector) -> int:
    """x^T gram x, exactly."""
    m = gram.entries
    n = gram.rank
    if len(x) != n:
        raise ValueError("vector length does not match rank")
    total = 0
    for i in range(n):
        total += m[i][i] * x[i] * x[i]
        for j in range(i + 1, n):
            total += 2 * m[i][j] * x[i] * x[j]
    return total


def apply_gram(gram: GramMatrix, x: Vector) -> Vector:
    """Matrix-vector product gram @ x."""
    m = gram.entries
    return tuple(sum(m[i][j] * x[j] for j in range(gram.rank)) for i in range(gram.rank))


def scale_norm_exponents(gram: GramMatrix, p: int) -> tuple[int, int]:
    """(ord_p of the scale ideal, ord_p of the norm ideal) of the lattice.

    The scale is generated by all entries, the norm by the diagonal together
    with twice the off-diagonal entries.
    """
    m = gram.entries
    n = gram.rank
    scale_gcd = 0
    norm_gcd = 0
    for i in range(n):
        norm_gcd = gcd(norm_gcd, m[i][i])
        for j in range(i, n):
            scale_gcd = gcd(scale_gcd, m[i][j])
            if j > i:
                norm_gcd = gcd(norm_gcd, 2 * m[i][j])
    return ordp(scale_gcd, p), ordp(norm_gcd, p)


def norm_generator(gram: GramMatrix) -> int:
    """Positive generator of the norm ideal over the integers."""
    m = gram.entries
    n = gram.rank
    g = 0
    for i in range(n):
        g = gcd(g, m[i][i])
        for j in range(i + 1, n):
            g = gcd(g, 2 * m[i][j])
    return g


def scale_generator(gram: GramMatrix) -> int:
    """Positive generator of the scale ideal over the integers."""
    m = gram.entries
    g = 0
    for i in range(gram.rank):
        for j in range(i, gram.rank):
            g = gcd(g, m[i][j])
    return g


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def _hnf_two_rows(rows: list[list[int]]) -> tuple[Vector, Vector]:
    """Canonical Hermite-form basis of the lattice spanned by two 3-vectors."""
    a, b = rows[0][:], rows[1][:]
    # Find the leftmost pivot column.
    for col in range(3):
        if a[col] == 0 and b[col] == 0:
            continue
        g, x, y = _xgcd(a[col], b[col])
        na = [x * a[k] + y * b[k] for k in range(3)]
        nb = [(-b[col] // g) * a[k] + (a[col] // g) * b[k] for k in range(3)]
        a, b = na, nb
        break
    # Row b now has a zero in the pivot column; find its own pivot.
    for col2 in range(3):
        if b[col2] != 0:
            if b[col2] < 0:
                b = [-t for t in b]
            # Reduce a above b's pivot.
            q = a[col2] // b[col2]
            a = [a[k] - q * b[k] for k in range(3)]
            break
    else:
        raise ValueError("kernel basis degenerated; input row was zero?")
    if a[col] < 0:
        a = [-t for t in a]
    return tuple(a), tuple(b)


def integer_kernel(row: Vector) -> tuple[Vector, Vector]:
    """Saturated rank-2 kernel of a nonzero integer row 3-vector.

    Returns a canonical (Hermite-reduced) basis of {x : row . x = 0}.
    """
    if len(row) != 3 or all(c == 0 for c in row):
        raise ValueError("need a nonzero 3-vector")
    # Column-reduce row to (g, 0, 0) by unimodular U; kernel = last two rows
    # of the inverse transform applied to e2, e3.  Build U as row operations
    # on the identity so that U @ row^T = (g, 0, 0)^T.
    u = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    r = list(row)

    def combine(i: int, j: int) -> None:
        # Fold r[j] into r[i] by a 2x2 unimodular block.
        if r[j] == 0:
            return
        g, x, y = _xgcd(r[i], r[j])
        ai, aj = r[i] // g, r[j] // g
        row_i = [x * u[i][k] + y * u[j][k] for k in range(3)]
        row_j = [-aj * u[i][k] + ai * u[j][k] for k in range(3)]
        u[i], u[j] = row_i, row_j
        r[i], r[j] = g, 0

    if r[0] == 0 and r[1] != 0:
        u[0], u[1] = u[1], [-t for t in u[0]]
        r[0], r[1] = r[1], 0
    elif r[0] == 0:
        u[0], u[2] = u[2], [-t for t in u[0]]
        r[0], r[2] = r[2], 0
    combine(0, 1)
    combine(0, 2)
    assert r[1] == 0 and r[2] == 0 and r[0] != 0
    basis = [u[1], u[2]]
    for v in basis:
        assert sum(v[k] * row[k] for k in range(3)) == 0
    return _hnf_two_rows(basis)


def restrict_gram(gram: GramMatrix, basis: tuple[Vector, Vector]) -> GramMatrix:
    """Gram matrix of the sublattice spanned by the given row vectors."""
    def pair(x: Vector, y: Vector) -> int:
        gx = apply_gram(gram, x)
        return sum(gx[k] * y[k] for k in range(gram.rank))

    b0, b1 = basis
    return GramMatrix(((pair(b0, b0), pair(b0, b1)), (pair(b1, b0), pair(b1, b1))))


def lattices_equal(basis_a: tuple[Vector, Vector], basis_b: tuple[Vector, Vector]) -> bool:
    """Whether two rank-2 integer bases span the same sublattice of Z^3."""
    return _hnf_two_rows([list(basis_a[0]), list(basis_a[1])]) == _hnf_two_rows(
        [list(basis_b[0]), list(basis_b[1])]
    )
