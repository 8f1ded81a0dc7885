"""Exact rational vectors and matrices.

Scalars are :class:`fractions.Fraction` (always in lowest terms with a
positive denominator).  Vectors are plain tuples of fractions; matrices are
immutable :class:`Matrix` objects stored row-major.  Nothing here ever
touches floating point, and norms are only ever compared as squares.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from parlp.errors import DependentColumns, SingularMatrix

Rational = Fraction
Vector = tuple  # tuple[Fraction, ...]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def to_rational(value) -> Fraction:
    """Convert an int, Fraction or ``"num/den"`` string to a Fraction.

    Floats are refused: they would smuggle rounding into exact data.
    """
    if isinstance(value, bool):
        raise ValueError(f"not a rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        match = _RATIONAL_RE.match(value)
        if not match:
            raise ValueError(f"malformed rational: {value!r}")
        num, den = match.groups()
        if den is not None and int(den) == 0:
            raise ValueError(f"zero denominator: {value!r}")
        return Fraction(int(num), int(den) if den is not None else 1)
    raise ValueError(f"not a rational: {value!r}")


def format_rational(q: Fraction) -> str:
    """Canonical string form: ``"-3/4"``, or ``"5"`` for integers."""
    return str(Fraction(q))


def vector(values: Iterable) -> Vector:
    return tuple(to_rational(v) for v in values)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    if len(u) != len(v):
        raise ValueError(f"length mismatch: {len(u)} vs {len(v)}")
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def norm_squared(v: Sequence[Fraction]) -> Fraction:
    """Squared Euclidean norm, exact."""
    return sum((x * x for x in v), Fraction(0))


def vsub(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
    return tuple(a - b for a, b in zip(u, v, strict=True))


def vadd(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
    return tuple(a + b for a, b in zip(u, v, strict=True))


def vscale(c, v: Sequence[Fraction]) -> Vector:
    return tuple(c * a for a in v)


class Matrix:
    """Immutable dense m x n matrix of Fractions.

    ``ncols`` only matters for matrices with no rows, where it cannot be
    read off the data.
    """

    __slots__ = ("_rows", "_n")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        data = tuple(tuple(to_rational(x) for x in row) for row in rows)
        if data:
            n = len(data[0])
            if any(len(r) != n for r in data):
                raise ValueError("ragged matrix rows")
            if ncols is not None and ncols != n:
                raise ValueError("ncols disagrees with row length")
        else:
            n = ncols or 0
        object.__setattr__(self, "_rows", data)
        object.__setattr__(self, "_n", n)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def identity(cls, size: int) -> Matrix:
        return cls(
            [[Fraction(int(i == j)) for j in range(size)] for i in range(size)],
            ncols=size,
        )

    @classmethod
    def zeros(cls, m: int, n: int) -> Matrix:
        return cls([[Fraction(0)] * n for _ in range(m)], ncols=n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], m: int) -> Matrix:
        cols = [vector(c) for c in columns]
        return cls([[c[i] for c in cols] for i in range(m)], ncols=len(cols))

    @property
    def rows(self) -> tuple:
        return self._rows

    @property
    def m(self) -> int:
        return len(self._rows)

    @property
    def n(self) -> int:
        return self._n

    @property
    def shape(self) -> tuple[int, int]:
        return self.m, self.n

    def row(self, i: int) -> Vector:
        return self._rows[i]

    def col(self, j: int) -> Vector:
        """The j-th column (0-based)."""
        return tuple(r[j] for r in self._rows)

    def columns(self, index: Iterable[int]) -> Matrix:
        """Submatrix formed by the given columns, in the given order."""
        idx = list(index)
        return Matrix([[r[j] for j in idx] for r in self._rows], ncols=len(idx))

    def select_rows(self, index: Iterable[int]) -> Matrix:
        return Matrix([self._rows[i] for i in index], ncols=self._n)

    @property
    def T(self) -> Matrix:
        return Matrix(
            [[self._rows[i][j] for i in range(self.m)] for j in range(self.n)],
            ncols=self.m,
        )

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.n != other.m:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            cols = [other.col(j) for j in range(other.n)]
            return Matrix(
                [[dot(r, c) for c in cols] for r in self._rows], ncols=other.n
            )
        v = tuple(other)
        if len(v) != self.n:
            raise ValueError(f"shape mismatch {self.shape} @ ({len(v)},)")
        return tuple(dot(r, v) for r in self._rows)

    def rmul(self, v: Sequence[Fraction]) -> Vector:
        """Row vector times matrix: ``v^T M``."""
        if len(v) != self.m:
            raise ValueError(f"shape mismatch ({len(v)},) @ {self.shape}")
        return tuple(
            sum((v[i] * self._rows[i][j] for i in range(self.m)), Fraction(0))
            for j in range(self.n)
        )

    def _zip(self, other: Matrix, op) -> Matrix:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return Matrix(
            [[op(a, b) for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)],
            ncols=self.n,
        )

    def __add__(self, other: Matrix) -> Matrix:
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other: Matrix) -> Matrix:
        return self._zip(other, lambda a, b: a - b)

    def scale(self, c) -> Matrix:
        c = to_rational(c)
        return Matrix([[c * x for x in r] for r in self._rows], ncols=self.n)

    def norm_squared(self) -> Fraction:
        """Sum over columns of the squared column norms."""
        return sum((norm_squared(self.col(j)) for j in range(self.n)), Fraction(0))

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._rows for x in r)

    def to_lists(self) -> list[list[str]]:
        return [[format_rational(x) for x in r] for r in self._rows]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self):
        return hash((self._rows, self._n))

    def __repr__(self):
        body = "; ".join(" ".join(format_rational(x) for x in r) for r in self._rows)
        return f"Matrix({self.m}x{self.n}: [{body}])"


def _integer_rows(M: Matrix) -> list[list[int]]:
    # clearing denominators row by row leaves rank and echelon pattern unchanged
    out = []
    for r in M.rows:
        scale = lcm(*(x.denominator for x in r)) if r else 1
        out.append([int(x * scale) for x in r])
    return out


def _bareiss(a: list[list[int]], ncols: int) -> tuple[int, int]:
    """Fraction-free row echelon reduction of an integer matrix, in place.

    Pivots on the first nonzero entry of each column.  Returns
    ``(rank, sign)`` where ``sign`` tracks row swaps.
    """
    m = len(a)
    r, prev, sign = 0, 1, 1
    for c in range(ncols):
        if r == m:
            break
        piv = next((i for i in range(r, m) if a[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
            sign = -sign
        p = a[r][c]
        for i in range(r + 1, m):
            f = a[i][c]
            row_i, row_r = a[i], a[r]
            for k in range(c + 1, ncols):
                row_i[k] = (p * row_i[k] - f * row_r[k]) // prev
            row_i[c] = 0
        prev = p
        r += 1
    return r, sign


def rank(M: Matrix) -> int:
    """Dimension of the column space, by fraction-free elimination."""
    if M.m == 0 or M.n == 0:
        return 0
    r, _ = _bareiss(_integer_rows(M), M.n)
    return r


def det(M: Matrix) -> Fraction:
    if M.m != M.n:
        raise ValueError(f"determinant of non-square {M.shape} matrix")
    if M.m == 0:
        return Fraction(1)
    a = _integer_rows(M)
    scale = 1
    for r in M.rows:
        scale *= lcm(*(x.denominator for x in r))
    r, sign = _bareiss(a, M.n)
    if r < M.m:
        return Fraction(0)
    return Fraction(sign * a[-1][-1], scale)


def columns_independent(M: Matrix, cols: Iterable[int]) -> bool:
    cols = list(cols)
    return rank(M.columns(cols)) == len(cols)


def rref(M: Matrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form (as mutable rows) and the pivot columns."""
    a = [list(r) for r in M.rows]
    m, n = M.m, M.n
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        piv = next((i for i in range(r, m) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(m):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a, pivots


def invert(B: Matrix) -> Matrix:
    """Exact inverse by Gauss-Jordan elimination."""
    if B.m != B.n:
        raise SingularMatrix(f"cannot invert non-square {B.shape} matrix")
    size = B.m
    eye = Matrix.identity(size)
    aug = Matrix([r + e for r, e in zip(B.rows, eye.rows)], ncols=2 * size)
    a, pivots = rref(aug)
    if pivots[:size] != list(range(size)):
        raise SingularMatrix("matrix is rank deficient")
    return Matrix([row[size:] for row in a], ncols=size)


def solve_square(B: Matrix, rhs: Sequence[Fraction]) -> Vector | None:
    """Unique solution of ``B x = rhs`` for square B, or None if B is singular."""
    size = B.m
    aug = Matrix([r + (v,) for r, v in zip(B.rows, rhs)], ncols=B.n + 1)
    a, pivots = rref(aug)
    if pivots[:size] != list(range(size)) or len(pivots) > size:
        return None
    return tuple(a[i][size] for i in range(size))


def pseudo_inverse(B: Matrix) -> Matrix:
    """``(B^T B)^{-1} B^T`` for B with linearly independent columns.

    The result is s x r for an r x s input and satisfies ``B^- B = I``.
    For square B it coincides with the ordinary inverse.
    """
    if rank(B) != B.n:
        raise DependentColumns(f"columns of {B.shape} matrix are dependent")
    Bt = B.T
    return invert(Bt @ B) @ Bt
