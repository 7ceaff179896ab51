"""Exact rational linear algebra for small dense matrices.

Everything is built on ``fractions.Fraction`` (arbitrary-precision, always in
lowest terms, positive denominator), so no operation ever rounds.  Matrices in
this package are tiny (intersection forms of curve configurations), hence the
dense representation and plain Gaussian elimination.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence


Rat = Fraction


class SingularMatrix(ValueError):
    """Raised when a linear solve meets a matrix with determinant zero."""


class NotSymmetric(ValueError):
    """Raised when a symmetric matrix was required."""


class DimensionMismatch(ValueError):
    """Raised when operand shapes are incompatible."""


def _rat(x) -> Rat:
    return x if isinstance(x, Fraction) else Fraction(x)


def rat_vector(entries: Iterable) -> tuple[Rat, ...]:
    return tuple(_rat(x) for x in entries)


class QMatrix:
    """An immutable rows x cols matrix of exact rationals."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, entries: Sequence[Sequence]):
        data = tuple(rat_vector(row) for row in entries)
        if not data or not data[0]:
            raise DimensionMismatch("matrix must have at least one row and column")
        width = len(data[0])
        if any(len(row) != width for row in data):
            raise DimensionMismatch("ragged rows")
        self.rows = len(data)
        self.cols = width
        self._data = data

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls([[Fraction(int(i == j)) for j in range(n)] for i in range(n)])

    def __getitem__(self, ij: tuple[int, int]) -> Rat:
        i, j = ij
        return self._data[i][j]

    def row(self, i: int) -> tuple[Rat, ...]:
        return self._data[i]

    def entries(self) -> tuple[tuple[Rat, ...], ...]:
        return self._data

    def __eq__(self, other) -> bool:
        return isinstance(other, QMatrix) and self._data == other._data

    def __hash__(self) -> int:
        return hash(self._data)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in row) for row in self._data)
        return f"QMatrix[{body}]"

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_symmetric(self) -> bool:
        return self.is_square and all(
            self._data[i][j] == self._data[j][i]
            for i in range(self.rows)
            for j in range(i + 1, self.cols)
        )

    def transpose(self) -> "QMatrix":
        return QMatrix([[self._data[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def matvec(self, v: Sequence) -> tuple[Rat, ...]:
        vec = rat_vector(v)
        if len(vec) != self.cols:
            raise DimensionMismatch(f"matvec: {self.cols} columns vs vector of length {len(vec)}")
        return tuple(sum(a * b for a, b in zip(row, vec)) for row in self._data)

    def submatrix(self, k: int) -> "QMatrix":
        """Leading principal k x k block."""
        return QMatrix([row[:k] for row in self._data[:k]])

    def det(self) -> Rat:
        if not self.is_square:
            raise DimensionMismatch("determinant of a non-square matrix")
        m = [list(row) for row in self._data]
        n = self.rows
        det = Fraction(1)
        for col in range(n):
            pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
            if pivot is None:
                return Fraction(0)
            if pivot != col:
                m[col], m[pivot] = m[pivot], m[col]
                det = -det
            det *= m[col][col]
            inv = 1 / m[col][col]
            for r in range(col + 1, n):
                if m[r][col] == 0:
                    continue
                factor = m[r][col] * inv
                for c in range(col, n):
                    m[r][c] -= factor * m[col][c]
        return det


def solve_linear(a: QMatrix, b: Sequence) -> tuple[Rat, ...]:
    """Solve a*x = b exactly by Gaussian elimination with first-nonzero pivoting."""
    if not a.is_square:
        raise DimensionMismatch("solve_linear needs a square matrix")
    rhs = rat_vector(b)
    n = a.rows
    if len(rhs) != n:
        raise DimensionMismatch(f"solve_linear: matrix is {n}x{n}, vector has length {len(rhs)}")
    m = [list(row) + [rhs[i]] for i, row in enumerate(a.entries())]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            raise SingularMatrix(f"zero pivot in column {col}")
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
        inv = 1 / m[col][col]
        for r in range(n):
            if r == col or m[r][col] == 0:
                continue
            factor = m[r][col] * inv
            for c in range(col, n + 1):
                m[r][c] -= factor * m[col][c]
    return tuple(m[i][n] / m[i][i] for i in range(n))


def is_negative_definite(a: QMatrix) -> bool:
    """Sylvester test: (-1)^k times the k-th leading principal minor is > 0 for all k."""
    if not a.is_symmetric():
        raise NotSymmetric("definiteness test requires a symmetric matrix")
    for k in range(1, a.rows + 1):
        minor = a.submatrix(k).det()
        if (-1) ** k * minor <= 0:
            return False
    return True


def quadratic_form(a: QMatrix, v: Sequence) -> Rat:
    """Exact v^T a v."""
    if not a.is_symmetric():
        raise NotSymmetric("quadratic form requires a symmetric matrix")
    vec = rat_vector(v)
    if len(vec) != a.rows:
        raise DimensionMismatch(f"quadratic_form: {a.rows}x{a.cols} matrix vs vector of length {len(vec)}")
    return sum(vec[i] * x for i, x in enumerate(a.matvec(vec)))
