"""
Square matrices over any scalar backend (Fraction, QuadExt, NumComplex).

Entries are stored as an immutable tuple of row tuples. Indexing is 0-based inside
the code; reports and docs use the 1-based convention of the formulas.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd, lcm
from typing import Callable, Iterable, List, Sequence, Tuple

import numpy as np

from app.core.errors import SingularMatrix
from app.kernels.scalars import NumComplex, QuadExt, Scalar, as_fraction, is_zero, magnitude


class Matrix:
    __slots__ = ("rows", "n")

    def __init__(self, rows: Iterable[Iterable[Scalar]]):
        rows = tuple(tuple(r) for r in rows)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError(f"matrix must be square, got row lengths {[len(r) for r in rows]}")
        self.rows: Tuple[Tuple[Scalar, ...], ...] = rows
        self.n = n

    # ----- constructors -----
    @classmethod
    def identity(cls, n: int, one: Scalar = Fraction(1), zero: Scalar = Fraction(0)) -> "Matrix":
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, n: int, zero: Scalar = Fraction(0)) -> "Matrix":
        return cls([[zero] * n for _ in range(n)])

    @classmethod
    def unit(cls, n: int, i: int, j: int) -> "Matrix":
        """The matrix unit E_{ij} (0-based)."""
        return cls([[Fraction(1 if (r, c) == (i, j) else 0) for c in range(n)] for r in range(n)])

    @classmethod
    def diagonal(cls, values: Sequence[Scalar]) -> "Matrix":
        n = len(values)
        zero = values[0] * 0 if n else Fraction(0)
        return cls([[values[i] if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def rational(cls, rows: Iterable[Iterable]) -> "Matrix":
        return cls([[as_fraction(x) for x in r] for r in rows])

    @classmethod
    def from_numpy(cls, arr: np.ndarray, eps: float = 0.0) -> "Matrix":
        return cls([[NumComplex(complex(x).real, complex(x).imag, eps) for x in r] for r in arr])

    # ----- access -----
    def __getitem__(self, ij: Tuple[int, int]) -> Scalar:
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> List[Scalar]:
        return [r[j] for r in self.rows]

    def flatten(self) -> List[Scalar]:
        return [x for r in self.rows for x in r]

    def map(self, fn: Callable[[Scalar], Scalar]) -> "Matrix":
        return Matrix([[fn(x) for x in r] for r in self.rows])

    def to_numpy(self) -> np.ndarray:
        def as_complex(x):
            if isinstance(x, NumComplex):
                return x.value
            if isinstance(x, QuadExt):
                return x.to_complex()
            return complex(float(x))
        return np.array([[as_complex(x) for x in r] for r in self.rows], dtype=complex)

    # ----- arithmetic -----
    def __add__(self, other: "Matrix") -> "Matrix":
        return Matrix([[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        return Matrix([[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)])

    def __neg__(self) -> "Matrix":
        return self.map(lambda x: -x)

    def __mul__(self, other):
        if isinstance(other, Matrix):
            cols = [other.column(j) for j in range(other.n)]
            return Matrix([[_dot(r, c) for c in cols] for r in self.rows])
        return self.map(lambda x: x * other)

    def __rmul__(self, scalar):
        return self.map(lambda x: scalar * x)

    def __pow__(self, k: int) -> "Matrix":
        if k < 0:
            return self.inverse() ** (-k)
        one = self.rows[0][0] * 0 + 1
        result = Matrix.identity(self.n, one, one * 0)
        for _ in range(k):
            result = result * self
        return result

    def transpose(self) -> "Matrix":
        return Matrix(zip(*self.rows))

    def conjugate_transpose(self) -> "Matrix":
        return Matrix(zip(*self.rows)).map(lambda x: x.conjugate() if hasattr(x, "conjugate") else x)

    def trace(self) -> Scalar:
        total = self.rows[0][0] * 0
        for i in range(self.n):
            total = total + self.rows[i][i]
        return total

    # ----- comparisons -----
    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix) or other.n != self.n:
            return False
        return all(is_zero(a - b) for a, b in zip(self.flatten(), other.flatten()))

    def __hash__(self):
        return hash(self.rows)

    def is_zero(self) -> bool:
        return all(is_zero(x) for x in self.flatten())

    def max_abs(self) -> float:
        return max((magnitude(x) for x in self.flatten()), default=0.0)

    def commutes_with(self, other: "Matrix") -> bool:
        return (self * other - other * self).is_zero()

    def is_integral(self) -> bool:
        return all(isinstance(x, (int, Fraction)) and Fraction(x).denominator == 1 for x in self.flatten())

    # ----- determinant / inverse -----
    def det(self) -> Scalar:
        return det(self)

    def inverse(self) -> "Matrix":
        return inverse(self)

    def __repr__(self):
        return f"Matrix({[[str(x) for x in r] for r in self.rows]})"


RatMatrix = Matrix


def _dot(row: Sequence[Scalar], col: Sequence[Scalar]) -> Scalar:
    total = row[0] * col[0]
    for a, b in zip(row[1:], col[1:]):
        total = total + a * b
    return total


def _is_exact_rational(M: Matrix) -> bool:
    return all(isinstance(x, (int, Fraction)) for x in M.flatten())


def _pick_pivot(a: List[List[Scalar]], col: int, start: int) -> int:
    """Row index of the pivot for ``col``: first nonzero for exact backends, largest for numeric."""
    best, best_mag = -1, 0.0
    for r in range(start, len(a)):
        x = a[r][col]
        if is_zero(x):
            continue
        if not isinstance(x, NumComplex):
            return r
        if magnitude(x) > best_mag:
            best, best_mag = r, magnitude(x)
    return best


def bareiss_det(M: Matrix) -> Fraction:
    """Fraction-free elimination; exact for integer and rational entries."""
    n = M.n
    if n == 0:
        return Fraction(1)
    a = [[Fraction(x) for x in r] for r in M.rows]
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if swap is None:
                return Fraction(0)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def elimination_det(M: Matrix) -> Scalar:
    n = M.n
    a = [list(r) for r in M.rows]
    result = a[0][0] * 0 + 1
    for k in range(n):
        p = _pick_pivot(a, k, k)
        if p < 0:
            return a[0][0] * 0
        if p != k:
            a[k], a[p] = a[p], a[k]
            result = -result
        pivot = a[k][k]
        result = result * pivot
        for i in range(k + 1, n):
            factor = a[i][k] / pivot
            for j in range(k + 1, n):
                a[i][j] = a[i][j] - factor * a[k][j]
    return result


def det(M: Matrix) -> Scalar:
    if _is_exact_rational(M):
        return bareiss_det(M)
    return elimination_det(M)


def leibniz_det(M: Matrix) -> Scalar:
    """Leibniz sum over all permutations; only used as an oracle for small n."""
    n = M.n
    total = M.rows[0][0] * 0
    for images in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if images[i] > images[j])
        term = M.rows[0][0] * 0 + (-1 if inversions % 2 else 1)
        for i in range(n):
            term = term * M.rows[i][images[i]]
        total = total + term
    return total


def inverse(M: Matrix) -> Matrix:
    """Gauss-Jordan inverse over any backend; raises SingularMatrix."""
    n = M.n
    one = M.rows[0][0] * 0 + 1
    zero = one * 0
    a = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(M.rows)]
    for k in range(n):
        p = _pick_pivot(a, k, k)
        if p < 0:
            raise SingularMatrix(f"matrix is singular (no pivot in column {k + 1})")
        a[k], a[p] = a[p], a[k]
        pivot = a[k][k]
        a[k] = [x / pivot for x in a[k]]
        for i in range(n):
            if i != k and not is_zero(a[i][k]):
                factor = a[i][k]
                a[i] = [x - factor * y for x, y in zip(a[i], a[k])]
    return Matrix([r[n:] for r in a])


def solve(A: List[List[Scalar]], b: List[Scalar]) -> List[Scalar]:
    """Solve A x = b for square A (rows given as lists)."""
    n = len(A)
    one = A[0][0] * 0 + 1
    a = [list(r) + [b[i] * one] for i, r in enumerate(A)]
    for k in range(n):
        p = _pick_pivot(a, k, k)
        if p < 0:
            raise SingularMatrix(f"linear system is singular (column {k + 1})")
        a[k], a[p] = a[p], a[k]
        pivot = a[k][k]
        a[k] = [x / pivot for x in a[k]]
        for i in range(n):
            if i != k and not is_zero(a[i][k]):
                factor = a[i][k]
                a[i] = [x - factor * y for x, y in zip(a[i], a[k])]
    return [r[n] for r in a]


def adjugate2(M: Matrix) -> Matrix:
    (p, r), (s, u) = M.rows
    return Matrix([[u, -r], [-s, p]])


def content_normalize(M: Matrix) -> Matrix:
    """Scale a rational matrix to an integer matrix with coprime entries and a positive leading entry."""
    entries = [Fraction(x) for x in M.flatten()]
    den = 1
    for x in entries:
        den = lcm(den, x.denominator)
    ints = [int(x * den) for x in entries]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return M
    lead = next(x for x in ints if x != 0)
    g = g if lead > 0 else -g
    n = M.n
    return Matrix([[Fraction(ints[i * n + j] // g) for j in range(n)] for i in range(n)])
