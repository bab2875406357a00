"""
Etale algebras Q[x]/(f) realized inside n x n rational matrices, their reduced trace
and dual bases.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

import sympy

from app.core.errors import DegenerateTraceForm, NotSquarefree, SingularMatrix
from app.kernels.matrices import Matrix, solve
from app.kernels.scalars import Scalar, as_fraction

logger = logging.getLogger(__name__)

_X = sympy.Symbol("x")


def to_sympy_poly(coeffs: Sequence) -> sympy.Poly:
    """Coefficients are given constant term first."""
    return sympy.Poly([sympy.Rational(str(as_fraction(c))) for c in reversed(list(coeffs))], _X, domain="QQ")


def from_sympy_poly(poly: sympy.Poly) -> List[Fraction]:
    return [Fraction(str(c)) for c in reversed(poly.all_coeffs())]


def is_squarefree_poly(coeffs: Sequence) -> bool:
    f = to_sympy_poly(coeffs)
    return sympy.gcd(f, f.diff(_X)).degree() == 0


def poly_discriminant(coeffs: Sequence) -> Fraction:
    return Fraction(str(sympy.discriminant(to_sympy_poly(coeffs).as_expr(), _X)))


def companion_matrix(coeffs: Sequence) -> Matrix:
    """Matrix of multiplication by x on the power basis 1, x, ..., x^{n-1}."""
    c = [as_fraction(v) for v in coeffs]
    n = len(c) - 1
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(1, n):
        rows[i][i - 1] = Fraction(1)
    for i in range(n):
        rows[i][n - 1] = -c[i]
    return Matrix(rows)


def eval_poly_at_matrix(coeffs: Sequence[Scalar], M: Matrix) -> Matrix:
    """Horner evaluation of sum coeffs[k] M^k."""
    one = M.rows[0][0] * 0 + 1
    result = Matrix.zeros(M.n, one * 0)
    ident = Matrix.identity(M.n, one, one * 0)
    for c in reversed(list(coeffs)):
        result = result * M + ident * c
    return result


def trd(X: Matrix) -> Scalar:
    return X.trace()


def trace_gram(basis: Sequence[Matrix]) -> List[List[Scalar]]:
    return [[trd(bi * bj) for bj in basis] for bi in basis]


@dataclass(frozen=True)
class EtaleAlgebra:
    f: tuple
    generator: Matrix
    basis_matrices: tuple
    order_basis: tuple = field(default=())

    @property
    def n(self) -> int:
        return len(self.f) - 1

    @property
    def order(self) -> tuple:
        return self.order_basis or self.basis_matrices

    def element(self, coords: Sequence) -> Matrix:
        """The algebra element sum coords[k] * x^k."""
        total = self.basis_matrices[0] * coords[0]
        for c, b in zip(coords[1:], self.basis_matrices[1:]):
            total = total + b * c
        return total

    def coordinates(self, X: Matrix, basis: Optional[Sequence[Matrix]] = None) -> List[Fraction]:
        """Coordinates of X in ``basis`` (power basis by default); raises ValueError if X is outside the span."""
        basis = list(basis or self.basis_matrices)
        gram = trace_gram(basis)
        rhs = [trd(X * b) for b in basis]
        try:
            coords = solve(gram, rhs)
        except SingularMatrix as exc:
            raise DegenerateTraceForm("trace form is degenerate on the given basis") from exc
        recon = basis[0] * coords[0]
        for c, b in zip(coords[1:], basis[1:]):
            recon = recon + b * c
        if not recon == X:
            raise ValueError("matrix does not lie in the span of the basis")
        return coords

    def with_order_basis(self, order_basis: Sequence[Matrix]) -> "EtaleAlgebra":
        return EtaleAlgebra(self.f, self.generator, self.basis_matrices, tuple(order_basis))


def _power_basis(M: Matrix, n: int) -> tuple:
    powers = [Matrix.identity(M.n)]
    for _ in range(1, n):
        powers.append(powers[-1] * M)
    return tuple(powers)


def etale_from_poly(coeffs: Sequence) -> EtaleAlgebra:
    c = [as_fraction(v) for v in coeffs]
    if len(c) < 2:
        raise ValueError("polynomial must have degree at least 1")
    if c[-1] != 1:
        raise ValueError(f"polynomial must be monic, leading coefficient is {c[-1]}")
    if not is_squarefree_poly(c):
        raise NotSquarefree(f"gcd(f, f') is not 1 for f = {[str(v) for v in c]}")
    M = companion_matrix(c)
    n = len(c) - 1
    logger.debug("etale algebra of degree %d from %s", n, [str(v) for v in c])
    return EtaleAlgebra(tuple(c), M, _power_basis(M, n))


def etale_from_matrix(M: Matrix) -> EtaleAlgebra:
    """The algebra Q[M] for a rational matrix with squarefree characteristic polynomial."""
    rows = [[sympy.Rational(str(as_fraction(x))) for x in r] for r in M.rows]
    charpoly = sympy.Matrix(rows).charpoly(_X)
    c = from_sympy_poly(sympy.Poly(charpoly.as_expr(), _X, domain="QQ"))
    if not is_squarefree_poly(c):
        raise NotSquarefree(f"characteristic polynomial {charpoly.as_expr()} is not squarefree")
    return EtaleAlgebra(tuple(c), M, _power_basis(M, M.n))


def automorphism_matrix(algebra: EtaleAlgebra, image: Sequence) -> Matrix:
    """
    Matrix, on the power basis, of the algebra endomorphism fixed by x -> p(x), where
    ``image`` lists the coefficients of p constant term first.
    """
    p_of_x = eval_poly_at_matrix([as_fraction(v) for v in image], algebra.generator)
    columns = []
    power = Matrix.identity(algebra.n)
    for _ in range(algebra.n):
        columns.append(algebra.coordinates(power))
        power = power * p_of_x
    n = algebra.n
    return Matrix([[columns[j][i] for j in range(n)] for i in range(n)])


def dual_basis(algebra: EtaleAlgebra, basis: Sequence[Matrix]) -> List[Matrix]:
    """b_i^ with Trd(b_i^ b_j) = delta_ij, obtained from the inverse trace Gram matrix."""
    basis = list(basis)
    n = len(basis)
    if n != algebra.n:
        raise DegenerateTraceForm(f"basis has {n} elements, algebra has degree {algebra.n}")
    gram = Matrix(trace_gram(basis))
    try:
        ginv = gram.inverse()
    except SingularMatrix as exc:
        raise DegenerateTraceForm("trace Gram matrix is singular") from exc
    dual = []
    for i in range(n):
        total = basis[0] * ginv[0, i]
        for k in range(1, n):
            total = total + basis[k] * ginv[k, i]
        dual.append(total)
    return dual
