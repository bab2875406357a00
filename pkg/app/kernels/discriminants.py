"""
Discriminants of orders and denominator certificates for generator values.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

import numpy as np

import app_constants
from app.core.errors import DegenerateQ, DegenerateTraceForm, NotAnOrder, NotHermitian, NotPositive, SingularMatrix
from app.kernels.etale import EtaleAlgebra, etale_from_poly, trace_gram, trd
from app.kernels.generators import psi_torus
from app.kernels.matrices import Matrix, det, solve
from app.kernels.perms import all_permutations
from app.kernels.scalars import QuadExt, Scalar, to_string
from app.kernels.tori_galois import TorusFixture, orbit_char_poly

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OrderData:
    algebra: EtaleAlgebra
    basis: tuple
    rel_disc: int


# =============================
# Relative discriminant
# =============================
def _integral_coordinates(X: Matrix, basis: Sequence[Matrix], gram: List[List[Fraction]]) -> Optional[List[Fraction]]:
    rhs = [trd(X * b) for b in basis]
    coords = solve(gram, rhs)
    recon = basis[0] * coords[0]
    for c, b in zip(coords[1:], basis[1:]):
        recon = recon + b * c
    if not recon == X:
        return None
    return coords


def order_discriminant(basis: Sequence[Matrix]) -> int:
    basis = list(basis)
    for i, a in enumerate(basis):
        for b in basis[i + 1:]:
            if not a.commutes_with(b):
                raise NotAnOrder("basis elements do not commute")
    gram = trace_gram(basis)
    if any(Fraction(x).denominator != 1 for row in gram for x in row):
        raise NotAnOrder("trace Gram matrix has non-integer entries")
    try:
        one = _integral_coordinates(Matrix.identity(basis[0].n), basis, gram)
    except SingularMatrix as exc:
        raise DegenerateTraceForm("trace Gram matrix is singular") from exc
    if one is None or any(c.denominator != 1 for c in one):
        raise NotAnOrder("1 is not in the integral span of the basis")
    for i, a in enumerate(basis):
        for b in basis[i:]:
            coords = _integral_coordinates(a * b, basis, gram)
            if coords is None or any(c.denominator != 1 for c in coords):
                raise NotAnOrder("basis is not closed under multiplication")
    value = det(Matrix(gram))
    return int(value)


def make_order(algebra: EtaleAlgebra, basis: Optional[Sequence[Matrix]] = None) -> OrderData:
    basis = tuple(basis or algebra.order)
    return OrderData(algebra, basis, order_discriminant(basis))


def quadratic_order(d: int, maximal: bool = False) -> OrderData:
    """Z[sqrt d], or Z[(1 + sqrt d)/2] when ``maximal`` and d = 1 mod 4."""
    algebra = etale_from_poly([-d, 0, 1])
    root = algebra.generator
    if maximal and d % 4 == 1:
        basis = (Matrix.identity(2), (Matrix.identity(2) + root) * Fraction(1, 2))
    else:
        basis = (Matrix.identity(2), root)
    return make_order(algebra.with_order_basis(basis), basis)


# =============================
# Archimedean discriminant
# =============================
def _vec(M: Matrix) -> np.ndarray:
    return M.to_numpy().reshape(-1)


def _check_q(Q: np.ndarray, size: int) -> np.ndarray:
    Q = np.asarray(Q, dtype=complex)
    if Q.shape != (size, size):
        raise DegenerateQ(f"Q must be {size}x{size}, got {Q.shape}")
    if not np.allclose(Q, Q.conj().T, atol=app_constants.DEFAULT_TOLERANCE):
        raise DegenerateQ("Q is not Hermitian")
    if np.linalg.eigvalsh(Q).min() <= app_constants.NUMERIC_ZERO_FLOOR:
        raise DegenerateQ("Q is not positive definite")
    return Q


def q_gram(basis: Sequence[Matrix], Q: Optional[np.ndarray] = None) -> np.ndarray:
    vecs = np.array([_vec(b) for b in basis])
    size = vecs.shape[1]
    Q = np.eye(size, dtype=complex) if Q is None else _check_q(Q, size)
    return vecs.conj() @ Q @ vecs.T


def _trace_gram_det(basis: Sequence[Matrix]) -> float:
    mats = [b.to_numpy() for b in basis]
    gram = np.array([[np.trace(a @ b) for b in mats] for a in mats])
    value = abs(np.linalg.det(gram))
    if value <= app_constants.NUMERIC_ZERO_FLOOR:
        raise DegenerateTraceForm("trace Gram determinant vanishes")
    return value


def archimedean_discriminant(basis: Sequence[Matrix], Q: Optional[np.ndarray] = None) -> float:
    """det(Q(f_i, f_j)) / |det Trd(f_i f_j)| with Q(A, B) = vec(A)^H Q vec(B)."""
    value = np.linalg.det(q_gram(basis, Q)).real
    return float(value / _trace_gram_det(basis))


def archimedean_discriminant_lie(trace_zero_basis: Sequence[Matrix], Q: Optional[np.ndarray] = None) -> float:
    """Same ratio restricted to a basis of the trace-zero part."""
    if not trace_zero_basis:
        return 1.0
    value = np.linalg.det(q_gram(trace_zero_basis, Q)).real
    return float(value / _trace_gram_det(trace_zero_basis))



def random_unimodular(n: int, rng: random.Random, steps: int = 3) -> List[List[int]]:
    """Product of seeded elementary row operations; determinant 1."""
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    if n < 2:
        return U
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        k = rng.choice([-1, 1])
        U[i] = [a + k * b for a, b in zip(U[i], U[j])]
    return U


def change_basis(basis: Sequence[Matrix], U: List[List[int]]) -> List[Matrix]:
    out = []
    for row in U:
        total = Matrix.zeros(basis[0].n)
        for c, b in zip(row, basis):
            total = total + b * c
        out.append(total)
    return out

@dataclass
class GramFactorization:
    U: np.ndarray
    S: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return self.U @ self.S @ self.S @ np.linalg.inv(self.U)

    def to_dict(self) -> Dict:
        return {
            "S": [float(x) for x in np.diag(self.S)],
            "U": [[[float(z.real), float(z.imag)] for z in row] for row in self.U],
        }


def gram_sqrt(gram: np.ndarray, tolerance: float = app_constants.DEFAULT_TOLERANCE) -> GramFactorization:
    Gr = np.asarray(gram, dtype=complex)
    scale = max(1.0, float(np.abs(Gr).max()))
    if np.abs(Gr - Gr.conj().T).max() > tolerance * scale:
        raise NotHermitian("Gram matrix is not Hermitian")
    eigenvalues, U = np.linalg.eigh(Gr)
    if eigenvalues.min() <= app_constants.NUMERIC_ZERO_FLOOR * scale:
        raise NotPositive(f"smallest eigenvalue {eigenvalues.min():.3e} is not positive")
    return GramFactorization(U=U, S=np.diag(np.sqrt(eigenvalues)))


# =============================
# Integrality certificates
# =============================
def is_quadratic_integer(value: QuadExt) -> bool:
    a2, b2 = 2 * value.a, 2 * value.b
    if value.d % 4 != 1:
        return value.a.denominator == 1 and value.b.denominator == 1
    if a2.denominator != 1 or b2.denominator != 1:
        return False
    return (a2.numerator - b2.numerator) % 2 == 0


def _near_integer(x: Scalar, tolerance: float) -> bool:
    if isinstance(x, (int, Fraction)):
        return Fraction(x).denominator == 1
    if isinstance(x, QuadExt):
        return x.b == 0 and x.a.denominator == 1
    scale = max(1.0, abs(x))
    slack = max(x.eps, tolerance * scale)
    return abs(x.im) <= slack and abs(x.re - round(x.re)) <= slack


def certificate_exponent(n: int, ramified: bool) -> int:
    return math.ceil(1 + n / 2) if ramified else 1


@dataclass
class CertificateReport:
    ok: bool
    D: int
    exponent: int
    rows: List[Dict] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict:
        return {"ok": self.ok, "D": self.D, "exponent": self.exponent, "rows": self.rows, "notes": self.notes}


def integrality_certificate(lam: Matrix, fx: TorusFixture, order: OrderData, ramified: bool = False,
                            tolerance: float = app_constants.DEFAULT_TOLERANCE) -> CertificateReport:
    D = abs(order.rel_disc)
    k = certificate_exponent(fx.n, ramified)
    scale = Fraction(D) ** k
    rows = []
    ok = True
    for sigma in all_permutations(fx.n):
        value = psi_torus(sigma, lam, fx.idems, check=False)
        witness = value * scale
        if fx.backend == "quadratic" and isinstance(witness, QuadExt):
            integral = is_quadratic_integer(witness)
        elif fx.backend == "numeric":
            coeffs = orbit_char_poly(fx, sigma, lam, scale=scale, reconstruct=False)
            integral = all(_near_integer(c, tolerance) for c in coeffs)
        else:
            integral = _near_integer(witness, tolerance)
        ok = ok and integral
        rows.append({"sigma": str(sigma), "value": to_string(value), "witness": to_string(witness),
                     "integral": integral})
    notes = [f"D = |relDisc| = {D}, exponent {k}"]
    if ramified and fx.n % 2:
        notes.append(f"exponent 1 + n/2 = {1 + fx.n / 2} is fractional; ceiling {k} used")
    if not ok:
        logger.warning("integrality certificate failed for %s", [r["sigma"] for r in rows if not r["integral"]])
    return CertificateReport(ok, D, k, rows, notes)
