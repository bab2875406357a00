"""
Canonical generators of the double torus quotient.

- psi1(s, g)  = prod_i g[i, s(i)]
- psi0(s, g)  = sign(s) * prod_i g[s(i), i] / det g
- psi_torus   = det(sum_i e_{s(i)} g e_i) / det g for a complete set of idempotents e_i

With the diagonal units as idempotents psi_torus reduces to psi0.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from app.core.errors import BadIdempotents, NumericallyIndeterminate, PreconditionsFailed, SingularMatrix
from app.kernels.matrices import Matrix, det
from app.kernels.perms import Permutation, all_permutations
from app.kernels.scalars import NumComplex, Scalar, backend_of, is_zero, magnitude, to_string

logger = logging.getLogger(__name__)


@dataclass
class PsiVector:
    n: int
    values: Dict[Permutation, Scalar]
    det_value: Scalar
    mode: str = "pgl"
    backend: str = "rational"

    def total(self) -> Scalar:
        result = Fraction(0)
        for v in self.values.values():
            result = v + result
        return result

    def nonzero(self) -> List[Permutation]:
        return [s for s, v in sorted(self.values.items()) if not is_zero(v)]


def diagonal_units(n: int) -> List[Matrix]:
    return [Matrix.unit(n, i, i) for i in range(n)]


def psi1(sigma: Permutation, g: Matrix) -> Scalar:
    value = g[0, sigma(1) - 1]
    for i in range(2, sigma.n + 1):
        value = value * g[i - 1, sigma(i) - 1]
    return value


def _checked_det(g: Matrix) -> Scalar:
    d = det(g)
    if isinstance(d, NumComplex):
        if d.is_zero():
            raise NumericallyIndeterminate(f"|det g| = {abs(d):.3e} is within its error bound {d.eps:.3e}")
    elif is_zero(d):
        raise SingularMatrix("det g = 0")
    return d


def psi0(sigma: Permutation, g: Matrix) -> Scalar:
    d = _checked_det(g)
    value = g[sigma(1) - 1, 0]
    for i in range(2, sigma.n + 1):
        value = value * g[sigma(i) - 1, i - 1]
    return sigma.sign() * value / d


def check_idempotents(idems: Sequence[Matrix]) -> None:
    n = len(idems)
    if n == 0:
        raise BadIdempotents("empty idempotent list")
    for i, e in enumerate(idems):
        if not e * e == e:
            raise BadIdempotents(f"e_{i + 1}^2 != e_{i + 1}")
        for j in range(i + 1, n):
            if not (e * idems[j]).is_zero():
                raise BadIdempotents(f"e_{i + 1} e_{j + 1} != 0")
    total = idems[0]
    for e in idems[1:]:
        total = total + e
    if not total == Matrix.identity(idems[0].n):
        raise BadIdempotents("idempotents do not sum to the identity")


def _twisted_sum(sigma: Permutation, g: Matrix, left: Sequence[Matrix], right: Sequence[Matrix]) -> Matrix:
    total = left[sigma(1) - 1] * g * right[0]
    for i in range(2, sigma.n + 1):
        total = total + left[sigma(i) - 1] * g * right[i - 1]
    return total


def psi_torus(sigma: Permutation, g: Matrix, idems: Sequence[Matrix], check: bool = True,
              mode: str = "pgl") -> Scalar:
    if check:
        check_idempotents(idems)
    numerator = det(_twisted_sum(sigma, g, idems, idems))
    if mode == "sl":
        return numerator
    return numerator / _checked_det(g)


def psi_torus_dual(sigma: Permutation, g: Matrix, basis: Sequence[Matrix], dual: Sequence[Matrix],
                   idems: Sequence[Matrix]) -> Scalar:
    """
    Dual-basis form det(sum_i s.b_i^ g b_i) / det g. The action of s on b_i^ goes through
    its idempotent expansion b_i^ = sum_k Trd(b_i^ e_k) e_k, sending e_k to e_{s(k)}.
    """
    check_idempotents(idems)
    moved = []
    for b in dual:
        coeffs = [(b * e).trace() for e in idems]
        acted = idems[sigma(1) - 1] * coeffs[0]
        for k in range(2, sigma.n + 1):
            acted = acted + idems[sigma(k) - 1] * coeffs[k - 1]
        moved.append(acted)
    total = moved[0] * g * basis[0]
    for m, b in zip(moved[1:], basis[1:]):
        total = total + m * g * b
    return det(total) / _checked_det(g)


def psi_vector(g: Matrix, idems: Optional[Sequence[Matrix]] = None, mode: str = "pgl") -> PsiVector:
    n = g.n
    d = det(g)
    if mode == "sl" and not is_zero(d - 1):
        raise PreconditionsFailed(f"SL mode needs det g = 1, got {d}")
    if idems is None:
        values = {s: (psi0(s, g) if mode == "pgl" else psi0(s, g) * d) for s in all_permutations(n)}
        backend = backend_of(next(iter(values.values())))
    else:
        check_idempotents(idems)
        values = {s: psi_torus(s, g, idems, check=False, mode=mode) for s in all_permutations(n)}
        backend = backend_of(idems[0][0, 0])
    return PsiVector(n=n, values=values, det_value=d, mode=mode, backend=backend)


def torus_element(idems: Sequence[Matrix], coeffs: Sequence[Scalar]) -> Matrix:
    total = idems[0] * coeffs[0]
    for e, c in zip(idems[1:], coeffs[1:]):
        total = total + e * c
    return total


# =============================
# Identity fiber
# =============================
@dataclass
class FiberReport:
    fiber_trivial: bool
    in_torus: bool
    verdict: str
    values: Dict[str, str] = field(default_factory=dict)
    max_residual: float = 0.0

    def to_dict(self) -> Dict:
        return {
            "fiber_trivial": self.fiber_trivial,
            "in_torus": self.in_torus,
            "verdict": self.verdict,
            "values": self.values,
            "max_residual": self.max_residual,
        }


def identity_fiber_test(g: Matrix, idems: Optional[Sequence[Matrix]] = None) -> FiberReport:
    """Psi_s(g) = 0 for s != id and Psi_id(g) = 1, plus a direct commutation check against the idempotents."""
    idems = list(idems) if idems is not None else diagonal_units(g.n)
    vec = psi_vector(g, idems)
    trivial = True
    residual = 0.0
    for s, v in vec.values.items():
        target = 1 if s.is_identity() else 0
        diff = v - target
        residual = max(residual, magnitude(diff))
        if not is_zero(diff):
            trivial = False
    in_torus = all(g.commutes_with(e) for e in idems)
    if trivial and in_torus:
        verdict = "in torus"
    elif trivial:
        verdict = "fiber-trivial but not torus"
    elif in_torus:
        verdict = "torus but fiber-nontrivial"
    else:
        verdict = "outside identity fiber"
    logger.debug("identity fiber: %s (residual %.3e)", verdict, residual)
    return FiberReport(
        fiber_trivial=trivial,
        in_torus=in_torus,
        verdict=verdict,
        values={str(s): to_string(v) for s, v in sorted(vec.values.items())},
        max_residual=residual,
    )
