"""
Relations between the monomial generators psi1.

A relation is an integer vector f on S_n with sum_s f(s) P^s = 0. The lattice of such
vectors is the integer kernel of the n^2 x n! matrix whose s-column is the flattened
permutation matrix; it is computed by unimodular row reduction and returned in Hermite
normal form.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Tuple

import app_constants
from app.core.errors import DegreeTooLarge, InputError
from app.kernels.generators import psi1
from app.kernels.matrices import Matrix
from app.kernels.perms import Permutation, all_permutations

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RelationVector:
    n: int
    f: Tuple[Tuple[Permutation, int], ...]

    @classmethod
    def from_dict(cls, n: int, f: Dict[Permutation, int]) -> "RelationVector":
        return cls(n, tuple(sorted((s, c) for s, c in f.items() if c != 0)))

    def as_dict(self) -> Dict[Permutation, int]:
        return dict(self.f)

    def __neg__(self) -> "RelationVector":
        return RelationVector(self.n, tuple((s, -c) for s, c in self.f))

    def to_dict(self) -> Dict[str, int]:
        return {str(s): c for s, c in self.f}


def exgcd(a: int, b: int) -> Tuple[int, int, int]:
    """Returns (g, x, y) with x*a + y*b = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    return old_r, old_x, old_y


def hermite_rows(rows: List[List[int]], transform: bool = False) -> Tuple[List[List[int]], List[List[int]], int]:
    """
    Row-style Hermite normal form by unimodular row operations.

    Returns (H, U, rank) with U * rows = H; pivots are positive and entries above each
    pivot are reduced into [0, pivot). U is empty unless ``transform`` is set.
    """
    A = [list(r) for r in rows]
    m = len(A)
    cols = len(A[0]) if A else 0
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)] if transform else []
    r = 0
    for c in range(cols):
        if r == m:
            break
        for i in range(r + 1, m):
            if A[i][c] == 0:
                continue
            a, b = A[r][c], A[i][c]
            g, x, y = exgcd(a, b)
            ag, bg = a // g, b // g
            for mat in ([A, U] if transform else [A]):
                top, low = mat[r], mat[i]
                mat[r] = [x * p + y * q for p, q in zip(top, low)]
                mat[i] = [-bg * p + ag * q for p, q in zip(top, low)]
        if A[r][c] == 0:
            continue
        if A[r][c] < 0:
            A[r] = [-v for v in A[r]]
            if transform:
                U[r] = [-v for v in U[r]]
        pivot = A[r][c]
        for i in range(r):
            q = A[i][c] // pivot
            if q:
                A[i] = [p - q * t for p, t in zip(A[i], A[r])]
                if transform:
                    U[i] = [p - q * t for p, t in zip(U[i], U[r])]
        r += 1
    return A, U, r


def permutation_column_matrix(n: int) -> Tuple[List[Permutation], List[List[int]]]:
    """Rows indexed by s in S_n, each the flattened P^s (the transpose of the n^2 x n! matrix)."""
    perms = all_permutations(n)
    rows = []
    for s in perms:
        rows.append([1 if j == s(i) else 0 for i in range(1, n + 1) for j in range(1, n + 1)])
    return perms, rows


def expected_relation_count(n: int) -> int:
    return math.factorial(n) - (n - 1) ** 2 - 1


def is_relation(r: RelationVector) -> bool:
    n = r.n
    total = [0] * (n * n)
    for s, c in r.f:
        for i in range(1, n + 1):
            total[(i - 1) * n + s(i) - 1] += c
    return not any(total)


def relation_kernel_basis(n: int) -> List[RelationVector]:
    if n < 2:
        raise InputError(f"relation lattice needs n >= 2, got {n}")
    if n > app_constants.MAX_RELATION_DEGREE:
        raise DegreeTooLarge(f"n = {n} exceeds {app_constants.MAX_RELATION_DEGREE}")
    perms, rows = permutation_column_matrix(n)
    _, U, rank = hermite_rows(rows, transform=True)
    kernel = U[rank:]
    logger.debug("n=%d: rank %d, kernel dimension %d", n, rank, len(kernel))
    if kernel:
        kernel, _, _ = hermite_rows(kernel)
        kernel = [row for row in kernel if any(row)]
    return [RelationVector.from_dict(n, dict(zip(perms, row))) for row in kernel]


def relation_monomials(r: RelationVector) -> Tuple[Dict[Permutation, int], Dict[Permutation, int]]:
    pos = {s: c for s, c in r.f if c > 0}
    neg = {s: -c for s, c in r.f if c < 0}
    return pos, neg


def _monomial(exponents: Dict[Permutation, int], g: Matrix) -> Fraction:
    value = Fraction(1)
    for s, e in exponents.items():
        value *= psi1(s, g) ** e
    return value


def verify_relation(r: RelationVector, g: Matrix) -> bool:
    pos, neg = relation_monomials(r)
    return _monomial(pos, g) == _monomial(neg, g)


def random_rational_matrix(n: int, rng: random.Random, bound: int = 9, max_den: int = 5) -> Matrix:
    return Matrix([[Fraction(rng.randint(-bound, bound), rng.randint(1, max_den)) for _ in range(n)]
                   for _ in range(n)])


def verify_random(n: int, trials: int, seed: int = app_constants.DEFAULT_SEED) -> Dict:
    """Checks every basis relation on ``trials`` seeded random rational matrices."""
    basis = relation_kernel_basis(n)
    rng = random.Random(seed)
    failures = []
    for t in range(trials):
        g = random_rational_matrix(n, rng)
        for k, r in enumerate(basis):
            if not verify_relation(r, g):
                failures.append({"trial": t, "relation": k})
    return {
        "n": n,
        "relations": len(basis),
        "expected": expected_relation_count(n),
        "trials": trials,
        "seed": seed,
        "failures": failures,
        "ok": not failures and len(basis) == expected_relation_count(n),
    }
