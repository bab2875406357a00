# Acceptance Feature - Module Documentation
#
# Purpose:
# Runs the acceptance criteria of the toolkit end to end and prints a pass/fail matrix.
# Exit status is 0 iff every selected criterion passes.
#
# Criteria (key: what is checked):
#  1 leibniz           sum_s sign(s) Psi1_s(g) = det g and sum_s Psi0_s(g) = 1, exact, n = 2, 3, 4
#  2 relations         relation counts 0, 1, 14 for n = 2, 3, 4 and seeded verification
#  3 birkhoff          random semi-magic squares decompose and re-sum exactly
#  4 entropy           evenly spaced flows: haar = (n+1)n(n-1)/6, newBound = (n+1)n/12, elmv = 1/2
#  5 rank              N_1 = 5, N_2 = 23, N_3 = 59
#  6 galois            quadratic fixtures exact, x^3 - x - 1 numeric, x^3 - 3x - 1 rejected as C_3
#  7 zero-propagation  S_3 fixture propagates, C_3 normalizer element does not
#  8 pgl2-packets      packet sweep d <= 199 with the discriminant identity on 20 delta per d
#  9 decay             n = 2 decay sweep tau = 1..10 stays bounded and non-increasing
# 10 discriminants     relDisc oracles and unimodular invariance of the archimedean discriminant
#
# Params: filter (substring of a key, or a criterion number), seed, scale (fraction of the
# default sample counts, for quick runs).
#
# Results are deterministic for a given seed; timings go to the log only.

from __future__ import annotations

import logging
import math
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

from app.core.action_menu import ActionMenu
from app.core.contracts.feature_interface import BaseFeature
from app.kernels.discriminants import archimedean_discriminant, change_basis, order_discriminant, \
    quadratic_order, random_unimodular
from app.kernels.entropy_bowen import FlowElement, decay_experiment, entropy_bounds, rank_obstruction, spaced_flow
from app.kernels.etale import automorphism_matrix, etale_from_poly, is_squarefree_poly, poly_discriminant
from app.kernels.generators import psi0, psi1, psi_torus
from app.kernels.matrices import Matrix, det, leibniz_det
from app.kernels.perms import (
    Permutation,
    SemiMagicSquare,
    all_permutations,
    birkhoff_decompose,
    is_2transitive,
    perm_matrix,
    resum,
)
from app.kernels.pgl2_packets import packet_sweep
from app.kernels.relations import (
    expected_relation_count,
    is_relation,
    random_rational_matrix,
    relation_kernel_basis,
    verify_random,
)
from app.kernels.scalars import is_squarefree, magnitude
from app.kernels.tori_galois import build_fixture, galois_equivariance_check, zero_propagation

logger = logging.getLogger(__name__)

Outcome = Tuple[bool, str]


@dataclass
class CriterionRow:
    criterion: int
    key: str
    name: str
    ok: bool
    detail: str

    def to_dict(self) -> Dict:
        return {"criterion": self.criterion, "key": self.key, "name": self.name, "ok": self.ok, "detail": self.detail}


@dataclass
class AcceptanceResult:
    tool: str
    ok: bool
    action: str
    seed: int
    rows: List[CriterionRow] = field(default_factory=list)
    errors: Optional[str] = None
    notes: List[str] = field(default_factory=list)

    @property
    def passed(self) -> int:
        return sum(r.ok for r in self.rows)

    def to_dict(self) -> Dict:
        return {
            "tool": self.tool,
            "ok": self.ok,
            "action": self.action,
            "seed": self.seed,
            "passed": self.passed,
            "rows": [r.to_dict() for r in self.rows],
            "errors": self.errors,
            "notes": self.notes,
        }


def _count(base: int, scale: float) -> int:
    return max(1, int(round(base * scale)))


def _random_integer_matrix(n: int, rng: random.Random, bound: int = 5) -> Matrix:
    while True:
        g = Matrix.rational([[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)])
        if det(g) != 0:
            return g


# =============================
# Criteria
# =============================
def leibniz(seed: int, scale: float) -> Outcome:
    rng = random.Random(seed)
    trials = _count(1000, scale)
    checked = 0
    for n in (2, 3, 4):
        perms = all_permutations(n)
        for _ in range(trials):
            g = random_rational_matrix(n, rng)
            d = det(g)
            if sum(s.sign() * psi1(s, g) for s in perms) != d:
                return False, f"signed Psi1 sum differs from det at n={n}"
            if d != leibniz_det(g):
                return False, f"elimination and Leibniz determinants differ at n={n}"
            if d != 0:
                if sum(psi0(s, g) for s in perms) != 1:
                    return False, f"Psi0 values do not sum to 1 at n={n}"
                checked += 1
    return True, f"{3 * trials} matrices, {checked} invertible"


def relations(seed: int, scale: float) -> Outcome:
    counts = []
    for n in (2, 3, 4):
        basis = relation_kernel_basis(n)
        if len(basis) != expected_relation_count(n):
            return False, f"n={n}: {len(basis)} relations, expected {expected_relation_count(n)}"
        if not all(is_relation(r) for r in basis):
            return False, f"n={n}: a basis vector is not in the kernel"
        summary = verify_random(n, _count(200, scale), seed)
        if not summary["ok"]:
            return False, f"n={n}: {len(summary['failures'])} failed verifications"
        counts.append(len(basis))
    return True, f"ranks {counts}"


def birkhoff(seed: int, scale: float) -> Outcome:
    rng = random.Random(seed)
    trials = _count(500, scale)
    for _ in range(trials):
        n = rng.randint(2, 6)
        line_sum = rng.randint(1, 10)
        rows = [[0] * n for _ in range(n)]
        for _ in range(line_sum):
            images = list(range(1, n + 1))
            rng.shuffle(images)
            for i, j in enumerate(perm_matrix(Permutation(tuple(images))).entries):
                rows[i] = [a + b for a, b in zip(rows[i], j)]
        square = SemiMagicSquare.from_rows(rows)
        parts = birkhoff_decompose(square)
        if sum(m for _, m in parts) != line_sum or resum(parts, n) != rows:
            return False, f"decomposition of {rows} does not re-sum"
    return True, f"{trials} squares"


def entropy(seed: int, scale: float) -> Outcome:
    for n in range(2, 9):
        b = entropy_bounds(spaced_flow(n))
        expected = ((n + 1) * n * (n - 1) / 6, (n + 1) * n / 12, 0.5)
        if any(abs(x - y) > 1e-12 for x, y in zip((b.haar, b.new_bound, b.elmv_bound), expected)):
            return False, f"n={n}: got {(b.haar, b.new_bound, b.elmv_bound)}, expected {expected}"
    b3 = entropy_bounds(spaced_flow(3))
    return True, f"n=3: ({b3.haar:g}, {b3.new_bound:g}, {b3.elmv_bound:g})"


def rank(seed: int, scale: float) -> Outcome:
    values = [rank_obstruction(R) for R in (1, 2, 3)]
    return values == [5, 23, 59], f"N = {values}"


def galois(seed: int, scale: float) -> Outcome:
    rng = random.Random(seed)
    for d in (2, 5, 10):
        fx = build_fixture([-d, 0, 1])
        for _ in range(_count(100, scale)):
            g = _random_integer_matrix(2, rng)
            for sigma in all_permutations(2):
                for tau in fx.galois:
                    if not galois_equivariance_check(fx, g, sigma, tau):
                        return False, f"x^2 - {d}: equivariance fails at ({sigma}, {tau})"
    cubic = build_fixture([-1, -1, 0, 1])
    if len(cubic.galois) != 6 or not cubic.is_two_transitive():
        return False, "x^3 - x - 1 is not detected as S_3"
    pairs = 0
    for _ in range(_count(50, scale)):
        g = _random_integer_matrix(3, rng)
        for sigma in all_permutations(3):
            for tau in cubic.galois:
                if not galois_equivariance_check(cubic, g, sigma, tau, 1e-9):
                    return False, f"x^3 - x - 1: equivariance fails at ({sigma}, {tau})"
                pairs += 1
    cyclic = build_fixture([-1, -3, 0, 1])
    if len(cyclic.galois) != 3 or is_2transitive(set(cyclic.galois), 3):
        return False, "x^3 - 3x - 1 is not rejected as C_3"
    return True, f"{pairs} cubic (sigma, tau) checks, C_3 control rejected"


def zero_propagation_check(seed: int, scale: float) -> Outcome:
    fx = build_fixture([-1, -1, 0, 1])
    M = fx.algebra.generator
    g = M + Matrix.identity(3) * 2
    report = zero_propagation(fx, g, Permutation.parse("(1 2 3)", 3))
    if not report.ok:
        return False, "S_3 fixture: zero does not propagate"

    cyclic = build_fixture([-1, -3, 0, 1])
    w = automorphism_matrix(cyclic.algebra, [2, 0, -1])
    for sigma0 in (Permutation.parse("(1 2 3)", 3), Permutation.parse("(1 3 2)", 3)):
        if magnitude(psi_torus(sigma0, w, cyclic.idems, check=False)) > 1e-9:
            continue
        negative = zero_propagation(cyclic, w, sigma0, require_two_transitive=False)
        if negative.ok:
            return False, "C_3 control propagates"
        return True, f"S_3 propagates; C_3 control stops at sigma0 = {sigma0}"
    return False, "C_3 control has no vanishing 3-cycle"


def pgl2_packets(seed: int, scale: float) -> Outcome:
    reports = packet_sweep(199, identity_trials=_count(20, scale), seed=seed)
    pairs = sum(len(r.rows) for r in reports)
    bad = [f"d={r.d}" for r in reports if not r.ok]
    if bad:
        return False, f"violations at {', '.join(bad[:5])}"
    return True, f"{len(reports)} values of d, {pairs} class pairs, 0 violations"


def decay(seed: int, scale: float) -> Outcome:
    report = decay_experiment(FlowElement.from_weights([1.0, -1.0]), range(1, 11), radius=0.1,
                              samples=_count(1000, scale), seed=seed)
    return report.ok, f"constant {report.constant:.4g}"


def discriminants(seed: int, scale: float) -> Outcome:
    checked = 0
    d = 1
    while checked < 50:
        d += 1
        if not is_squarefree(d):
            continue
        if quadratic_order(d).rel_disc != 4 * d:
            return False, f"relDisc(Z[sqrt {d}]) != {4 * d}"
        checked += 1

    rng = random.Random(seed)
    cubics = 0
    while cubics < _count(20, scale):
        f = [rng.randint(-9, 9), rng.randint(-9, 9), rng.randint(-9, 9), 1]
        if not is_squarefree_poly(f):
            continue
        algebra = etale_from_poly(f)
        if order_discriminant(algebra.order) != poly_discriminant(f):
            return False, f"relDisc of the power basis of {f} differs from disc(f)"
        basis = list(algebra.order)
        base = archimedean_discriminant(basis)
        for _ in range(3):
            moved = change_basis(basis, random_unimodular(3, rng))
            if abs(archimedean_discriminant(moved) - base) > 1e-9 * max(1.0, abs(base)):
                return False, f"archimedean discriminant of {f} moved under a unimodular change"
        cubics += 1
    return True, f"50 quadratic orders, {cubics} cubics"


CRITERIA: List[Tuple[int, str, str, Callable[[int, float], Outcome]]] = [
    (1, "leibniz", "Leibniz identity", leibniz),
    (2, "relations", "Relation lattice ranks", relations),
    (3, "birkhoff", "Birkhoff reconstruction", birkhoff),
    (4, "entropy", "Entropy numbers", entropy),
    (5, "rank", "Rank obstruction", rank),
    (6, "galois", "Galois equivariance", galois),
    (7, "zero-propagation", "Zero propagation", zero_propagation_check),
    (8, "pgl2-packets", "PGL2 packet experiment", pgl2_packets),
    (9, "decay", "Decay bound", decay),
    (10, "discriminants", "Discriminant oracles", discriminants),
]


def _selected(filter_text: Optional[str]):
    if not filter_text:
        return CRITERIA
    if filter_text.isdigit():
        return [c for c in CRITERIA if int(filter_text) == c[0]]
    return [c for c in CRITERIA if filter_text in c[1]]


def acceptance_suite(filter_text: Optional[str] = None, seed: int = 0, scale: float = 1.0) -> AcceptanceResult:
    result = AcceptanceResult("acceptance", True, "run", seed)
    for number, key, name, check in _selected(filter_text):
        start = time.time()
        try:
            ok, detail = check(seed, scale)
        except Exception as exc:
            logger.exception("criterion %d (%s) raised", number, key)
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        logger.info("criterion %d %s: %s (%.2fs)", number, key, "pass" if ok else "FAIL", time.time() - start)
        result.rows.append(CriterionRow(number, key, name, ok, detail))
    failed = [f"{r.criterion} {r.key}" for r in result.rows if not r.ok]
    result.ok = not failed and bool(result.rows)
    if failed:
        result.errors = f"failed criteria: {', '.join(failed)}"
    elif not result.rows:
        result.errors = f"filter {filter_text!r} selects no criterion"
    return result


class Feature(BaseFeature):
    def __init__(self):
        self.menu = ActionMenu("Acceptance suite")
        self.menu.add_action("run", "Run the selected criteria", self.option_run)

    def run_default(self, params: dict) -> AcceptanceResult:
        return self.option_run(params)

    def option_run(self, params: dict) -> AcceptanceResult:
        return acceptance_suite(params.get("filter"), int(params.get("seed", 0)), float(params.get("scale") or 1.0))

    def self_test(self) -> bool:
        return rank(0, 1.0)[0] and math.isclose(entropy_bounds(spaced_flow(2)).haar, 1.0)

    def shutdown(self) -> None:
        pass


def register():
    feature = Feature()
    return {
        "instance": feature,
        "self_test": feature.self_test,
        "shutdown": feature.shutdown,
        "action_menu": feature.menu,
    }
