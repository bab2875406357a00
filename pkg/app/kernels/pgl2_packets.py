"""
Binary quadratic forms, the tori they define in PGL_2 and the packet experiment on
ideal classes of real quadratic orders.

The action of GL_2 on forms is g.q(x, y) = q((x, y) g) / det g. A form q = (a, b, c)
corresponds to the trace-zero matrix [[b, -2a], [2c, -b]] and the action becomes
conjugation by g.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Dict, List, Optional, Tuple

import app_constants
from app.core.errors import DegenerateForm, DNotSquarefree, SingularMatrix
from app.core.workers import parallel_map
from app.kernels.discriminants import is_quadratic_integer, quadratic_order
from app.kernels.entropy_bowen import (
    BowenSpec,
    FlowElement,
    ball_membership,
    bowen_membership,
    decay_experiment,
    separation_threshold,
)
from app.kernels.etale import EtaleAlgebra, etale_from_matrix
from app.kernels.generators import psi_torus
from app.kernels.matrices import Matrix, adjugate2, content_normalize
from app.kernels.perms import Permutation
from app.kernels.scalars import QuadExt, Scalar, as_fraction, is_squarefree, to_string
from app.kernels.tori_galois import TorusFixture, build_fixture, fixture_from_algebra

logger = logging.getLogger(__name__)

IDENTITY_2 = Permutation((1, 2))
FLIP_2 = Permutation((2, 1))


@dataclass(frozen=True)
class BinaryQuadraticForm:
    a: Fraction
    b: Fraction
    c: Fraction

    @classmethod
    def of(cls, a, b, c) -> "BinaryQuadraticForm":
        return cls(as_fraction(a), as_fraction(b), as_fraction(c))

    def disc(self) -> Fraction:
        return self.b * self.b - 4 * self.a * self.c

    def __call__(self, x, y):
        return self.a * x * x + self.b * x * y + self.c * y * y

    def __neg__(self) -> "BinaryQuadraticForm":
        return BinaryQuadraticForm(-self.a, -self.b, -self.c)

    def scaled(self, k) -> "BinaryQuadraticForm":
        k = as_fraction(k)
        return BinaryQuadraticForm(self.a * k, self.b * k, self.c * k)

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for x in (self.a, self.b, self.c))

    def is_primitive(self) -> bool:
        return self.is_integral() and math.gcd(int(self.a), int(self.b), int(self.c)) == 1

    def key(self) -> Tuple[int, bool, int]:
        return abs(self.a), self.a < 0, self.b

    def as_tuple(self) -> Tuple[int, int, int]:
        return int(self.a), int(self.b), int(self.c)

    def __str__(self):
        return f"({self.a}, {self.b}, {self.c})"


def disc(q: BinaryQuadraticForm) -> Fraction:
    return q.disc()


def disc_inner_product(q: BinaryQuadraticForm, p: BinaryQuadraticForm) -> Fraction:
    return q.b * p.b - 2 * q.a * p.c - 2 * p.a * q.c


def form_to_matrix(q: BinaryQuadraticForm) -> Matrix:
    return Matrix([[q.b, -2 * q.a], [2 * q.c, -q.b]])


def matrix_to_form(M: Matrix) -> BinaryQuadraticForm:
    if M[0, 0] + M[1, 1] != 0:
        raise DegenerateForm("only trace-zero matrices correspond to forms")
    return BinaryQuadraticForm.of(-Fraction(M[0, 1]) / 2, M[0, 0], Fraction(M[1, 0]) / 2)


def act(g: Matrix, q: BinaryQuadraticForm) -> BinaryQuadraticForm:
    """q((x, y) g) / det g"""
    (g11, g12), (g21, g22) = g.rows
    d = g11 * g22 - g12 * g21
    if d == 0:
        raise SingularMatrix("forms are acted on by invertible matrices only")
    a = q.a * g11 * g11 + q.b * g11 * g12 + q.c * g12 * g12
    c = q.a * g21 * g21 + q.b * g21 * g22 + q.c * g22 * g22
    b = 2 * q.a * g11 * g21 + q.b * (g11 * g22 + g21 * g12) + 2 * q.c * g12 * g22
    return BinaryQuadraticForm.of(Fraction(a) / d, Fraction(b) / d, Fraction(c) / d)


def primitive_form(q: BinaryQuadraticForm) -> BinaryQuadraticForm:
    """Scale to coprime integer coefficients."""
    den = reduce(math.lcm, (x.denominator for x in (q.a, q.b, q.c)), 1)
    ints = [int(x * den) for x in (q.a, q.b, q.c)]
    g = reduce(math.gcd, ints, 0)
    if g == 0:
        raise DegenerateForm("zero form")
    return BinaryQuadraticForm.of(*(x // g for x in ints))


def torus_form(algebra: EtaleAlgebra) -> BinaryQuadraticForm:
    """The primitive integral form whose matrix spans the trace-zero part of a quadratic torus."""
    if algebra.n != 2:
        raise DegenerateForm("torus forms exist for quadratic algebras only")
    M = algebra.generator
    shift = M.trace() / 2
    trace_zero = M - Matrix.identity(2) * shift
    return primitive_form(matrix_to_form(trace_zero))


def torus_fixture_of_form(q: BinaryQuadraticForm) -> TorusFixture:
    if q.disc() == 0:
        raise DegenerateForm(f"form {q} has zero discriminant")
    return fixture_from_algebra(etale_from_matrix(form_to_matrix(q)))


# =============================
# The discriminant identity
# =============================
@dataclass
class DiscIdentityResult:
    ok: bool
    lhs: Fraction
    psi_plus: Scalar
    psi_minus: Scalar
    scale: Fraction

    def to_dict(self) -> Dict:
        return {
            "ok": self.ok,
            "lhs": to_string(self.lhs),
            "psiPlus": to_string(self.psi_plus),
            "psiMinus": to_string(self.psi_minus),
            "scale": to_string(self.scale),
        }


def psi_disc_identity_check(qT: BinaryQuadraticForm, delta: Matrix,
                            fixture: Optional[TorusFixture] = None) -> DiscIdentityResult:
    D = qT.disc()
    if D == 0:
        raise DegenerateForm(f"form {qT} has zero discriminant")
    fx = fixture or torus_fixture_of_form(qT)
    scale = 1 / D
    lhs = disc_inner_product(qT, act(delta, qT)) * scale
    plus = psi_torus(IDENTITY_2, delta, fx.idems, check=False)
    minus = psi_torus(FLIP_2, delta, fx.idems, check=False)
    return DiscIdentityResult(ok=(plus - minus) == lhs, lhs=lhs, psi_plus=plus, psi_minus=minus, scale=scale)


def psi_disc_identity(qT: BinaryQuadraticForm, delta: Matrix) -> bool:
    """<qT, delta.qT> / disc(qT) == Psi_{+1}(delta) - Psi_{-1}(delta), exactly."""
    return psi_disc_identity_check(qT, delta).ok


def random_invertible(rng: random.Random, bound: int = 9) -> Matrix:
    while True:
        g = Matrix([[Fraction(rng.randint(-bound, bound)) for _ in range(2)] for _ in range(2)])
        if g.det() != 0:
            return g


# =============================
# Reduced indefinite forms
# =============================
def _check_discriminant(D: int) -> int:
    if D <= 0 or math.isqrt(D) ** 2 == D:
        raise DegenerateForm(f"discriminant {D} must be positive and not a square")
    return math.isqrt(D)


def is_reduced(q: BinaryQuadraticForm, D: int) -> bool:
    r = math.isqrt(D)
    a, b = abs(int(q.a)), int(q.b)
    return 0 < b <= r and 2 * a + b >= r + 1 and 2 * a - b <= r


def reduced_forms(D: int) -> List[BinaryQuadraticForm]:
    r = _check_discriminant(D)
    forms = []
    for b in range(1, r + 1):
        if (b - D) % 2:
            continue
        num = b * b - D
        for abs_a in range(1, (r + b) // 2 + 1):
            if 2 * abs_a + b < r + 1 or 2 * abs_a - b > r:
                continue
            for a in (abs_a, -abs_a):
                if num % (4 * a):
                    continue
                c = num // (4 * a)
                if math.gcd(a, b, c) == 1:
                    forms.append(BinaryQuadraticForm.of(a, b, c))
    return sorted(forms, key=BinaryQuadraticForm.key)


def rho(q: BinaryQuadraticForm, D: Optional[int] = None) -> BinaryQuadraticForm:
    D = int(q.disc()) if D is None else D
    r = _check_discriminant(D)
    b, c = int(q.b), int(q.c)
    m = 2 * abs(c)
    b_new = r - ((r + b) % m)
    return BinaryQuadraticForm.of(c, b_new, (b_new * b_new - D) // (4 * c))


def form_cycles(D: int) -> List[List[BinaryQuadraticForm]]:
    """rho-cycles of reduced forms, each starting at its smallest form."""
    remaining = reduced_forms(D)
    seen = set()
    cycles = []
    for start in remaining:
        if start in seen:
            continue
        cycle = [start]
        seen.add(start)
        current = rho(start, D)
        while current != start:
            if current in seen or len(cycle) > len(remaining):
                raise DegenerateForm(f"rho does not cycle through {start}")
            cycle.append(current)
            seen.add(current)
            current = rho(current, D)
        cycles.append(cycle)
    return cycles


def wide_classes(D: int) -> List[List[BinaryQuadraticForm]]:
    """Narrow cycles merged by pairing (a, b, c) with (-a, b, -c)."""
    cycles = form_cycles(D)
    owner = {q: k for k, cycle in enumerate(cycles) for q in cycle}
    parent = list(range(len(cycles)))

    def find(k):
        while parent[k] != k:
            parent[k] = parent[parent[k]]
            k = parent[k]
        return k

    for q, k in owner.items():
        partner = BinaryQuadraticForm(-q.a, q.b, -q.c)
        if partner in owner:
            i, j = find(k), find(owner[partner])
            if i != j:
                parent[max(i, j)] = min(i, j)
    groups: Dict[int, List[BinaryQuadraticForm]] = {}
    for k, cycle in enumerate(cycles):
        groups.setdefault(find(k), []).extend(cycle)
    classes = [sorted(g, key=BinaryQuadraticForm.key) for g in groups.values()]
    return sorted(classes, key=lambda cls: cls[0].key())


# =============================
# Ideal classes
# =============================
@dataclass(frozen=True)
class IdealClassRep:
    d: int
    form: BinaryQuadraticForm
    ideal_basis: Tuple[QuadExt, QuadExt]
    basis_matrix: Matrix
    lambda_matrix: Matrix
    maximal: bool = False

    def order_generator(self) -> Matrix:
        if self.maximal:
            return Matrix.rational([[0, (self.d - 1) // 4], [1, 1]])
        return Matrix.rational([[0, self.d], [1, 0]])

    def is_order_stable(self) -> bool:
        """The ideal lattice is stable under the order: basis^-1 * M * basis is integral."""
        conj = self.basis_matrix.inverse() * self.order_generator() * self.basis_matrix
        return conj.is_integral()

    def to_dict(self) -> Dict:
        return {
            "d": self.d,
            "form": list(self.form.as_tuple()),
            "idealBasis": [to_string(x) for x in self.ideal_basis],
            "lambdaMatrix": [[to_string(x) for x in row] for row in self.lambda_matrix.rows],
        }


def ideal_class_reps(d: int, maximal: bool = False) -> List[IdealClassRep]:
    if d <= 1 or not is_squarefree(d):
        raise DNotSquarefree(f"d = {d} must be a squarefree integer greater than 1")
    use_maximal = maximal and d % 4 == 1
    if d % 4 == 1 and not use_maximal:
        logger.warning("d = %d is 1 mod 4; Z[sqrt d] is not the maximal order", d)
    D = d if use_maximal else 4 * d
    reps = []
    for cls in wide_classes(D):
        q = cls[0]
        a, b = abs(int(q.a)), int(q.b)
        if use_maximal:
            shift = Fraction(-b - 1, 2)
            ideal = (QuadExt(a, 0, d), QuadExt(Fraction(-b, 2), Fraction(1, 2), d))
        else:
            shift = Fraction(-b, 2)
            ideal = (QuadExt(a, 0, d), QuadExt(Fraction(-b, 2), 1, d))
        basis = Matrix.rational([[a, shift], [0, 1]])
        reps.append(IdealClassRep(d, q, ideal, basis, adjugate2(basis), use_maximal))
    return reps


# =============================
# Packet experiment
# =============================
@dataclass
class PacketRow:
    d: int
    i: int
    j: int
    psi_plus: Fraction
    psi_minus: Fraction
    witness: Fraction
    in_torus: bool
    sum_ok: bool
    integral: bool
    floor_ok: bool
    tau_found: int
    tau_star: float
    in_bowen_ball: bool = False

    @property
    def separated(self) -> bool:
        """Outside the torus, lambda must leave the Bowen ball at tau_found."""
        return self.in_torus or not self.in_bowen_ball

    @property
    def ok(self) -> bool:
        return self.sum_ok and self.integral and self.floor_ok

    def to_dict(self) -> Dict:
        return {
            "d": self.d,
            "classIdx_i": self.i,
            "classIdx_j": self.j,
            "psiPlus": to_string(self.psi_plus),
            "psiMinus": to_string(self.psi_minus),
            "integralityWitness": to_string(self.witness),
            "inTorus": self.in_torus,
            "sumOk": self.sum_ok,
            "integral": self.integral,
            "floorOk": self.floor_ok,
            "tauFound": self.tau_found,
            "tauStar": self.tau_star,
            "inBowenBall": self.in_bowen_ball,
            "separated": self.separated,
            "ok": self.ok,
        }


@dataclass
class PacketReport:
    d: int
    D: int
    class_number: int
    radius: float = 0.1
    decay_constant: float = 1.0
    rows: List[PacketRow] = field(default_factory=list)
    identity_failures: int = 0
    identity_trials: int = 0

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows) and self.identity_failures == 0

    def to_dict(self) -> Dict:
        return {
            "d": self.d,
            "D": self.D,
            "classNumber": self.class_number,
            "radius": self.radius,
            "decayConstant": self.decay_constant,
            "ok": self.ok,
            "identityTrials": self.identity_trials,
            "identityFailures": self.identity_failures,
            "rows": [r.to_dict() for r in self.rows],
        }


def smallest_separating_tau(D: int, C: float = 1.0) -> int:
    """Smallest integer tau >= 0 with C * exp(-4 tau) < 1/D."""
    if not math.isfinite(C) or C < 0:
        raise ValueError(f"decay constant must be finite and non-negative, got {C}")
    tau = 0
    while C * math.exp(-4 * tau) >= 1 / D:
        tau += 1
    return tau


def decay_constant(a: FlowElement, radius: float, seed: int = app_constants.DEFAULT_SEED) -> float:
    """Empirical sup of |Psi_flip| / decay bound over Bowen balls of the given radius."""
    report = decay_experiment(a, range(app_constants.DECAY_CONSTANT_TAUS + 1), radius=radius,
                              samples=app_constants.DECAY_CONSTANT_SAMPLES, seed=seed)
    return report.constant


def _in_bowen_ball(lam: Matrix, a: FlowElement, radius: float, tau: int) -> bool:
    g = [[float(x) for x in row] for row in lam.rows]
    if tau == 0:
        return ball_membership(g, radius)
    return bowen_membership(g, a, BowenSpec.symmetric(radius, tau))


def packet_experiment(d: int, a: Optional[FlowElement] = None, radius: float = 0.1, kappa: float = 0.0,
                      maximal: bool = False, C: Optional[float] = None, identity_trials: int = 0,
                      seed: int = app_constants.DEFAULT_SEED) -> PacketReport:
    """
    Class pair table for Z[sqrt d] (or the maximal order). The decay constant C comes from
    a decay experiment at ``radius`` unless it is given.
    """
    a = a or FlowElement.from_weights([1.0, -1.0])
    reps = ideal_class_reps(d, maximal)
    use_maximal = reps[0].maximal
    order = quadratic_order(d, maximal=use_maximal)
    D = abs(order.rel_disc)
    fx = build_fixture(_min_poly(reps[0]))
    generator = reps[0].order_generator()
    tau_star = separation_threshold(D, 1, a, kappa)
    if C is None:
        C = decay_constant(a, radius, seed)
    tau_found = smallest_separating_tau(D, C)
    logger.debug("d=%d D=%d C=%.4g tau_found=%d", d, D, C, tau_found)

    report = PacketReport(d=d, D=D, class_number=len(reps), radius=radius, decay_constant=C)
    for i, rep_i in enumerate(reps):
        for j, rep_j in enumerate(reps):
            lam = content_normalize(rep_i.basis_matrix * rep_j.lambda_matrix)
            plus = psi_torus(IDENTITY_2, lam, fx.idems, check=False)
            minus = psi_torus(FLIP_2, lam, fx.idems, check=False)
            in_torus = lam.commutes_with(generator)
            witness = minus * D
            integral = is_quadratic_integer(witness) if isinstance(witness, QuadExt) else Fraction(witness).denominator == 1
            floor_ok = in_torus or (minus != 0 and abs(_rational(minus)) >= Fraction(1, D))
            report.rows.append(PacketRow(
                d=d, i=i, j=j,
                psi_plus=_rational(plus), psi_minus=_rational(minus), witness=_rational(witness),
                in_torus=in_torus, sum_ok=(plus + minus) == 1, integral=integral, floor_ok=floor_ok,
                tau_found=tau_found, tau_star=tau_star, in_bowen_ball=_in_bowen_ball(lam, a, radius, tau_found),
            ))

    if identity_trials:
        rng = random.Random(seed * 1000003 + d)
        qT = torus_form(fx.algebra)
        id_fx = torus_fixture_of_form(qT)
        report.identity_trials = identity_trials
        for _ in range(identity_trials):
            if not psi_disc_identity_check(qT, random_invertible(rng), id_fx).ok:
                report.identity_failures += 1
    return report


def _min_poly(rep: IdealClassRep) -> List[Fraction]:
    if rep.maximal:
        return [Fraction(-(rep.d - 1) // 4), Fraction(-1), Fraction(1)]
    return [Fraction(-rep.d), Fraction(0), Fraction(1)]


def _rational(value: Scalar) -> Fraction:
    if isinstance(value, QuadExt):
        if value.b != 0:
            raise DegenerateForm(f"{value} is not rational")
        return value.a
    return Fraction(value)


def packet_sweep(d_max: int, a: Optional[FlowElement] = None, radius: float = 0.1, kappa: float = 0.0,
                 maximal: bool = False, C: Optional[float] = None, identity_trials: int = 0,
                 seed: int = app_constants.DEFAULT_SEED) -> List[PacketReport]:
    """All squarefree 2 <= d <= d_max with d = 2, 3 mod 4 (and d = 1 mod 4 on the maximal order if asked)."""
    a = a or FlowElement.from_weights([1.0, -1.0])
    if C is None:
        C = decay_constant(a, radius, seed)
    values = [d for d in range(2, d_max + 1)
              if is_squarefree(d) and (d % 4 in (2, 3) or (maximal and d % 4 == 1))]
    jobs = [(d, a, radius, kappa, maximal, C, identity_trials, seed) for d in values]
    return parallel_map(_packet_job, jobs)


def _packet_job(job) -> PacketReport:
    d, a, radius, kappa, maximal, C, trials, seed = job
    return packet_experiment(d, a, radius, kappa, maximal=maximal, C=C, identity_trials=trials, seed=seed)
