"""
Entropy of diagonal flows, Bowen balls and the decay of the generators along them.

Only the archimedean place is modelled: a flow element is a diagonal matrix a with
log|a_ii| = log_weights[i], and the root alpha_ij has log|alpha_ij(a)| = lw[i] - lw[j].
Conjugation a^{-s} g a^{s} multiplies entry (i, j) by exp(s * (lw[j] - lw[i])).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

import app_constants
from app.core.errors import SingularMatrix, ZeroEntropy
from app.core.workers import parallel_map
from app.kernels.perms import Permutation, all_permutations, root_set

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FlowElement:
    log_weights: tuple

    @classmethod
    def from_weights(cls, weights: Sequence[float]) -> "FlowElement":
        """Canonicalize to weights summing to zero (PGL normalization)."""
        mean = sum(weights) / len(weights)
        return cls(tuple(float(w) - mean for w in weights))

    @property
    def n(self) -> int:
        return len(self.log_weights)

    def power(self, k: int) -> "FlowElement":
        return FlowElement(tuple(k * w for w in self.log_weights))

    def root(self, i: int, j: int) -> float:
        """log|alpha_ij(a)| for 1-based i, j."""
        return self.log_weights[i - 1] - self.log_weights[j - 1]

    def matrix(self) -> np.ndarray:
        return np.diag(np.exp(np.array(self.log_weights)))


def spaced_flow(n: int) -> FlowElement:
    """Weights (n-1)/2, (n-3)/2, ..., -(n-1)/2."""
    return FlowElement(tuple((n - 1) / 2 - k for k in range(n)))


@dataclass(frozen=True)
class BowenSpec:
    radius: float
    s: int
    t: int

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError(f"radius must be positive, got {self.radius}")
        if self.s >= self.t:
            raise ValueError(f"need s < t, got s={self.s}, t={self.t}")
        if self.radius >= 1:
            logger.warning("Bowen ball radius %.3g >= 1; the ball may leave a chart around the identity", self.radius)

    @classmethod
    def symmetric(cls, radius: float, tau: int) -> "BowenSpec":
        return cls(radius, -tau, tau)


# =============================
# Entropy
# =============================
def haar_entropy(a: FlowElement) -> float:
    lw = a.log_weights
    return 0.5 * sum(abs(lw[i] - lw[j]) for i in range(a.n) for j in range(a.n) if i != j)


@dataclass
class EntropyBounds:
    haar: float
    new_bound: float
    elmv_bound: float

    def to_dict(self) -> Dict:
        return {"haar": self.haar, "newBound": self.new_bound, "elmvBound": self.elmv_bound}


def entropy_bounds(a: FlowElement) -> EntropyBounds:
    haar = haar_entropy(a)
    new_bound = haar / (2 * (a.n - 1)) if a.n > 1 else 0.0
    roots = [abs(a.root(i, j)) for i in range(1, a.n + 1) for j in range(1, a.n + 1) if i != j]
    nonzero = [r for r in roots if r > app_constants.NUMERIC_ZERO_FLOOR]
    elmv = 0.5 * min(nonzero) if nonzero else 0.0
    return EntropyBounds(haar, new_bound, elmv)


# =============================
# Bowen balls
# =============================
def conjugate_by_flow(g: np.ndarray, a: FlowElement, s: float) -> np.ndarray:
    """a^{-s} g a^{s}"""
    lw = np.array(a.log_weights)
    return g * np.exp(s * (lw[None, :] - lw[:, None]))


def _in_ball(h: np.ndarray, radius: float) -> bool:
    return float(np.abs(h - np.eye(h.shape[0])).max()) <= radius


def _representatives(g, mode: str) -> List[np.ndarray]:
    g = np.asarray(g, dtype=float)
    d = np.linalg.det(g)
    if abs(d) <= app_constants.NUMERIC_ZERO_FLOOR:
        raise SingularMatrix("Bowen ball membership needs an invertible matrix")
    if mode != "pgl":
        return [g]
    scaled = g / abs(d) ** (1.0 / g.shape[0])
    return [scaled, -scaled]


def ball_membership(g, radius: float, mode: str = "pgl") -> bool:
    """Sup-norm ball of the given radius around the identity (the Bowen ball at tau = 0)."""
    return any(_in_ball(h, radius) for h in _representatives(g, mode))


def bowen_membership(g, a: FlowElement, spec: BowenSpec, mode: str = "pgl") -> bool:
    for h in _representatives(g, mode):
        if all(_in_ball(conjugate_by_flow(h, a, k), spec.radius) for k in (spec.s, spec.t)):
            return True
    return False


def psi_decay_bound(sigma: Permutation, a: FlowElement, spec: BowenSpec) -> float:
    bound = 1.0
    for j, i in root_set(sigma):
        r = a.root(j, i)
        bound *= min(math.exp(spec.s * r), math.exp(spec.t * r))
    return bound


def sample_bowen_ball(a: FlowElement, spec: BowenSpec, rng: np.random.Generator) -> np.ndarray:
    """A sup-norm ball element whose entries are shrunk so both conjugates stay in the ball."""
    n = a.n
    lw = np.array(a.log_weights)
    diff = lw[None, :] - lw[:, None]
    shrink = np.minimum(np.exp(-spec.s * diff), np.exp(-spec.t * diff))
    noise = rng.uniform(-spec.radius, spec.radius, size=(n, n))
    return np.eye(n) + noise * shrink


# =============================
# Threshold and rank obstruction
# =============================
def separation_threshold(D: int, Dram: int, a: FlowElement, kappa: float = 0.0) -> float:
    h = haar_entropy(a)
    if h <= 0:
        raise ZeroEntropy("flow element has zero Haar entropy")
    if D < 1 or Dram < 1:
        raise ValueError("discriminants must be positive integers")
    n = a.n
    return (n - 1) * (math.log(D) + (n / 2) * math.log(Dram) + kappa) / (2 * h)


def rank_obstruction(R: int) -> int:
    if R < 1:
        raise ValueError(f"R must be at least 1, got {R}")
    return (R + 2) * (R + 1) * R - 1


# =============================
# Decay experiment
# =============================
def _psi0_float(sigma: Permutation, g: np.ndarray, det_g: float) -> float:
    value = float(sigma.sign())
    for i in range(1, sigma.n + 1):
        value *= g[sigma(i) - 1, i - 1]
    return value / det_g


@dataclass
class DecayRow:
    tau: int
    sup_ratio: float
    argmax_sigma: str
    samples: int

    def to_dict(self) -> Dict:
        return {"tau": self.tau, "supRatio": self.sup_ratio, "argmaxSigma": self.argmax_sigma,
                "samples": self.samples}


@dataclass
class DecayReport:
    n: int
    radius: float
    seed: int
    rows: List[DecayRow] = field(default_factory=list)
    constant: float = 0.0
    bounded: bool = True
    non_increasing: bool = True

    @property
    def ok(self) -> bool:
        return self.bounded and self.non_increasing

    def to_dict(self) -> Dict:
        return {
            "n": self.n,
            "radius": self.radius,
            "seed": self.seed,
            "constant": self.constant,
            "bounded": self.bounded,
            "nonIncreasing": self.non_increasing,
            "ok": self.ok,
            "rows": [r.to_dict() for r in self.rows],
        }


def _decay_row(job) -> DecayRow:
    a, radius, tau, samples, seed = job
    spec = BowenSpec.symmetric(radius, tau) if tau > 0 else None
    rng = np.random.default_rng(seed)
    perms = [s for s in all_permutations(a.n) if not s.is_identity()]
    best, best_sigma = 0.0, "()"
    for _ in range(samples):
        if spec is None:
            g = np.eye(a.n) + rng.uniform(-radius, radius, size=(a.n, a.n))
        else:
            g = sample_bowen_ball(a, spec, rng)
        det_g = float(np.linalg.det(g))
        for sigma in perms:
            bound = psi_decay_bound(sigma, a, spec) if spec is not None else 1.0
            ratio = abs(_psi0_float(sigma, g, det_g)) / bound
            if ratio > best:
                best, best_sigma = ratio, str(sigma)
    return DecayRow(tau, best, best_sigma, samples)


def decay_experiment(a: FlowElement, taus: Sequence[int], radius: float = 0.1, samples: int = 1000,
                     seed: int = app_constants.DEFAULT_SEED, cap: float = 10.0,
                     trend_from: int = 3, noise: float = 0.05) -> DecayReport:
    """
    Sup over seeded samples of B^(-tau, tau) and sigma != id of |Psi0_sigma(g)| / decay bound.
    Each tau reuses the seed, so consecutive rows differ only through tau.
    """
    rows = parallel_map(_decay_row, [(a, radius, tau, samples, seed) for tau in taus])
    report = DecayReport(n=a.n, radius=radius, seed=seed, rows=list(rows))
    report.constant = max((r.sup_ratio for r in rows), default=0.0)
    report.bounded = math.isfinite(report.constant) and report.constant <= cap
    tail = [r.sup_ratio for r in rows if r.tau >= trend_from]
    report.non_increasing = all(b <= a_ * (1 + noise) for a_, b in zip(tail, tail[1:]))
    logger.debug("decay constant %.4g over %d tau values", report.constant, len(rows))
    return report
