# Entropy Bounds Feature - Module Documentation
#
# Purpose:
# Haar entropy h(a) of a diagonal flow element a = diag(e^{w_1}, ..., e^{w_n}) and the two
# lower bounds compared against it: h / (2(n-1)) and half the smallest nonzero |root|.
#
# Params: n, weights (w_1 .. w_n, centered to sum zero), powers (for the powers action),
# r_max (for the rank action).
#
# Actions:
# bounds   {haar, newBound, elmvBound} (default)
# powers   entropy of a^k for k = 1..powers; grows linearly in k
# spaced   the evenly spaced flow with weights (n-1)/2, ..., -(n-1)/2 for n = 2..n
# rank     rank obstruction N_R = (R+2)(R+1)R - 1 for R = 1..r_max

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional

from app.core.action_menu import ActionMenu
from app.core.contracts.feature_interface import BaseFeature
from app.core.errors import SchemaMismatch
from app.kernels.entropy_bowen import FlowElement, entropy_bounds, haar_entropy, rank_obstruction, spaced_flow


@dataclass
class EntropyResult:
    tool: str
    ok: bool
    action: str
    weights: List[float]
    bounds: Dict[str, float]
    rows: List[Dict] = field(default_factory=list)
    errors: Optional[str] = None
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict:
        data = {
            "tool": self.tool,
            "ok": self.ok,
            "action": self.action,
            "weights": self.weights,
            "rows": self.rows,
            "errors": self.errors,
            "notes": self.notes,
        }
        data.update(self.bounds)
        return data


def _flow(params: dict) -> FlowElement:
    weights = [float(w) for w in params.get("weights") or []]
    n = int(params.get("n") or len(weights))
    if len(weights) != n:
        raise SchemaMismatch(f"expected {n} weights, got {len(weights)}")
    if n < 2:
        raise SchemaMismatch("a flow element needs n >= 2")
    return FlowElement.from_weights(weights)


class Feature(BaseFeature):
    def __init__(self):
        self.menu = ActionMenu("Entropy bounds")
        self.menu.add_action("bounds", "Haar entropy and the two lower bounds", self.option_bounds)
        self.menu.add_action("powers", "Entropy of powers a^k", self.option_powers)
        self.menu.add_action("spaced", "Evenly spaced flows for n = 2..n", self.option_spaced)
        self.menu.add_action("rank", "Rank obstruction N_R", self.option_rank)

    def run_default(self, params: dict) -> EntropyResult:
        return self.option_bounds(params)

    def option_bounds(self, params: dict) -> EntropyResult:
        a = _flow(params)
        bounds = entropy_bounds(a)
        ok = bounds.new_bound <= bounds.haar + 1e-12 and bounds.elmv_bound <= bounds.haar + 1e-12
        return EntropyResult("entropy_bounds", ok, "bounds", list(a.log_weights), bounds.to_dict(),
                             errors=None if ok else "a lower bound exceeds the Haar entropy")

    def option_powers(self, params: dict) -> EntropyResult:
        a = _flow(params)
        base = haar_entropy(a)
        rows = []
        for k in range(1, int(params.get("powers") or 5) + 1):
            bounds = entropy_bounds(a.power(k)).to_dict()
            rows.append(dict(k=k, **bounds))
        ok = all(abs(r["haar"] - r["k"] * base) <= 1e-9 * max(1.0, r["haar"]) for r in rows)
        return EntropyResult("entropy_bounds", ok, "powers", list(a.log_weights), entropy_bounds(a).to_dict(),
                             rows=rows, errors=None if ok else "entropy is not linear in k")

    def option_spaced(self, params: dict) -> EntropyResult:
        n_max = int(params.get("n") or 8)
        rows = []
        for n in range(2, n_max + 1):
            rows.append(dict(n=n, **entropy_bounds(spaced_flow(n)).to_dict()))
        return EntropyResult("entropy_bounds", True, "spaced", [], {}, rows=rows)

    def option_rank(self, params: dict) -> EntropyResult:
        rows = [{"R": R, "N": rank_obstruction(R)} for R in range(1, int(params.get("r_max") or 3) + 1)]
        return EntropyResult("entropy_bounds", True, "rank", [], {}, rows=rows)

    def self_test(self) -> bool:
        bounds = entropy_bounds(spaced_flow(3))
        return (bounds.haar, bounds.new_bound, bounds.elmv_bound) == (4.0, 1.0, 0.5)

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
