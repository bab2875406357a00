# Threshold Feature - Module Documentation
#
# Purpose:
# Separation threshold tau* = (n-1)(log D + (n/2) log Dram + kappa) / (2 h(a)): the Bowen
# ball depth past which a rational element returning to the ball is forced into the torus.
# The membership action tests a matrix against B^(s,t) for the same flow.
#
# Params: D, Dram, kappa, weights (default (1, -1)), radius, tau (membership uses
# s = -tau, t = tau), mode ("pgl" rescales by det before testing).

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from app.core.action_menu import ActionMenu
from app.core.contracts.feature_interface import BaseFeature
from app.core.serialization import input_path, load_matrix
from app.kernels.entropy_bowen import BowenSpec, FlowElement, bowen_membership, haar_entropy, separation_threshold


@dataclass
class ThresholdResult:
    tool: str
    ok: bool
    action: str
    values: Dict
    errors: Optional[str] = None
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict:
        data = {"tool": self.tool, "ok": self.ok, "action": self.action, "errors": self.errors, "notes": self.notes}
        data.update(self.values)
        return data


def _flow(params: dict) -> FlowElement:
    weights = params.get("weights") or [1.0, -1.0]
    return FlowElement.from_weights([float(w) for w in weights])


class Feature(BaseFeature):
    def __init__(self):
        self.menu = ActionMenu("Separation threshold")
        self.menu.add_action("threshold", "tau* from D, Dram and kappa", self.option_threshold)
        self.menu.add_action("membership", "Bowen ball membership of a matrix", self.option_membership)

    def run_default(self, params: dict) -> ThresholdResult:
        return self.option_threshold(params)

    def option_threshold(self, params: dict) -> ThresholdResult:
        a = _flow(params)
        D, Dram = int(params.get("D") or 1), int(params.get("Dram") or 1)
        kappa = float(params.get("kappa") or 0.0)
        tau = separation_threshold(D, Dram, a, kappa)
        values = {"D": D, "Dram": Dram, "kappa": kappa, "n": a.n, "haar": haar_entropy(a),
                  "tauStar": tau, "tauCeil": math.ceil(tau)}
        return ThresholdResult("threshold", True, "threshold", values)

    def option_membership(self, params: dict) -> ThresholdResult:
        g = load_matrix(input_path(params, 0, "matrix"))
        weights = params.get("weights") or ([1.0, -1.0] if g.n == 2 else [(g.n - 1) / 2 - k for k in range(g.n)])
        a = FlowElement.from_weights([float(w) for w in weights])
        tau = int(params.get("tau") or 1)
        spec = BowenSpec.symmetric(float(params.get("radius") or 0.1), tau)
        inside = bowen_membership(g.to_numpy().real, a, spec, mode=params.get("mode") or "pgl")
        values = {"tau": tau, "radius": spec.radius, "inBall": inside}
        return ThresholdResult("threshold", True, "membership", values,
                               notes=[f"s = {spec.s}, t = {spec.t}"])

    def self_test(self) -> bool:
        a = FlowElement.from_weights([1.0, -1.0])
        return abs(separation_threshold(math.e ** 4, 1, a) - 1.0) < 1e-12

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
