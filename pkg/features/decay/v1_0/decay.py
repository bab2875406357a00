# Decay Feature - Module Documentation
#
# Purpose:
# Sampled decay of the generators on Bowen balls. For tau = 1..tau_max it draws seeded
# elements g of B^(-tau, tau) and records sup over samples and sigma != id of
# |Psi0_sigma(g)| / prod_{(j,i) in R_sigma} min(|alpha_ji(a)|^s, |alpha_ji(a)|^t).
# The ratios must stay under one constant, with a non-increasing trend past tau = 3.
#
# Params: n (default 2, flow diag(e, 1/e)), weights, radius, tau_max, samples, seed.
#
# Actions:
# experiment   the sweep above (default); CSV columns tau, supRatio, argmaxSigma, samples
# bounds       the decay bound of every sigma at each tau
# sample       draws samples at tau_max and confirms each lies in the Bowen ball

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from app.core.action_menu import ActionMenu
from app.core.contracts.feature_interface import BaseFeature
from app.kernels.entropy_bowen import (
    BowenSpec,
    FlowElement,
    bowen_membership,
    decay_experiment,
    psi_decay_bound,
    spaced_flow,
    sample_bowen_ball,
)
from app.kernels.perms import all_permutations


@dataclass
class DecayResult:
    tool: str
    ok: bool
    action: str
    summary: Dict
    rows: List[Dict] = field(default_factory=list)
    errors: Optional[str] = None
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict:
        data = {"tool": self.tool, "ok": self.ok, "action": self.action, "rows": self.rows,
                "errors": self.errors, "notes": self.notes}
        data.update(self.summary)
        return data


def _flow(params: dict) -> FlowElement:
    if params.get("weights"):
        return FlowElement.from_weights([float(w) for w in params["weights"]])
    n = int(params.get("n") or 2)
    return FlowElement.from_weights([1.0, -1.0]) if n == 2 else spaced_flow(n)


class Feature(BaseFeature):
    def __init__(self):
        self.menu = ActionMenu("Decay experiment")
        self.menu.add_action("experiment", "Sup ratio per tau", self.option_experiment)
        self.menu.add_action("bounds", "Decay bound per sigma and tau", self.option_bounds)
        self.menu.add_action("sample", "Check the Bowen ball sampler", self.option_sample)

    def run_default(self, params: dict) -> DecayResult:
        return self.option_experiment(params)

    def option_experiment(self, params: dict) -> DecayResult:
        a = _flow(params)
        taus = range(1, int(params.get("tau_max") or 10) + 1)
        report = decay_experiment(a, taus, radius=float(params.get("radius") or 0.1),
                                  samples=int(params.get("samples") or 1000), seed=int(params.get("seed", 0)))
        data = report.to_dict()
        rows = data.pop("rows")
        data.pop("ok")
        errors = None
        if not report.bounded:
            errors = f"sup ratio {report.constant:.4g} is not bounded"
        elif not report.non_increasing:
            errors = "sup ratio increases past tau = 3 beyond noise"
        return DecayResult("decay", report.ok, "experiment", data, rows=rows, errors=errors)

    def option_bounds(self, params: dict) -> DecayResult:
        a = _flow(params)
        radius = float(params.get("radius") or 0.1)
        rows = []
        for tau in range(1, int(params.get("tau_max") or 10) + 1):
            spec = BowenSpec.symmetric(radius, tau)
            for sigma in all_permutations(a.n):
                if not sigma.is_identity():
                    rows.append({"tau": tau, "sigma": str(sigma), "bound": psi_decay_bound(sigma, a, spec)})
        return DecayResult("decay", True, "bounds", {"n": a.n, "radius": radius}, rows=rows)

    def option_sample(self, params: dict) -> DecayResult:
        a = _flow(params)
        tau = int(params.get("tau_max") or 10)
        spec = BowenSpec.symmetric(float(params.get("radius") or 0.1), tau)
        rng = np.random.default_rng(int(params.get("seed", 0)))
        count = int(params.get("samples") or 100)
        outside = sum(not bowen_membership(sample_bowen_ball(a, spec, rng), a, spec, mode="gl")
                      for _ in range(count))
        return DecayResult("decay", outside == 0, "sample",
                           {"n": a.n, "tau": tau, "samples": count, "outside": outside},
                           errors=f"{outside} samples left the ball" if outside else None)

    def self_test(self) -> bool:
        a = FlowElement.from_weights([1.0, -1.0])
        flip = all_permutations(2)[1]
        return abs(psi_decay_bound(flip, a, BowenSpec.symmetric(0.1, 1)) - np.exp(-4.0)) < 1e-15

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
