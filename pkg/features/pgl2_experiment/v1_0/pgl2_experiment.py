# PGL2 Experiment Feature - Module Documentation
#
# Purpose:
# Class-pair table for real quadratic orders Z[sqrt d]. For every pair (i, j) of ideal class
# representatives it forms lambda = Lambda_i adj(Lambda_j) (content-normalized), evaluates
# Psi_{+1} and Psi_{-1} on the torus of Q(sqrt d) and checks:
#   - Psi_{+1} + Psi_{-1} = 1 exactly
#   - relDisc * Psi_{-1}(lambda) is an integer (integrality witness)
#   - |Psi_{-1}(lambda)| >= 1/relDisc whenever lambda is outside the torus
# plus the discriminant identity <q_T, delta.q_T> / disc(q_T) = Psi_{+1}(delta) - Psi_{-1}(delta)
# on seeded random delta.
#
# Params: d_max (sweep), d (single/classes/identity), radius (Bowen radius of the decay
# experiment that fixes the constant C behind tauFound), C (explicit decay constant), kappa,
# maximal (d = 1 mod 4 on the maximal order), identity_trials, seed.
#
# Actions:
# sweep      all squarefree 2 <= d <= d_max with d = 2, 3 mod 4 (default)
# single     one d
# classes    the ideal class representatives of one d
# identity   the discriminant identity rows for one d
#
# CSV columns: d, classIdx_i, classIdx_j, psiMinus (p/q), integralityWitness, inTorus, tauStar.

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from app.core.action_menu import ActionMenu
from app.core.contracts.feature_interface import BaseFeature
from app.core.errors import SchemaMismatch
from app.kernels.entropy_bowen import FlowElement
from app.kernels.matrices import Matrix
from app.kernels.pgl2_packets import (
    BinaryQuadraticForm,
    PacketReport,
    disc,
    disc_inner_product,
    form_to_matrix,
    ideal_class_reps,
    packet_experiment,
    packet_sweep,
    psi_disc_identity,
    psi_disc_identity_check,
    random_invertible,
    torus_fixture_of_form,
    torus_form,
)
from app.kernels.scalars import to_string
from app.kernels.tori_galois import build_fixture

PACKET_COLUMNS = ["d", "classIdx_i", "classIdx_j", "psiMinus", "integralityWitness", "inTorus", "tauStar"]


@dataclass
class PacketResult:
    tool: str
    ok: bool
    action: str
    summary: Dict
    rows: List[Dict] = field(default_factory=list)
    errors: Optional[str] = None
    notes: List[str] = field(default_factory=list)
    csv_columns: Optional[List[str]] = None

    def to_dict(self) -> Dict:
        data = {"tool": self.tool, "ok": self.ok, "action": self.action, "rows": self.rows,
                "errors": self.errors, "notes": self.notes}
        data.update(self.summary)
        return data


def _flow() -> FlowElement:
    return FlowElement.from_weights([1.0, -1.0])


def _failing(reports: List[PacketReport]) -> List[str]:
    bad = []
    for rep in reports:
        bad.extend(f"d={r.d} ({r.i},{r.j})" for r in rep.rows if not r.ok)
        if rep.identity_failures:
            bad.append(f"d={rep.d} identity x{rep.identity_failures}")
    return bad


def _packet_result(action: str, reports: List[PacketReport]) -> PacketResult:
    rows = [r.to_dict() for rep in reports for r in rep.rows]
    bad = _failing(reports)
    summary = {
        "dValues": [rep.d for rep in reports],
        "classNumbers": {str(rep.d): rep.class_number for rep in reports},
        "pairs": len(rows),
        "violations": len(bad),
        "decayConstant": reports[0].decay_constant if reports else None,
    }
    return PacketResult("pgl2_experiment", not bad, action, summary, rows=rows,
                        errors=f"violations at {', '.join(bad[:10])}" if bad else None,
                        csv_columns=PACKET_COLUMNS)


class Feature(BaseFeature):
    def __init__(self):
        self.menu = ActionMenu("PGL2 packets")
        self.menu.add_action("sweep", "Class pair table for every d <= d_max", self.option_sweep)
        self.menu.add_action("single", "Class pair table for one d", self.option_single)
        self.menu.add_action("classes", "Ideal class representatives for one d", self.option_classes)
        self.menu.add_action("identity", "Discriminant identity on random delta", self.option_identity)

    def run_default(self, params: dict) -> PacketResult:
        return self.option_sweep(params)

    @staticmethod
    def _common(params: dict) -> Dict:
        return {
            "a": _flow(),
            "radius": float(params.get("radius") or 0.1),
            "kappa": float(params.get("kappa") or 0.0),
            "C": float(params["C"]) if params.get("C") is not None else None,
            "maximal": bool(params.get("maximal")),
            "identity_trials": int(params.get("identity_trials") or 0),
            "seed": int(params.get("seed", 0)),
        }

    @staticmethod
    def _d(params: dict) -> int:
        if params.get("d") is None:
            raise SchemaMismatch("this action needs --d")
        return int(params["d"])

    def option_sweep(self, params: dict) -> PacketResult:
        reports = packet_sweep(int(params.get("d_max") or 200), **self._common(params))
        return _packet_result("sweep", reports)

    def option_single(self, params: dict) -> PacketResult:
        return _packet_result("single", [packet_experiment(self._d(params), **self._common(params))])

    def option_classes(self, params: dict) -> PacketResult:
        d = self._d(params)
        reps = ideal_class_reps(d, bool(params.get("maximal")))
        rows = []
        for k, rep in enumerate(reps):
            row = {"classIdx": k, "form": str(rep.form), "stable": rep.is_order_stable()}
            row.update(rep.to_dict())
            rows.append(row)
        bad = [str(r["classIdx"]) for r in rows if not r["stable"]]
        return PacketResult("pgl2_experiment", not bad, "classes", {"d": d, "classNumber": len(reps)}, rows=rows,
                            errors=f"ideal of class {', '.join(bad)} is not order-stable" if bad else None)

    def option_identity(self, params: dict) -> PacketResult:
        d = self._d(params)
        fx = build_fixture([-d, 0, 1])
        qT = torus_form(fx.algebra)
        id_fx = torus_fixture_of_form(qT)
        rng = random.Random(int(params.get("seed", 0)) * 1000003 + d)
        rows = []
        for trial in range(int(params.get("identity_trials") or 20)):
            delta = random_invertible(rng)
            row = {"trial": trial, "delta": [[to_string(x) for x in r] for r in delta.rows]}
            row.update(psi_disc_identity_check(qT, delta, id_fx).to_dict())
            rows.append(row)
        bad = [str(r["trial"]) for r in rows if not r["ok"]]
        summary = {
            "d": d,
            "qT": str(qT),
            "discQT": to_string(disc(qT)),
            "selfPairing": to_string(disc_inner_product(qT, qT)),
            "qTMatrix": [[to_string(x) for x in r] for r in form_to_matrix(qT).rows],
        }
        return PacketResult("pgl2_experiment", not bad, "identity", summary, rows=rows,
                            errors=f"identity fails in trials {', '.join(bad)}" if bad else None)

    def self_test(self) -> bool:
        xy = BinaryQuadraticForm.of(0, 1, 0)
        delta = Matrix.rational([[2, 1], [1, 3]])
        return psi_disc_identity(xy, delta) and len(ideal_class_reps(10)) == 2

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
