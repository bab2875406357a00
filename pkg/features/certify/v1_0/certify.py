# Certify Feature - Module Documentation
#
# Purpose:
# Integrality certificate for a rational matrix lambda on the torus of a fixture: every
# D^k * Psi_sigma(lambda) must be an algebraic integer, where D = |relDisc| of the fixture's
# order and k = 1 (unramified) or ceil(1 + n/2) (--ramified).
#
# Inputs (params):
# - inputs[0]: fixture file; inputs[1]: lambda matrix file
# - ramified: bool
#
# Integrality is decided exactly on the rational and quadratic backends (Z[sqrt d], or
# Z[(1 + sqrt d)/2] when d = 1 mod 4) and, on the numeric backend, through the rational
# coefficients of the Galois-orbit characteristic polynomial.
#
# A failed certificate is a report row with integral = false and exit status 1, never an
# exception.

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional

from app.core.action_menu import ActionMenu
from app.core.contracts.feature_interface import BaseFeature
from app.core.errors import SchemaMismatch
from app.core.serialization import input_path, load_matrix, load_torus_fixture
from app.kernels.discriminants import integrality_certificate, make_order
from app.kernels.matrices import Matrix
from app.kernels.tori_galois import build_fixture


@dataclass
class CertifyResult:
    tool: str
    ok: bool
    action: str
    D: int
    exponent: int
    ramified: bool
    rows: List[Dict]
    errors: Optional[str] = None
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict:
        return {
            "tool": self.tool,
            "ok": self.ok,
            "action": self.action,
            "D": self.D,
            "exponent": self.exponent,
            "ramified": self.ramified,
            "rows": self.rows,
            "errors": self.errors,
            "notes": self.notes,
        }


class Feature(BaseFeature):
    def __init__(self):
        self.menu = ActionMenu("Integrality certificate")
        self.menu.add_action("certify", "Per-sigma integrality of D^k Psi_sigma(lambda)", self.option_certify)

    def run_default(self, params: dict) -> CertifyResult:
        return self.option_certify(params)

    def option_certify(self, params: dict) -> CertifyResult:
        fx = load_torus_fixture(input_path(params, 0, "fixture"))
        lam = load_matrix(input_path(params, 1, "lambda"))
        if lam.n != fx.n:
            raise SchemaMismatch(f"lambda is {lam.n}x{lam.n}, fixture has degree {fx.n}")
        ramified = bool(params.get("ramified"))
        report = integrality_certificate(lam, fx, make_order(fx.algebra), ramified,
                                         params.get("tolerance", 1e-9))
        failing = [r["sigma"] for r in report.rows if not r["integral"]]
        return CertifyResult("certify", report.ok, "certify", report.D, report.exponent, ramified, report.rows,
                             errors=f"not integral at {', '.join(failing)}" if failing else None,
                             notes=report.notes)

    def self_test(self) -> bool:
        fx = build_fixture([-10, 0, 1])
        lam = Matrix.rational([[1, -4], [0, 2]])
        return integrality_certificate(lam, fx, make_order(fx.algebra)).ok

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
