# Discriminant Feature - Module Documentation
#
# Purpose:
# Discriminants of the order attached to a torus fixture: the relative discriminant
# det Trd(b_i b_j) of its Z-basis, the archimedean discriminant of the Hermitian form Q
# (identity unless the fixture sets "q"), its trace-zero (Lie) variant, and the square-root
# factorization U S^2 U^-1 of the Q-Gram matrix.
#
# Actions:
# summary      relDisc, archimedean and Lie discriminants (default)
# gram         Hermitian factorization of the Q-Gram matrix and its reconstruction residual
# unimodular   archimedean discriminant after seeded unimodular basis changes (must not move)

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from app.core.action_menu import ActionMenu
from app.core.contracts.feature_interface import BaseFeature
from app.core.serialization import input_path, load_torus_fixture
from app.kernels.discriminants import (
    archimedean_discriminant,
    archimedean_discriminant_lie,
    change_basis,
    gram_sqrt,
    order_discriminant,
    q_gram,
    quadratic_order,
    random_unimodular,
)
from app.kernels.etale import EtaleAlgebra
from app.kernels.matrices import Matrix


@dataclass
class DiscriminantResult:
    tool: str
    ok: bool
    action: str
    f: List[str]
    rel_disc: int
    archimedean: float
    lie: float
    rows: List[Dict] = field(default_factory=list)
    errors: Optional[str] = None
    notes: List[str] = field(default_factory=list)
    extra: Dict = field(default_factory=dict)

    def to_dict(self) -> Dict:
        data = {
            "tool": self.tool,
            "ok": self.ok,
            "action": self.action,
            "f": self.f,
            "relDisc": self.rel_disc,
            "archimedean": self.archimedean,
            "lie": self.lie,
            "rows": self.rows,
            "errors": self.errors,
            "notes": self.notes,
        }
        data.update(self.extra)
        return data


def trace_zero_basis(algebra: EtaleAlgebra) -> List[Matrix]:
    """M^k - tr(M^k)/n for k = 1..n-1, M the generator."""
    n = algebra.n
    ident = Matrix.identity(n)
    basis, power = [], ident
    for _ in range(1, n):
        power = power * algebra.generator
        basis.append(power - ident * (power.trace() / n))
    return basis


def _base(params: dict):
    fx = load_torus_fixture(input_path(params, 0, "fixture"))
    basis = list(fx.algebra.order)
    rel = order_discriminant(basis)
    arch = archimedean_discriminant(basis, fx.hermitian_q)
    lie = archimedean_discriminant_lie(trace_zero_basis(fx.algebra), fx.hermitian_q)
    return fx, basis, rel, arch, lie


class Feature(BaseFeature):
    def __init__(self):
        self.menu = ActionMenu("Order discriminants")
        self.menu.add_action("summary", "Relative, archimedean and Lie discriminants", self.option_summary)
        self.menu.add_action("gram", "Square-root factorization of the Q-Gram matrix", self.option_gram)
        self.menu.add_action("unimodular", "Invariance under unimodular basis change", self.option_unimodular)

    def run_default(self, params: dict) -> DiscriminantResult:
        return self.option_summary(params)

    def option_summary(self, params: dict) -> DiscriminantResult:
        fx, basis, rel, arch, lie = _base(params)
        notes = [f"{len(basis)} basis elements, backend {fx.backend}"]
        if fx.hermitian_q is None:
            notes.append("Q = identity on vec(M_n)")
        return DiscriminantResult("discriminant", True, "summary", [str(c) for c in fx.algebra.f],
                                  rel, arch, lie, notes=notes)

    def option_gram(self, params: dict) -> DiscriminantResult:
        fx, basis, rel, arch, lie = _base(params)
        gram = q_gram(basis, fx.hermitian_q)
        fact = gram_sqrt(gram, params.get("tolerance", 1e-9))
        residual = float(np.abs(fact.reconstruct() - gram).max())
        ok = residual <= params.get("tolerance", 1e-9) * max(1.0, float(np.abs(gram).max()))
        return DiscriminantResult("discriminant", ok, "gram", [str(c) for c in fx.algebra.f], rel, arch, lie,
                                  errors=None if ok else f"reconstruction residual {residual:.3e}",
                                  extra={"factorization": fact.to_dict(), "residual": residual})

    def option_unimodular(self, params: dict) -> DiscriminantResult:
        fx, basis, rel, arch, lie = _base(params)
        rng = random.Random(int(params.get("seed", 0)))
        tol = params.get("tolerance", 1e-9)
        rows, bad = [], []
        for trial in range(int(params.get("trials") or 10)):
            moved = change_basis(basis, random_unimodular(len(basis), rng))
            value = archimedean_discriminant(moved, fx.hermitian_q)
            passed = abs(value - arch) <= tol * max(1.0, abs(arch))
            rows.append({"trial": trial, "archimedean": value, "relDisc": order_discriminant(moved), "pass": passed})
            if not passed:
                bad.append(str(trial))
        return DiscriminantResult("discriminant", not bad, "unimodular", [str(c) for c in fx.algebra.f],
                                  rel, arch, lie, rows=rows,
                                  errors=f"archimedean discriminant moved in trials {', '.join(bad)}" if bad else None)

    def self_test(self) -> bool:
        return quadratic_order(3).rel_disc == 12

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
