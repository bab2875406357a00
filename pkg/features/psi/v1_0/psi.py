# Psi Feature - Module Documentation
#
# Purpose:
# Evaluates the canonical generators Psi_sigma at a matrix g, one value per permutation of
# S_n. Without a fixture the diagonal torus is used (Psi0 / Psi1 monomials); with a fixture
# the torus of its etale algebra is used through its primitive idempotents.
#
# Inputs (params):
# - inputs[0]: matrix file (JSON row-major "p/q" strings)
# - inputs[1]: optional torus fixture file
# - mode: "pgl" (divide by det g, default) or "sl" (requires det g = 1, no division)
#
# Actions:
# Action id   Label                               Result
# values      Psi_sigma(g) for every sigma        map cycle-notation -> value string (default)
# monomials   Psi1_sigma(g) = prod g[i, sigma(i)] plus the signed sum (equals det g)
# dual        Dual-basis form cross-check         needs a fixture; compares both evaluations
# fiber       Identity fiber test                 verdict "in torus" / "fiber-trivial but not torus" / ...
#
# Normalized Result Schema:
# {
#   "tool": "psi", "ok": true, "action": "values",
#   "n": 3, "backend": "rational", "mode": "pgl", "det": "-2",
#   "values": {"()": "-2", "(1 2)": "3/2", ...},
#   "rows": [{"sigma": "()", "value": "-2"}, ...],
#   "errors": null, "notes": []
# }
#
# Self-test: the signed sum of Psi1 over S_2 reproduces det of a fixed 2x2 matrix.

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional

from app.core.action_menu import ActionMenu
from app.core.contracts.feature_interface import BaseFeature
from app.core.errors import SchemaMismatch
from app.core.serialization import input_path, load_matrix, load_torus_fixture
from app.kernels.etale import dual_basis
from app.kernels.generators import identity_fiber_test, psi0, psi1, psi_torus, psi_torus_dual, psi_vector
from app.kernels.matrices import Matrix, det
from app.kernels.perms import all_permutations
from app.kernels.scalars import is_zero, magnitude, to_string


@dataclass
class PsiResult:
    tool: str
    ok: bool
    action: str
    n: int
    backend: str
    mode: str
    det: str
    values: Dict[str, str]
    errors: Optional[str] = None
    notes: List[str] = field(default_factory=list)
    extra: Dict = field(default_factory=dict)

    def to_dict(self) -> Dict:
        data = {
            "tool": self.tool,
            "ok": self.ok,
            "action": self.action,
            "n": self.n,
            "backend": self.backend,
            "mode": self.mode,
            "det": self.det,
            "values": self.values,
            "rows": [{"sigma": k, "value": v} for k, v in self.values.items()],
            "errors": self.errors,
            "notes": self.notes,
        }
        data.update(self.extra)
        return data


def _inputs(params: dict):
    g = load_matrix(input_path(params, 0, "matrix"))
    fx = None
    if len(params.get("inputs") or []) > 1:
        fx = load_torus_fixture(params["inputs"][1])
        if fx.n != g.n:
            raise SchemaMismatch(f"fixture has degree {fx.n} but the matrix is {g.n}x{g.n}")
    return g, fx


class Feature(BaseFeature):
    def __init__(self):
        self.menu = ActionMenu("Generator values")
        self.menu.add_action("values", "Psi_sigma(g) for every sigma", self.option_values)
        self.menu.add_action("monomials", "Psi1 monomials and their signed sum", self.option_monomials)
        self.menu.add_action("dual", "Dual-basis cross-check on a fixture", self.option_dual)
        self.menu.add_action("fiber", "Identity fiber test", self.option_fiber)

    def run_default(self, params: dict) -> PsiResult:
        return self.option_values(params)

    def option_values(self, params: dict) -> PsiResult:
        g, fx = _inputs(params)
        mode = params.get("mode") or "pgl"
        vec = psi_vector(g, fx.idems if fx else None, mode=mode)
        values = {str(s): to_string(v) for s, v in sorted(vec.values.items())}
        notes = [f"{len(vec.nonzero())} of {len(values)} values are nonzero"]
        if fx is not None:
            notes.append(f"torus of f = {[str(c) for c in fx.algebra.f]}")
        return PsiResult("psi", True, "values", g.n, vec.backend, mode, to_string(vec.det_value), values,
                         notes=notes, extra={"total": to_string(vec.total())})

    def option_monomials(self, params: dict) -> PsiResult:
        g, _ = _inputs(params)
        d = det(g)
        signed = 0
        values = {}
        for s in all_permutations(g.n):
            v = psi1(s, g)
            values[str(s)] = to_string(v)
            signed = s.sign() * v + signed
        ok = is_zero(signed - d)
        return PsiResult("psi", ok, "monomials", g.n, "rational", "monomial", to_string(d), values,
                         errors=None if ok else "signed sum of Psi1 differs from det g",
                         extra={"signedSum": to_string(signed)})

    def option_dual(self, params: dict) -> PsiResult:
        g, fx = _inputs(params)
        if fx is None:
            raise SchemaMismatch("the dual action needs a fixture file as second input")
        basis = list(fx.algebra.order)
        dual = dual_basis(fx.algebra, basis)
        tol = params.get("tolerance", 1e-9)
        values, rows, bad = {}, [], []
        for s in all_permutations(fx.n):
            direct = psi_torus(s, g, fx.idems, check=False)
            via_dual = psi_torus_dual(s, g, basis, dual, fx.idems)
            diff = magnitude(direct - via_dual)
            agree = is_zero(direct - via_dual) or diff <= tol * max(1.0, magnitude(direct))
            if not agree:
                bad.append(str(s))
            values[str(s)] = to_string(direct)
            rows.append({"sigma": str(s), "value": to_string(direct), "dual": to_string(via_dual), "agree": agree})
        return PsiResult("psi", not bad, "dual", fx.n, fx.backend, "pgl", to_string(det(g)), values,
                         errors=f"dual-basis form disagrees at {', '.join(bad)}" if bad else None,
                         extra={"comparison": rows})

    def option_fiber(self, params: dict) -> PsiResult:
        g, fx = _inputs(params)
        report = identity_fiber_test(g, fx.idems if fx else None)
        return PsiResult("psi", True, "fiber", g.n, fx.backend if fx else "rational", "pgl",
                         to_string(det(g)), report.values,
                         notes=[f"verdict: {report.verdict}"], extra={"fiber": report.to_dict()})

    def self_test(self) -> bool:
        g = Matrix.rational([[1, 2], [3, 4]])
        total = sum(s.sign() * psi1(s, g) for s in all_permutations(2))
        return total == det(g) and psi0(all_permutations(2)[0], g) == -2

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
