# Galois Verify Feature - Module Documentation
#
# Purpose:
# Checks the Galois behaviour of the generators on a torus fixture (etale algebra Q[x]/(f)
# with its Galois group acting on the roots) at a rational matrix g.
#
# Inputs (params):
# - inputs[0]: fixture file {"f": [...], "galois": [...], "order_basis": [...]}
# - inputs[1]: matrix file
# - sigma0: cycle notation of the starting permutation for the zero action (optional)
# - tolerance: absolute/relative tolerance for the numeric backend
#
# Actions:
# group         backend, Galois group, 2-transitivity, idempotent check
# equivariance  tau(Psi_sigma(g)) = Psi_{tau sigma tau^-1}(g) for every sigma in S_n, tau in G (default)
# orbit         rational orbit products and characteristic polynomials over Galois classes
# zero          zero propagation from Psi_sigma0(g) = 0
#
# Exact backends (rational, quadratic) compare exactly; the numeric backend compares within
# max(error bound, tolerance * scale). Galois action on numeric values is realized by
# relabeling the roots and rebuilding the idempotents.

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional

from app.core.action_menu import ActionMenu
from app.core.contracts.feature_interface import BaseFeature
from app.core.errors import ReconstructionFailed, SchemaMismatch
from app.core.serialization import input_path, load_matrix, load_torus_fixture, parse_permutation
from app.kernels.generators import psi_torus
from app.kernels.matrices import Matrix
from app.kernels.perms import Permutation, all_permutations, generate_subgroup, is_2transitive
from app.kernels.scalars import magnitude, to_string
from app.kernels.tori_galois import (
    TorusFixture,
    build_fixture,
    galois_equivariance_check,
    galois_orbit,
    galois_orbit_product,
    lagrange_idempotents,
    orbit_char_poly,
    zero_propagation,
)


@dataclass
class GaloisResult:
    tool: str
    ok: bool
    action: str
    f: List[str]
    backend: str
    galois: List[str]
    two_transitive: bool
    rows: List[Dict] = field(default_factory=list)
    errors: Optional[str] = None
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict:
        return {
            "tool": self.tool,
            "ok": self.ok,
            "action": self.action,
            "f": self.f,
            "backend": self.backend,
            "galois": self.galois,
            "twoTransitive": self.two_transitive,
            "rows": self.rows,
            "errors": self.errors,
            "notes": self.notes,
        }


def _result(fx: TorusFixture, action: str, ok: bool, rows: List[Dict], errors: Optional[str] = None,
            notes: Optional[List[str]] = None) -> GaloisResult:
    return GaloisResult(
        tool="galois_verify",
        ok=ok,
        action=action,
        f=[str(c) for c in fx.algebra.f],
        backend=fx.backend,
        galois=[str(s) for s in fx.galois],
        two_transitive=fx.is_two_transitive(),
        rows=rows,
        errors=errors,
        notes=notes or [],
    )


def _load(params: dict):
    fx = load_torus_fixture(input_path(params, 0, "fixture"))
    g = load_matrix(input_path(params, 1, "matrix"))
    if g.n != fx.n:
        raise SchemaMismatch(f"fixture has degree {fx.n} but the matrix is {g.n}x{g.n}")
    return fx, g


def _fixed_point_free_classes(fx: TorusFixture) -> List[Permutation]:
    seen, reps = set(), []
    for sigma in all_permutations(fx.n):
        if sigma in seen or sigma.fixed_points():
            continue
        orbit = galois_orbit(fx, sigma)
        seen.update(orbit)
        reps.append(orbit[0])
    return reps


class Feature(BaseFeature):
    def __init__(self):
        self.menu = ActionMenu("Galois verification")
        self.menu.add_action("group", "Galois group and idempotents", self.option_group)
        self.menu.add_action("equivariance", "Equivariance over all (sigma, tau)", self.option_equivariance)
        self.menu.add_action("orbit", "Rational orbit products", self.option_orbit)
        self.menu.add_action("zero", "Zero propagation from sigma0", self.option_zero)

    def run_default(self, params: dict) -> GaloisResult:
        return self.option_equivariance(params)

    def option_group(self, params: dict) -> GaloisResult:
        fx = load_torus_fixture(input_path(params, 0, "fixture"))
        group = generate_subgroup(list(fx.galois), fx.n)
        idems = lagrange_idempotents(fx.algebra, fx.roots)
        rows = [{"root": k + 1, "value": to_string(r)} for k, r in enumerate(fx.roots)]
        notes = [f"|G| = {len(group)}", f"{len(idems)} primitive idempotents"]
        return _result(fx, "group", True, rows, notes=notes)

    def option_equivariance(self, params: dict) -> GaloisResult:
        fx, g = _load(params)
        tol = params.get("tolerance", 1e-9)
        rows, bad = [], []
        for sigma in all_permutations(fx.n):
            for tau in fx.galois:
                passed = galois_equivariance_check(fx, g, sigma, tau, tol)
                rows.append({"sigma": str(sigma), "tau": str(tau), "pass": passed})
                if not passed:
                    bad.append(f"({sigma}, {tau})")
        return _result(fx, "equivariance", not bad, rows,
                       errors=f"equivariance fails at {', '.join(bad)}" if bad else None,
                       notes=[f"{len(rows)} (sigma, tau) pairs checked"])

    def option_orbit(self, params: dict) -> GaloisResult:
        fx, g = _load(params)
        rows, bad = [], []
        for sigma0 in _fixed_point_free_classes(fx):
            orbit = galois_orbit(fx, sigma0)
            try:
                product = to_string(galois_orbit_product(fx, sigma0, g))
                poly = [to_string(c) for c in orbit_char_poly(fx, sigma0, g)]
                passed = True
            except ReconstructionFailed as exc:
                product, poly, passed = str(exc), [], False
                bad.append(str(sigma0))
            rows.append({"sigma0": str(sigma0), "orbit": " ".join(str(s) for s in orbit),
                         "product": product, "charPoly": poly, "pass": passed})
        return _result(fx, "orbit", not bad, rows,
                       errors=f"no rational reconstruction for {', '.join(bad)}" if bad else None)

    def option_zero(self, params: dict) -> GaloisResult:
        fx, g = _load(params)
        tol = params.get("tolerance", 1e-9)
        if params.get("sigma0"):
            sigma0 = parse_permutation(params["sigma0"], fx.n, "sigma0")
        else:
            sigma0 = self._find_zero(fx, g, tol)
        report = zero_propagation(fx, g, sigma0, require_two_transitive=not params.get("allow_intransitive"),
                                  tolerance=tol)
        failing = [r["tau"] for r in report.rows if not r["pass"]]
        return _result(fx, "zero", report.ok, report.rows,
                       errors=f"propagation fails at {', '.join(failing)}" if failing else None,
                       notes=[f"sigma0 = {report.sigma0}"] + report.notes)

    @staticmethod
    def _find_zero(fx: TorusFixture, g: Matrix, tol: float) -> Permutation:
        for sigma in all_permutations(fx.n):
            if sigma.fixed_points():
                continue
            value = psi_torus(sigma, g, fx.idems, check=False)
            if magnitude(value) <= tol:
                return sigma
        raise SchemaMismatch("no fixed-point-free sigma with Psi_sigma(g) = 0; pass sigma0 explicitly")

    def self_test(self) -> bool:
        fx = build_fixture([-5, 0, 1])
        g = Matrix.rational([[1, 2], [3, 5]])
        flip = Permutation.parse("(1 2)", 2)
        return is_2transitive(set(fx.galois), 2) and galois_equivariance_check(fx, g, flip, flip)

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
