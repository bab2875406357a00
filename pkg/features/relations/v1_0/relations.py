# Relations Feature - Module Documentation
#
# Purpose:
# Computes a Z-basis of the integer relations f: S_n -> Z between the monomial generators
# Psi1_sigma, i.e. the kernel of the linear map f -> sum_sigma f(sigma) P^sigma. Each basis
# vector gives a multiplicative identity prod Psi1^{f+} = prod Psi1^{f-}.
#
# Actions:
# basis    basis vectors as {cycle-notation: coefficient} (default), rank checked against
#          n! - (n-1)^2 - 1
# verify   checks every basis relation on seeded random rational matrices, or on the
#          matrix file passed as input
#
# Params: n (2..5), trials (verify), seed.

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from app.core.action_menu import ActionMenu
from app.core.contracts.feature_interface import BaseFeature
from app.core.errors import SchemaMismatch
from app.core.serialization import load_matrix
from app.kernels.relations import (
    RelationVector,
    expected_relation_count,
    relation_kernel_basis,
    relation_monomials,
    verify_random,
    verify_relation,
)


@dataclass
class RelationsResult:
    tool: str
    ok: bool
    action: str
    n: int
    relations: List[Dict[str, int]]
    expected: int
    rows: List[Dict] = field(default_factory=list)
    errors: Optional[str] = None
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict:
        return {
            "tool": self.tool,
            "ok": self.ok,
            "action": self.action,
            "n": self.n,
            "relations": self.relations,
            "expected": self.expected,
            "rows": self.rows,
            "errors": self.errors,
            "notes": self.notes,
        }


def _monomial_string(exponents) -> str:
    parts = [f"Psi1{s}" + (f"^{e}" if e != 1 else "") for s, e in sorted(exponents.items())]
    return " * ".join(parts) or "1"


def _row(k: int, r: RelationVector) -> Dict:
    pos, neg = relation_monomials(r)
    return {
        "index": k,
        "relation": json.dumps(r.to_dict(), sort_keys=True),
        "identity": f"{_monomial_string(pos)} = {_monomial_string(neg)}",
    }


class Feature(BaseFeature):
    def __init__(self):
        self.menu = ActionMenu("Relation lattice")
        self.menu.add_action("basis", "Z-basis of the relation lattice", self.option_basis)
        self.menu.add_action("verify", "Randomized verification of the basis", self.option_verify)

    def run_default(self, params: dict) -> RelationsResult:
        return self.option_basis(params)

    def option_basis(self, params: dict) -> RelationsResult:
        n = int(params["n"])
        basis = relation_kernel_basis(n)
        expected = expected_relation_count(n)
        ok = len(basis) == expected
        return RelationsResult("relations", ok, "basis", n, [r.to_dict() for r in basis], expected,
                               rows=[_row(k, r) for k, r in enumerate(basis)],
                               errors=None if ok else f"found {len(basis)} relations, expected {expected}")

    def option_verify(self, params: dict) -> RelationsResult:
        n = int(params["n"])
        inputs = params.get("inputs") or []
        if inputs:
            g = load_matrix(inputs[0])
            if g.n != n:
                raise SchemaMismatch(f"{inputs[0]}: expected a {n}x{n} matrix")
            basis = relation_kernel_basis(n)
            rows = [dict(_row(k, r), holds=verify_relation(r, g)) for k, r in enumerate(basis)]
            failed = [str(row["index"]) for row in rows if not row["holds"]]
            return RelationsResult("relations", not failed, "verify", n, [r.to_dict() for r in basis],
                                   expected_relation_count(n), rows=rows,
                                   errors=f"relations {', '.join(failed)} fail on {inputs[0]}" if failed else None)

        trials = int(params.get("trials") or 200)
        summary = verify_random(n, trials, seed=int(params.get("seed", 0)))
        rows = [{"trial": f["trial"], "relation": f["relation"]} for f in summary["failures"]]
        return RelationsResult(
            "relations", summary["ok"], "verify", n, [], summary["expected"], rows=rows,
            errors=None if summary["ok"] else f"{len(rows)} failing (trial, relation) pairs",
            notes=[f"{summary['relations']} relations checked on {trials} matrices (seed {summary['seed']})"],
        )

    def self_test(self) -> bool:
        basis = relation_kernel_basis(3)
        return len(basis) == 1 and sorted(abs(c) for c in basis[0].to_dict().values()) == [1] * 6

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
