# Magic Decompose Feature - Module Documentation
#
# Purpose:
# Splits a semi-magic square (non-negative integers, equal row and column sums) into a
# multiset of permutation matrices, and reports the root sets of the permutations used.
#
# Inputs (params):
# - inputs[0]: matrix file, JSON row-major integers (or "p/q" strings with q = 1)
#
# Actions:
# decompose   list of (sigma, multiplicity), with the re-summation check (default)
# roots       root set R_sigma of each part and whether the family has a complete root set
#
# Normalized Result Schema:
# {
#   "tool": "magic_decompose", "ok": true, "action": "decompose",
#   "n": 3, "lineSum": 4,
#   "rows": [{"sigma": "()", "mult": 2}, {"sigma": "(1 2 3)", "mult": 2}],
#   "resumOk": true, "errors": null, "notes": []
# }

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional

from app.core.action_menu import ActionMenu
from app.core.contracts.feature_interface import BaseFeature
from app.core.errors import SchemaMismatch
from app.core.serialization import input_path, load_matrix
from app.kernels.perms import (
    Permutation,
    SemiMagicSquare,
    birkhoff_decompose,
    has_complete_root_set,
    perm_matrix,
    resum,
    root_set,
)


@dataclass
class MagicResult:
    tool: str
    ok: bool
    action: str
    n: int
    line_sum: int
    rows: List[Dict]
    resum_ok: bool
    complete_roots: Optional[bool] = None
    errors: Optional[str] = None
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict:
        data = {
            "tool": self.tool,
            "ok": self.ok,
            "action": self.action,
            "n": self.n,
            "lineSum": self.line_sum,
            "rows": self.rows,
            "resumOk": self.resum_ok,
            "errors": self.errors,
            "notes": self.notes,
        }
        if self.complete_roots is not None:
            data["completeRootSet"] = self.complete_roots
        return data


def _load_square(params: dict) -> SemiMagicSquare:
    path = input_path(params, 0, "semi-magic square")
    M = load_matrix(path)
    if any(x.denominator != 1 for x in M.flatten()):
        raise SchemaMismatch(f"{path}: entries must be integers")
    return SemiMagicSquare.from_rows([[int(x) for x in row] for row in M.rows])


def _rootstr(sigma: Permutation) -> str:
    return " ".join(f"({j},{i})" for j, i in sorted(root_set(sigma)))


class Feature(BaseFeature):
    def __init__(self):
        self.menu = ActionMenu("Semi-magic decomposition")
        self.menu.add_action("decompose", "Permutation matrices with multiplicities", self.option_decompose)
        self.menu.add_action("roots", "Root sets of the parts", self.option_roots)

    def run_default(self, params: dict) -> MagicResult:
        return self.option_decompose(params)

    def _decompose(self, square: SemiMagicSquare):
        parts = birkhoff_decompose(square)
        resum_ok = resum(parts, square.n) == [list(r) for r in square.entries]
        return parts, resum_ok

    def option_decompose(self, params: dict) -> MagicResult:
        square = _load_square(params)
        parts, resum_ok = self._decompose(square)
        rows = [{"sigma": str(s), "mult": m} for s, m in parts]
        total = sum(m for _, m in parts)
        ok = resum_ok and total == square.line_sum
        return MagicResult("magic_decompose", ok, "decompose", square.n, square.line_sum, rows, resum_ok,
                           errors=None if ok else "re-summation does not reproduce the square",
                           notes=[f"{len(parts)} distinct permutation(s)"])

    def option_roots(self, params: dict) -> MagicResult:
        square = _load_square(params)
        parts, resum_ok = self._decompose(square)
        family = [s for s, _ in parts]
        rows = [{"sigma": str(s), "mult": m, "roots": _rootstr(s)} for s, m in parts]
        complete = has_complete_root_set(family, square.n)
        return MagicResult("magic_decompose", resum_ok, "roots", square.n, square.line_sum, rows, resum_ok,
                           complete_roots=complete)

    def self_test(self) -> bool:
        sigma = Permutation.parse("(1 2 3)", 3)
        square = perm_matrix(sigma)
        return birkhoff_decompose(square) == [(sigma, 1)]

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
