"""
Loaders for the JSON inputs: rationals as "p/q" strings, matrices as row-major arrays,
permutations in cycle notation, polynomials constant term first, and fixture files.
Every parse error carries the position of the offending value.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from app.core.errors import InputParseError, SchemaMismatch
from app.kernels.matrices import Matrix
from app.kernels.perms import Permutation
from app.kernels.scalars import to_string
from app.kernels.tori_galois import TorusFixture, build_fixture

FIXTURE_KEYS = {"f", "galois", "order_basis", "q"}


def parse_rational(value: Any, where: str = "value") -> Fraction:
    if isinstance(value, bool):
        raise InputParseError(f"{where}: expected a rational, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise InputParseError(f"{where}: cannot parse {value!r} as p/q") from None
    raise InputParseError(f"{where}: expected a \"p/q\" string or an integer, got {type(value).__name__}")


def parse_matrix(data: Any, where: str = "matrix") -> Matrix:
    if not isinstance(data, list) or not data or not all(isinstance(r, list) for r in data):
        raise SchemaMismatch(f"{where}: expected a non-empty array of rows")
    n = len(data)
    for i, row in enumerate(data):
        if len(row) != n:
            raise SchemaMismatch(f"{where}[{i}]: row has {len(row)} entries, expected {n}")
    return Matrix([[parse_rational(x, f"{where}[{i}][{j}]") for j, x in enumerate(row)]
                   for i, row in enumerate(data)])


def parse_polynomial(data: Any, where: str = "f") -> List[Fraction]:
    if not isinstance(data, list) or len(data) < 2:
        raise SchemaMismatch(f"{where}: expected a coefficient list of length >= 2")
    coeffs = [parse_rational(c, f"{where}[{k}]") for k, c in enumerate(data)]
    if any(c.denominator != 1 for c in coeffs):
        raise SchemaMismatch(f"{where}: coefficients must be integers")
    return coeffs


def parse_permutation(text: Any, n: int, where: str = "permutation") -> Permutation:
    if not isinstance(text, str):
        raise SchemaMismatch(f"{where}: expected cycle notation string, got {type(text).__name__}")
    try:
        return Permutation.parse(text, n)
    except InputParseError as exc:
        raise InputParseError(f"{where}: {exc}") from None


def _parse_complex(value: Any, where: str) -> complex:
    if isinstance(value, list) and len(value) == 2:
        return complex(float(parse_rational_or_float(value[0], where)), float(parse_rational_or_float(value[1], where)))
    return complex(float(parse_rational_or_float(value, where)))


def parse_rational_or_float(value: Any, where: str) -> float:
    if isinstance(value, float):
        return value
    return float(parse_rational(value, where))


def load_json(path: str) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputParseError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def load_matrix(path: str) -> Matrix:
    return parse_matrix(load_json(path), where=path)


def parse_fixture(data: Any, where: str = "fixture") -> Dict:
    """Validated fixture dict: f (coefficients), galois (perms or None), order_basis, q (numpy or None)."""
    if not isinstance(data, dict):
        raise SchemaMismatch(f"{where}: expected a JSON object")
    unknown = set(data) - FIXTURE_KEYS
    if unknown:
        raise SchemaMismatch(f"{where}: unknown keys {sorted(unknown)}")
    if "f" not in data:
        raise SchemaMismatch(f"{where}: missing key 'f'")
    f = parse_polynomial(data["f"], f"{where}.f")
    n = len(f) - 1
    galois: Optional[List[Permutation]] = None
    if data.get("galois") is not None:
        if not isinstance(data["galois"], list):
            raise SchemaMismatch(f"{where}.galois: expected a list of cycle strings")
        galois = [parse_permutation(p, n, f"{where}.galois[{k}]") for k, p in enumerate(data["galois"])]
    order_basis: Optional[List[Matrix]] = None
    if data.get("order_basis") is not None:
        if not isinstance(data["order_basis"], list) or len(data["order_basis"]) != n:
            raise SchemaMismatch(f"{where}.order_basis: expected {n} matrices")
        order_basis = [parse_matrix(m, f"{where}.order_basis[{k}]") for k, m in enumerate(data["order_basis"])]
        if any(m.n != n for m in order_basis):
            raise SchemaMismatch(f"{where}.order_basis: matrices must be {n}x{n}")
    q = None
    if data.get("q") is not None:
        rows = data["q"]
        if not isinstance(rows, list) or len(rows) != n * n:
            raise SchemaMismatch(f"{where}.q: expected a {n * n}x{n * n} matrix")
        q = np.array([[_parse_complex(x, f"{where}.q[{i}][{j}]") for j, x in enumerate(r)]
                      for i, r in enumerate(rows)])
    return {"f": f, "galois": galois, "order_basis": order_basis, "q": q}


def load_fixture(path: str) -> Dict:
    return parse_fixture(load_json(path), where=path)


def dump_matrix(M: Matrix) -> List[List[str]]:
    return [[to_string(x) for x in row] for row in M.rows]


def dump_values(values: Dict, keys: Optional[Sequence] = None) -> Dict[str, str]:
    keys = sorted(values) if keys is None else keys
    return {str(k): to_string(values[k]) for k in keys}


def load_torus_fixture(path: str) -> TorusFixture:
    """Fixture file -> TorusFixture (backend, roots, Galois group, idempotents)."""
    spec = load_fixture(path)
    return build_fixture(spec["f"], spec["galois"], spec["order_basis"], spec["q"])


def input_path(params: Dict, index: int, what: str) -> str:
    inputs = params.get("inputs") or []
    if len(inputs) <= index:
        raise SchemaMismatch(f"missing input file: {what}")
    return inputs[index]
