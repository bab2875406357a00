import json
from fractions import Fraction

import pytest

from app.core.errors import InputParseError, SchemaMismatch
from app.core.serialization import (
    dump_matrix,
    dump_values,
    input_path,
    load_fixture,
    load_json,
    load_matrix,
    load_torus_fixture,
    parse_fixture,
    parse_matrix,
    parse_permutation,
    parse_polynomial,
    parse_rational,
)
from app.kernels.matrices import Matrix


def test_parse_rational():
    assert parse_rational("3/40") == Fraction(3, 40)
    assert parse_rational(" -2 ") == -2
    assert parse_rational(7) == 7
    for bad in ("1/0", "abc", True, 0.5, None):
        with pytest.raises(InputParseError):
            parse_rational(bad)


def test_parse_matrix_reports_position():
    assert parse_matrix([["1", "2"], ["3", "4"]]) == Matrix.rational([[1, 2], [3, 4]])
    with pytest.raises(SchemaMismatch, match=r"m\[1\]"):
        parse_matrix([["1", "2"], ["3"]], "m")
    with pytest.raises(InputParseError, match=r"m\[0\]\[1\]"):
        parse_matrix([["1", "x"], ["3", "4"]], "m")
    with pytest.raises(SchemaMismatch):
        parse_matrix([])


def test_parse_polynomial():
    assert parse_polynomial([-5, 0, 1]) == [-5, 0, 1]
    with pytest.raises(SchemaMismatch):
        parse_polynomial(["1/2", 1])
    with pytest.raises(SchemaMismatch):
        parse_polynomial([1])


def test_parse_permutation_prefixes_location():
    assert str(parse_permutation("(1 2)", 3)) == "(1 2)"
    with pytest.raises(InputParseError, match="galois"):
        parse_permutation("(1 5)", 3, "galois")
    with pytest.raises(SchemaMismatch):
        parse_permutation(12, 3)


def test_parse_fixture():
    spec = parse_fixture({"f": [-1, -1, 0, 1], "galois": ["(1 2 3)", "(1 2)"]})
    assert spec["f"] == [-1, -1, 0, 1]
    assert [str(p) for p in spec["galois"]] == ["(1 2 3)", "(1 2)"]
    assert spec["order_basis"] is None and spec["q"] is None
    with pytest.raises(SchemaMismatch, match="unknown keys"):
        parse_fixture({"f": [-5, 0, 1], "extra": 1})
    with pytest.raises(SchemaMismatch, match="missing key"):
        parse_fixture({"galois": []})
    with pytest.raises(SchemaMismatch):
        parse_fixture({"f": [-5, 0, 1], "q": [[1, 0], [0, 1]]})


def test_fixture_with_hermitian_form():
    q = [[1 if i == j else 0 for j in range(4)] for i in range(4)]
    spec = parse_fixture({"f": [-5, 0, 1], "q": q})
    assert spec["q"].shape == (4, 4)


def test_load_files(fixtures_dir, tmp_path):
    assert load_matrix(str(fixtures_dir / "matrix_2x2.json")).det() == -2
    assert load_fixture(str(fixtures_dir / "x2_minus_5.json"))["f"] == [-5, 0, 1]
    fx = load_torus_fixture(str(fixtures_dir / "s3_cubic.json"))
    assert len(fx.galois) == 6

    broken = tmp_path / "broken.json"
    broken.write_text("[[1, 2]", encoding="utf-8")
    with pytest.raises(InputParseError, match="line 1"):
        load_json(str(broken))
    with pytest.raises(InputParseError):
        load_json(str(tmp_path / "missing.json"))


def test_dumps():
    M = Matrix.rational([[Fraction(1, 2), 0], [3, -1]])
    assert dump_matrix(M) == [["1/2", "0/1"], ["3/1", "-1/1"]]
    assert dump_values({"b": Fraction(1, 3), "a": 2}) == {"a": "2/1", "b": "1/3"}
    assert json.dumps(dump_matrix(M))


def test_input_path():
    assert input_path({"inputs": ["a.json"]}, 0, "matrix") == "a.json"
    with pytest.raises(SchemaMismatch, match="lambda"):
        input_path({"inputs": ["a.json"]}, 1, "lambda")
