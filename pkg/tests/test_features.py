import json
import math

import pytest

import app_constants
from app.core.errors import SchemaMismatch
from app.core.feature_manager import FeatureManager


@pytest.fixture(scope="module")
def manager():
    manager = FeatureManager(app_constants.DEFAULTS, app_constants.APP_FEATURES)
    yield manager
    manager.shutdown()


@pytest.fixture
def invoke(manager):
    def _invoke(feature, action=None, **params):
        params.setdefault("seed", 0)
        params.setdefault("tolerance", app_constants.DEFAULT_TOLERANCE)
        return manager.invoke_feature(feature, action, params)
    return _invoke


def _path(fixtures_dir, name):
    return str(fixtures_dir / name)


def test_psi_actions(invoke, fixtures_dir):
    matrix = _path(fixtures_dir, "matrix_2x2.json")
    fixture = _path(fixtures_dir, "x2_minus_5.json")

    plain = invoke("psi", inputs=[matrix])
    assert plain.values == {"()": "-2/1", "(1 2)": "3/1"}

    on_torus = invoke("psi", "values", inputs=[matrix, fixture])
    assert on_torus.backend == "quadratic"
    assert on_torus.to_dict()["total"] == "1/1"

    assert invoke("psi", "monomials", inputs=[matrix]).ok
    assert invoke("psi", "dual", inputs=[matrix, fixture]).ok
    with pytest.raises(SchemaMismatch):
        invoke("psi", "dual", inputs=[matrix])

    fiber = invoke("psi", "fiber", inputs=[matrix])
    assert fiber.notes == ["verdict: outside identity fiber"]


def test_psi_rejects_mismatched_fixture(invoke, fixtures_dir):
    with pytest.raises(SchemaMismatch):
        invoke("psi", inputs=[_path(fixtures_dir, "matrix_3x3.json"), _path(fixtures_dir, "x2_minus_5.json")])


def test_magic_decompose(invoke, fixtures_dir):
    square = [_path(fixtures_dir, "magic_3x3.json")]
    result = invoke("magic_decompose", inputs=square)
    assert result.ok and result.line_sum == 3
    assert sum(row["mult"] for row in result.rows) == 3
    roots = invoke("magic_decompose", "roots", inputs=square).to_dict()
    assert "completeRootSet" in roots
    assert all(row["roots"] for row in roots["rows"] if row["sigma"] != "()")
    identity = [row for row in roots["rows"] if row["sigma"] == "()"]
    assert identity and identity[0]["roots"] == ""


def test_relations(invoke, fixtures_dir):
    basis = invoke("relations", n=4)
    assert basis.ok and len(basis.rows) == 14
    assert " = " in basis.rows[0]["identity"]
    checked = invoke("relations", "verify", n=3, inputs=[_path(fixtures_dir, "matrix_3x3.json")])
    assert checked.ok and checked.rows[0]["holds"]
    with pytest.raises(SchemaMismatch):
        invoke("relations", "verify", n=4, inputs=[_path(fixtures_dir, "matrix_3x3.json")])


def test_galois_verify(invoke, fixtures_dir, tmp_path):
    s3 = _path(fixtures_dir, "s3_cubic.json")
    c3 = _path(fixtures_dir, "c3_cubic.json")
    matrix = _path(fixtures_dir, "matrix_3x3.json")

    group = invoke("galois_verify", "group", inputs=[s3])
    assert len(group.galois) == 6 and group.two_transitive
    assert invoke("galois_verify", inputs=[c3, matrix]).ok
    orbit = invoke("galois_verify", "orbit", inputs=[s3, matrix])
    assert orbit.ok and orbit.rows

    in_torus = tmp_path / "torus.json"
    in_torus.write_text(json.dumps([["2", "0", "1"], ["1", "2", "1"], ["0", "1", "2"]]), encoding="utf-8")
    zero = invoke("galois_verify", "zero", inputs=[s3, str(in_torus)], sigma0="(1 2 3)")
    assert zero.ok
    found = invoke("galois_verify", "zero", inputs=[s3, str(in_torus)])
    assert found.ok


def test_discriminant(invoke, fixtures_dir):
    fixture = [_path(fixtures_dir, "x2_minus_10.json")]
    summary = invoke("discriminant", inputs=fixture)
    assert summary.rel_disc == 40
    assert summary.archimedean > 0
    assert invoke("discriminant", "gram", inputs=fixture).ok
    unimodular = invoke("discriminant", "unimodular", inputs=fixture, trials=3)
    assert unimodular.ok and len(unimodular.rows) == 3
    assert all(row["relDisc"] == 40 for row in unimodular.rows)


def test_entropy_bounds(invoke):
    assert invoke("entropy_bounds", n=2, weights=[1.0, -1.0]).to_dict()["haar"] == pytest.approx(2.0)
    powers = invoke("entropy_bounds", "powers", n=3, weights=[1.0, 0.0, -1.0], powers=3)
    assert powers.ok and [r["k"] for r in powers.rows] == [1, 2, 3]
    spaced = invoke("entropy_bounds", "spaced", n=4)
    assert [r["n"] for r in spaced.rows] == [2, 3, 4]
    rank = invoke("entropy_bounds", "rank", r_max=3)
    assert [r["N"] for r in rank.rows] == [5, 23, 59]
    with pytest.raises(SchemaMismatch):
        invoke("entropy_bounds", n=3, weights=[1.0, -1.0])


def test_threshold(invoke, fixtures_dir):
    result = invoke("threshold", D=40, weights=[1.0, -1.0]).to_dict()
    assert result["tauStar"] == pytest.approx(math.log(40) / 4)
    assert result["tauCeil"] == 1
    member = invoke("threshold", "membership", inputs=[_path(fixtures_dir, "matrix_2x2.json")], tau=1)
    assert member.to_dict()["inBall"] is False


def test_decay(invoke):
    bounds = invoke("decay", "bounds", n=2, tau_max=2)
    assert [r["tau"] for r in bounds.rows] == [1, 2]
    assert bounds.rows[0]["bound"] == pytest.approx(math.exp(-4))
    assert invoke("decay", "sample", n=3, tau_max=2, samples=20).ok
    experiment = invoke("decay", n=2, tau_max=4, samples=50)
    assert experiment.ok and len(experiment.rows) == 4


def test_pgl2_experiment(invoke):
    classes = invoke("pgl2_experiment", "classes", d=10)
    assert classes.ok and len(classes.rows) == 2
    identity = invoke("pgl2_experiment", "identity", d=10, identity_trials=5)
    assert identity.ok and identity.to_dict()["discQT"] == "40/1"
    sweep = invoke("pgl2_experiment", d_max=7)
    assert sweep.ok
    assert sweep.to_dict()["dValues"] == [2, 3, 6, 7]
    pinned = invoke("pgl2_experiment", "single", d=10, C=1.0)
    assert pinned.to_dict()["decayConstant"] == 1.0
    assert {row["tauFound"] for row in pinned.rows} == {1}
    with pytest.raises(SchemaMismatch):
        invoke("pgl2_experiment", "single")
