import math

import numpy as np
import pytest

from app.core.errors import SingularMatrix, ZeroEntropy
from app.kernels.entropy_bowen import (
    BowenSpec,
    FlowElement,
    ball_membership,
    bowen_membership,
    conjugate_by_flow,
    decay_experiment,
    entropy_bounds,
    haar_entropy,
    psi_decay_bound,
    rank_obstruction,
    sample_bowen_ball,
    separation_threshold,
    spaced_flow,
)
from app.kernels.perms import Permutation

A2 = FlowElement.from_weights([1.0, -1.0])


def test_flow_is_mean_centered():
    a = FlowElement.from_weights([3.0, 1.0])
    assert a.log_weights == (1.0, -1.0)
    assert a.root(1, 2) == 2.0
    assert a.power(3).log_weights == (3.0, -3.0)


def test_entropy_bounds_for_standard_flow():
    bounds = entropy_bounds(spaced_flow(3))
    assert bounds.haar == pytest.approx(4.0)
    assert bounds.new_bound == pytest.approx(1.0)
    assert bounds.elmv_bound == pytest.approx(0.5)
    assert haar_entropy(spaced_flow(2)) == pytest.approx(1.0)


def test_new_bound_scales_with_powers():
    for k in (1, 2, 5):
        assert entropy_bounds(spaced_flow(4).power(k)).new_bound == pytest.approx(k * entropy_bounds(spaced_flow(4)).new_bound)


def test_bowen_spec_validation():
    with pytest.raises(ValueError):
        BowenSpec(0.0, -1, 1)
    with pytest.raises(ValueError):
        BowenSpec(0.1, 2, 2)
    assert BowenSpec.symmetric(0.1, 3) == BowenSpec(0.1, -3, 3)


def test_conjugation_scales_off_diagonal():
    g = np.array([[1.0, 1.0], [1.0, 1.0]])
    h = conjugate_by_flow(g, A2, 1.0)
    assert h[0, 1] == pytest.approx(math.exp(-2))
    assert h[1, 0] == pytest.approx(math.exp(2))
    assert h[0, 0] == 1.0


def test_bowen_membership():
    spec = BowenSpec.symmetric(0.1, 1)
    assert bowen_membership(np.eye(2), A2, spec)
    assert bowen_membership(-np.eye(2), A2, spec)
    assert not bowen_membership(-np.eye(2), A2, spec, mode="gl")
    assert not bowen_membership([[1.0, 0.05], [0.0, 1.0]], A2, spec)
    assert bowen_membership([[1.0, 0.001], [0.0, 1.0]], A2, spec)
    with pytest.raises(SingularMatrix):
        bowen_membership(np.zeros((2, 2)), A2, spec)


def test_plain_ball_membership():
    assert ball_membership(np.eye(2) * 3, 0.1)
    assert ball_membership(-np.eye(2), 0.1)
    assert not ball_membership(-np.eye(2), 0.1, mode="gl")
    assert not ball_membership([[1.0, 0.2], [0.0, 1.0]], 0.1)
    with pytest.raises(SingularMatrix):
        ball_membership(np.zeros((2, 2)), 0.1)


def test_samples_land_in_the_ball():
    rng = np.random.default_rng(0)
    a = spaced_flow(3)
    spec = BowenSpec.symmetric(0.1, 2)
    for _ in range(50):
        assert bowen_membership(sample_bowen_ball(a, spec, rng), a, spec, mode="gl")


def test_decay_bound_for_transposition():
    flip = Permutation.parse("(1 2)", 2)
    assert psi_decay_bound(flip, A2, BowenSpec.symmetric(0.1, 1)) == pytest.approx(math.exp(-4))
    assert psi_decay_bound(Permutation.identity(2), A2, BowenSpec.symmetric(0.1, 1)) == 1.0


def test_separation_threshold():
    assert separation_threshold(math.exp(4), 1, A2) == pytest.approx(1.0)
    with pytest.raises(ZeroEntropy):
        separation_threshold(40, 1, FlowElement.from_weights([2.0, 2.0]))
    with pytest.raises(ValueError):
        separation_threshold(0, 1, A2)


@pytest.mark.parametrize("R,value", [(1, 5), (2, 23), (3, 59)])
def test_rank_obstruction(R, value):
    assert rank_obstruction(R) == value


def test_rank_obstruction_rejects_zero():
    with pytest.raises(ValueError):
        rank_obstruction(0)


def test_decay_experiment_is_bounded():
    report = decay_experiment(A2, [0, 1, 2, 3, 4, 5], radius=0.1, samples=200, seed=7)
    assert report.bounded
    assert report.ok
    assert [r.tau for r in report.rows] == [0, 1, 2, 3, 4, 5]
    assert report.constant < 0.1
    assert report.to_dict()["rows"][0]["samples"] == 200
