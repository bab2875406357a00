import random
from fractions import Fraction

import pytest

from app.core.errors import DegenerateForm, DNotSquarefree
from app.kernels.entropy_bowen import FlowElement
from app.kernels.etale import etale_from_poly
from app.kernels.matrices import Matrix
from app.kernels.pgl2_packets import (
    BinaryQuadraticForm,
    act,
    disc_inner_product,
    form_to_matrix,
    decay_constant,
    ideal_class_reps,
    is_reduced,
    matrix_to_form,
    packet_experiment,
    packet_sweep,
    psi_disc_identity,
    psi_disc_identity_check,
    random_invertible,
    reduced_forms,
    rho,
    smallest_separating_tau,
    torus_form,
    wide_classes,
)

Q10 = BinaryQuadraticForm.of(-10, 0, 1)


def test_torus_form_of_quadratic_algebra():
    q = torus_form(etale_from_poly([-10, 0, 1]))
    assert q.as_tuple() == (-10, 0, 1)
    assert q.disc() == 40


def test_form_matrix_correspondence():
    M = form_to_matrix(Q10)
    assert M.trace() == 0
    assert matrix_to_form(M) == Q10
    with pytest.raises(DegenerateForm):
        matrix_to_form(Matrix.identity(2))


def test_inner_product_and_action():
    assert disc_inner_product(Q10, Q10) == Q10.disc()
    assert act(Matrix.identity(2), Q10) == Q10
    g = Matrix.rational([[2, 1], [1, 1]])
    assert act(g, Q10).disc() == Q10.disc()


def test_disc_identity_on_random_matrices():
    rng = random.Random(3)
    for q in (Q10, BinaryQuadraticForm.of(1, 1, -1), BinaryQuadraticForm.of(2, 3, -4)):
        for _ in range(10):
            assert psi_disc_identity(q, random_invertible(rng))


def test_disc_identity_details():
    result = psi_disc_identity_check(Q10, Matrix.identity(2))
    assert result.ok
    assert result.lhs == 1
    assert result.scale == Fraction(1, 40)
    with pytest.raises(DegenerateForm):
        psi_disc_identity_check(BinaryQuadraticForm.of(1, 2, 1), Matrix.identity(2))


def test_reduced_forms_and_rho():
    forms = reduced_forms(40)
    assert forms
    assert all(is_reduced(q, 40) and q.disc() == 40 for q in forms)
    assert all(rho(q, 40) in forms for q in forms)
    assert len(wide_classes(40)) == 2
    with pytest.raises(DegenerateForm):
        reduced_forms(36)


def test_ideal_class_reps():
    reps = ideal_class_reps(10)
    assert len(reps) == 2
    assert all(rep.is_order_stable() for rep in reps)
    assert len(ideal_class_reps(3)) == 1
    for bad in (1, 12):
        with pytest.raises(DNotSquarefree):
            ideal_class_reps(bad)


def test_smallest_separating_tau():
    assert smallest_separating_tau(40) == 1
    assert smallest_separating_tau(1000) == 2


def test_packet_experiment_d10():
    report = packet_experiment(10, identity_trials=5, seed=0)
    assert report.ok
    assert report.D == 40
    assert report.class_number == 2
    assert len(report.rows) == 4
    assert all(row.sum_ok and row.integral for row in report.rows)
    diagonal = [row for row in report.rows if row.i == row.j]
    assert all(row.in_torus for row in diagonal)
    off = [row for row in report.rows if row.i != row.j]
    assert all(not row.in_torus and abs(row.psi_minus) >= Fraction(1, 40) for row in off)
    assert report.identity_failures == 0


def test_packet_experiment_maximal_order():
    report = packet_experiment(5, maximal=True)
    assert report.D == 5
    assert report.ok


def test_packet_sweep():
    reports = packet_sweep(11)
    assert [r.d for r in reports] == [2, 3, 6, 7, 10, 11]
    assert all(r.ok for r in reports)


def test_smallest_separating_tau_rejects_bad_constants():
    assert smallest_separating_tau(40, 0.0) == 0
    with pytest.raises(ValueError):
        smallest_separating_tau(40, float("inf"))


def test_explicit_decay_constant_sets_tau_found():
    assert {row.tau_found for row in packet_experiment(10, C=1.0).rows} == {1}
    assert {row.tau_found for row in packet_experiment(10, C=0.01).rows} == {0}


def test_decay_constant_follows_the_bowen_radius():
    a = FlowElement.from_weights([1.0, -1.0])
    narrow = packet_experiment(10, radius=0.1, seed=3)
    assert narrow.decay_constant == decay_constant(a, 0.1, seed=3)
    # |g12 g21| / det <= 0.01 / 0.8 on the radius 0.1 ball
    assert narrow.decay_constant <= 0.0125
    assert {row.tau_found for row in narrow.rows} == {0}

    wide = packet_experiment(10, radius=0.5, seed=3)
    assert wide.decay_constant > 1 / 40
    assert all(row.tau_found >= 1 for row in wide.rows)
    assert wide.to_dict()["radius"] == 0.5


def test_packet_rows_report_bowen_membership():
    report = packet_experiment(10, seed=0)
    for row in report.rows:
        assert row.in_bowen_ball == (row.i == row.j)
        assert row.separated
        assert row.to_dict()["inBowenBall"] == row.in_bowen_ball
