import random
from fractions import Fraction

import numpy as np
import pytest

from app.core.errors import DegenerateQ, NotAnOrder, NotHermitian, NotPositive
from app.kernels.discriminants import (
    archimedean_discriminant,
    certificate_exponent,
    change_basis,
    gram_sqrt,
    integrality_certificate,
    is_quadratic_integer,
    make_order,
    order_discriminant,
    q_gram,
    quadratic_order,
    random_unimodular,
)
from app.kernels.etale import etale_from_poly
from app.kernels.matrices import Matrix
from app.kernels.scalars import QuadExt


@pytest.mark.parametrize("d,maximal,expected", [(3, False, 12), (5, True, 5), (5, False, 20), (10, False, 40)])
def test_quadratic_orders(d, maximal, expected):
    assert quadratic_order(d, maximal=maximal).rel_disc == expected


def test_cubic_order_matches_polynomial_discriminant():
    assert make_order(etale_from_poly([-1, -1, 0, 1])).rel_disc == -23


def test_not_an_order():
    alg = etale_from_poly([-5, 0, 1])
    with pytest.raises(NotAnOrder):
        order_discriminant([Matrix.identity(2), alg.generator * Fraction(1, 2)])


def test_unimodular_change_keeps_discriminants():
    rng = random.Random(11)
    order = quadratic_order(10)
    basis = list(order.basis)
    base_arch = archimedean_discriminant(basis)
    for _ in range(5):
        U = random_unimodular(2, rng)
        moved = change_basis(basis, U)
        assert order_discriminant(moved) == 40
        assert archimedean_discriminant(moved) == pytest.approx(base_arch, rel=1e-9)


def test_q_validation():
    basis = list(quadratic_order(10).basis)
    with pytest.raises(DegenerateQ):
        q_gram(basis, np.eye(3))
    with pytest.raises(DegenerateQ):
        q_gram(basis, np.diag([1.0, 1.0, 1.0, -1.0]))
    skew = np.eye(4, dtype=complex)
    skew[0, 1] = 1j
    with pytest.raises(DegenerateQ):
        q_gram(basis, skew)


def test_gram_sqrt():
    gram = q_gram(list(quadratic_order(10).basis))
    factor = gram_sqrt(gram)
    assert np.allclose(factor.reconstruct(), gram)
    assert all(s > 0 for s in np.diag(factor.S))
    with pytest.raises(NotHermitian):
        gram_sqrt(np.array([[1.0, 2.0], [0.0, 1.0]]))
    with pytest.raises(NotPositive):
        gram_sqrt(np.array([[1.0, 0.0], [0.0, -1.0]]))


def test_quadratic_integers():
    assert is_quadratic_integer(QuadExt(Fraction(1, 2), Fraction(1, 2), 5))
    assert not is_quadratic_integer(QuadExt(Fraction(1, 2), 0, 5))
    assert not is_quadratic_integer(QuadExt(Fraction(1, 2), Fraction(1, 2), 3))
    assert is_quadratic_integer(QuadExt(3, -2, 10))


@pytest.mark.parametrize("n,ramified,k", [(2, True, 2), (3, True, 3), (3, False, 1), (4, True, 3)])
def test_certificate_exponent(n, ramified, k):
    assert certificate_exponent(n, ramified) == k


def test_certificate_quadratic(quadratic10):
    order = quadratic_order(10)
    report = integrality_certificate(Matrix.rational([[1, -4], [0, 2]]), quadratic10, order)
    assert report.ok
    assert report.D == 40 and report.exponent == 1
    assert sorted(r["witness"] for r in report.rows) == ["3/1", "37/1"]


def test_certificate_fails_on_non_integral_lattice(quadratic10):
    report = integrality_certificate(Matrix.rational([[1, 0], [0, 3]]), quadratic10, quadratic_order(10))
    assert not report.ok
    assert any(not r["integral"] for r in report.rows)
