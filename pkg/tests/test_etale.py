from fractions import Fraction

import pytest

from app.core.errors import NotSquarefree
from app.kernels.etale import (
    automorphism_matrix,
    companion_matrix,
    dual_basis,
    etale_from_matrix,
    etale_from_poly,
    eval_poly_at_matrix,
    is_squarefree_poly,
    poly_discriminant,
    trd,
)
from app.kernels.matrices import Matrix


def test_companion_matrix():
    M = companion_matrix([-5, 0, 1])
    assert M == Matrix.rational([[0, 5], [1, 0]])
    assert M * M == Matrix.identity(2) * 5


def test_squarefree_and_monic():
    assert is_squarefree_poly([-1, -1, 0, 1])
    assert not is_squarefree_poly([1, 2, 1])
    with pytest.raises(NotSquarefree):
        etale_from_poly([1, 2, 1])
    with pytest.raises(ValueError):
        etale_from_poly([1, 0, 2])


def test_poly_discriminant():
    assert poly_discriminant([-1, -1, 0, 1]) == -23
    assert poly_discriminant([-1, -3, 0, 1]) == 81
    assert poly_discriminant([-10, 0, 1]) == 40


def test_generator_satisfies_f():
    alg = etale_from_poly([-1, -1, 0, 1])
    assert eval_poly_at_matrix(alg.f, alg.generator).is_zero()
    assert alg.order == alg.basis_matrices


def test_dual_basis():
    alg = etale_from_poly([-1, -1, 0, 1])
    basis = list(alg.order)
    dual = dual_basis(alg, basis)
    for i, bi in enumerate(dual):
        for j, bj in enumerate(basis):
            assert trd(bi * bj) == (1 if i == j else 0)


def test_coordinates():
    alg = etale_from_poly([-5, 0, 1])
    X = alg.element([Fraction(3), Fraction(-2)])
    assert alg.coordinates(X) == [3, -2]
    with pytest.raises(ValueError):
        alg.coordinates(Matrix.unit(2, 0, 1))


def test_automorphism_of_cyclic_cubic():
    alg = etale_from_poly([-1, -3, 0, 1])
    w = automorphism_matrix(alg, [2, 0, -1])
    image = eval_poly_at_matrix([2, 0, -1], alg.generator)
    assert w * alg.generator == image * w
    assert w.det() != 0


def test_etale_from_matrix():
    alg = etale_from_matrix(Matrix.rational([[0, 10], [1, 0]]))
    assert list(alg.f) == [-10, 0, 1]
