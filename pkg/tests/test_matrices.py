from fractions import Fraction

import pytest

from app.core.errors import SingularMatrix
from app.kernels.matrices import Matrix, adjugate2, content_normalize, det, elimination_det, leibniz_det
from app.kernels.relations import random_rational_matrix
from app.kernels.scalars import QuadExt


def test_det_2x2():
    g = Matrix.rational([[1, 2], [3, 4]])
    assert det(g) == -2
    assert leibniz_det(g) == -2


def test_bareiss_matches_leibniz(rng):
    for n in (1, 2, 3, 4):
        for _ in range(50):
            g = random_rational_matrix(n, rng)
            assert det(g) == leibniz_det(g)


def test_det_with_zero_pivot():
    g = Matrix.rational([[0, 1, 2], [1, 0, 3], [4, -3, 8]])
    assert det(g) == leibniz_det(g) == -2


def test_det_over_quadratic_field():
    r2 = QuadExt.sqrt(2)
    g = Matrix([[r2, QuadExt(1, 0, 2)], [QuadExt(1, 0, 2), r2]])
    assert elimination_det(g) == 1
    assert leibniz_det(g) == 1


def test_inverse(rng):
    for _ in range(20):
        g = random_rational_matrix(3, rng)
        if det(g) == 0:
            continue
        assert g * g.inverse() == Matrix.identity(3)


def test_singular_inverse():
    with pytest.raises(SingularMatrix):
        Matrix.rational([[1, 2], [2, 4]]).inverse()


def test_adjugate():
    g = Matrix.rational([[1, 2], [3, 4]])
    assert adjugate2(g) == Matrix.rational([[4, -2], [-3, 1]])
    assert g * adjugate2(g) == Matrix.identity(2) * det(g)


def test_content_normalize():
    M = Matrix.rational([[Fraction(-1, 2), 1], [0, Fraction(3, 2)]])
    assert content_normalize(M).rows == ((1, -2), (0, -3))


def test_non_square_rejected():
    with pytest.raises(ValueError):
        Matrix([[1, 2], [3]])
