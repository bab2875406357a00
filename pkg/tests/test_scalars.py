import random
from fractions import Fraction

import pytest

from app.core.errors import NumericallyIndeterminate
from app.kernels.scalars import (
    UNIT_ROUNDOFF,
    NumComplex,
    QuadExt,
    is_squarefree,
    is_zero,
    squarefree_part,
    to_string,
)


def test_squarefree_part():
    assert squarefree_part(12) == (2, 3)
    assert squarefree_part(-18) == (3, -2)
    assert squarefree_part(7) == (1, 7)
    with pytest.raises(ValueError):
        squarefree_part(0)


def test_is_squarefree():
    assert is_squarefree(10)
    assert not is_squarefree(12)
    assert not is_squarefree(0)


def test_quadext_arithmetic():
    r2 = QuadExt.sqrt(2)
    assert r2 * r2 == 2
    assert QuadExt(1, 1, 2) * QuadExt(1, -1, 2) == -1
    assert 1 / QuadExt(1, 1, 2) == QuadExt(-1, 1, 2)
    assert (QuadExt(3, 2, 5) - 3) == QuadExt(0, 2, 5)
    assert QuadExt(2, 1, 3).norm() == 1
    assert QuadExt(2, 1, 3) ** -1 == QuadExt(2, -1, 3)


def test_quadext_rejects_bad_d():
    with pytest.raises(ValueError):
        QuadExt(1, 1, 4)
    with pytest.raises(ValueError):
        QuadExt(1, 1, 2) + QuadExt(1, 1, 3)


def test_quadext_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        QuadExt(1, 1, 2) / QuadExt(0, 0, 2)


def test_to_string():
    assert to_string(Fraction(3, 4)) == "3/4"
    assert to_string(2) == "2/1"
    assert to_string(QuadExt(1, 2, 5)) == "1/1 + 2/1*sqrt(5)"
    assert to_string(QuadExt(Fraction(1, 2), 0, 5)) == "1/2"


def test_numeric_zero_floor():
    assert is_zero(NumComplex(1e-13))
    assert not is_zero(NumComplex(1e-6))
    assert is_zero(NumComplex(1e-6, 0.0, 1e-5))


def test_numeric_values_compare_within_error_but_are_unhashable():
    below = NumComplex(0.4999999999995, 0.0, 1e-11)
    above = NumComplex(0.5000000000004, 0.0, 1e-11)
    assert below == above
    with pytest.raises(TypeError):
        hash(below)
    with pytest.raises(TypeError):
        {above}


def test_numeric_division_by_indistinguishable_zero():
    with pytest.raises(NumericallyIndeterminate):
        NumComplex(1.0) / NumComplex(0.0)
    with pytest.raises(NumericallyIndeterminate):
        NumComplex(1.0) / NumComplex(1e-10, 0.0, 1e-9)


def test_error_bound_covers_exact_value():
    rng = random.Random(7)
    for _ in range(500):
        x, y, z = (Fraction(rng.randint(-99, 99), rng.randint(1, 31)) for _ in range(3))
        if y == 0:
            continue
        exact = ((x + y) * z - x) / y
        approx = ((NumComplex.lift(x) + y) * z - x) / y
        slack = UNIT_ROUNDOFF * abs(float(exact))
        assert abs(approx.re - float(exact)) <= approx.eps + slack
        assert approx.im == 0.0
