import dataclasses
import math
import random
from fractions import Fraction

import pytest

from app.core.errors import (
    GaloisSpecInvalid,
    GaloisSpecRequired,
    PreconditionsFailed,
    ReconstructionFailed,
    TauNotInGalois,
)
from app.kernels.etale import automorphism_matrix
from app.kernels.generators import psi_torus
from app.kernels.matrices import Matrix
from app.kernels.perms import Permutation, all_permutations
from app.kernels.scalars import magnitude
from app.kernels.tori_galois import (
    build_fixture,
    conjugation_permutation,
    default_denominator_bound,
    galois_equivariance_check,
    galois_orbit,
    galois_orbit_product,
    is_galois_element,
    orbit_char_poly,
    rational_reconstruct,
    relative_discriminant,
    resolvent_galois_group,
    zero_propagation,
)

LAMBDA_D10 = Matrix.rational([[1, -4], [0, 2]])
FLIP = Permutation.parse("(1 2)", 2)


def _integer_matrix(n, rng):
    while True:
        g = Matrix.rational([[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)])
        if g.det() != 0:
            return g


def test_backends(quadratic10, s3_cubic, c3_cubic):
    assert quadratic10.backend == "quadratic"
    assert len(quadratic10.galois) == 2
    assert s3_cubic.backend == "numeric"
    assert len(s3_cubic.galois) == 6 and s3_cubic.is_two_transitive()
    assert len(c3_cubic.galois) == 3 and not c3_cubic.is_two_transitive()

    split = build_fixture([2, -3, 1])
    assert split.backend == "rational"
    assert [str(t) for t in split.galois] == ["()"]


def test_reducible_cubic_gets_a_transposition():
    fx = build_fixture([-2, 1, -2, 1])  # (x - 2)(x^2 + 1)
    assert len(fx.galois) == 2
    assert not fx.is_two_transitive()


def test_galois_spec_validation():
    with pytest.raises(GaloisSpecInvalid):
        build_fixture([-5, 0, 1], galois_spec=[Permutation.identity(2)])
    with pytest.raises(GaloisSpecRequired):
        build_fixture([-2, 0, 0, 0, 1])
    fx = build_fixture([-1, -1, 0, 1], galois_spec=[Permutation.parse("(1 2 3)", 3), FLIP_3])
    assert len(fx.galois) == 6


FLIP_3 = Permutation.parse("(1 2)", 3)


def test_quadratic_equivariance_exact(quadratic10):
    rng = random.Random(5)
    for _ in range(20):
        g = _integer_matrix(2, rng)
        for sigma in all_permutations(2):
            for tau in quadratic10.galois:
                assert galois_equivariance_check(quadratic10, g, sigma, tau)


def test_cubic_equivariance_numeric(s3_cubic):
    rng = random.Random(6)
    for _ in range(5):
        g = _integer_matrix(3, rng)
        for sigma in all_permutations(3):
            for tau in s3_cubic.galois:
                assert galois_equivariance_check(s3_cubic, g, sigma, tau, 1e-9)


def test_tau_outside_group(c3_cubic):
    g = Matrix.identity(3)
    with pytest.raises(TauNotInGalois):
        galois_equivariance_check(c3_cubic, g, FLIP_3, FLIP_3)


def test_rational_reconstruct():
    assert rational_reconstruct(0.075, 1e-12, 100) == Fraction(3, 40)
    with pytest.raises(ReconstructionFailed):
        rational_reconstruct(math.pi, 1e-12, 100)


def test_orbit_product_quadratic(quadratic10):
    assert galois_orbit(quadratic10, FLIP) == [FLIP]
    assert galois_orbit_product(quadratic10, FLIP, LAMBDA_D10) == Fraction(3, 40)
    assert orbit_char_poly(quadratic10, FLIP, LAMBDA_D10) == [Fraction(-3, 40), 1]
    assert relative_discriminant(quadratic10) == 40


def test_orbit_product_cubic_is_rational(s3_cubic):
    g = Matrix.rational([[1, 2, 0], [0, 1, 3], [1, 0, 1]])
    sigma0 = Permutation.parse("(1 2 3)", 3)
    assert len(galois_orbit(s3_cubic, sigma0)) == 2
    product = galois_orbit_product(s3_cubic, sigma0, g)
    direct = psi_torus(sigma0, g, s3_cubic.idems) * psi_torus(sigma0.inverse(), g, s3_cubic.idems)
    assert isinstance(product, Fraction)
    assert abs(float(product) - direct.re) < 1e-8
    poly = orbit_char_poly(s3_cubic, sigma0, g)
    assert poly[0] == product and poly[-1] == 1


def test_zero_propagation_s3(s3_cubic):
    g = s3_cubic.algebra.generator + Matrix.identity(3) * 2
    report = zero_propagation(s3_cubic, g, Permutation.parse("(1 2 3)", 3))
    assert report.ok
    assert report.two_transitive
    assert [r["expected"] for r in report.rows] == [1, 0, 0, 0, 0, 0]


def test_zero_propagation_preconditions(s3_cubic, c3_cubic):
    g = s3_cubic.algebra.generator + Matrix.identity(3) * 2
    with pytest.raises(PreconditionsFailed):
        zero_propagation(s3_cubic, g, FLIP_3)
    with pytest.raises(PreconditionsFailed):
        zero_propagation(s3_cubic, Matrix.rational([[1, 2, 0], [0, 1, 3], [1, 0, 1]]),
                         Permutation.parse("(1 2 3)", 3))
    with pytest.raises(PreconditionsFailed):
        zero_propagation(c3_cubic, Matrix.identity(3), Permutation.parse("(1 2 3)", 3))


def test_zero_does_not_propagate_without_two_transitivity(c3_cubic):
    w = automorphism_matrix(c3_cubic.algebra, [2, 0, -1])
    cycles = [Permutation.parse("(1 2 3)", 3), Permutation.parse("(1 3 2)", 3)]
    values = [magnitude(psi_torus(s, w, c3_cubic.idems)) for s in cycles]
    assert sorted(round(v, 9) for v in values) == [0.0, 1.0]
    sigma0 = cycles[values.index(min(values))]
    report = zero_propagation(c3_cubic, w, sigma0, require_two_transitive=False)
    assert not report.ok
    assert any("not 2-transitive" in note for note in report.notes)


CYCLES_3 = {Permutation.identity(3), Permutation.parse("(1 2 3)", 3), Permutation.parse("(1 3 2)", 3)}


def test_resolvent_finds_the_galois_group(s3_cubic, c3_cubic):
    assert resolvent_galois_group(c3_cubic.algebra.f, c3_cubic.roots) == CYCLES_3
    assert resolvent_galois_group(s3_cubic.algebra.f, s3_cubic.roots) == set(all_permutations(3))
    reducible = build_fixture([-2, 1, -2, 1])
    assert resolvent_galois_group(reducible.algebra.f, reducible.roots) == set(reducible.galois)


def test_galois_spec_must_not_exceed_the_galois_group():
    with pytest.raises(GaloisSpecInvalid):
        build_fixture([-1, -3, 0, 1], galois_spec=[Permutation.parse("(1 2 3)", 3), FLIP_3])
    with pytest.raises(GaloisSpecInvalid):
        build_fixture([-1, -1, 0, 1], galois_spec=[Permutation.parse("(1 2 3)", 3)])
    cyclic = build_fixture([-1, -3, 0, 1], galois_spec=[Permutation.parse("(1 2 3)", 3)])
    assert set(cyclic.galois) == CYCLES_3


def test_conjugation_permutation(s3_cubic, c3_cubic):
    assert conjugation_permutation(c3_cubic).is_identity()
    swap = conjugation_permutation(s3_cubic)
    assert len(swap.fixed_points()) == 1
    assert swap * swap == Permutation.identity(3)


def test_equivariance_fails_for_a_non_automorphism(c3_cubic):
    oversized = dataclasses.replace(c3_cubic, galois=tuple(sorted(all_permutations(3))))
    assert not is_galois_element(oversized, FLIP_3)
    assert is_galois_element(oversized, Permutation.parse("(1 2 3)", 3))
    g = Matrix.rational([[1, 2, 0], [0, 1, 3], [1, 0, 1]])
    sigma = Permutation.parse("(1 2 3)", 3)
    assert not galois_equivariance_check(oversized, g, sigma, FLIP_3)
    assert galois_equivariance_check(c3_cubic, g, sigma, Permutation.parse("(1 3 2)", 3))


def test_default_denominator_bound(quadratic10):
    assert default_denominator_bound(quadratic10, Matrix.identity(2), 1) == 40
    assert default_denominator_bound(quadratic10, Matrix.identity(2), 2) == 1600
    assert default_denominator_bound(quadratic10, LAMBDA_D10, 1) == 80
