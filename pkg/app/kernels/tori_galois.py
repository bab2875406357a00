"""
Torus fixtures: an etale algebra with its roots in a coefficient backend, the Galois
group acting on root indices and the Lagrange idempotents.

Backends
- rational : f splits over Q; exact Fractions, Galois group trivial.
- quadratic: irreducible quadratic f; exact QuadExt, Galois group S_2.
- numeric  : degree >= 3; NumComplex roots from numpy, polished by Newton steps.

A Galois group given with a numeric fixture is checked to be exactly the Galois group:
against a resolvent evaluated with mpmath up to degree 4, against the order sympy
computes for degrees 5 and 6.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Dict, List, Optional, Sequence, Tuple

import mpmath
import numpy as np
import sympy
from sympy.polys.numberfields.galoisgroups import galois_group

import app_constants
from app.core.errors import (
    DegreeTooLarge,
    GaloisSpecInvalid,
    GaloisSpecRequired,
    NumericallyIndeterminate,
    PreconditionsFailed,
    ReconstructionFailed,
    RepeatedRoots,
    RootResidualTooLarge,
    TauNotInGalois,
)
from app.kernels.etale import EtaleAlgebra, etale_from_poly, poly_discriminant, to_sympy_poly, trace_gram
from app.kernels.generators import check_idempotents, psi_torus
from app.kernels.matrices import Matrix, det
from app.kernels.perms import (
    Permutation,
    all_permutations,
    conjugacy_class,
    generate_subgroup,
    is_2transitive,
    is_group,
)
from app.kernels.scalars import (
    UNIT_ROUNDOFF,
    NumComplex,
    QuadExt,
    Scalar,
    as_fraction,
    is_zero,
    magnitude,
    squarefree_part,
    to_string,
)

logger = logging.getLogger(__name__)

_RESOLVENT_X = sympy.Symbol("X")


@dataclass(frozen=True)
class TorusFixture:
    algebra: EtaleAlgebra
    backend: str
    roots: tuple
    galois: tuple
    idems: tuple
    hermitian_q: Optional[np.ndarray] = field(default=None, compare=False)

    @property
    def n(self) -> int:
        return self.algebra.n

    def galois_set(self) -> set:
        return set(self.galois)

    def is_two_transitive(self) -> bool:
        return self.n >= 2 and is_2transitive(set(self.galois), self.n)


# =============================
# Polynomial helpers
# =============================
def _horner(coeffs: Sequence, x):
    value = x * 0
    for c in reversed(list(coeffs)):
        value = value * x + c
    return value


def _derivative(coeffs: Sequence) -> List:
    return [k * c for k, c in enumerate(coeffs)][1:]


def _is_rational_square(q: Fraction) -> bool:
    if q < 0:
        return False
    return math.isqrt(q.numerator) ** 2 == q.numerator and math.isqrt(q.denominator) ** 2 == q.denominator


def _rational_roots(coeffs: Sequence[Fraction]) -> Optional[List[Fraction]]:
    """All roots if f splits over Q, else None."""
    _, factors = to_sympy_poly(coeffs).factor_list()
    if any(p.degree() != 1 for p, _ in factors):
        return None
    roots = []
    for p, _ in factors:
        a, b = p.all_coeffs()
        roots.append(-Fraction(str(b)) / Fraction(str(a)))
    return sorted(roots)


def numeric_roots(coeffs: Sequence[Fraction], newton_steps: int = 3) -> List[NumComplex]:
    """Roots from numpy, polished by Newton, each tagged with an a-posteriori error bound."""
    fc = [float(c) for c in coeffs]
    dc = _derivative(fc)
    approx = np.roots(list(reversed(fc)))
    polished = []
    for z in approx:
        z = complex(z)
        for _ in range(newton_steps):
            dz = _horner(dc, z)
            if dz == 0:
                break
            z = z - _horner(fc, z) / dz
        if abs(z.imag) <= 64 * UNIT_ROUNDOFF * max(1.0, abs(z)):
            z = complex(z.real, 0.0)
        residual = abs(_horner(fc, z))
        slope = abs(_horner(dc, z))
        if slope == 0.0:
            raise RepeatedRoots(f"derivative vanishes at root {z}")
        eps = 2.0 * residual / slope + 16 * UNIT_ROUNDOFF * max(1.0, abs(z))
        polished.append(NumComplex(z.real, z.imag, eps))
    polished.sort(key=lambda r: (round(r.re, 9), r.im))
    return polished


# =============================
# Idempotents
# =============================
def lagrange_idempotents(algebra: EtaleAlgebra, roots: Sequence[Scalar]) -> List[Matrix]:
    n = algebra.n
    if len(roots) != n:
        raise RepeatedRoots(f"expected {n} roots, got {len(roots)}")
    if n == 1:
        return [Matrix.identity(1)]
    for i, theta in enumerate(roots):
        if not is_zero(_horner(algebra.f, theta)):
            raise RootResidualTooLarge(f"|f(root_{i + 1})| = {magnitude(_horner(algebra.f, theta)):.3e}")
    M = algebra.generator
    ident = Matrix.identity(n)
    idems = []
    for i, theta_i in enumerate(roots):
        e = ident
        for j, theta_j in enumerate(roots):
            if j == i:
                continue
            gap = theta_i - theta_j
            if is_zero(gap):
                raise RepeatedRoots(f"root_{i + 1} and root_{j + 1} coincide")
            e = e * (M - ident * theta_j) * (1 / gap)
        idems.append(e)
    return idems


# =============================
# Galois data
# =============================
def _quadratic_roots(coeffs: Sequence[Fraction]) -> List[QuadExt]:
    c, b = coeffs[0], coeffs[1]
    disc = b * b - 4 * c
    # disc = p/q = p*q / q^2
    scaled = disc.numerator * disc.denominator
    k, m = squarefree_part(scaled)
    k = Fraction(k, disc.denominator)
    plus = QuadExt(-b / 2, k / 2, m)
    return [plus, plus.conjugate()]


def _generic_orbit_sums(roots: Sequence[NumComplex], group: Sequence[Permutation]) -> List[complex]:
    """G-orbit sums of a few monomials in the roots; rational integers when G contains the Galois group."""
    vals = [r.value for r in roots]
    n = len(vals)
    monomials = [
        lambda t: np.prod([t[i] ** i for i in range(n)]),
        lambda t: sum((i + 1) * t[i] ** 2 for i in range(n)) + t[0] * t[-1],
    ]
    sums = []
    for monomial in monomials:
        total = 0j
        for tau in group:
            total += monomial([vals[tau(i) - 1] for i in range(1, n + 1)])
        sums.append(total)
    return sums


# =============================
# Galois resolvent
# =============================
def _integral_scale(coeffs: Sequence[Fraction]) -> int:
    """D with D^n f(x / D) monic integral; the roots scale by D."""
    return reduce(math.lcm, (Fraction(c).denominator for c in coeffs), 1)


def _weight_choices(n: int) -> List[Tuple[int, ...]]:
    return [tuple(range(n)), tuple(2 ** k for k in range(n)), tuple(k * k + 3 * k + 1 for k in range(n))]


@lru_cache(maxsize=64)
def _resolvent_group(coeffs: Tuple[Fraction, ...], approx: Tuple[Tuple[float, float], ...]) -> frozenset:
    n = len(coeffs) - 1
    scale = _integral_scale(coeffs)
    ints = [int(c * scale ** (n - k)) for k, c in enumerate(coeffs)]
    perms = all_permutations(n)
    base = Permutation.identity(n)
    reach = 1 + max(math.hypot(re, im) for re, im in approx) * scale
    for weights in _weight_choices(n):
        span = 1 + sum(weights) * reach
        dps = math.ceil(len(perms) * math.log10(span)) + 40
        with mpmath.workdps(dps):
            found = list(mpmath.polyroots(list(reversed(ints)), maxsteps=400, extraprec=2 * dps))
            roots = []
            for re, im in approx:
                target = mpmath.mpc(re * scale, im * scale)
                roots.append(found.pop(min(range(len(found)), key=lambda k: abs(found[k] - target))))
            thetas = {p: mpmath.fsum(w * roots[p(i + 1) - 1] for i, w in enumerate(weights)) for p in perms}
            values = list(thetas.values())
            gap = min(abs(x - y) for k, x in enumerate(values) for y in values[k + 1:])
            if gap < mpmath.mpf(10) ** -10:
                logger.debug("weights %s give colliding resolvent roots", weights)
                continue
            coeffs_r = [mpmath.mpc(1)]
            for t in values:
                shifted = [mpmath.mpc(0)] + coeffs_r
                for k in range(len(coeffs_r)):
                    shifted[k] -= t * coeffs_r[k]
                coeffs_r = shifted
            rounded = [int(mpmath.nint(c.real)) for c in coeffs_r]
            if any(abs(c - r) > 0.01 for c, r in zip(coeffs_r, rounded)):
                raise NumericallyIndeterminate("Galois resolvent coefficients are not integral")
            _, factors = sympy.Poly(list(reversed(rounded)), _RESOLVENT_X).factor_list()
            tiny = mpmath.mpf(10) ** -(dps // 2)
            for factor, _ in factors:
                cs = [int(c) for c in factor.all_coeffs()]
                norm = sum(abs(c) for c in cs) * span ** factor.degree()
                if abs(mpmath.polyval(cs, thetas[base])) > tiny * norm:
                    continue
                members = frozenset(p for p in perms if abs(mpmath.polyval(cs, thetas[p])) <= tiny * norm)
                if len(members) != factor.degree() or not is_group(set(members)):
                    raise NumericallyIndeterminate("Galois resolvent factor does not isolate a group")
                return members
            raise NumericallyIndeterminate("no resolvent factor vanishes at the base root")
    raise NumericallyIndeterminate("every weight choice gives colliding resolvent roots")


def resolvent_galois_group(coeffs: Sequence, roots: Sequence[NumComplex]) -> set:
    """
    The Galois group of f on the root indices of ``roots``: tau with root_i -> root_tau(i)
    extending to a field automorphism. theta = sum w_i root_i has conjugates theta_tau for tau
    in the group, which are the roots of the rational factor of prod_{pi in S_n}(X - theta_pi)
    vanishing at theta. Evaluated at high precision with mpmath.
    """
    key = tuple(as_fraction(c) for c in coeffs)
    if len(key) - 1 > app_constants.RESOLVENT_MAX_DEGREE:
        raise DegreeTooLarge(f"the resolvent is limited to degree {app_constants.RESOLVENT_MAX_DEGREE}")
    return set(_resolvent_group(key, tuple((r.re, r.im) for r in roots)))


def _factor_blocks(factors, roots: Sequence[NumComplex]) -> List[Tuple[int, ...]]:
    blocks: List[List[int]] = [[] for _ in factors]
    for i, r in enumerate(roots):
        sizes = [abs(np.polyval([float(c) for c in p.all_coeffs()], r.value)) for p, _ in factors]
        blocks[sizes.index(min(sizes))].append(i + 1)
    return [tuple(b) for b in blocks]


def _orbits(group: set, n: int) -> List[Tuple[int, ...]]:
    seen, orbits = set(), []
    for i in range(1, n + 1):
        if i in seen:
            continue
        orbit = tuple(sorted({tau(i) for tau in group}))
        seen.update(orbit)
        orbits.append(orbit)
    return orbits


def _factor_galois_order(p) -> int:
    return 1 if p.degree() == 1 else int(galois_group(p)[0].order())


def _check_galois_order(group: set, f: Sequence[Fraction], roots: Sequence[NumComplex]) -> None:
    """Degree 5 and 6: compare with the order sympy computes; reducible f is checked factor by factor."""
    _, factors = to_sympy_poly(f).factor_list()
    if len(factors) == 1:
        expected = _factor_galois_order(factors[0][0])
        if len(group) != expected:
            raise GaloisSpecInvalid(f"supplied group has order {len(group)}, the Galois group of f has order {expected}")
        return
    blocks = _factor_blocks(factors, roots)
    if sorted(_orbits(group, len(roots))) != sorted(blocks):
        raise GaloisSpecInvalid(f"group orbits {_orbits(group, len(roots))} differ from the factor roots {blocks}")
    bound = 1
    for (p, _), block in zip(factors, blocks):
        order = _factor_galois_order(p)
        restricted = {tuple(tau(i) for i in block) for tau in group}
        if len(restricted) != order:
            raise GaloisSpecInvalid(f"on the roots {block} the group acts through {len(restricted)} elements, "
                                    f"the factor {p.as_expr()} has Galois group of order {order}")
        bound *= order
    if len(group) > bound:
        raise GaloisSpecInvalid(f"supplied group of order {len(group)} exceeds the factor bound {bound}")


def _validate_galois(group: set, roots: Sequence[Scalar], backend: str, n: int, f: Sequence[Fraction]) -> None:
    """The supplied group must be exactly the Galois group: it permutes the roots and is no larger."""
    if not is_group(group):
        raise GaloisSpecInvalid("supplied permutations do not close to a group")
    if backend == "rational" and len(group) > 1:
        raise GaloisSpecInvalid("f splits over Q, only the trivial group acts")
    if backend == "quadratic" and len(group) != 2:
        raise GaloisSpecInvalid("an irreducible quadratic has Galois group S_2")
    if backend == "numeric":
        for value in _generic_orbit_sums(roots, sorted(group)):
            scale = max(1.0, abs(value))
            if abs(value.imag) > 1e-7 * scale or abs(value.real - round(value.real)) > 1e-7 * scale:
                raise GaloisSpecInvalid(f"orbit sum {value} is not a rational integer; group does not permute the roots")
        if n <= app_constants.RESOLVENT_MAX_DEGREE:
            actual = resolvent_galois_group(f, roots)
            if group != actual:
                raise GaloisSpecInvalid(f"supplied group of order {len(group)} is not the Galois group of f "
                                        f"(order {len(actual)}: {sorted(str(t) for t in actual)})")
        else:
            _check_galois_order(group, f, roots)


def build_fixture(coeffs: Sequence, galois_spec: Optional[Sequence[Permutation]] = None,
                  order_basis: Optional[Sequence[Matrix]] = None,
                  hermitian_q: Optional[np.ndarray] = None) -> TorusFixture:
    return fixture_from_algebra(etale_from_poly(coeffs), galois_spec, order_basis, hermitian_q)


def fixture_from_algebra(algebra: EtaleAlgebra, galois_spec: Optional[Sequence[Permutation]] = None,
                         order_basis: Optional[Sequence[Matrix]] = None,
                         hermitian_q: Optional[np.ndarray] = None) -> TorusFixture:
    if order_basis:
        algebra = algebra.with_order_basis(order_basis)
    n = algebra.n
    f = list(algebra.f)

    rational = _rational_roots(f)
    if rational is not None:
        backend, roots = "rational", rational
        detected = {Permutation.identity(n)}
    elif n == 2:
        backend, roots = "quadratic", _quadratic_roots(f)
        detected = set(all_permutations(2))
    else:
        if n > app_constants.MAX_NUMERIC_DEGREE:
            raise DegreeTooLarge(f"numeric root finding is limited to degree {app_constants.MAX_NUMERIC_DEGREE}")
        backend, roots = "numeric", numeric_roots(f)
        detected = None
        if n == 3 and galois_spec is None:
            _, factors = to_sympy_poly(f).factor_list()
            if len(factors) > 1:
                # linear times irreducible quadratic: swap the two non-rational roots
                rational_root = float(_linear_factor_roots(f)[0])
                moving = [i + 1 for i, r in enumerate(roots) if abs(r.value - rational_root) > max(r.eps, 1e-9)]
                detected = generate_subgroup([Permutation.from_cycles([moving], 3)], 3)
            elif _is_rational_square(poly_discriminant(f)):
                detected = generate_subgroup([Permutation.parse("(1 2 3)", 3)], 3)
            else:
                detected = set(all_permutations(3))

    if galois_spec is not None:
        group = generate_subgroup(list(galois_spec), n)
        _validate_galois(group, roots, backend, n, f)
    elif detected is None:
        raise GaloisSpecRequired(f"degree {n} fixture needs a Galois group in the fixture file")
    else:
        group = detected

    idems = lagrange_idempotents(algebra, roots)
    check_idempotents(idems)
    logger.debug("fixture f=%s backend=%s |G|=%d", [str(c) for c in f], backend, len(group))
    return TorusFixture(algebra, backend, tuple(roots), tuple(sorted(group)), tuple(idems), hermitian_q)


def _linear_factor_roots(f: Sequence[Fraction]) -> List[Fraction]:
    _, factors = to_sympy_poly(f).factor_list()
    roots = []
    for p, _ in factors:
        if p.degree() == 1:
            a, b = p.all_coeffs()
            roots.append(-Fraction(str(b)) / Fraction(str(a)))
    return roots


# =============================
# Galois action
# =============================
def relabel(fx: TorusFixture, tau: Permutation) -> List[Matrix]:
    """Idempotents rebuilt from the roots permuted by tau, root_i -> root_{tau(i)}."""
    permuted = [fx.roots[tau(i) - 1] for i in range(1, fx.n + 1)]
    return lagrange_idempotents(fx.algebra, permuted)


def _close(x: Scalar, y: Scalar, tolerance: float) -> bool:
    diff = x - y
    if isinstance(diff, NumComplex):
        scale = max(1.0, magnitude(x), magnitude(y))
        return abs(diff) <= max(diff.eps, tolerance * scale)
    return is_zero(diff)


def conjugation_permutation(fx: TorusFixture) -> Permutation:
    """Complex conjugation on the root indices: root_c(i) = conj(root_i)."""
    images = []
    for r in fx.roots:
        z = complex(r.re, -r.im)
        gaps = [abs(complex(s.re, s.im) - z) for s in fx.roots]
        images.append(gaps.index(min(gaps)) + 1)
    if sorted(images) != list(range(1, fx.n + 1)):
        raise NumericallyIndeterminate("complex conjugation does not match the roots pairwise")
    return Permutation(tuple(images))


def is_galois_element(fx: TorusFixture, tau: Permutation) -> bool:
    """Whether root_i -> root_tau(i) extends to a field automorphism, decided without the fixture's group."""
    if fx.backend != "numeric":
        return tau in fx.galois
    if fx.n <= app_constants.RESOLVENT_MAX_DEGREE:
        return tau in resolvent_galois_group(fx.algebra.f, fx.roots)
    return tau in fx.galois


def galois_equivariance_check(fx: TorusFixture, g: Matrix, sigma: Permutation, tau: Permutation,
                              tolerance: float = app_constants.DEFAULT_TOLERANCE) -> bool:
    """
    tau . Psi_sigma(g) == Psi_{tau sigma tau^-1}(g). Quadratic fixtures apply the nontrivial
    automorphism exactly. Numeric fixtures cannot apply tau to a floating value, so they check
    that tau is a field automorphism of the roots, that complex conjugation (always in the
    group) acts on the values as the conjugated index, and that relabelling the idempotents
    by tau matches the conjugated index.
    """
    if tau not in fx.galois:
        raise TauNotInGalois(f"{tau} is not in the Galois group of the fixture")
    target = psi_torus(sigma.conjugate_by(tau), g, fx.idems, check=False)
    value = psi_torus(sigma, g, fx.idems, check=False)
    if fx.backend == "quadratic":
        acted = value.conjugate() if not tau.is_identity() and isinstance(value, QuadExt) else value
        return _close(acted, target, tolerance)
    if fx.backend == "rational":
        return _close(value, target, tolerance)
    if not is_galois_element(fx, tau):
        logger.info("%s permutes the roots but is not a field automorphism", tau)
        return False
    c = conjugation_permutation(fx)
    mirrored = psi_torus(sigma.conjugate_by(c), g, fx.idems, check=False)
    if not _close(NumComplex.lift(value).conjugate(), mirrored, tolerance):
        return False
    return _close(psi_torus(sigma, g, relabel(fx, tau), check=False), target, tolerance)


# =============================
# Orbit products
# =============================
def rational_reconstruct(x: float, tolerance: float, bound: int) -> Fraction:
    """First continued-fraction convergent p/q of x with q <= bound and |x - p/q| <= tolerance."""
    exact = Fraction(x)
    h_prev, h = 0, 1
    k_prev, k = 1, 0
    rest = exact
    while True:
        a = math.floor(rest)
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
        if k > bound:
            break
        if abs(float(exact - Fraction(h, k))) <= tolerance:
            return Fraction(h, k)
        frac = rest - a
        if frac == 0:
            break
        rest = 1 / frac
    raise ReconstructionFailed(f"no rational with denominator <= {bound} within {tolerance:.3e} of {x!r}")


def relative_discriminant(fx: TorusFixture) -> Fraction:
    return det(Matrix(trace_gram(list(fx.algebra.order))))


def default_denominator_bound(fx: TorusFixture, g: Matrix, size: int) -> int:
    """
    |relDisc|^size for integral g with det g = +-1. Other g contribute the denominators Psi
    picks up from them, so each factor becomes |relDisc| * |numerator(det g)| * den(g)^n.
    """
    den = 1
    for x in g.flatten():
        den = math.lcm(den, Fraction(x).denominator)
    d = Fraction(det(g))
    base = abs(relative_discriminant(fx)) * abs(d.numerator) * den ** g.n
    return max(1, math.ceil(base) ** size)


def _reconstruct(value: Scalar, bound: int) -> Fraction:
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, QuadExt):
        if value.b != 0:
            raise ReconstructionFailed(f"{value} is not rational")
        return value.a
    floor = app_constants.NUMERIC_ZERO_FLOOR
    if abs(value.im) > max(value.eps, floor) + app_constants.DEFAULT_TOLERANCE * max(1.0, abs(value)):
        raise ReconstructionFailed(f"imaginary part {value.im:.3e} exceeds its error bound {value.eps:.3e}")
    tol = max(app_constants.RECONSTRUCTION_SLACK * value.eps, floor)
    return rational_reconstruct(value.re, tol, bound)


def galois_orbit(fx: TorusFixture, sigma0: Permutation) -> List[Permutation]:
    return sorted(conjugacy_class(sigma0, fx.galois))


def galois_orbit_product(fx: TorusFixture, sigma0: Permutation, g: Matrix,
                         denominator_bound: Optional[int] = None) -> Fraction:
    if sigma0.fixed_points():
        logger.warning("sigma0 = %s has fixed points %s", sigma0, sigma0.fixed_points())
    orbit = galois_orbit(fx, sigma0)
    product: Scalar = Fraction(1)
    for omega in orbit:
        product = psi_torus(omega, g, fx.idems, check=False) * product
    bound = denominator_bound or default_denominator_bound(fx, g, len(orbit))
    return _reconstruct(product, bound)


def orbit_char_poly(fx: TorusFixture, sigma: Permutation, g: Matrix, scale: Fraction = Fraction(1),
                    reconstruct: bool = True, denominator_bound: Optional[int] = None) -> List:
    """
    Coefficients (constant term first) of prod over the Galois class C of sigma of
    (X - scale * Psi_w(g)). Returned as Fractions, or raw backend scalars when
    ``reconstruct`` is off.
    """
    orbit = galois_orbit(fx, sigma)
    coeffs: List[Scalar] = [Fraction(1)]
    for omega in orbit:
        value = psi_torus(omega, g, fx.idems, check=False) * scale
        shifted = [Fraction(0)] + coeffs
        for k in range(len(coeffs)):
            shifted[k] = shifted[k] - value * coeffs[k]
        coeffs = shifted
    if not reconstruct:
        return coeffs
    bound = denominator_bound or default_denominator_bound(fx, g, len(orbit))
    return [_reconstruct(c, bound) for c in coeffs]


# =============================
# Zero propagation
# =============================
@dataclass
class ZeroPropagationReport:
    sigma0: str
    ok: bool
    two_transitive: bool
    rows: List[Dict] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict:
        return {
            "sigma0": self.sigma0,
            "ok": self.ok,
            "two_transitive": self.two_transitive,
            "rows": self.rows,
            "notes": self.notes,
        }


def zero_propagation(fx: TorusFixture, g: Matrix, sigma0: Permutation,
                     require_two_transitive: bool = True,
                     tolerance: float = app_constants.DEFAULT_TOLERANCE) -> ZeroPropagationReport:
    two_transitive = fx.is_two_transitive()
    if require_two_transitive and not two_transitive:
        raise PreconditionsFailed("Galois group of the fixture is not 2-transitive")
    if sigma0.fixed_points():
        raise PreconditionsFailed(f"{sigma0} has fixed points")
    start = psi_torus(sigma0, g, fx.idems)
    if not _close(start, 0, tolerance):
        raise PreconditionsFailed(f"Psi_{sigma0}(g) = {to_string(start)} is not zero")

    rows = []
    ok = True
    for tau in all_permutations(fx.n):
        value = psi_torus(tau, g, fx.idems, check=False)
        expected = 1 if tau.is_identity() else 0
        passed = _close(value, expected, tolerance)
        ok = ok and passed
        rows.append({"tau": str(tau), "value": to_string(value), "expected": expected, "pass": passed})
    notes = []
    if not two_transitive:
        notes.append("Galois group is not 2-transitive; propagation is not guaranteed")
    if ok:
        notes.append("g projects to the identity double coset")
    return ZeroPropagationReport(str(sigma0), ok, two_transitive, rows, notes)
