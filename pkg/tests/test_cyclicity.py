import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ptmu.analytic import BoundedFunctionSpec
from ptmu.circle_sets import CircleSet
from ptmu.cyclicity import (
    CertificateOptions,
    DistanceCurve,
    DualCertificate,
    cauchy_pairing,
    cauchy_solve_radial,
    certify,
    classify,
    corona_hypothesis_check,
    distance_curve,
    hardy_distance,
    ktheta_functional,
    reduction_check,
    solve_distances,
    support_gap,
)
from ptmu.errors import InsufficientDecay
from ptmu.measures import Atom, BoundaryWeight, SingularMeasure, SpaceMeasure
from ptmu.norms import GramSystem, RadialMoments, gram_system
from ptmu.quadrature import circle_nodes, radial_rule

HARDY = SpaceMeasure(0.0, 0.0, BoundaryWeight.lebesgue())
AREA = SpaceMeasure()


def atom(angle=0.0, mass=1.0):
    return BoundedFunctionSpec(singular_part=SingularMeasure.point_mass(angle, mass))


@pytest.mark.parametrize("mass", [0.5, 1.0, 2.0])
def test_hardy_distances_are_flat(mass):
    curve = distance_curve(atom(0.0, mass), HARDY, [0, 1, 2, 4, 8], angular_power=8)
    for v in curve.values:
        assert v**2 == pytest.approx(1 - math.exp(-2 * mass), abs=1e-8)
    # the optimal polynomial is the constant conj(theta(0))
    assert curve.coefficients[0][0] == pytest.approx(math.exp(-mass), abs=1e-12)


def test_hardy_distance_for_blaschke_and_singular_product():
    theta = BoundedFunctionSpec(blaschke_zeros=(0.5, 0.6j), singular_part=SingularMeasure.point_mass(2.0, 0.5))
    curve = distance_curve(theta, HARDY, [0, 3, 10], angular_power=8)
    expected = math.sqrt(1 - (0.5 * 0.6 * math.exp(-0.5)) ** 2)
    assert hardy_distance(theta) == pytest.approx(expected, abs=1e-14)
    assert np.allclose(curve.values, expected, atol=1e-8)


def test_constant_one_has_zero_distance():
    curve = distance_curve(BoundedFunctionSpec(), AREA, [0, 2], angular_power=6)
    assert curve.values[0] == pytest.approx(0.0, abs=1e-8)


def test_bergman_atom_curve_is_nonincreasing_with_a_floor():
    curve = distance_curve(atom(), AREA, list(range(0, 33)), angular_power=10)
    v = np.array(curve.values)
    assert np.all(np.diff(v) <= 1e-12)
    assert v[-1] > 0.75


def test_unimodular_constant_leaves_distances_unchanged():
    E = CircleSet.from_closed_arc(math.pi / 2, 3 * math.pi / 2)
    mu = SpaceMeasure(0.0, 1.0, BoundaryWeight.lebesgue(E))
    nu = SingularMeasure.point_mass(math.pi, 1.0)
    a = distance_curve(BoundedFunctionSpec(singular_part=nu), mu, [0, 4, 12], angular_power=9)
    b = distance_curve(BoundedFunctionSpec(singular_part=nu, constant=np.exp(0.7j)), mu, [0, 4, 12], angular_power=9)
    assert np.allclose(a.values, b.values, atol=1e-10, rtol=0)


@settings(max_examples=15, deadline=None)
@given(st.permutations(list(range(9))))
def test_distance_is_invariant_under_basis_permutation(perm):
    g = gram_system(atom(), AREA, 8, angular_power=8)
    top = solve_distances(g, [8]).values[0]
    P = np.asarray(perm)
    permuted = GramSystem(g.G[np.ix_(P, P)], g.b[P], g.one_norm_sq, {})
    assert solve_distances(permuted, [8]).values[0] == pytest.approx(top, abs=1e-10)


def test_solve_distances_checks_degrees():
    g = gram_system(atom(), AREA, 4, angular_power=6)
    with pytest.raises(ValueError):
        solve_distances(g, [3, 1])
    with pytest.raises(ValueError):
        solve_distances(g, [7])


def test_cauchy_solve_constant_and_linear():
    m = RadialMoments(0.0, 8)
    sol = cauchy_solve_radial([1.0], m)
    assert sol.coefficients[0] == pytest.approx(1.0 / m[0])
    assert sol.norm == pytest.approx(1.0 / math.sqrt(m[0]))
    sol = cauchy_solve_radial([0.0, 1.0], m)
    assert sol.coefficients[1] == pytest.approx(2.0)
    assert sol.norm == pytest.approx(math.sqrt(2.0))


def test_cauchy_solution_reproduces_g_by_quadrature():
    alpha = 1.0
    g = 0.3 ** np.arange(60) * np.exp(0.3j * np.arange(60))
    m = RadialMoments(alpha, 120)
    sol = cauchy_solve_radial(g, m)
    assert np.allclose(cauchy_pairing(sol.coefficients, m), g[: sol.cut], atol=1e-15)
    # C(z) = int G(w) / (1 - z conj(w)) (1-|w|)^alpha dA(w), by radial Gauss-Jacobi x trapezoid
    r, w = radial_rule(60, alpha)
    ang = circle_nodes(256)
    G = np.concatenate([sol.coefficients, np.zeros(60 - sol.cut)])
    for z in (0.3 + 0.2j, -0.6j):
        total = 0.0
        for ri, wi in zip(r, w):
            pts = ri * np.exp(1j * ang)
            total += wi * np.mean(np.polynomial.polynomial.polyval(pts, G) / (1 - z * np.conj(pts)))
        assert total == pytest.approx(np.polynomial.polynomial.polyval(z, g), abs=1e-9)


def test_cauchy_solve_rejects_slow_decay():
    with pytest.raises(InsufficientDecay):
        cauchy_solve_radial(np.ones(64), RadialMoments(0.0, 128))


def test_trivial_model_space_functionals_vanish():
    F = ktheta_functional(BoundedFunctionSpec(), [1.0], HARDY, CertificateOptions(E=None, grid_power=10))
    assert np.max(np.abs(F.F)) < 1e-12


def test_one_dimensional_model_space():
    theta = BoundedFunctionSpec(monomial_power=1)
    F = ktheta_functional(theta, [1.0], HARDY, CertificateOptions(E=None, grid_power=10, test_order=10))
    assert F.value_at_zero == pytest.approx(1.0, abs=1e-12)
    assert np.max(np.abs(F.F[1:])) < 1e-12
    assert F.max_residual < 1e-12


def test_hardy_certificates_grow_with_the_basis_and_respect_duality():
    theta = atom()
    primal = math.sqrt(1 - math.exp(-2))
    bounds = []
    for deg in (0, 2, 4, 8):
        cert = certify(theta, HARDY, CertificateOptions(E="carrier", basis_degree=deg, grid_power=14))
        assert cert.max_residual < 1e-6
        bounds.append(cert.bound)
    assert all(b > a for a, b in zip(bounds, bounds[1:]))
    assert bounds[-1] <= primal + 1e-10
    assert bounds[-1] > 0.7


def _fake_certificate(bound, residual):
    return DualCertificate(bound, bound, 1.0, 1.0, 0.0, residual, [residual], [1.0], 0.0, 0, {})


def test_classify_examples():
    flat = DistanceCurve([0, 8, 16, 32], [0.9, 0.88, 0.88, 0.88], [])
    assert classify(flat, [_fake_certificate(0.5, 1e-9)]).verdict == "certified-noncyclic"
    falling = DistanceCurve([0, 8, 16, 32], [0.9, 0.1, 0.02, 0.005], [])
    v = classify(falling, [])
    assert v.verdict == "evidence-cyclic" and v.trend < 0
    noisy = DistanceCurve([0, 1, 2], [0.5, 0.52, 0.49], [])
    assert classify(noisy, [_fake_certificate(0.0, 1e-9)]).verdict == "inconclusive"
    # large residuals disqualify a certificate
    assert classify(flat, [_fake_certificate(0.5, 1e-2)]).verdict == "inconclusive"
    with pytest.raises(ValueError):
        classify(DistanceCurve([], [], []))


def test_reduction_respects_the_triangle_inequality():
    E = CircleSet.from_closed_arc(math.pi / 2, 3 * math.pi / 2)
    mu = SpaceMeasure(0.0, 1.0, BoundaryWeight.lebesgue(E))
    nu = SingularMeasure((Atom(0.0, 0.5), Atom(2.0, 0.3)))
    out = reduction_check(nu, mu, 2, [0, 4, 8], angular_power=10)
    assert out["removed_mass"] == pytest.approx(0.3)
    assert out["holds"]


def test_corona_check_with_trivial_piece():
    z = 0.9 * np.exp(1j * np.linspace(0, 6, 50))
    assert corona_hypothesis_check(BoundedFunctionSpec(), BoundedFunctionSpec(monomial_power=3), z) >= 1.0


def test_support_gap(dichotomy_measure, divergent_cantor):
    good = BoundedFunctionSpec(singular_part=divergent_cantor)
    assert support_gap(good, dichotomy_measure) > 0.0
    assert support_gap(atom(math.pi), dichotomy_measure) == 0.0
    assert support_gap(atom(), AREA) == math.inf
