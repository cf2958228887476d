import json
import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import IntegrationWarning, quad
from scipy.special import gamma

from ptmu.analytic import BoundedFunctionSpec, taylor_coefficients
from ptmu.circle_sets import CircleSet
from ptmu.errors import Unsupported
from ptmu.measures import BoundaryWeight, CuspPiece, SingularMeasure, SpaceMeasure
from ptmu.norms import (
    GramSystem,
    RadialMoments,
    boundary_toeplitz,
    gram_system,
    monomial_decay,
    monomial_norms,
    pt_norm,
)
from ptmu.quadrature import graded_radial_rule, radial_rule

HARDY = SpaceMeasure(0.0, 0.0, BoundaryWeight.lebesgue())
AREA = SpaceMeasure()


def angular_average(d, r):
    # (1/pi) int_0^pi |S(r e^{it})|^2 cos(d t) dt for the unit atom at angle 0
    def f(t):
        q = abs(1 - r * np.exp(1j * t)) ** 2
        return math.exp(-2 * (1 - r * r) / q) * math.cos(d * t)

    brk = [min(1 - r, 0.5) * k for k in (1, 4, 16)]
    return quad(f, 0, math.pi, points=[b for b in brk if b < math.pi], limit=400, epsabs=1e-14, epsrel=1e-13)[0] / math.pi


def dense_gram_entry(j, k):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        return quad(lambda r: 2 * r ** (j + k + 1) * angular_average(abs(j - k), r), 0, 1, limit=400, epsabs=1e-13)[0]


def test_norm_of_one_with_half_circle_weight():
    mu = SpaceMeasure(0.0, 1.0, BoundaryWeight.lebesgue(CircleSet.from_closed_arc(math.pi / 2, 3 * math.pi / 2)))
    assert pt_norm([1.0], mu, 2) == pytest.approx(math.sqrt(1.5), abs=1e-14)
    assert pt_norm(lambda z: np.ones_like(z), mu, 2) == pytest.approx(math.sqrt(1.5), abs=1e-12)


@pytest.mark.parametrize("n", [0, 1, 5, 40])
def test_monomial_norms_on_area(n):
    c = np.zeros(n + 1)
    c[n] = 1.0
    assert pt_norm(c, AREA, 2) == pytest.approx((n + 1) ** -0.5, rel=1e-13)
    assert pt_norm(lambda z: z**n, AREA, 2) == pytest.approx((n + 1) ** -0.5, rel=1e-12)


def test_small_t_returns_the_raw_integral():
    # int |z|^{n/2} dA = 1/(n/4 + 1)
    n = 4
    assert pt_norm(lambda z: z**n, AREA, 0.5) == pytest.approx(1 / (n / 4 + 1), rel=1e-12)
    with pytest.raises(ValueError):
        pt_norm([1.0], AREA, 0.0)


def test_radial_moment_ratio_recurrence():
    for alpha in (-0.5, 0.0, 1.0, 2.5):
        m = RadialMoments(alpha, 60).values
        k = np.arange(2, 60)
        # B(k+2, a+1) / B(k, a+1) = (k+1) k / ((k+a+2)(k+a+1))
        expected = (k + 1) * k / ((k + alpha + 2) * (k + alpha + 1))
        assert np.allclose(m[2:] / m[:-2], expected, rtol=1e-13, atol=0)


def test_radial_moments_match_gamma_oracle():
    alpha = 1.5
    m = RadialMoments(alpha, 10)
    for k in range(10):
        assert m[k] == pytest.approx(2 * gamma(k + 2) * gamma(alpha + 1) / gamma(k + alpha + 3), rel=1e-13)


@pytest.mark.parametrize("alpha", [-0.5, 0.0, 1.0])
def test_quadrature_rules_integrate_moments(alpha):
    m = RadialMoments(alpha, 80).values
    for r, w in (radial_rule(41, alpha), graded_radial_rule(alpha, 64)):
        for k in (0, 7, 40, 79):
            assert np.sum(w * r**k) == pytest.approx(m[k], rel=1e-11)


def test_decay_fits():
    assert monomial_decay(AREA, 2.0, 128).beta == pytest.approx(0.5, abs=0.02)
    assert monomial_decay(SpaceMeasure(disk_alpha=1.0), 2.0, 128).beta == pytest.approx(1.0, abs=0.05)
    assert monomial_decay(HARDY, 2.0, 64).beta == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(ValueError):
        monomial_decay(AREA, 2.0, 8)


def test_monomial_norms_closed_form():
    assert np.allclose(monomial_norms(AREA, 2.0, [0, 3, 99]), [1.0, 0.5, 0.1], rtol=1e-13)


def test_hardy_gram_of_one_is_identity():
    g = gram_system(BoundedFunctionSpec(), HARDY, 10, angular_power=8)
    assert np.allclose(g.G, np.eye(11), atol=1e-14)
    assert g.one_norm_sq == pytest.approx(1.0)


def test_boundary_toeplitz_of_an_arc():
    mu = SpaceMeasure(0.0, 0.0, BoundaryWeight.lebesgue(CircleSet.from_closed_arc(0.0, math.pi)))
    T = boundary_toeplitz(mu, 4)
    assert T[0, 0] == pytest.approx(0.5)
    # int_0^pi e^{i t} dt / 2 pi = i / pi
    assert T[1, 0] == pytest.approx(1j / math.pi, abs=1e-14)
    assert np.allclose(T, T.conj().T)


def test_hardy_b_pairs_one_against_shifted_theta():
    # b_j = <1, theta z^j> = conj of the (-j)-th Fourier coefficient of theta
    theta = BoundedFunctionSpec(blaschke_zeros=(0.5, -0.3 + 0.4j), singular_part=SingularMeasure.point_mass(2.0, 0.5))
    g = gram_system(theta, HARDY, 12, angular_power=9)
    c = taylor_coefficients(theta, 13)
    expected = np.zeros(13, dtype=complex)
    expected[0] = np.conj(c[0])
    assert np.allclose(g.b, expected, atol=1e-12)
    assert np.allclose(g.G, np.eye(13), atol=1e-14)


def test_gram_matches_dense_quadrature_oracle():
    theta = BoundedFunctionSpec(singular_part=SingularMeasure.point_mass(0.0, 1.0))
    g = gram_system(theta, AREA, 8)
    for j, k in [(0, 0), (1, 1), (4, 4), (8, 8), (0, 1), (0, 8), (3, 5), (2, 7), (6, 8)]:
        expected = dense_gram_entry(j, k)
        assert abs(g.G[j, k] - expected) <= 1e-8
        assert abs(g.G[k, j] - expected) <= 1e-8
    assert g.asymmetry <= 1e-12


def test_gram_needs_fine_enough_angles():
    with pytest.raises(ValueError):
        gram_system(BoundedFunctionSpec(), AREA, 40, angular_power=6)


def test_gram_refuses_other_exponents():
    with pytest.raises(Unsupported):
        gram_system(BoundedFunctionSpec(), SpaceMeasure(t=1.5), 4)


def test_gram_round_trip_through_json():
    theta = BoundedFunctionSpec(singular_part=SingularMeasure.point_mass(0.0, 1.0))
    g = gram_system(theta, SpaceMeasure(0.5, 1.0, BoundaryWeight.lebesgue(CircleSet.from_closed_arc(2.0, 4.0))), 6)
    back = GramSystem.from_dict(json.loads(json.dumps(g.to_dict())))
    assert np.array_equal(back.G, g.G) and np.array_equal(back.b, g.b)
    assert back.provenance == g.provenance


@pytest.mark.parametrize("alpha", [0.0, 1.0])
def test_pythagoras_for_solved_normal_equations(alpha):
    E = CircleSet.from_closed_arc(math.pi / 2, 3 * math.pi / 2)
    mu = SpaceMeasure(alpha, 1.0, BoundaryWeight(E, (CuspPiece(0.5, 0.5),)))
    theta = BoundedFunctionSpec(singular_part=SingularMeasure.point_mass(math.pi, 1.0))
    g = gram_system(theta, mu, 12, angular_power=10)
    x = np.linalg.lstsq(g.G, g.b, rcond=None)[0]
    assert g.one_norm_sq - float(np.real(np.vdot(g.b, x))) >= -1e-10


def test_coefficient_norm_matches_grid_norm():
    E = CircleSet.from_closed_arc(math.pi / 2, 3 * math.pi / 2)
    mu = SpaceMeasure(1.0, 1.0, BoundaryWeight(E, (CuspPiece(0.5, 0.5),)))
    c = np.array([1.0, -0.5j, 0.25, 0.0, 0.1 + 0.1j])
    assert pt_norm(c, mu, 2) == pytest.approx(pt_norm(lambda z: np.polynomial.polynomial.polyval(z, c), mu, 2), rel=1e-10)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=2.0, allow_nan=False, allow_infinity=False), min_size=1, max_size=8))
def test_area_norm_is_weighted_coefficient_sum(c):
    # orthogonality of monomials for rotation-invariant measures
    expected = math.sqrt(math.fsum(abs(x) ** 2 / (n + 1) for n, x in enumerate(c)))
    assert pt_norm(c, AREA, 2) == pytest.approx(expected, rel=1e-12, abs=1e-300)
