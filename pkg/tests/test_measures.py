import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ptmu.circle_sets import Arc, CantorGenerator, CircleSet, PowerGapRule, RatioGapRule
from ptmu.errors import InsufficientPieces, NonIntegrableLog
from ptmu.measures import (
    Atom,
    BoundaryWeight,
    CantorComponent,
    ConstantPiece,
    CuspPiece,
    DistanceAbove,
    InSet,
    SingularMeasure,
    SpaceMeasure,
    bc_kr_split,
    log_integrability,
    modulus_of_continuity,
    restrict,
    roberts_decompose,
    roberts_scale,
)

TWO_PI = 2 * math.pi


def brute_modulus(atoms, delta):
    # every candidate window starts at an atom; O(n^2) on purpose
    best = 0.0
    for a in atoms:
        total = 0.0
        for b in atoms:
            if (b.angle - a.angle) % TWO_PI < TWO_PI * delta:
                total += b.mass
        best = max(best, total)
    return best


def middle_thirds(mass=1.0, depth=8, length=0.5):
    return SingularMeasure((), (CantorComponent(CantorGenerator(Arc(0.0, length), RatioGapRule(1 / 3)), mass, depth),))


def test_single_atom_modulus_is_its_mass():
    nu = SingularMeasure.point_mass(1.3, 0.7)
    for delta in (1e-6, 0.1, 1.0):
        assert modulus_of_continuity(nu, delta) == 0.7


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_middle_thirds_modulus_at_level_lengths(k):
    nu = middle_thirds()
    # self-similarity: a level-k interval carries 2^-k and no shorter window gets more
    assert modulus_of_continuity(nu, 0.5 * 3.0**-k) == pytest.approx(2.0**-k, abs=1e-15)


def test_two_atom_modulus():
    nu = SingularMeasure((Atom(math.pi / 2, 0.3), Atom(-math.pi / 2, 0.7)))
    assert modulus_of_continuity(nu, 0.1) == pytest.approx(0.7)


def test_modulus_rejects_nonpositive_delta():
    with pytest.raises(ValueError):
        modulus_of_continuity(SingularMeasure.point_mass(0.0), 0.0)


atom_lists = st.lists(
    st.tuples(st.floats(0.0, TWO_PI, exclude_max=True), st.floats(0.0, 1.0)), min_size=1, max_size=12,
    unique_by=lambda t: t[0],
)


@settings(max_examples=80, deadline=None)
@given(atom_lists, st.floats(1e-3, 1.0), st.floats(1e-3, 1.0))
def test_modulus_matches_brute_force_and_is_monotone(pairs, d1, d2):
    nu = SingularMeasure(tuple(Atom(a, m) for a, m in pairs))
    lo, hi = sorted((d1, d2))
    w_lo, w_hi = modulus_of_continuity(nu, lo), modulus_of_continuity(nu, hi)
    assert w_lo <= w_hi + 1e-15
    assert w_hi <= nu.total_mass + 1e-15
    assert w_lo == pytest.approx(brute_modulus(nu.atoms, lo), abs=1e-12)


def test_restrict_identity():
    nu = middle_thirds(depth=4)
    kept, rest = restrict(nu, lambda a: np.ones(a.shape, dtype=bool))
    assert kept is nu
    assert rest.is_zero


def test_restrict_by_distance():
    nu = SingularMeasure((Atom(0.0, 0.4), Atom(math.pi, 0.6)))
    kept, rest = restrict(nu, DistanceAbove(CircleSet.from_points([0.0]), 1.0))
    assert [(a.angle, a.mass) for a in kept.atoms] == [(pytest.approx(math.pi), 0.6)]
    assert [(a.angle, a.mass) for a in rest.atoms] == [(0.0, 0.4)]


def test_restrict_cantor_by_half_circle():
    gen = CantorGenerator(Arc(5.5, 0.4), PowerGapRule())
    nu = SingularMeasure((), (CantorComponent(gen, 1.0, 8),))
    kept, rest = restrict(nu, InSet(CircleSet.from_closed_arc(0.0, math.pi)))
    assert kept.total_mass > 0 and rest.total_mass > 0
    assert abs(kept.total_mass + rest.total_mass - nu.total_mass) <= 1e-15


@settings(max_examples=50, deadline=None)
@given(atom_lists, st.floats(0.0, TWO_PI), st.floats(0.0, 2.0))
def test_restriction_and_complement_partition_atoms(pairs, centre, threshold):
    nu = SingularMeasure(tuple(Atom(a, m) for a, m in pairs))
    kept, rest = restrict(nu, DistanceAbove(CircleSet.from_points([centre]), threshold))
    merged = {a.angle: a.mass for a in (kept + rest).atoms}
    for a in nu.atoms:
        if a.mass > 0:
            assert merged[a.angle] == a.mass


def test_restriction_to_growing_collars_exhausts_the_measure():
    gen = CantorGenerator(Arc(4.5, 0.1), RatioGapRule(1 / 3))
    nu = SingularMeasure((Atom(0.5, 0.25),), (CantorComponent(gen, 1.0, 5),))
    E = CircleSet.from_closed_arc(1.5, 3.5)
    excess = []
    for n in range(1, 200):
        kept, _ = restrict(nu, DistanceAbove(E, 1.0 / n))
        excess.append(nu.total_mass - kept.total_mass)
    assert all(b <= a + 1e-15 for a, b in zip(excess, excess[1:]))
    assert excess[-1] == pytest.approx(0.0, abs=1e-15)


def test_split_of_atoms_is_certain():
    nu = SingularMeasure((Atom(0.0, 1.0), Atom(2.0, 0.5)))
    s = bc_kr_split(nu)
    assert s.nu_c == nu and s.nu_k.is_zero
    assert {f for _, f in s.flags} == {"certain"}


def test_split_of_middle_thirds_is_certain():
    nu = middle_thirds(depth=6)
    s = bc_kr_split(nu)
    assert s.nu_c.total_mass == 1.0 and s.nu_k.is_zero
    assert s.flags == (("cantor[0]", "certain"),)


def test_split_of_variable_gap_cantor_is_heuristic(divergent_cantor):
    s = bc_kr_split(divergent_cantor)
    assert s.nu_c.is_zero and s.nu_k.total_mass == 1.0
    assert s.flags == (("cantor[0]", "heuristic"),)


def test_roberts_scales():
    assert [roberts_scale(1, k) for k in range(3)] == [4, 16, 256]
    with pytest.raises(ValueError):
        roberts_scale(8, 3)


def test_roberts_single_small_atom_is_one_piece():
    c = 1.0
    nu = SingularMeasure.point_mass(0.3, c * math.log(4) / 4)
    r = roberts_decompose(nu, c, 1, 1)
    assert r.scales == [4]
    assert r.pieces[0].measure.atoms == nu.atoms
    assert r.remainder.is_zero


def test_roberts_variable_gap_cantor(divergent_cantor):
    r = roberts_decompose(divergent_cantor, 1.0, 2, 3)
    assert r.scales == [16, 256, 65536]
    for p in r.pieces:
        atoms = p.measure.atoms
        assert brute_modulus(atoms, 1.0 / p.n) <= p.cap
    total = math.fsum([p.mass for p in r.pieces] + [r.remainder.total_mass])
    assert abs(total - divergent_cantor.total_mass) <= 1e-15
    assert r.remainder.total_mass == pytest.approx(0.12325628328098859, rel=1e-12)


def test_roberts_strict_mode_reports_leftover(divergent_cantor):
    with pytest.raises(InsufficientPieces):
        roberts_decompose(divergent_cantor, 1.0, 2, 1, strict=True)


def test_roberts_rejects_bad_parameters():
    with pytest.raises(ValueError):
        roberts_decompose(SingularMeasure.point_mass(0.0), 0.0, 1, 1)


def test_log_integrability_constants():
    half = CircleSet.from_closed_arc(0.0, math.pi)
    assert log_integrability(BoundaryWeight.lebesgue(half), 0) == pytest.approx(0.0, abs=1e-15)
    assert log_integrability(BoundaryWeight(half, (ConstantPiece(math.e),)), 0) == pytest.approx(0.5, abs=1e-13)


def test_log_integrability_of_cusp_against_high_precision_quadrature():
    kappa, gamma, level = 0.5, 0.5, 2.0
    arc = CircleSet.from_closed_arc(1.0, 2.5)
    w = BoundaryWeight(arc, (CuspPiece(kappa, gamma, level),))
    mpmath.mp.dps = 30
    inner = mpmath.quad(lambda x: mpmath.log(level) - kappa / (x * (1 - x)) ** gamma, [0, 0.5, 1])
    expected = float(inner) * 1.5 / TWO_PI
    got = log_integrability(w, 0)
    assert math.isfinite(got)
    assert got == pytest.approx(expected, rel=1e-10)


def test_log_integrability_errors():
    arc = CircleSet.from_closed_arc(1.0, 2.5)
    with pytest.raises(IndexError):
        log_integrability(BoundaryWeight.lebesgue(arc), 3)
    with pytest.raises(NonIntegrableLog):
        log_integrability(BoundaryWeight(arc, (CuspPiece(1.0, 1.5),)), 0)


def test_area_measure_mass():
    assert SpaceMeasure().total_mass() == pytest.approx(1.0, abs=1e-15)
    # int (1-r)^a 2r dr = 2 B(2, a+1)
    assert SpaceMeasure(disk_alpha=1.0).disk_mass() == pytest.approx(1 / 3, abs=1e-15)


def test_weight_fourier_coefficients_of_an_arc():
    arc = CircleSet.from_closed_arc(0.0, math.pi)
    coeffs = BoundaryWeight.lebesgue(arc).fourier_coefficients(3)
    t = np.linspace(0, math.pi, 200001)
    for k, c in zip(range(-3, 4), coeffs):
        direct = np.trapezoid(np.exp(-1j * k * t), t) / TWO_PI
        assert c == pytest.approx(direct, abs=1e-9)


def test_measure_round_trip():
    arc = CircleSet.from_closed_arc(1.0, 2.5)
    mu = SpaceMeasure(0.5, 2.0, BoundaryWeight(arc, (CuspPiece(0.5, 0.25),)))
    assert SpaceMeasure.from_dict(mu.to_dict()) == mu
