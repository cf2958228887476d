import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ptmu.circle_sets import (
    Arc,
    CallableGapRule,
    CantorGenerator,
    CircleSet,
    PowerGapRule,
    RatioGapRule,
    distance_to,
    entropy,
    is_beurling_carleson,
    make_cantor_set,
    set_distance,
    wrap_angle,
)

TWO_PI = 2 * math.pi


def brute_gap_lengths(base_length, scale, depth):
    # level-k gaps of length scale * 2^-k / k, one per level-(k-1) interval
    lengths = []
    parents = [base_length]
    for k in range(1, depth + 1):
        g = scale * 2.0**-k / k
        lengths += [g] * len(parents)
        parents = [0.5 * (p - g) for p in parents for _ in (0, 1)]
    return lengths, parents


def test_single_arc_complement_entropy():
    E = CircleSet((Arc(0.0, 0.25),))
    assert entropy(E) == pytest.approx(0.25 * math.log(4), abs=1e-15)
    assert entropy(E) == pytest.approx(0.34657, abs=1e-5)


def test_full_circle_has_zero_entropy():
    assert entropy(CircleSet.full_circle()) == 0.0


def test_variable_gap_entropy_matches_direct_summation():
    base = Arc(0.0, 0.5)
    E = make_cantor_set(base, PowerGapRule(0.25, 1.0), 8)
    gaps, _ = brute_gap_lengths(0.5, 0.25, 8)
    outer = 0.5
    expected = math.fsum([g * math.log(1 / g) for g in gaps] + [outer * math.log(1 / outer)])
    assert entropy(E) == pytest.approx(expected, rel=1e-13)


def test_finite_arc_system_is_beurling_carleson():
    E = CircleSet((Arc(0.1, 0.2), Arc(2.0, 0.1)))
    assert is_beurling_carleson(E).verdict == "yes"


def test_middle_thirds_is_beurling_carleson():
    E = make_cantor_set(Arc(0.0, 1.0), RatioGapRule(1 / 3), 8)
    v = is_beurling_carleson(E)
    assert v.verdict == "yes"
    # comparison series sum_k 2^(k-1) 3^-k k ln 3 converges to 3 ln 3
    series = sum(2 ** (k - 1) * 3.0**-k * k * math.log(3) for k in range(1, 400))
    assert series == pytest.approx(3 * math.log(3), rel=1e-12)
    assert v.partial_sums[-1] < series


def test_variable_gap_diverges_with_known_increments():
    E = make_cantor_set(Arc(0.0, 1.0), PowerGapRule(0.25, 1.0), 10)
    v = is_beurling_carleson(E)
    assert v.verdict == "diverging"
    # level-k increment 2^(k-1) g_k log(1/g_k), g_k = 2^-k/(4k)
    for k in range(1, 11):
        closed = (k * math.log(2) + math.log(4 * k)) / (8 * k)
        assert v.increments[k] == pytest.approx(closed, rel=1e-12)
    assert PowerGapRule(0.25, 1.0).increment_limit() == pytest.approx(math.log(2) / 8)


def test_unknown_rule_is_truncated_unknown():
    rule = CallableGapRule(lambda k, parent: parent * 0.5 ** (k + 3), "shrinking")
    E = make_cantor_set(Arc(0.0, 1.0), rule, 6)
    assert is_beurling_carleson(E, budget=0.05).verdict == "truncated-unknown"
    # a generous budget below the increments reads as divergence
    assert is_beurling_carleson(E, budget=1e-6).verdict == "diverging"


def test_budget_must_be_positive():
    with pytest.raises(ValueError):
        is_beurling_carleson(CircleSet.full_circle(), budget=0.0)


def test_distance_examples():
    E = CircleSet.from_points([0.0])
    assert distance_to(E, 1.0) == 0.0
    assert distance_to(E, -1.0) == pytest.approx(2.0)
    C = make_cantor_set(Arc(0.3, 0.5), RatioGapRule(1 / 3), 6)
    assert distance_to(C, 0.0) == 1.0


def test_cantor_depth_zero_is_base_arc():
    base = Arc(1.0, 0.3)
    E = make_cantor_set(base, RatioGapRule(1 / 3), 0)
    assert E.components() == [(pytest.approx(1.0), pytest.approx(0.3 * TWO_PI))]


def test_middle_thirds_depth_one():
    E = make_cantor_set(Arc(0.0, 0.5), RatioGapRule(1 / 3), 1)
    spans = sorted(span / TWO_PI for _, span in E.components())
    assert spans == pytest.approx([1 / 6, 1 / 6], abs=1e-15)


def test_variable_gap_depth_eight_construction():
    E = make_cantor_set(Arc(0.0, 0.5), PowerGapRule(0.25, 1.0), 8)
    comps = E.components()
    assert len(comps) == 256
    _, kept = brute_gap_lengths(0.5, 0.25, 8)
    assert E.measure == pytest.approx(math.fsum(kept), abs=1e-14)
    # 0.5 minus sum_k 2^(k-1) * 2^-k / (4k) = 0.5 - H_8 / 8
    harmonic = math.fsum(1.0 / k for k in range(1, 9))
    assert E.measure == pytest.approx(0.5 - harmonic / 8, abs=1e-14)


def test_gap_that_does_not_fit_is_rejected():
    with pytest.raises(ValueError):
        make_cantor_set(Arc(0.0, 0.01), PowerGapRule(0.25, 1.0), 2)


def test_overlapping_arcs_are_rejected():
    with pytest.raises(ValueError):
        CircleSet((Arc(0.0, 0.3), Arc(1.0, 0.3)))


def test_serialization_round_trip():
    E = CircleSet((Arc(0.5, 0.2), Arc(3.0, 0.1)))
    assert CircleSet.from_dict(E.to_dict()) == E


arcs = st.lists(
    st.tuples(st.floats(0.0, TWO_PI, exclude_max=True), st.floats(1e-4, 0.05)), min_size=1, max_size=6
)


def _disjoint(arc_list):
    out = []
    for start, length in arc_list:
        a = Arc(start, length)
        try:
            CircleSet(tuple(out) + (a,))
        except ValueError:
            continue
        out.append(a)
    return out


@settings(max_examples=60, deadline=None)
@given(arcs)
def test_entropy_is_additive_over_concatenated_arc_lists(a):
    disjoint = _disjoint(a)
    A, B = disjoint[::2], disjoint[1::2]
    union = CircleSet(tuple(A) + tuple(B))
    assert entropy(union) == pytest.approx(entropy(CircleSet(tuple(A))) + entropy(CircleSet(tuple(B))), rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(arcs, st.floats(0.0, TWO_PI), st.floats(0.0, 1.0))
def test_distance_is_zero_on_the_set_and_bounded(a, angle, r):
    E = CircleSet(tuple(_disjoint(a)))
    z = r * complex(math.cos(angle), math.sin(angle))
    d = distance_to(E, z)
    assert 0.0 <= d <= 2.0
    if r == 1.0 and bool(E.contains(np.array([angle]))[0]):
        assert d == pytest.approx(0.0, abs=1e-12)
    assert d >= 1.0 - r - 1e-15


@settings(max_examples=40, deadline=None)
@given(st.floats(-20.0, 20.0))
def test_wrap_angle_range(x):
    w = wrap_angle(x)
    assert 0.0 <= w < TWO_PI
    assert math.cos(w) == pytest.approx(math.cos(x), abs=1e-9)


def test_set_distance_between_disjoint_arcs(left_half):
    right = CircleSet.from_closed_arc(-0.25 * math.pi, 0.25 * math.pi)
    # nearest endpoints are pi/4 and pi/2 apart in angle
    assert set_distance(left_half, right) == pytest.approx(2 * math.sin(math.pi / 8), abs=1e-14)


def test_generator_levels_double():
    gen = CantorGenerator(Arc(0.0, 0.5), RatioGapRule(0.5))
    levels = gen.levels(4)
    assert [len(lv) for lv in levels] == [1, 2, 4, 8, 16]
