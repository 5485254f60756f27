from __future__ import annotations

import math
from fractions import Fraction

import pytest

from okb.core import (
    ValuedPoint,
    analyze,
    build_semigroup,
    closure_check,
    homogeneity_check,
    observed_body,
    okounkov_cone,
    segment_inclusion_check,
    simplex,
    simplex_check,
    simplex_decomposition,
    volume_report,
)
from okb.errors import FlagError, ValidationError
from okb.geometry import (
    cone_equal,
    cone_from_generators,
    convex_hull,
    polytope_contains,
    polytope_equal,
    slice_at_height,
)
from okb.models import AbstractModel, PlaneModel, toric_preset
from okb.valuations import PlaneFlag, ToricFlag

F = Fraction
SQUARE = convex_hull([(0, 0), (1, 0), (0, 1), (1, 1)])
TRI4 = convex_hull([(0, 0), (4, 0), (0, 1)])


def test_toric_semigroup_sizes():
    S = build_semigroup(toric_preset("unit-square"), None, 2)
    assert len(S.degree(1)) == 4 and len(S.degree(2)) == 9


def test_plane_semigroup_degree_one():
    S = build_semigroup(PlaneModel(2), PlaneFlag("conic"), 1)
    assert set(S.degree(1)) == {(0, 0), (1, 0), (2, 0), (3, 0), (4, 0), (0, 1)}


def test_abstract_pass_through():
    pts = [(1, (0, 0)), (1, (2, 0)), (2, (1, 1))]
    S = build_semigroup(AbstractModel.from_points(pts))
    assert {(p.k, p.a) for p in S.points} == set(pts)


def test_inadmissible_flag_propagates():
    with pytest.raises(FlagError):
        build_semigroup(toric_preset("unit-square"), ToricFlag((0, 0), ((-1, 0), (0, 1))), 2)


def test_observed_body_examples():
    body, stab = observed_body(build_semigroup(toric_preset("unit-square"), None, 4))
    assert polytope_equal(body, SQUARE) and stab == 1
    body, stab = observed_body(build_semigroup(PlaneModel(2), PlaneFlag("conic"), 6))
    assert polytope_equal(body, TRI4) and stab == 1
    body, _ = observed_body(build_semigroup(AbstractModel.from_points([(1, (0, 0))])))
    assert body.vertices == ((0, 0),)


def test_unstabilized_body_reports_none():
    A = AbstractModel.from_points([(1, (0,)), (2, (3,))])
    body, stab = observed_body(build_semigroup(A))
    assert stab is None
    assert set(body.vertices) == {(0,), (F(3, 2),)}


def test_inner_approximation_is_monotone():
    flag = PlaneFlag("line")
    small, _ = observed_body(build_semigroup(PlaneModel(1), flag, 2))
    big, _ = observed_body(build_semigroup(PlaneModel(1), flag, 4))
    cone = okounkov_cone(build_semigroup(PlaneModel(1), flag, 4))
    limit = slice_at_height(cone, 1)
    assert all(polytope_contains(big, v) for v in small.vertices)
    assert all(polytope_contains(limit, v) for v in big.vertices)


def test_okounkov_cone_examples():
    S = build_semigroup(AbstractModel.from_points([(1, (0,)), (1, (4,))]))
    assert cone_equal(okounkov_cone(S), cone_from_generators([(1, 0), (1, 4)]))
    S = build_semigroup(toric_preset("unit-square"), None, 3)
    over = cone_from_generators([(1, 0, 0), (1, 1, 0), (1, 0, 1), (1, 1, 1)])
    assert cone_equal(okounkov_cone(S), over)


def test_simplex_check_examples():
    assert simplex_check(TRI4, 4, 2).passed
    assert not simplex_check(SQUARE, 1, 2).passed
    assert simplex_decomposition(ValuedPoint(1, (2, 0)), 4) == (F(1, 2), F(1, 2), 0)


def test_simplex_check_certificates():
    S = build_semigroup(PlaneModel(2), PlaneFlag("conic"), 3)
    res = simplex_check(TRI4, 4, 2, S)
    assert res.passed
    for d in res.certificate["decompositions"]:
        assert sum(d["weights"]) == d["k"] and d["nonnegative"]
    assert res.certificate["volume"] == F(4, 2)
    assert res.certificate["volume_equals_b_over_n_factorial"]


def test_segment_examples():
    assert segment_inclusion_check(TRI4, 4).passed
    assert segment_inclusion_check(SQUARE, 1).passed
    assert not segment_inclusion_check(TRI4, 5).passed


def test_closure_detects_missing_sums():
    A = AbstractModel.from_points([(1, (0,)), (1, (1,)), (2, (0,))])
    res = closure_check(build_semigroup(A))
    assert not res.passed and {"k": 2, "a": [1]} in res.certificate["missing"]


def test_volume_report_examples():
    S = build_semigroup(toric_preset("unit-square"), None, 4)
    rep = volume_report(S, toric_preset("unit-square"))
    assert rep.euclidean_volume == rep.hilbert_leading == 1
    S = build_semigroup(PlaneModel(2), PlaneFlag("conic"), 4)
    rep = volume_report(S, PlaneModel(2), simplex_b=4)
    assert rep.euclidean_volume == rep.hilbert_leading == 2
    assert rep.normalized_volume == 4 == math.factorial(2) * rep.euclidean_volume
    assert rep.volume_comparison["normalized_equals_b"]
    assert not rep.volume_comparison["euclidean_equals_b"]


def test_homogeneity_examples():
    assert homogeneity_check(toric_preset("unit-square"), None, 2, 3).passed
    assert homogeneity_check(toric_preset("standard-triangle"), None, 3, 3).passed
    assert homogeneity_check(toric_preset("hexagon"), None, 1, 2).passed
    assert homogeneity_check(PlaneModel(1), PlaneFlag("line"), 2, 3).passed
    with pytest.raises(ValidationError):
        homogeneity_check(toric_preset("unit-square"), None, 0, 2)


@pytest.mark.parametrize("name", ["unit-square", "standard-triangle", "segment", "hexagon", "trapezoid"])
def test_toric_analyze_passes(name):
    rep = analyze(toric_preset(name), kmax=4, homogeneity=(2,))
    assert rep.all_passed, {k: c.passed for k, c in rep.checks.items()}
    assert rep.euclidean_volume == rep.hilbert_leading


@pytest.mark.parametrize("d,curve", [(1, "conic"), (2, "conic"), (3, "conic"), (1, "line"), (2, "line")])
def test_plane_analyze_passes(d, curve):
    rep = analyze(PlaneModel(d), PlaneFlag(curve), kmax=4)
    assert rep.all_passed, {k: c.passed for k, c in rep.checks.items()}
    assert rep.euclidean_volume == F(d * d, 2)


def test_plane_d2_conic_runs_simplex_check():
    rep = analyze(PlaneModel(2), PlaneFlag("conic"), kmax=3)
    assert rep.checks["simplex"].passed
    assert "simplex" not in analyze(PlaneModel(1), PlaneFlag("conic"), kmax=3).checks


def test_simplex_helper():
    assert polytope_equal(simplex(4, 2), TRI4)
    assert set(simplex(2, 3).vertices) == {(0, 0, 0), (2, 0, 0), (0, 1, 0), (0, 0, 1)}


def test_kmax_validated():
    with pytest.raises(ValidationError):
        build_semigroup(toric_preset("unit-square"), None, 0)


def test_parallel_matches_serial(monkeypatch):
    serial = build_semigroup(PlaneModel(2), PlaneFlag("conic"), 3)
    monkeypatch.setenv("OKB_THREADS", "2")
    parallel = build_semigroup(PlaneModel(2), PlaneFlag("conic"), 3)
    assert parallel.points == serial.points
