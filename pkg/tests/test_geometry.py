from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from okb.errors import UnboundedError, ValidationError
from okb.geometry import (
    cone_contains,
    cone_equal,
    cone_fiber,
    cone_from_generators,
    convex_hull,
    determinant,
    empty_polytope,
    polytope_contains,
    polytope_equal,
    polytope_from_inequalities,
    polytope_volume,
    rank,
    scale_polytope,
    slice_at_height,
    solve_linear,
)

F = Fraction


def V(*pts):
    return {tuple(F(x) for x in p) for p in pts}


small = st.integers(-4, 4)
points2 = st.lists(st.tuples(small, small), min_size=1, max_size=8)
points3 = st.lists(st.tuples(small, small, small), min_size=1, max_size=7)


def shoelace(vertices):
    """Area of a convex polygon from its vertices (sorted by angle)."""
    cx = sum(v[0] for v in vertices) / len(vertices)
    cy = sum(v[1] for v in vertices) / len(vertices)
    vs = sorted(vertices, key=lambda v: math.atan2(v[1] - cy, v[0] - cx))
    s = sum(vs[i][0] * vs[(i + 1) % len(vs)][1] - vs[(i + 1) % len(vs)][0] * vs[i][1] for i in range(len(vs)))
    return abs(F(s)) / 2


# --- convex_hull ---------------------------------------------------------


def test_hull_drops_interior_point():
    P = convex_hull([(0, 0), (1, 0), (0, 1), (1, 1), (F(1, 2), F(1, 2))])
    assert set(P.vertices) == V((0, 0), (1, 0), (0, 1), (1, 1))


def test_hull_of_extreme_points_is_unchanged():
    assert set(convex_hull([(0, 0), (2, 0), (0, 1)]).vertices) == V((0, 0), (2, 0), (0, 1))


def test_hull_of_collinear_points_is_segment():
    P = convex_hull([(0, 0), (1, 1), (2, 2)])
    assert set(P.vertices) == V((0, 0), (2, 2))
    assert P.dim == 1


def test_hull_dimension_mismatch():
    with pytest.raises(ValidationError):
        convex_hull([(0, 0), (1, 0, 0)])


def test_hull_vertices_sorted_lexicographically():
    P = convex_hull([(1, 1), (0, 1), (1, 0), (0, 0)])
    assert list(P.vertices) == sorted(P.vertices)


@settings(max_examples=60, deadline=None)
@given(points2)
def test_hull_idempotent_and_irredundant(pts):
    P = convex_hull(pts)
    assert polytope_equal(convex_hull(P.vertices), P)
    for p in pts:
        assert polytope_contains(P, p)
    for v in P.vertices:
        others = [w for w in P.vertices if w != v]
        if others:
            assert not polytope_contains(convex_hull(others), v)


@settings(max_examples=30, deadline=None)
@given(points3)
def test_hull_contains_inputs_3d(pts):
    P = convex_hull(pts)
    assert all(polytope_contains(P, p) for p in pts)
    assert polytope_equal(convex_hull(P.vertices), P)


# --- cones ---------------------------------------------------------------


def test_cone_drops_interior_generator():
    C = cone_from_generators([(1, 0), (1, 1), (2, 1)])
    assert set(C.rays) == V((1, 0), (1, 1))
    assert C.pointed


def test_cone_primitivizes():
    assert cone_from_generators([(2, 0)]).rays == ((1, 0),)


def test_line_is_flagged_non_pointed():
    C = cone_from_generators([(1, 0), (-1, 0)])
    assert not C.pointed
    assert C.lineality


def test_zero_generator_alone_rejected():
    with pytest.raises(ValidationError):
        cone_from_generators([(0, 0)])


def test_cone_contains_with_coefficients():
    C = cone_from_generators([(1, 0), (1, 1)])
    res = cone_contains(C, (2, 1))
    assert res.inside
    combo = {r: c for r, c in zip(C.rays, res.coefficients)}
    assert combo == {(1, 0): 1, (1, 1): 1}


def test_cone_rejects_with_separating_normal():
    C = cone_from_generators([(1, 0), (1, 1)])
    res = cone_contains(C, (-1, 0))
    assert not res.inside
    nu = res.separating_normal
    assert all(sum(a * b for a, b in zip(nu, r)) >= 0 for r in C.rays)
    assert nu[0] * -1 < 0


def test_apex_has_zero_coefficients():
    res = cone_contains(cone_from_generators([(1, 0), (0, 1)]), (0, 0))
    assert res.inside and all(c == 0 for c in res.coefficients)


def test_cone_equal_by_mutual_containment():
    a = cone_from_generators([(1, 0), (0, 1)])
    b = cone_from_generators([(2, 0), (1, 1), (0, 3)])
    assert cone_equal(a, b)
    assert not cone_equal(a, cone_from_generators([(1, 0), (1, 1)]))


gens3 = st.lists(st.tuples(small, small, small).filter(any), min_size=1, max_size=6)
pts3 = st.tuples(*(st.fractions(-5, 5, max_denominator=3),) * 3)


@settings(max_examples=80, deadline=None)
@given(gens3, pts3)
def test_membership_certificates_are_sound(gens, p):
    C = cone_from_generators(gens)
    res = cone_contains(C, p)
    if res.inside:
        assert all(c >= 0 for c in res.coefficients)
        back = tuple(sum(c * r[j] for c, r in zip(res.coefficients, C.rays)) for j in range(3))
        assert back == tuple(p)
    else:
        nu = res.separating_normal
        assert all(sum(a * b for a, b in zip(nu, r)) >= 0 for r in C.rays)
        assert sum(a * b for a, b in zip(nu, p)) < 0


@settings(max_examples=50, deadline=None)
@given(gens3, st.lists(st.integers(0, 4), min_size=6, max_size=6))
def test_nonnegative_combinations_are_members(gens, weights):
    C = cone_from_generators(gens)
    p = tuple(sum(w * g[j] for w, g in zip(weights, gens)) for j in range(3))
    assert cone_contains(C, p).inside


@settings(max_examples=40, deadline=None)
@given(gens3)
def test_generators_are_members_and_facets_valid(gens):
    C = cone_from_generators(gens)
    for g in gens:
        assert C.contains(g)
    for r in C.rays:
        assert all(sum(a * b for a, b in zip(f, r)) >= 0 for f in C.facets)


# --- slices --------------------------------------------------------------


def test_slice_triangle():
    C = cone_from_generators([(1, 0, 0), (1, 2, 0), (1, 0, 1)])
    assert set(slice_at_height(C, 1).vertices) == V((0, 0), (2, 0), (0, 1))


def test_slice_segment():
    C = cone_from_generators([(1, 0), (1, 4)])
    assert set(slice_at_height(C, 1).vertices) == V((0,), (4,))


def test_slice_with_recession_ray_is_unbounded():
    with pytest.raises(UnboundedError):
        slice_at_height(cone_from_generators([(1, 0), (0, 1)]), 1)


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.tuples(st.integers(1, 4), small, small), min_size=1, max_size=6),
    st.fractions(F(1, 3), 5, max_denominator=4),
)
def test_slice_scales_with_height(gens, h):
    C = cone_from_generators(gens)
    assert polytope_equal(slice_at_height(C, h), scale_polytope(slice_at_height(C, 1), h))


def test_cone_fiber_matches_slice():
    C = cone_from_generators([(0, 0, 1), (2, 0, 1), (0, 1, 1)])
    assert set(cone_fiber(C, (1,)).vertices) == V((0, 0), (2, 0), (0, 1))
    assert cone_fiber(C, (-1,)).is_empty


# --- volume / equality / scaling ------------------------------------------


def test_volumes():
    assert polytope_volume(convex_hull([(0, 0), (1, 0), (0, 1), (1, 1)])) == 1
    assert polytope_volume(convex_hull([(0, 0), (4, 0), (0, 1)])) == 2


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("b", [1, 3, F(5, 2)])
def test_simplex_volume_is_b_over_n_factorial(b, n):
    pts = [(0,) * n, (b,) + (0,) * (n - 1)] + [tuple(int(i == j) for j in range(n)) for i in range(1, n)]
    assert polytope_volume(convex_hull(pts)) == F(b) / math.factorial(n)


def test_lower_dimensional_volume_is_zero():
    P = convex_hull([(0, 0), (1, 1)])
    assert polytope_volume(P) == 0 and P.dim == 1


@settings(max_examples=60, deadline=None)
@given(points2)
def test_area_matches_shoelace(pts):
    P = convex_hull(pts)
    expected = shoelace(P.vertices) if P.dim == 2 else 0
    assert polytope_volume(P) == expected


@settings(max_examples=40, deadline=None)
@given(points3, st.fractions(0, 4, max_denominator=3))
def test_volume_scales_with_power_of_dimension(pts, m):
    P = convex_hull(pts)
    Q = scale_polytope(P, m)
    assert polytope_volume(Q) == m ** P.ambient_dim * polytope_volume(P)


def test_equality_examples():
    sq = convex_hull([(0, 0), (1, 0), (0, 1), (1, 1)])
    assert polytope_equal(sq, convex_hull([(0, 0), (1, 0), (0, 1), (1, 1), (F(1, 2), F(1, 2))]))
    assert not polytope_equal(sq, convex_hull([(0, 0), (2, 0), (0, 2), (2, 2)]))
    assert polytope_equal(convex_hull([(0, 0), (4, 0), (0, 1)]), convex_hull([(0, 1), (0, 0), (4, 0)]))


def test_scaling_examples():
    sq = convex_hull([(0, 0), (1, 0), (0, 1), (1, 1)])
    assert polytope_equal(scale_polytope(sq, 2), convex_hull([(0, 0), (2, 0), (0, 2), (2, 2)]))
    assert polytope_equal(scale_polytope(sq, 1), sq)
    assert set(scale_polytope(sq, 0).vertices) == V((0, 0))
    with pytest.raises(ValidationError):
        scale_polytope(sq, -1)


def test_h_representation_agrees_with_vertices():
    P = convex_hull([(0, 0), (3, 0), (0, 2), (1, 2)])
    Q = polytope_from_inequalities([(a, b) for a, b in P.facets], [], 2)
    assert polytope_equal(P, Q)


def test_inequalities_infeasible_and_unbounded():
    assert polytope_from_inequalities([((1,), 0), ((-1,), -1)], [], 1).is_empty
    with pytest.raises(UnboundedError):
        polytope_from_inequalities([((1,), 0)], [], 1)


def test_empty_polytope():
    E = empty_polytope(2)
    assert E.is_empty and E.dim == -1 and polytope_volume(E) == 0


# --- linear algebra ------------------------------------------------------


def test_rank_determinant_solve():
    assert rank([(1, 2), (2, 4)]) == 1
    assert determinant([(2, 0), (0, 3)]) == 6
    x = solve_linear([(1, 0), (1, 1)], (3, 2))
    assert x == (1, 2)
    assert solve_linear([(1, 1)], (1, 2)) is None
