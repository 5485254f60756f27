from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from okb.core import simplex_check
from okb.errors import ValidationError
from okb.geometry import cone_equal, cone_from_generators, convex_hull, polytope_contains, polytope_equal
from okb.surface import (
    decompose_effective,
    degree_along,
    fiber_scaling_check,
    global_cone,
    global_fiber,
    membership_decomposition,
    nef_segment_check,
    ns_build,
    surface_preset,
)

F = Fraction
P1P1 = surface_preset("p1xp1")
G = global_cone(P1P1)


def fiber_oracle(L, grid=6):
    """Points of the P1xP1 fiber over L on a grid, from the generator description.

    ``((a1, a2), L)`` is in the cone when ``E = L - a2*D`` has nonnegative
    entries in the (D1, D2) basis and ``0 <= a1 <= E.D``.
    """
    pts = set()
    for a1, a2 in itertools.product(range(grid + 1), repeat=2):
        E = (L[0] - a2, L[1] - a2)
        if min(E) >= 0 and a1 <= E[0] + E[1]:
            pts.add((a1, a2))
    return pts


def test_ns_build_accepts_product():
    assert ns_build([[0, 1], [1, 0]], [[1, 0], [0, 1]], [1, 1]).r == 2
    # an abelian product with the same lattice data gives the same object
    assert ns_build([[0, 1], [1, 0]], [[1, 0], [0, 1]], [1, 1], ["D1", "D2"]) == P1P1


def test_ns_build_rejects_negative_curve():
    # F1-like: exceptional curve E with E^2 = -1
    with pytest.raises(ValidationError, match="not nef"):
        ns_build([[-1, 1], [1, 0]], [[1, 0], [0, 1]], [1, 2])


@pytest.mark.parametrize(
    "Q,eff,ample",
    [
        ([[0, 1], [1]], [[1, 0]], [1, 1]),
        ([[0, 1], [2, 0]], [[1, 0]], [1, 1]),
        ([[0, 1], [1, 0]], [[1, 0], [0, 1]], [1, 0]),
        ([[0, 1], [1, 0]], [[1, 0, 0]], [1, 1]),
    ],
)
def test_ns_build_rejects_bad_data(Q, eff, ample):
    with pytest.raises(ValidationError):
        ns_build(Q, eff, ample)


def test_degree_along():
    assert degree_along(P1P1, (1, 0)) == 1
    assert degree_along(P1P1, (1, 1)) == 2
    assert degree_along(P1P1, (0, 0)) == 0


@settings(max_examples=50, deadline=None)
@given(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), st.tuples(st.integers(-3, 3), st.integers(-3, 3)))
def test_degree_along_is_linear(a, b):
    s = (a[0] + b[0], a[1] + b[1])
    assert degree_along(P1P1, s) == degree_along(P1P1, a) + degree_along(P1P1, b)


def test_p1xp1_generators():
    assert sorted(g.vector for g in G.generators) == sorted(
        tuple(F(x) for x in v)
        for v in [(0, 1, 1, 1), (0, 0, 1, 0), (0, 0, 0, 1), (1, 0, 1, 0), (1, 0, 0, 1)]
    )
    assert [g.label for g in G.generators] == ["((0,0),D1)", "((1,0),D1)", "((0,0),D2)", "((1,0),D2)", "((0,1),D)"]
    assert len(G.cone.rays) == 5


def test_rank_one_toy():
    T = global_cone(ns_build([[1]], [[1]], [1]))
    assert sorted(g.vector for g in T.generators) == [(0, 0, 1), (0, 1, 1), (1, 0, 1)]


def test_scaled_ample_recomputes_degrees():
    G2 = global_cone(ns_build([[0, 1], [1, 0]], [[1, 0], [0, 1]], [2, 2], ["D1", "D2"]))
    vecs = {g.label: g.vector for g in G2.generators}
    assert vecs["((2,0),D1)"] == (2, 0, 1, 0)
    assert vecs["((0,1),D)"] == (0, 1, 2, 2)
    assert vecs["((0,0),D1)"] == (0, 0, 1, 0)


def test_fibers():
    assert polytope_equal(global_fiber(G, (1, 1)), convex_hull([(0, 0), (2, 0), (0, 1)]))
    assert polytope_equal(global_fiber(G, (1, 0)), convex_hull([(0, 0), (1, 0)]))
    assert global_fiber(G, (-1, 0)).is_empty
    with pytest.raises(ValidationError):
        global_fiber(G, (1, 1, 1))


@pytest.mark.parametrize("L", [(1, 1), (2, 3), (1, 0), (0, 2), (3, 1)])
def test_fiber_lattice_points_match_oracle(L):
    fiber = global_fiber(G, L)
    grid = {(a, b) for a in range(7) for b in range(7) if polytope_contains(fiber, (a, b))}
    assert grid == fiber_oracle(L)


def test_fiber_over_ample_is_simplex():
    DD = P1P1.dot(P1P1.ample, P1P1.ample)
    assert DD == 2
    assert simplex_check(global_fiber(G, P1P1.ample), DD, 2).passed


def test_decompose_effective():
    assert decompose_effective(P1P1, (2, 3)).coefficients == (2, 3)
    assert decompose_effective(P1P1, (1, 1)).coefficients == (1, 1)
    res = decompose_effective(P1P1, (-1, 0))
    assert not res.member and res.separating_normal is not None


def test_decompose_with_non_basis_generators():
    S = ns_build([[0, 1], [1, 0]], [[1, 0], [0, 1], [1, 1]], [1, 1])
    dec = decompose_effective(S, (2, 1))
    assert dec.member and all(t >= 0 for t in dec.coefficients)
    combo = tuple(sum(t * g[j] for t, g in zip(dec.coefficients, S.eff)) for j in range(2))
    assert combo == (2, 1)


def test_membership_examples():
    m = membership_decomposition(G, (2, 0, 1, 1))
    assert m.E == (1, 1) and m.c == 1
    nonzero = {g.label: c for c, g in m.terms if c}
    assert nonzero == {"((1,0),D1)": 1, "((1,0),D2)": 1}
    m = membership_decomposition(G, (0, 1, 1, 1))
    assert m.E == (0, 0) and m.c == 0
    assert {g.label: c for c, g in m.terms if c} == {"((0,1),D)": 1}
    with pytest.raises(ValidationError, match="exceeds"):
        membership_decomposition(G, (3, 0, 1, 1))
    with pytest.raises(ValidationError, match="not effective"):
        membership_decomposition(G, (0, 2, 1, 1))


def test_generators_reproduce_themselves():
    for g in G.generators:
        assert membership_decomposition(G, g.vector).recombine() == g.vector


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 4), st.integers(0, 4), st.fractions(0, 3, max_denominator=3), st.fractions(0, 1))
def test_membership_points_lie_in_cone(e1, e2, a2, frac):
    E = (F(e1), F(e2))
    a1 = frac * (E[0] + E[1])
    L = (E[0] + a2, E[1] + a2)
    p = (a1, a2) + L
    m = membership_decomposition(G, p)
    assert m.recombine() == p
    assert all(c >= 0 for c, _ in m.terms)
    assert G.cone.contains(p)


def test_nef_segments():
    assert nef_segment_check(G, (1, 1)).passed
    assert nef_segment_check(G, (1, 0)).passed
    res = nef_segment_check(G, (0, 0))
    assert res.passed and res.certificate["fiber"].vertices == ((0, 0),)


@pytest.mark.parametrize("L", [(1, 0), (1, 1), (2, 1), (0, 0)])
@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_fiber_scaling(L, m):
    assert fiber_scaling_check(G, L, m).passed


def test_cone_equality_with_reference_list():
    ref = cone_from_generators([(0, 1, 1, 1), (0, 0, 1, 0), (0, 0, 0, 1), (1, 0, 1, 0), (1, 0, 0, 1)])
    assert cone_equal(G.cone, ref)


def test_p2_preset():
    P2 = surface_preset("p2")
    assert polytope_equal(global_fiber(global_cone(P2), (2,)), convex_hull([(0, 0), (2, 0), (0, 2)]))
    with pytest.raises(ValidationError):
        surface_preset("k3")
