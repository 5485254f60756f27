"""The acceptance battery run by ``okb verify``.

Each criterion returns a :class:`Criterion` with a pass flag, wall time and a
short detail string.  Criterion 3 is cross-checked against
:func:`brute_force_plane_values`, which never touches the division or
elimination code: it expands every monomial in local coordinates around the
flag point and reads the value set off the pivots of an echelon form.
"""
from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .core import (
    build_semigroup,
    closure_check,
    homogeneity_check,
    observed_body,
    simplex,
    simplex_check,
    segment_inclusion_check,
    volume_report,
)
from .forms import Form, random_form
from .geometry import (
    cone_contains,
    cone_equal,
    cone_from_generators,
    convex_hull,
    polytope_equal,
    polytope_volume,
)
from .models import PlaneModel, toric_preset
from .surface import (
    degree_along,
    fiber_scaling_check,
    global_cone,
    global_fiber,
    nef_segment_check,
    surface_preset,
)
from .valuations import (
    PlaneFlag,
    default_toric_flag,
    plane_valuation,
    toric_valuation,
)


@dataclass
class Criterion:
    number: int
    name: str
    passed: bool
    seconds: float
    limit: float | None
    detail: str

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        limit = f" (limit {self.limit:g}s)" if self.limit else ""
        return f"[{status}] {self.number}. {self.name}: {self.detail} [{self.seconds:.2f}s{limit}]"


def _timed(number: int, name: str, limit: float | None, fn: Callable[[], tuple[bool, str]]) -> Criterion:
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failed criterion, reported as such
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    dt = time.perf_counter() - t0
    if limit is not None and dt >= limit:
        ok, detail = False, f"{detail}; runtime {dt:.2f}s exceeds {limit}s"
    return Criterion(number, name, ok, dt, limit, detail)


# ---------------------------------------------------------------------------
# independent oracle for the plane model with the conic flag


def _local_expansion(exps: tuple[int, int, int]) -> dict[tuple[int, int], int]:
    """``x^a y^b z^c`` at ``x = 1``, ``z = w + y^2``, as ``{(w_exp, y_exp): coeff}``."""
    a, b, c = exps
    return {(i, b + 2 * (c - i)): math.comb(c, i) for i in range(c + 1)}


def _pivot_columns(rows: list[list[int]]) -> list[int]:
    rows = [list(r) for r in rows if any(r)]
    pivots = []
    col = 0
    ncols = len(rows[0]) if rows else 0
    r = 0
    while r < len(rows) and col < ncols:
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][col]
        for i in range(r + 1, len(rows)):
            if rows[i][col]:
                f = rows[i][col]
                rows[i] = [p * x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        col += 1
    return pivots


def brute_force_plane_values(d: int, k: int) -> set[tuple[int, int]]:
    """Value set of ``H0(O(d*k))`` for the conic flag, by local expansion.

    Near ``(1:0:0)`` the conic is ``w = z - y^2 = 0`` and ``y`` is a
    coordinate on it, so the value of a section is its lowest monomial in
    ``(w, y)`` ordered by ``w``-degree first.  The set of lowest monomials of
    a linear space is the set of pivot columns of its echelon form.
    """
    deg = d * k
    monos = [
        (a, b, deg - a - b) for a in range(deg, -1, -1) for b in range(deg - a, -1, -1)
    ]
    expansions = [_local_expansion(e) for e in monos]
    cols = sorted({key for ex in expansions for key in ex})
    index = {key: i for i, key in enumerate(cols)}
    rows = []
    for ex in expansions:
        row = [0] * len(cols)
        for key, c in ex.items():
            row[index[key]] = c
        rows.append(row)
    return {(cols[j][1], cols[j][0]) for j in _pivot_columns(rows)}


# ---------------------------------------------------------------------------
# criteria

P1XP1_REFERENCE = [
    (0, 1, 1, 1),
    (0, 0, 1, 0),
    (0, 0, 0, 1),
    (1, 0, 1, 0),
    (1, 0, 0, 1),
]


def criterion_1() -> tuple[bool, str]:
    G = global_cone(surface_preset("p1xp1"))
    listed = sorted(tuple(g.vector) for g in G.generators)
    expected = sorted(tuple(Fraction(x) for x in v) for v in P1XP1_REFERENCE)
    reference = cone_from_generators(P1XP1_REFERENCE)
    same = cone_equal(G.cone, reference)
    extreme = len(G.cone.rays) == 5
    ok = listed == expected and same and extreme
    return ok, f"generators match={listed == expected}, cone equality={same}, extreme rays={len(G.cone.rays)}"


def criterion_2() -> tuple[bool, str]:
    S = surface_preset("p1xp1")
    G = global_cone(S)
    DD = S.dot(S.ample, S.ample)
    fiber = global_fiber(G, S.ample)
    target = convex_hull([(0, 0), (2, 0), (0, 1)])
    chk = simplex_check(fiber, DD, 2)
    ok = DD == 2 and polytope_equal(fiber, target) and chk.passed
    return ok, f"D.D={DD}, fiber={_verts(fiber)}, simplex_check(b=2,n=2)={chk.passed}"


def criterion_3(kmax: int = 6) -> tuple[bool, str]:
    model, flag = PlaneModel(2), PlaneFlag("conic")
    S = build_semigroup(model, flag, kmax)
    body, stab = observed_body(S)
    target = convex_hull([(0, 0), (4, 0), (0, 1)])
    problems = []
    for k in range(1, kmax + 1):
        vals = set(S.degree(k))
        predicted = {(a1, a2) for a2 in range(k + 1) for a1 in range(4 * (k - a2) + 1)}
        oracle = brute_force_plane_values(2, k)
        n_expected = (k + 1) * (2 * k + 1)
        if not (vals == predicted == oracle and len(vals) == n_expected == model.dim(k)):
            problems.append(k)
    ok = polytope_equal(body, target) and stab == 1 and not problems
    return ok, f"body={_verts(body)}, stabilized_at={stab}, degrees failing value-set checks={problems}"


def criterion_4() -> tuple[bool, str]:
    cases = [
        ("toric unit square", toric_preset("unit-square"), None, 6, Fraction(1)),
        ("toric standard triangle", toric_preset("standard-triangle"), None, 6, Fraction(1, 2)),
        ("plane d=2 conic", PlaneModel(2), PlaneFlag("conic"), 6, Fraction(2)),
    ]
    parts, ok = [], True
    for name, model, flag, kmax, expected in cases:
        S = build_semigroup(model, flag, kmax)
        rep = volume_report(S, model)
        good = rep.euclidean_volume == rep.hilbert_leading == expected
        ok = ok and good
        parts.append(f"{name}: {rep.euclidean_volume}={rep.hilbert_leading}")
    return ok, "; ".join(parts)


def criterion_5() -> tuple[bool, str]:
    parts, ok = [], True
    for name, model, flag, b in [
        ("plane d=2 conic", PlaneModel(2), PlaneFlag("conic"), 4),
        ("toric unit square", toric_preset("unit-square"), None, 1),
        ("toric standard triangle", toric_preset("standard-triangle"), None, 1),
    ]:
        body, _ = observed_body(build_semigroup(model, flag, 6 if isinstance(model, PlaneModel) else 4))
        res = segment_inclusion_check(body, b).passed
        ok = ok and res
        parts.append(f"{name} [0,{b}]: {res}")
    G = global_cone(surface_preset("p1xp1"))
    for L in [(1, 0), (0, 1), (1, 1)]:
        res = nef_segment_check(G, L).passed
        ok = ok and res
        parts.append(f"nef {L}: {res}")
    return ok, "; ".join(parts)


def criterion_6() -> tuple[bool, str]:
    parts, ok = [], True
    for name in ["unit-square", "standard-triangle"]:
        model = toric_preset(name)
        for m in (2, 3):
            res = homogeneity_check(model, None, m, 4).passed
            ok = ok and res
            parts.append(f"{name} m={m}: {res}")
    return ok, "; ".join(parts)


def property_additivity(pairs: int = 1000, seed: int = 20240601) -> tuple[bool, str]:
    rng = random.Random(seed)
    failures = 0
    flags = [PlaneFlag("conic"), PlaneFlag("line")]
    toric = toric_preset("hexagon")
    tflag = default_toric_flag(toric)
    for i in range(pairs):
        kind = i % 4
        if kind == 3:
            k1, k2 = rng.randint(1, 3), rng.randint(1, 3)
            m1, m2 = rng.choice(toric.sections(k1)), rng.choice(toric.sections(k2))
            prod = tuple(x + y for x, y in zip(m1, m2))
            lhs = toric_valuation(prod, k1 + k2, tflag)
            rhs = tuple(x + y for x, y in zip(toric_valuation(m1, k1, tflag), toric_valuation(m2, k2, tflag)))
        else:
            flag = flags[kind % 2]
            if kind == 2:
                s = Form.monomial(_rand_exps(rng, rng.randint(1, 4)))
                t = Form.monomial(_rand_exps(rng, rng.randint(1, 4)))
            else:
                s = _structured_form(rng, flag)
                t = _structured_form(rng, flag)
            lhs = plane_valuation(s * t, flag)
            rhs = tuple(x + y for x, y in zip(plane_valuation(s, flag), plane_valuation(t, flag)))
        failures += lhs != rhs
    return failures == 0, f"{pairs} pairs, {failures} failures"


def _rand_exps(rng, deg):
    a = rng.randint(0, deg)
    b = rng.randint(0, deg - a)
    return (a, b, deg - a - b)


def _structured_form(rng, flag):
    # random form times a random power of the flag curve, so both coordinates vary
    base = random_form(rng, rng.randint(1, 3), 3, nterms=rng.randint(1, 4))
    return base * flag.equation ** rng.randint(0, 2)


def property_closure() -> tuple[bool, str]:
    parts, ok = [], True
    for name, model, flag in [
        ("unit-square", toric_preset("unit-square"), None),
        ("standard-triangle", toric_preset("standard-triangle"), None),
        ("plane d=2 conic", PlaneModel(2), PlaneFlag("conic")),
        ("plane d=1 line", PlaneModel(1), PlaneFlag("line")),
    ]:
        res = closure_check(build_semigroup(model, flag, 6))
        ok = ok and res.passed
        parts.append(f"{name}: {res.certificate['pairs']} sums")
    return ok, "; ".join(parts)


def property_membership(samples: int = 200, seed: int = 7) -> tuple[bool, str]:
    rng = random.Random(seed)
    cones = [
        cone_from_generators([(1, 0), (1, 1)]),
        cone_from_generators([(1, 0, 0), (1, 2, 0), (1, 0, 1)]),
        global_cone(surface_preset("p1xp1")).cone,
        cone_from_generators([(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, -1)]),
    ]
    bad = 0
    inside = 0
    for i in range(samples):
        C = cones[i % len(cones)]
        if i % 2:
            # a known member: random nonnegative combination of the rays
            coef = [Fraction(rng.randint(0, 5), rng.randint(1, 3)) for _ in C.rays]
            p = tuple(sum(c * r[j] for c, r in zip(coef, C.rays)) for j in range(C.ambient_dim))
        else:
            p = tuple(Fraction(rng.randint(-4, 6), rng.randint(1, 3)) for _ in range(C.ambient_dim))
        res = cone_contains(C, p)
        if res.inside:
            inside += 1
            back = tuple(sum(c * r[j] for c, r in zip(res.coefficients, C.rays)) for j in range(C.ambient_dim))
            bad += back != p or any(c < 0 for c in res.coefficients)
        else:
            nu = res.separating_normal
            bad += not (all(_dot(nu, r) >= 0 for r in C.rays) and _dot(nu, p) < 0)
    ok = bad == 0 and inside >= samples // 2
    return ok, f"{samples} queries ({inside} inside), {bad} invalid certificates"


def property_simplex_volume() -> tuple[bool, str]:
    bodies = []
    for b in (1, 2, 3, 4, Fraction(5, 2)):
        for n in (1, 2, 3):
            bodies.append((simplex(b, n), b, n))
    bodies.append((observed_body(build_semigroup(PlaneModel(2), PlaneFlag("conic"), 3))[0], 4, 2))
    bodies.append((observed_body(build_semigroup(PlaneModel(1), PlaneFlag("line"), 3))[0], 1, 2))
    S = surface_preset("p1xp1")
    bodies.append((global_fiber(global_cone(S), S.ample), 2, 2))
    bodies.append((convex_hull([(0, 0), (1, 0), (0, 1), (1, 1)]), 1, 2))  # fails the check
    passed = bad = 0
    for body, b, n in bodies:
        if simplex_check(body, b, n).passed:
            passed += 1
            bad += polytope_volume(body) != Fraction(b) / math.factorial(n)
    return bad == 0 and passed == len(bodies) - 1, f"{passed} passing simplex checks, {bad} volume mismatches"


def property_fiber_scaling() -> tuple[bool, str]:
    G = global_cone(surface_preset("p1xp1"))
    classes = [(1, 0), (0, 1), (1, 1), (2, 1), (1, 3), (0, 0)]
    bad = []
    for L in classes:
        for m in range(1, 5):
            if not fiber_scaling_check(G, L, m).passed:
                bad.append((L, m))
    return not bad, f"{len(classes) * 4} (class, m) pairs, failures={bad}"


def criterion_7() -> tuple[bool, str]:
    parts, ok = [], True
    for name, fn in [
        ("additivity", property_additivity),
        ("closure", property_closure),
        ("membership", property_membership),
        ("simplex volume", property_simplex_volume),
        ("fiber scaling", property_fiber_scaling),
    ]:
        res, detail = fn()
        ok = ok and res
        parts.append(f"{name} {'ok' if res else 'FAILED'} ({detail})")
    return ok, "; ".join(parts)


CRITERIA = [
    (1, "global cone of P1xP1", 1.0, criterion_1),
    (2, "fiber over D is the b=2 simplex", 1.0, criterion_2),
    (3, "plane O(2), conic flag, kmax=6", 30.0, criterion_3),
    (4, "volume equals Hilbert leading coefficient", 10.0, criterion_4),
    (5, "segment inclusions", 1.0, criterion_5),
    (6, "homogeneity under powers", 5.0, criterion_6),
    (7, "property suites", None, criterion_7),
]


def run_all(selected: set[int] | None = None) -> list[Criterion]:
    return [
        _timed(num, name, limit, fn)
        for num, name, limit, fn in CRITERIA
        if selected is None or num in selected
    ]


def _verts(P) -> str:
    return "{" + ", ".join("(" + ",".join(str(x) for x in v) + ")" for v in P.vertices) + "}"


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))
