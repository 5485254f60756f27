"""Semigroups, cones and bodies assembled from valuation data, plus checks."""
from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from itertools import combinations_with_replacement
from typing import Any

from .errors import ValidationError
from .geometry import (
    PolyCone,
    Polytope,
    cone_from_generators,
    convex_hull,
    polytope_contains,
    polytope_equal,
    polytope_volume,
    scale_polytope,
)
from .models import AbstractModel, PlaneModel, ToricModel
from .valuations import ValuedPoint, adapted_basis, flag_for, valuation_key


@dataclass
class CheckResult:
    name: str
    passed: bool
    certificate: dict[str, Any] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.passed


@dataclass(frozen=True)
class ValuedSemigroup:
    """Truncation of the value semigroup to degrees ``1..kmax``."""

    points: frozenset[ValuedPoint]
    kmax: int
    n: int
    provenance: dict = field(default_factory=dict, compare=False, hash=False)

    def degree(self, k: int) -> list[tuple[int, ...]]:
        return sorted((p.a for p in self.points if p.k == k), key=valuation_key)

    def sorted_points(self) -> list[ValuedPoint]:
        return sorted(self.points, key=lambda p: (p.k, valuation_key(p.a)))


def threads() -> int:
    try:
        return max(1, int(os.environ.get("OKB_THREADS", "1")))
    except ValueError:
        raise ValidationError("OKB_THREADS must be an integer") from None


def _values_at(model, flag, k: int) -> tuple[tuple[int, ...], ...]:
    return adapted_basis(model, flag, k).values


def build_semigroup(model, flag=None, kmax: int | None = None) -> ValuedSemigroup:
    if isinstance(model, AbstractModel):
        kmax = model.kmax if kmax is None else kmax
    if kmax is None or kmax < 1:
        raise ValidationError("build_semigroup: kmax must be >= 1")
    flag = flag_for(model, flag)
    degrees = list(range(1, kmax + 1))
    work = partial(_values_at, model, flag)
    nworkers = min(threads(), len(degrees))
    if nworkers > 1 and not isinstance(model, AbstractModel):
        with ProcessPoolExecutor(max_workers=nworkers) as pool:
            per_degree = list(pool.map(work, degrees))
    else:
        per_degree = [work(k) for k in degrees]
    points = frozenset(ValuedPoint(k, a) for k, vals in zip(degrees, per_degree) for a in vals)
    return ValuedSemigroup(
        points=points,
        kmax=kmax,
        n=model.n,
        provenance={"model": _describe(model), "flag": _describe(flag)},
    )


def _describe(obj) -> dict:
    if obj is None:
        return {}
    if isinstance(obj, ToricModel):
        return {"kind": "toric", "name": obj.name, "vertices": [list(v) for v in obj.vertices]}
    if isinstance(obj, PlaneModel):
        return {"kind": "plane", "d": obj.d}
    if isinstance(obj, AbstractModel):
        return {"kind": "abstract", "name": obj.name}
    if hasattr(obj, "matrix"):
        return {"vertex": list(obj.vertex), "matrix": [list(r) for r in obj.matrix]}
    return {"curve": obj.curve}


# ---------------------------------------------------------------------------


def observed_body(S: ValuedSemigroup) -> tuple[Polytope, int | None]:
    """Hull of ``a/k`` over the truncation, and the degree it stabilized at.

    ``stabilized_at`` is the smallest ``k0`` with the hull constant for
    ``k0 <= k <= kmax``; None when the last degree still changed it.
    """
    if not S.points:
        raise ValidationError("observed_body: empty semigroup")
    body: Polytope | None = None
    changed_at = 0
    for k in range(1, S.kmax + 1):
        pts = [tuple(Fraction(x, k) for x in a) for a in S.degree(k)]
        if not pts:
            continue
        prev = list(body.vertices) if body is not None else []
        new = convex_hull(prev + pts)
        if body is None or not polytope_equal(new, body):
            changed_at = k
        body = new
    stabilized = changed_at if changed_at < S.kmax else None
    return body, stabilized


def okounkov_cone(S: ValuedSemigroup) -> PolyCone:
    return cone_from_generators([(p.k,) + p.a for p in S.points])


def simplex(b, n: int) -> Polytope:
    pts = [(0,) * n, (Fraction(b),) + (0,) * (n - 1)]
    pts += [tuple(int(i == j) for j in range(n)) for i in range(1, n)]
    return convex_hull(pts)


def simplex_decomposition(p: ValuedPoint, b) -> tuple[Fraction, ...]:
    """Weights ``(x0, ..., xn)`` with ``sum = k`` and ``a = x1*b*e1 + sum_{i>=2} xi*ei``."""
    b = Fraction(b)
    rest = [Fraction(x) for x in p.a[1:]]
    remaining = p.k - sum(rest)
    x1 = Fraction(p.a[0]) / b
    return (remaining - x1, x1, *rest)


def simplex_check(body: Polytope, b, n: int, semigroup: ValuedSemigroup | None = None) -> CheckResult:
    b = Fraction(b)
    if b <= 0:
        raise ValidationError("simplex_check: b must be positive")
    target = simplex(b, n)
    equal = body.ambient_dim == n and polytope_equal(body, target)
    cert: dict[str, Any] = {"b": b, "n": n, "target": target, "body_equals_target": equal}
    ok = equal
    if semigroup is not None:
        decomps = []
        for p in semigroup.sorted_points():
            x = simplex_decomposition(p, b)
            good = all(c >= 0 for c in x)
            ok = ok and good
            decomps.append({"k": p.k, "a": list(p.a), "weights": list(x), "nonnegative": good})
        cert["decompositions"] = decomps
    if ok:
        cert["volume"] = polytope_volume(body)
        cert["volume_equals_b_over_n_factorial"] = cert["volume"] == b / math.factorial(n)
    return CheckResult("simplex", ok, cert)


def segment_inclusion_check(body: Polytope, b) -> CheckResult:
    b = Fraction(b)
    if b < 0:
        raise ValidationError("segment_inclusion_check: b must be nonnegative")
    n = body.ambient_dim
    lo, hi = (Fraction(0),) * n, (b,) + (Fraction(0),) * (n - 1)
    has_lo, has_hi = polytope_contains(body, lo), polytope_contains(body, hi)
    return CheckResult(
        "segment_inclusion",
        has_lo and has_hi,
        {"b": b, "origin_in_body": has_lo, "endpoint_in_body": has_hi},
    )


def closure_check(S: ValuedSemigroup) -> CheckResult:
    """Exhaustive check that ``(k1+k2, a1+a2)`` is present whenever ``k1+k2 <= kmax``."""
    by_k = {k: S.degree(k) for k in range(1, S.kmax + 1)}
    missing = []
    pairs = 0
    for k1, k2 in combinations_with_replacement(range(1, S.kmax + 1), 2):
        if k1 + k2 > S.kmax:
            continue
        target = set(by_k[k1 + k2])
        for a in by_k[k1]:
            for c in by_k[k2]:
                pairs += 1
                s = tuple(x + y for x, y in zip(a, c))
                if s not in target:
                    missing.append({"k": k1 + k2, "a": list(s)})
    return CheckResult("semigroup_closure", not missing, {"pairs": pairs, "missing": missing[:20]})


def value_count_check(S: ValuedSemigroup, model) -> CheckResult:
    counts = {k: (len(S.degree(k)), model.dim(k)) for k in range(1, S.kmax + 1)}
    bad = {k: c for k, c in counts.items() if c[0] != c[1]}
    return CheckResult(
        "value_count",
        not bad,
        {"per_degree": {str(k): {"values": c[0], "dim": c[1]} for k, c in counts.items()}},
    )


# ---------------------------------------------------------------------------


@dataclass
class BodyReport:
    observed_body: Polytope
    stabilized_at: int | None
    euclidean_volume: Fraction
    normalized_volume: Fraction
    hilbert_leading: Fraction | None
    checks: dict[str, CheckResult] = field(default_factory=dict)
    volume_comparison: dict[str, Any] | None = None
    provenance: dict = field(default_factory=dict)
    kmax: int = 0

    def add(self, check: CheckResult) -> CheckResult:
        self.checks[check.name] = check
        return check

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks.values())


def volume_report(S: ValuedSemigroup, model=None, body: Polytope | None = None,
                  stabilized_at: int | None = None, simplex_b=None) -> BodyReport:
    if body is None:
        body, stabilized_at = observed_body(S)
    n = body.ambient_dim
    vol = polytope_volume(body)
    hilbert = None
    if model is not None and hasattr(model, "hilbert"):
        hilbert = model.hilbert(max(S.kmax, n + 1)).leading
    report = BodyReport(
        observed_body=body,
        stabilized_at=stabilized_at,
        euclidean_volume=vol,
        normalized_volume=vol * math.factorial(n),
        hilbert_leading=hilbert,
        provenance=dict(S.provenance),
        kmax=S.kmax,
    )
    if hilbert is not None:
        report.add(CheckResult(
            "volume_identity", vol == hilbert,
            {"euclidean_volume": vol, "hilbert_leading": hilbert},
        ))
    if simplex_b is not None:
        b = Fraction(simplex_b)
        # Informational only: "volume b" holds on the normalized scale.
        report.volume_comparison = {
            "b": b,
            "euclidean_volume": vol,
            "normalized_volume": report.normalized_volume,
            "b_over_n_factorial": b / math.factorial(n),
            "euclidean_equals_b": vol == b,
            "normalized_equals_b": report.normalized_volume == b,
        }
    return report


def homogeneity_check(model, flag, m: int, kmax: int) -> CheckResult:
    if m < 1:
        raise ValidationError("homogeneity_check: m must be a positive integer")
    flag = flag_for(model, flag)
    base, _ = observed_body(build_semigroup(model, flag, kmax))
    powered, _ = observed_body(build_semigroup(model.power(m), flag.power(m), kmax))
    expected = scale_polytope(base, m)
    return CheckResult(
        f"homogeneity_m{m}",
        polytope_equal(powered, expected),
        {"m": m, "power_body": powered, "scaled_base_body": expected},
    )


def expected_plane_body(model: PlaneModel, flag) -> Polytope:
    """Body predicted for ``O(d)`` with a flag curve of degree ``c``.

    ``conv{0, d*c*e1, (d/c)*e2}``: the restriction has degree ``d*c`` and the
    curve equation is a section of ``O(c)``.
    """
    c = flag.curve_degree
    return convex_hull([(0, 0), (model.d * c, 0), (0, Fraction(model.d, c))])


def saturation_check(S: ValuedSemigroup, target: Polytope) -> CheckResult:
    """Per degree, the value set equals the lattice points of ``k * target``."""
    bad = {}
    for k in range(1, S.kmax + 1):
        scaled = scale_polytope(target, k)
        pts = _lattice_points(scaled)
        vals = set(S.degree(k))
        if vals != pts:
            bad[str(k)] = {"extra": sorted(map(list, vals - pts)), "missing": sorted(map(list, pts - vals))}
    return CheckResult("saturation", not bad, {"target": target, "mismatches": bad})


def _lattice_points(P: Polytope) -> set[tuple[int, ...]]:
    lo = [math.floor(min(v[i] for v in P.vertices)) for i in range(P.ambient_dim)]
    hi = [math.ceil(max(v[i] for v in P.vertices)) for i in range(P.ambient_dim)]
    return {
        p for p in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi)))
        if polytope_contains(P, p)
    }


def moment_polytope(model: ToricModel, flag) -> Polytope:
    return convex_hull([flag.apply(v, 1) for v in model.vertices])


def analyze(model, flag=None, kmax: int = 6, homogeneity: tuple[int, ...] = ()) -> BodyReport:
    """Build the semigroup, the body and every check that applies to ``model``."""
    flag = flag_for(model, flag)
    S = build_semigroup(model, flag, kmax)
    body, stab = observed_body(S)
    simplex_b = None
    if isinstance(model, PlaneModel) and flag.curve_degree == model.d:
        simplex_b = model.d * flag.curve_degree
    report = volume_report(S, model if not isinstance(model, AbstractModel) else None,
                           body, stab, simplex_b=simplex_b)
    if isinstance(model, AbstractModel):
        # user data: stabilization is reported, not required
        return report
    report.add(CheckResult("stabilized", stab is not None, {"stabilized_at": stab}))
    report.add(value_count_check(S, model))
    report.add(closure_check(S))
    if isinstance(model, ToricModel):
        target = moment_polytope(model, flag)
        report.add(CheckResult("moment_polytope", polytope_equal(body, target), {"target": target}))
    else:
        b = model.d * flag.curve_degree
        report.add(segment_inclusion_check(body, b))
        target = expected_plane_body(model, flag)
        report.add(CheckResult("expected_body", polytope_equal(body, target), {"target": target}))
        report.add(saturation_check(S, target))
        if simplex_b is not None:
            report.add(simplex_check(body, simplex_b, 2, S))
    for m in homogeneity:
        report.add(homogeneity_check(model, flag, m, kmax))
    return report
