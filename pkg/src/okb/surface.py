"""Global Okounkov cones of surfaces from Neron-Severi data.

Points of the global cone live in ``R^2 + R^r``: two valuation coordinates
``(a1, a2)`` followed by a divisor class.  The cone is generated by
``((0,0), xi_j)``, ``((d(xi_j),0), xi_j)`` for each effective generator and
``((0,1), [D])`` for the ample class ``D``, where ``d(xi) = xi . D``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import ValidationError
from .geometry import (
    PolyCone,
    Polytope,
    cone_contains,
    cone_fiber,
    cone_from_generators,
    polytope_contains,
    polytope_equal,
    scale_polytope,
    vec,
)
from .core import CheckResult


@dataclass(frozen=True)
class SurfaceData:
    r: int
    Q: tuple[tuple[int, ...], ...]
    eff: tuple[tuple[int, ...], ...]
    ample: tuple[int, ...]
    labels: tuple[str, ...]

    def dot(self, a: Sequence, b: Sequence) -> Fraction:
        """Intersection number ``a^T Q b``."""
        return sum(
            (Fraction(a[i]) * self.Q[i][j] * Fraction(b[j]) for i in range(self.r) for j in range(self.r)),
            Fraction(0),
        )


def ns_build(Q, eff, ample, labels=None) -> SurfaceData:
    try:
        Q = tuple(tuple(int(x) for x in row) for row in Q)
        eff = tuple(tuple(int(x) for x in g) for g in eff)
        ample = tuple(int(x) for x in ample)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"surface: entries must be integers ({exc})") from exc
    r = len(Q)
    if r == 0 or any(len(row) != r for row in Q):
        raise ValidationError("surface: intersection must be a square matrix")
    if any(Q[i][j] != Q[j][i] for i in range(r) for j in range(r)):
        raise ValidationError("surface: intersection matrix is not symmetric")
    if not eff:
        raise ValidationError("surface: eff needs at least one generator")
    if any(len(g) != r for g in eff) or len(ample) != r:
        raise ValidationError(f"surface: classes must have length {r}")
    labels = tuple(labels) if labels is not None else tuple(f"xi{i + 1}" for i in range(len(eff)))
    if len(labels) != len(eff):
        raise ValidationError("surface: labels must match eff generators")
    S = SurfaceData(r, Q, eff, ample, labels)
    for i, gi in enumerate(eff):
        for j, gj in enumerate(eff):
            if S.dot(gi, gj) < 0:
                raise ValidationError(
                    f"surface: not nef: {labels[i]}.{labels[j]} = {S.dot(gi, gj)} < 0"
                )
    for lab, g in zip(labels, eff):
        if S.dot(g, ample) <= 0:
            raise ValidationError(f"surface: not ample against Eff: D.{lab} = {S.dot(g, ample)}")
    if S.dot(ample, ample) <= 0:
        raise ValidationError("surface: not ample against Eff: D.D <= 0")
    return S


PRESETS = {
    "p1xp1": dict(Q=[[0, 1], [1, 0]], eff=[[1, 0], [0, 1]], ample=[1, 1], labels=["D1", "D2"]),
    "p2": dict(Q=[[1]], eff=[[1]], ample=[1], labels=["H"]),
}


def surface_preset(name: str) -> SurfaceData:
    try:
        return ns_build(**PRESETS[name])
    except KeyError:
        raise ValidationError(
            f"surface: unknown preset {name!r} (choose from {', '.join(sorted(PRESETS))})"
        ) from None


def degree_along(S: SurfaceData, xi: Sequence) -> Fraction:
    return S.dot(xi, S.ample)


@dataclass(frozen=True)
class Generator:
    label: str
    vector: tuple[Fraction, ...]  # (a1, a2, class...)


@dataclass(frozen=True)
class GlobalCone:
    surface: SurfaceData
    generators: tuple[Generator, ...]
    cone: PolyCone


def global_cone(S: SurfaceData) -> GlobalCone:
    gens = []
    for lab, xi in zip(S.labels, S.eff):
        d = degree_along(S, xi)
        gens.append(Generator(f"((0,0),{lab})", vec((0, 0) + xi)))
        gens.append(Generator(f"(({d},0),{lab})", vec((d, 0) + xi)))
    gens.append(Generator("((0,1),D)", vec((0, 1) + S.ample)))
    return GlobalCone(S, tuple(gens), cone_from_generators([g.vector for g in gens]))


def global_fiber(G: GlobalCone, L: Sequence) -> Polytope:
    if len(L) != G.surface.r:
        raise ValidationError(f"fiber: class must have length {G.surface.r}")
    return cone_fiber(G.cone, vec(L))


@dataclass(frozen=True)
class Decomposition:
    member: bool
    coefficients: tuple[Fraction, ...] | None = None
    separating_normal: tuple[Fraction, ...] | None = None


def decompose_effective(S: SurfaceData, E: Sequence) -> Decomposition:
    """Nonnegative ``t`` with ``E = sum t_i xi_i``, or a separating normal."""
    E = vec(E)
    cone = cone_from_generators(S.eff)
    res = cone_contains(cone, E)
    if not res.inside:
        return Decomposition(False, separating_normal=res.separating_normal)
    t = [Fraction(0)] * len(S.eff)
    for c, ray in zip(res.coefficients, cone.rays):
        if c == 0:
            continue
        # each extreme ray is a positive multiple of some generator
        for i, g in enumerate(S.eff):
            ratio = _ratio(ray, g)
            if ratio is not None:
                t[i] += c * ratio
                break
    return Decomposition(True, coefficients=tuple(t))


def _ratio(ray, g) -> Fraction | None:
    """``s > 0`` with ``ray = s * g``, if any."""
    s = None
    for x, y in zip(ray, g):
        if y == 0:
            if x != 0:
                return None
            continue
        q = Fraction(x) / y
        if s is None:
            s = q
        elif q != s:
            return None
    return s if s is not None and s > 0 else None


@dataclass(frozen=True)
class MembershipDecomposition:
    E: tuple[Fraction, ...]
    t: tuple[Fraction, ...]
    c: Fraction
    terms: tuple[tuple[Fraction, Generator], ...]

    def recombine(self) -> tuple[Fraction, ...]:
        n = len(self.terms[0][1].vector)
        out = [Fraction(0)] * n
        for coef, g in self.terms:
            out = [o + coef * x for o, x in zip(out, g.vector)]
        return tuple(out)


def membership_decomposition(G: GlobalCone, point: Sequence) -> MembershipDecomposition:
    """Explicit combination of ``((a1, a2), L)`` over the generators.

    With ``E = L - a2*D = sum t_i xi_i`` and ``c = a1 / (E.D)``, the point is
    ``sum t_i (1-c) ((0,0),xi_i) + sum t_i c ((d_i,0),xi_i) + a2 ((0,1),D)``.
    """
    S = G.surface
    p = vec(point)
    if len(p) != 2 + S.r:
        raise ValidationError(f"membership: point must have length {2 + S.r}")
    a1, a2, L = p[0], p[1], p[2:]
    if a1 < 0 or a2 < 0:
        raise ValidationError("membership: valuation coordinates must be nonnegative")
    E = tuple(x - a2 * y for x, y in zip(L, S.ample))
    dec = decompose_effective(S, E)
    if not dec.member:
        raise ValidationError(f"membership: E = L - a2*D = {_fmt(E)} is not effective")
    ED = S.dot(E, S.ample)
    if a1 > ED:
        raise ValidationError(f"membership: a1 = {a1} exceeds E.D = {ED}")
    c = a1 / ED if ED != 0 else Fraction(0)
    gens = G.generators
    terms = []
    for i, t in enumerate(dec.coefficients):
        terms.append(((1 - c) * t, gens[2 * i]))
        terms.append((c * t, gens[2 * i + 1]))
    terms.append((a2, gens[-1]))
    out = MembershipDecomposition(E, dec.coefficients, c, tuple(terms))
    if out.recombine() != p:
        raise AssertionError("membership decomposition does not recombine")
    return out


def nef_segment_check(G: GlobalCone, L: Sequence) -> CheckResult:
    S = G.surface
    L = vec(L)
    fiber = global_fiber(G, L)
    b = degree_along(S, L)
    has_lo = polytope_contains(fiber, (0, 0)) if not fiber.is_empty else False
    has_hi = polytope_contains(fiber, (b, 0)) if not fiber.is_empty else False
    return CheckResult(
        f"nef_segment_{_fmt(L)}",
        has_lo and has_hi,
        {"class": L, "L.D": b, "fiber": fiber, "origin_in_fiber": has_lo, "endpoint_in_fiber": has_hi},
    )


def fiber_scaling_check(G: GlobalCone, L: Sequence, m: int) -> CheckResult:
    L = vec(L)
    base = global_fiber(G, L)
    scaled = global_fiber(G, tuple(m * x for x in L))
    expect = scale_polytope(base, m)
    return CheckResult(
        f"fiber_scaling_{_fmt(L)}_m{m}",
        polytope_equal(scaled, expect),
        {"class": L, "m": m},
    )


def _fmt(v) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"
