"""Enumerable models of graded section rings.

Three kinds of model are supported:

* :class:`ToricModel` -- a lattice polytope ``P``; the degree-``k`` sections
  have the lattice points of ``kP`` as a monomial basis.
* :class:`PlaneModel` -- ``O(d)`` on the projective plane; degree-``k``
  sections are ternary forms of degree ``d*k``.
* :class:`AbstractModel` -- user-supplied valuation points ``(k, a)``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ValidationError
from .forms import Form, monomials
from .geometry import Polytope, convex_hull, solve_linear


@dataclass(frozen=True)
class HilbertData:
    """``h0(k)`` for ``k = 0..kmax`` and the interpolating polynomial."""

    values: tuple[int, ...]
    coefficients: tuple[Fraction, ...]  # constant term first

    @property
    def leading(self) -> Fraction:
        return self.coefficients[-1]


def interpolate(values: Sequence[int], degree: int) -> tuple[Fraction, ...]:
    """Coefficients of the degree-``degree`` polynomial through ``(k, values[k])``.

    All supplied values must agree with the polynomial.
    """
    if len(values) < degree + 1:
        raise ValidationError(
            f"interpolation needs {degree + 1} values, got {len(values)}"
        )
    cols = [[Fraction(k) ** j for k in range(degree + 1)] for j in range(degree + 1)]
    coeffs = solve_linear(cols, values[: degree + 1])
    for k, v in enumerate(values):
        if sum(c * Fraction(k) ** j for j, c in enumerate(coeffs)) != v:
            raise ValidationError(f"values are not polynomial of degree {degree} (k={k})")
    return coeffs


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ToricModel:
    vertices: tuple[tuple[int, ...], ...]
    name: str = "custom"
    polytope: Polytope = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        verts = []
        for v in self.vertices:
            try:
                iv = tuple(int(x) for x in v)
            except (TypeError, ValueError) as exc:
                raise ValidationError(f"toric: vertex {v!r} is not integral") from exc
            if any(Fraction(x) != y for x, y in zip(v, iv)):
                raise ValidationError(f"toric: vertex {v!r} is not integral")
            verts.append(iv)
        if not verts:
            raise ValidationError("toric: polytope needs at least one vertex")
        P = convex_hull(verts)
        if P.dim != P.ambient_dim:
            raise ValidationError(
                f"toric: polytope is not full-dimensional (dim {P.dim} in R^{P.ambient_dim})"
            )
        object.__setattr__(
            self, "vertices", tuple(tuple(int(x) for x in v) for v in P.vertices)
        )
        object.__setattr__(self, "polytope", P)

    @property
    def n(self) -> int:
        return self.polytope.ambient_dim

    def sections(self, k: int) -> list[tuple[int, ...]]:
        return toric_sections(self, k)

    def dim(self, k: int) -> int:
        return len(self.sections(k))

    def hilbert(self, kmax: int) -> HilbertData:
        return toric_hilbert(self, kmax)

    def power(self, m: int) -> "ToricModel":
        return ToricModel(
            tuple(tuple(m * x for x in v) for v in self.vertices), name=f"{self.name}^{m}"
        )


def toric_sections(M: ToricModel, k: int) -> list[tuple[int, ...]]:
    """Lattice points of ``k*P`` in lexicographic order."""
    if k < 0:
        raise ValidationError("toric_sections: degree must be nonnegative")
    P = M.polytope
    lo = [k * min(v[i] for v in M.vertices) for i in range(M.n)]
    hi = [k * max(v[i] for v in M.vertices) for i in range(M.n)]
    pts = []
    for m in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))):
        if all(sum(a * x for a, x in zip(nrm, m)) + k * off >= 0 for nrm, off in P.facets):
            pts.append(m)
    return pts


def toric_hilbert(M: ToricModel, kmax: int) -> HilbertData:
    if kmax < M.n + 1:
        raise ValidationError(f"toric_hilbert: kmax must be at least {M.n + 1}")
    values = tuple(len(toric_sections(M, k)) for k in range(kmax + 1))
    return HilbertData(values, interpolate(values, M.n))


TORIC_PRESETS: dict[str, tuple[tuple[int, ...], ...]] = {
    "unit-square": ((0, 0), (1, 0), (0, 1), (1, 1)),
    "standard-triangle": ((0, 0), (1, 0), (0, 1)),
    "segment": ((0,), (3,)),
    "hexagon": ((1, 0), (2, 0), (2, 1), (1, 2), (0, 2), (0, 1)),
    "trapezoid": ((0, 0), (2, 0), (1, 1), (0, 1)),
    "unit-cube": tuple(itertools.product((0, 1), repeat=3)),
}


def toric_preset(name: str) -> ToricModel:
    try:
        return ToricModel(TORIC_PRESETS[name], name=name)
    except KeyError:
        raise ValidationError(
            f"toric: unknown preset {name!r} (choose from {', '.join(sorted(TORIC_PRESETS))})"
        ) from None


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PlaneModel:
    """``O(d)`` on the projective plane."""

    d: int

    def __post_init__(self):
        if not isinstance(self.d, int) or self.d < 1:
            raise ValidationError(f"plane: d must be a positive integer, got {self.d!r}")

    @property
    def n(self) -> int:
        return 2

    @property
    def name(self) -> str:
        return f"O({self.d})"

    def sections(self, k: int) -> list[Form]:
        return plane_sections(self, k)

    def dim(self, k: int) -> int:
        return math.comb(self.d * k + 2, 2)

    def hilbert(self, kmax: int) -> HilbertData:
        if kmax < 3:
            raise ValidationError("plane hilbert: kmax must be at least 3")
        values = tuple(self.dim(k) for k in range(kmax + 1))
        return HilbertData(values, interpolate(values, 2))

    def power(self, m: int) -> "PlaneModel":
        return PlaneModel(self.d * m)


def plane_sections(M: PlaneModel, k: int) -> list[Form]:
    """Monomial basis of degree ``d*k`` forms, descending lex in ``(x, y, z)``."""
    if k < 0:
        raise ValidationError("plane_sections: degree must be nonnegative")
    return [Form.monomial(e) for e in monomials(M.d * k, 3)]


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AbstractModel:
    """Semigroup data given directly as points ``(k, a)``."""

    points: frozenset[tuple[int, tuple[int, ...]]]
    name: str = "abstract"

    def __post_init__(self):
        pts = set()
        n = None
        for item in self.points:
            try:
                k, a = item
                k = int(k)
                a = tuple(int(x) for x in a)
            except (TypeError, ValueError) as exc:
                raise ValidationError(f"abstract: malformed point {item!r}") from exc
            if k < 1:
                raise ValidationError(f"abstract: degree must be >= 1, got {k}")
            if any(x < 0 for x in a):
                raise ValidationError(f"abstract: value {a} has a negative entry")
            if n is None:
                n = len(a)
            elif len(a) != n:
                raise ValidationError("abstract: values have different lengths")
            pts.add((k, a))
        if not pts:
            raise ValidationError("abstract: at least one point is required")
        object.__setattr__(self, "points", frozenset(pts))

    @classmethod
    def from_points(cls, points: Iterable, name: str = "abstract") -> "AbstractModel":
        return cls(frozenset((p[0], tuple(p[1])) for p in points), name=name)

    @property
    def n(self) -> int:
        return len(next(iter(self.points))[1])

    @property
    def kmax(self) -> int:
        return max(k for k, _ in self.points)

    def sections(self, k: int) -> list[tuple[int, ...]]:
        return sorted(a for kk, a in self.points if kk == k)

    def dim(self, k: int) -> int:
        return len(self.sections(k))
