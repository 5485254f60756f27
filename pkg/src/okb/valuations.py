"""Flag valuations and valuation-adapted bases.

A value ``v(s) = (a_1, ..., a_n)`` stores the first-measured order (along the
divisor of the flag) in the *last* coordinate and the order at the point in
the first.  Values are compared in inverse lexicographic order: last
coordinate first.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import NamedTuple, Sequence

from .errors import FlagError, ValidationError, ZeroSectionError
from .forms import (
    CONIC,
    LINE,
    Form,
    ord_at_point_lc,
    restrict_to_conic,
    restrict_to_line,
    strip_curve,
)
from .geometry import determinant, rank
from .models import AbstractModel, PlaneModel, ToricModel


class ValuedPoint(NamedTuple):
    k: int
    a: tuple[int, ...]


def valuation_key(a: Sequence[int]) -> tuple[int, ...]:
    """Sort key realizing the inverse lexicographic order."""
    return tuple(reversed(tuple(a)))


def valuation_order_compare(a: Sequence[int], b: Sequence[int]) -> int:
    """-1, 0 or 1 as ``a`` is below, equal to, or above ``b``."""
    if len(a) != len(b):
        raise ValidationError("valuation_order_compare: length mismatch")
    ka, kb = valuation_key(a), valuation_key(b)
    return (ka > kb) - (ka < kb)


# ---------------------------------------------------------------------------
# toric flags


@dataclass(frozen=True)
class ToricFlag:
    """Torus-invariant flag at the vertex ``vertex`` with adapted coordinates ``matrix``.

    The value of the monomial ``m`` in degree ``k`` is ``matrix @ (m - k*vertex)``.
    """

    vertex: tuple[int, ...]
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        v = tuple(int(x) for x in self.vertex)
        M = tuple(tuple(int(x) for x in row) for row in self.matrix)
        if any(len(row) != len(M) for row in M) or len(M) != len(v):
            raise ValidationError("toric flag: matrix must be square of size dim(vertex)")
        if abs(determinant(M)) != 1:
            raise ValidationError(
                f"toric flag: matrix is not unimodular (det = {determinant(M)})"
            )
        object.__setattr__(self, "vertex", v)
        object.__setattr__(self, "matrix", M)

    def apply(self, m: Sequence[int], k: int) -> tuple[int, ...]:
        shifted = [x - k * u for x, u in zip(m, self.vertex)]
        return tuple(sum(r * x for r, x in zip(row, shifted)) for row in self.matrix)

    def check_admissible(self, model: ToricModel) -> None:
        """Raise :class:`FlagError` unless every lattice point gets a value in N_0^n.

        Checking the vertices of ``P`` suffices: the map is affine in ``m``
        and linear in ``k``.
        """
        if len(self.vertex) != model.n:
            raise FlagError("toric flag: dimension does not match the polytope")
        if self.vertex not in model.vertices:
            raise FlagError(f"toric flag: {self.vertex} is not a vertex of P", self.vertex)
        for w in model.vertices:
            val = self.apply(w, 1)
            if min(val) < 0:
                raise FlagError(
                    f"toric flag: lattice point {w} gets value {val} outside N_0^n", w
                )

    def power(self, m: int) -> "ToricFlag":
        return ToricFlag(tuple(m * x for x in self.vertex), self.matrix)


def default_toric_flag(model: ToricModel) -> ToricFlag:
    """Flag at the first smooth vertex; coordinates invert its primitive edge basis."""
    P = model.polytope
    n = model.n
    for v in model.vertices:
        tight_v = [i for i, (a, b) in enumerate(P.facets) if _ev(a, b, v) == 0]
        edges = []
        for w in model.vertices:
            if w == v:
                continue
            common = [P.facets[i][0] for i in tight_v if _ev(*P.facets[i], w) == 0]
            if rank(common) == n - 1:
                edges.append(_prim([x - y for x, y in zip(w, v)]))
        if len(edges) != n:
            continue
        edges.sort(reverse=True)
        E = [[edges[j][i] for j in range(n)] for i in range(n)]  # columns = edges
        if abs(determinant(E)) != 1:
            continue
        flag = ToricFlag(v, _integer_inverse(E))
        flag.check_admissible(model)
        return flag
    raise FlagError("toric: polytope has no smooth vertex; supply a flag explicitly")


def _ev(a, b, v):
    return sum(x * y for x, y in zip(a, v)) + b


def _prim(v):
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return tuple(int(x) // g for x in v)


def _integer_inverse(E):
    n = len(E)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(E)]
    for c in range(n):
        piv = next(i for i in range(c, n) if aug[i][c] != 0)
        aug[c], aug[piv] = aug[piv], aug[c]
        p = aug[c][c]
        aug[c] = [x / p for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    inv = [row[n:] for row in aug]
    return tuple(tuple(int(x) for x in row) for row in inv)


def toric_valuation(m: Sequence[int], k: int, flag: ToricFlag) -> tuple[int, ...]:
    val = flag.apply(m, k)
    if min(val) < 0:
        raise FlagError(f"toric valuation: {tuple(m)} in degree {k} gets {val}", tuple(m))
    return val


# ---------------------------------------------------------------------------
# plane flags


@dataclass(frozen=True)
class PlaneFlag:
    """Flag ``(1:0:0) in curve in P^2`` for a built-in smooth curve."""

    curve: str = "conic"
    _curves = {"conic": (CONIC, restrict_to_conic), "line": (LINE, restrict_to_line)}

    def __post_init__(self):
        if self.curve not in self._curves:
            raise ValidationError(
                f"plane flag: unknown curve {self.curve!r} (choose conic or line)"
            )

    @property
    def equation(self) -> Form:
        return self._curves[self.curve][0]

    @property
    def curve_degree(self) -> int:
        return self.equation.deg

    def restrict(self, s: Form) -> Form:
        return self._curves[self.curve][1](s)

    def power(self, m: int) -> "PlaneFlag":
        return self


def plane_valuation_lc(s: Form, flag: PlaneFlag) -> tuple[tuple[int, int], Fraction]:
    """``((a1, a2), lc)`` where ``lc`` is the leading coefficient at the point.

    Two sections with equal value and leading coefficients ``c1``, ``c2``
    satisfy ``v(c2*s1 - c1*s2) > v(s1)``.
    """
    if s.is_zero():
        raise ZeroSectionError("valuation of the zero section is undefined")
    a2, q = strip_curve(s, flag.equation)
    r = flag.restrict(q)
    if r.is_zero():
        raise AssertionError("quotient vanishes on the flag curve after stripping")
    a1, lc = ord_at_point_lc(r)
    return (a1, a2), lc


def plane_valuation(s: Form, flag: PlaneFlag) -> tuple[int, int]:
    return plane_valuation_lc(s, flag)[0]


# ---------------------------------------------------------------------------
# adapted bases


@dataclass(frozen=True)
class AdaptedBasis:
    """Degree-``k`` sections with pairwise-distinct values (sorted by value order)."""

    k: int
    values: tuple[tuple[int, ...], ...]
    witnesses: tuple = field(repr=False)

    def __len__(self) -> int:
        return len(self.values)


def adapted_basis(model, flag, k: int) -> AdaptedBasis:
    if isinstance(model, ToricModel):
        pts = model.sections(k)
        pairs = sorted(((toric_valuation(m, k, flag), m) for m in pts), key=lambda p: valuation_key(p[0]))
    elif isinstance(model, PlaneModel):
        pairs = _plane_adapted(model, flag, k)
    elif isinstance(model, AbstractModel):
        pairs = [(a, None) for a in sorted(model.sections(k), key=valuation_key)]
    else:
        raise ValidationError(f"adapted_basis: unsupported model {type(model).__name__}")
    values = tuple(v for v, _ in pairs)
    if len(set(values)) != len(values):
        raise AssertionError("adapted basis has repeated values")
    return AdaptedBasis(k, values, tuple(w for _, w in pairs))


def _plane_adapted(model: PlaneModel, flag: PlaneFlag, k: int):
    # Leading-term elimination: each reduction strictly raises the value, and
    # the monomials are independent, so no section ever reduces to zero.
    found: dict[tuple[int, int], tuple[Form, Fraction]] = {}
    for s in model.sections(k):
        while True:
            a, lc = plane_valuation_lc(s, flag)
            if a not in found:
                found[a] = (s, lc)
                break
            t, lct = found[a]
            s = s - t.scale(lc / lct)
            if s.is_zero():
                raise AssertionError("monomial basis reduced to zero")
    if len(found) != model.dim(k):
        raise AssertionError("value count differs from dimension")
    return sorted(((a, s) for a, (s, _) in found.items()), key=lambda p: valuation_key(p[0]))


def flag_for(model, flag=None):
    """Default flag for a model when none is supplied."""
    if isinstance(model, ToricModel):
        flag = flag or default_toric_flag(model)
        flag.check_admissible(model)
        return flag
    if isinstance(model, PlaneModel):
        return flag or PlaneFlag("conic")
    return flag
