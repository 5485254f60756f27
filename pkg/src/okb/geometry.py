"""Exact rational convex geometry.

Everything here works over :class:`fractions.Fraction`.  Cones are handled
through the double description method on primitive integer generators; a
polytope is stored as the height-one slice of the cone over ``{1} x P``, so
hulls, facets, faces and volumes all reduce to cone computations.

Vectors are plain tuples of ``Fraction``.  Vertex and ray lists are kept in
lexicographic order so that serialized output is reproducible.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import UnboundedError, ValidationError

Vec = tuple[Fraction, ...]

__all__ = [
    "Vec",
    "vec",
    "PolyCone",
    "Polytope",
    "ContainmentResult",
    "convex_hull",
    "cone_from_generators",
    "cone_contains",
    "cone_equal",
    "slice_at_height",
    "cone_fiber",
    "polytope_from_inequalities",
    "polytope_volume",
    "polytope_equal",
    "polytope_contains",
    "scale_polytope",
    "empty_polytope",
    "solve_linear",
    "rank",
    "determinant",
]


def vec(coords: Iterable) -> Vec:
    """Coerce an iterable of ints / Fractions / ``"p/q"`` strings to a Vec."""
    return tuple(Fraction(c) for c in coords)


def _dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def _primitive(v: Sequence) -> tuple[int, ...]:
    """Primitive integer vector on the same ray as ``v`` (zero stays zero)."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def _check_dims(points: Sequence[Sequence], what: str) -> int:
    if not points:
        raise ValidationError(f"{what}: empty input")
    n = len(points[0])
    for p in points:
        if len(p) != n:
            raise ValidationError(f"{what}: dimension mismatch ({len(p)} != {n})")
    return n


# ---------------------------------------------------------------------------
# linear algebra over Q


def _rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    m = [[Fraction(x) for x in r] for r in rows]
    pivots: list[int] = []
    if not m:
        return m, pivots
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return len(_rref(rows)[1])


def determinant(rows: Sequence[Sequence]) -> Fraction:
    m = [[Fraction(x) for x in r] for r in rows]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            if f:
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return det


def solve_linear(columns: Sequence[Sequence], target: Sequence) -> Vec | None:
    """Solve ``sum_j x_j columns[j] = target``; None if inconsistent.

    Free variables are set to zero.
    """
    n = len(target)
    aug = [[Fraction(col[i]) for col in columns] + [Fraction(target[i])] for i in range(n)]
    red, pivots = _rref(aug)
    ncols = len(columns)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, c in zip(red, pivots):
        x[c] = row[-1]
    return tuple(x)


def _nullspace(rows: Sequence[Sequence], n: int) -> list[tuple[int, ...]]:
    if not rows:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    red, pivots = _rref(rows)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, c in zip(red, pivots):
            v[c] = -row[f]
        basis.append(_primitive(v))
    return basis


# ---------------------------------------------------------------------------
# double description


def _double_description(constraints: Sequence[tuple[int, ...]], n: int):
    """Extreme rays and lineality basis of ``{y : a.y >= 0 for a in constraints}``.

    Returns ``(rays, lineality)``; rays are primitive integer vectors, extreme
    modulo the lineality space.
    """
    lin: list[tuple[int, ...]] = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    rays: list[tuple[tuple[int, ...], frozenset[int]]] = []
    for idx, a in enumerate(constraints):
        vals = [_dot(a, l) for l in lin]
        j = next((i for i, v in enumerate(vals) if v != 0), None)
        if j is not None:
            l = lin.pop(j)
            al = vals.pop(j)
            if al < 0:
                l = tuple(-x for x in l)
                al = -al
            lin = [
                _primitive([al * x - v * y for x, y in zip(l2, l)])
                for l2, v in zip(lin, vals)
            ]
            new_rays = []
            for r, z in rays:
                ar = _dot(a, r)
                new_rays.append((_primitive([al * x - ar * y for x, y in zip(r, l)]), z | {idx}))
            new_rays.append((l, frozenset(range(idx))))
            rays = new_rays
            continue
        pos, neg, new_rays = [], [], []
        for r, z in rays:
            ar = _dot(a, r)
            if ar > 0:
                pos.append((r, z, ar))
                new_rays.append((r, z))
            elif ar < 0:
                neg.append((r, z, ar))
            else:
                new_rays.append((r, z | {idx}))
        for rp, zp, ap in pos:
            for rn, zn, an in neg:
                common = zp & zn
                adjacent = True
                for r, z in rays:
                    if r is not rp and r is not rn and common <= z:
                        adjacent = False
                        break
                if adjacent:
                    w = _primitive([ap * x - an * y for x, y in zip(rn, rp)])
                    new_rays.append((w, common | {idx}))
        rays = new_rays
    return [r for r, _ in rays], lin


# ---------------------------------------------------------------------------
# cones


@dataclass(frozen=True)
class PolyCone:
    """Closed convex cone given by generators, with its facet description.

    ``facets`` are inward normals ``e`` (``e.x >= 0``) and ``equations``
    normals ``l`` with ``l.x == 0`` on the linear span.  For a pointed cone
    ``rays`` are exactly the extreme rays (primitive integer representatives);
    a non-pointed cone keeps its de-duplicated generators and a
    ``lineality`` basis.
    """

    rays: tuple[Vec, ...]
    ambient_dim: int
    dim: int
    facets: tuple[Vec, ...]
    equations: tuple[Vec, ...]
    pointed: bool
    lineality: tuple[Vec, ...] = ()

    def contains(self, p: Sequence) -> bool:
        p = vec(p)
        return all(_dot(e, p) >= 0 for e in self.facets) and all(
            _dot(l, p) == 0 for l in self.equations
        )


def cone_from_generators(rays: Iterable[Sequence]) -> PolyCone:
    gens = [vec(r) for r in rays]
    n = _check_dims(gens, "cone_from_generators")
    prim = sorted({_primitive(g) for g in gens if any(g)})
    if not prim:
        raise ValidationError("cone_from_generators: only the zero vector was supplied")
    return _cone_from_primitive(prim, n)


def _cone_from_primitive(prim: list[tuple[int, ...]], n: int) -> PolyCone:
    duals, lin = _double_description(prim, n)
    facets = sorted(set(duals))
    span_dim = n - len(lin)
    pointed = rank(list(facets) + list(lin)) == n
    lineality: list[tuple[int, ...]] = []
    if pointed:
        keep = []
        for g in prim:
            tight = [e for e in facets if _dot(e, g) == 0]
            if rank(tight + lin) == n - 1:
                keep.append(g)
    else:
        keep = list(prim)
        lineality = _nullspace(list(facets) + list(lin), n)
    return PolyCone(
        rays=tuple(vec(r) for r in sorted(keep)),
        ambient_dim=n,
        dim=span_dim,
        facets=tuple(vec(e) for e in facets),
        equations=tuple(vec(l) for l in sorted(lin)),
        pointed=pointed,
        lineality=tuple(vec(l) for l in sorted(lineality)),
    )


@dataclass(frozen=True)
class ContainmentResult:
    """Outcome of :func:`cone_contains`.

    ``coefficients[i]`` multiplies ``cone.rays[i]`` when ``inside``;
    otherwise ``separating_normal`` is nonnegative on every ray and negative
    on the query point.
    """

    inside: bool
    coefficients: tuple[Fraction, ...] | None = None
    separating_normal: Vec | None = None

    def __bool__(self) -> bool:
        return self.inside


def cone_contains(cone: PolyCone, p: Sequence) -> ContainmentResult:
    p = vec(p)
    if len(p) != cone.ambient_dim:
        raise ValidationError(
            f"cone_contains: dimension mismatch ({len(p)} != {cone.ambient_dim})"
        )
    for l in cone.equations:
        v = _dot(l, p)
        if v != 0:
            normal = l if v < 0 else tuple(-x for x in l)
            return ContainmentResult(False, separating_normal=normal)
    for e in cone.facets:
        if _dot(e, p) < 0:
            return ContainmentResult(False, separating_normal=e)
    coeffs = _decompose(list(cone.rays), p)
    return ContainmentResult(True, coefficients=tuple(coeffs))


def _decompose(rays: list[Vec], p: Vec) -> list[Fraction]:
    """Nonnegative coefficients of ``p`` over ``rays``; ``p`` must lie in the cone.

    Subtracts the largest admissible multiple of one ray, which drops ``p``
    onto a proper face, then recurses on that face.
    """
    coeffs = [Fraction(0)] * len(rays)
    if not any(p):
        return coeffs
    cone = _cone_from_primitive(sorted({_primitive(r) for r in rays}), len(p))
    for i, r in enumerate(rays):
        hits = [(e, _dot(e, r)) for e in cone.facets]
        hits = [(e, er) for e, er in hits if er > 0]
        if hits:
            break
    else:
        return _decompose_subspace(rays, p)
    t, face = min(((_dot(e, p) / er, e) for e, er in hits), key=lambda te: te[0])
    q = tuple(x - t * y for x, y in zip(p, r))
    sub = [j for j, rr in enumerate(rays) if _dot(face, rr) == 0]
    sub_coeffs = _decompose([rays[j] for j in sub], q) if sub else []
    if not sub and any(q):
        raise AssertionError("face walk left a nonzero residual")
    coeffs[i] += t
    for j, c in zip(sub, sub_coeffs):
        coeffs[j] += c
    return coeffs


def _decompose_subspace(rays: list[Vec], p: Vec) -> list[Fraction]:
    # Carathéodory: some linearly independent subset carries a nonnegative solution.
    k = rank(rays)
    for size in range(1, k + 1):
        for idx in itertools.combinations(range(len(rays)), size):
            cols = [rays[i] for i in idx]
            if rank(cols) < size:
                continue
            x = solve_linear(cols, p)
            if x is not None and all(c >= 0 for c in x):
                out = [Fraction(0)] * len(rays)
                for i, c in zip(idx, x):
                    out[i] = c
                return out
    raise AssertionError("point reported inside but no decomposition found")


def cone_equal(a: PolyCone, b: PolyCone) -> bool:
    """Mutual containment of generators (and lineality, for non-pointed cones)."""
    if a.ambient_dim != b.ambient_dim:
        return False
    gens_a = list(a.rays) + list(a.lineality) + [tuple(-x for x in l) for l in a.lineality]
    gens_b = list(b.rays) + list(b.lineality) + [tuple(-x for x in l) for l in b.lineality]
    return all(b.contains(r) for r in gens_a) and all(a.contains(r) for r in gens_b)


# ---------------------------------------------------------------------------
# polytopes


@dataclass(frozen=True)
class Polytope:
    """Bounded convex polytope in V- and H-representation.

    Facets are pairs ``(normal, offset)`` describing ``normal.x + offset >= 0``;
    ``equations`` are pairs with ``normal.x + offset == 0`` cutting out the
    affine hull.  ``dim`` is the affine dimension (-1 for the empty set).
    """

    vertices: tuple[Vec, ...]
    ambient_dim: int
    dim: int
    facets: tuple[tuple[Vec, Fraction], ...] = field(default=(), repr=False)
    equations: tuple[tuple[Vec, Fraction], ...] = field(default=(), repr=False)

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    def __contains__(self, p) -> bool:
        return polytope_contains(self, p)


def empty_polytope(n: int) -> Polytope:
    return Polytope(vertices=(), ambient_dim=n, dim=-1)


def _homogenized(cone: PolyCone) -> Polytope:
    n = cone.ambient_dim - 1
    verts = []
    for r in cone.rays:
        if r[0] <= 0:
            raise UnboundedError("polytope: recession direction in homogenized cone")
        verts.append(tuple(x / r[0] for x in r[1:]))
    facets = tuple(sorted((e[1:], e[0]) for e in cone.facets))
    eqs = tuple(sorted((l[1:], l[0]) for l in cone.equations))
    return Polytope(
        vertices=tuple(sorted(verts)),
        ambient_dim=n,
        dim=cone.dim - 1,
        facets=facets,
        equations=eqs,
    )


def convex_hull(points: Iterable[Sequence]) -> Polytope:
    pts = [vec(p) for p in points]
    _check_dims(pts, "convex_hull")
    lifted = sorted({_primitive((1,) + p) for p in pts})
    return _homogenized(_cone_from_primitive(lifted, len(pts[0]) + 1))


def polytope_contains(P: Polytope, p: Sequence) -> bool:
    p = vec(p)
    if len(p) != P.ambient_dim:
        raise ValidationError("polytope_contains: dimension mismatch")
    if P.is_empty:
        return False
    return all(_dot(a, p) + b >= 0 for a, b in P.facets) and all(
        _dot(a, p) + b == 0 for a, b in P.equations
    )


def polytope_equal(P: Polytope, Q: Polytope) -> bool:
    if P.ambient_dim != Q.ambient_dim:
        raise ValidationError("polytope_equal: dimension mismatch")
    if P.is_empty or Q.is_empty:
        return P.is_empty and Q.is_empty
    return all(polytope_contains(Q, v) for v in P.vertices) and all(
        polytope_contains(P, v) for v in Q.vertices
    )


def scale_polytope(P: Polytope, m) -> Polytope:
    m = Fraction(m)
    if m < 0:
        raise ValidationError("scale_polytope: factor must be nonnegative")
    if P.is_empty:
        return P
    if m == 0:
        return convex_hull([(Fraction(0),) * P.ambient_dim])
    return Polytope(
        vertices=tuple(sorted(tuple(m * x for x in v) for v in P.vertices)),
        ambient_dim=P.ambient_dim,
        dim=P.dim,
        facets=tuple((a, b * m) for a, b in P.facets),
        equations=tuple((a, b * m) for a, b in P.equations),
    )


def _triangulate(verts: list[Vec]) -> list[list[Vec]]:
    """Pulling triangulation of a full-dimensional vertex set (in its own hull)."""
    P = convex_hull(verts)
    verts = list(P.vertices)
    if len(verts) == P.dim + 1:
        return [verts]
    apex = verts[0]
    out = []
    for a, b in P.facets:
        if _dot(a, apex) + b == 0:
            continue
        face = [v for v in verts if _dot(a, v) + b == 0]
        for simplex in _triangulate(face):
            out.append([apex] + simplex)
    return out


def polytope_volume(P: Polytope) -> Fraction:
    """Exact Euclidean volume; zero when the affine hull is lower-dimensional."""
    n = P.ambient_dim
    if P.is_empty or P.dim < n:
        return Fraction(0)
    if n == 0:
        return Fraction(1)
    total = Fraction(0)
    for simplex in _triangulate(list(P.vertices)):
        v0 = simplex[0]
        total += abs(determinant([[x - y for x, y in zip(v, v0)] for v in simplex[1:]]))
    return total / math.factorial(n)


def polytope_from_inequalities(
    inequalities: Iterable[tuple[Sequence, Fraction]],
    equations: Iterable[tuple[Sequence, Fraction]] = (),
    n: int | None = None,
) -> Polytope:
    """V-representation of ``{x : a.x + b >= 0, c.x + d == 0}``.

    Raises :class:`UnboundedError` if the set is unbounded.
    """
    ineqs = [(vec(a), Fraction(b)) for a, b in inequalities]
    eqs = [(vec(a), Fraction(b)) for a, b in equations]
    rows = ineqs + eqs
    if n is None:
        if not rows:
            raise ValidationError("polytope_from_inequalities: ambient dimension unknown")
        n = len(rows[0][0])
    cons = [_primitive((b,) + a) for a, b in ineqs]
    for a, b in eqs:
        cons.append(_primitive((b,) + a))
        cons.append(_primitive((-b,) + tuple(-x for x in a)))
    cons.append((1,) + (0,) * n)
    cons = sorted({c for c in cons if any(c)})
    rays, lin = _double_description(cons, n + 1)
    pts = [tuple(Fraction(x, r[0]) for x in r[1:]) for r in rays if r[0] > 0]
    if not pts:
        return empty_polytope(n)
    if lin or any(r[0] == 0 for r in rays):
        raise UnboundedError("polytope_from_inequalities: unbounded feasible set")
    return convex_hull(pts)


def slice_at_height(cone: PolyCone, h) -> Polytope:
    """``{x : (h, x) in cone}`` for a cone graded by its first coordinate."""
    h = Fraction(h)
    if h < 0:
        raise ValidationError("slice_at_height: height must be nonnegative")
    if not cone.pointed:
        raise UnboundedError("slice_at_height: cone contains a line")
    for r in cone.rays:
        if r[0] < 0:
            raise UnboundedError(f"slice_at_height: ray {_fmt(r)} has negative height")
        if r[0] == 0:
            raise UnboundedError(f"slice_at_height: ray {_fmt(r)} is a recession direction")
    pts = [tuple(h * x / r[0] for x in r[1:]) for r in cone.rays]
    return convex_hull(pts)


def cone_fiber(cone: PolyCone, tail: Sequence) -> Polytope:
    """``{x : (x, tail) in cone}``, with ``tail`` fixing the trailing coordinates."""
    tail = vec(tail)
    k = cone.ambient_dim - len(tail)
    if k < 1:
        raise ValidationError("cone_fiber: tail longer than ambient dimension")
    ineqs = [(e[:k], _dot(e[k:], tail)) for e in cone.facets]
    eqs = [(l[:k], _dot(l[k:], tail)) for l in cone.equations]
    return polytope_from_inequalities(ineqs, eqs, n=k)


def _fmt(v: Sequence) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"
