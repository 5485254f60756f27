"""Homogeneous polynomials with exact rational coefficients.

A :class:`Form` is a sparse map ``exponent tuple -> Fraction`` together with
its degree, so that the zero form still knows which graded piece it lives in.
Ternary forms model sections of ``O(d)`` on the projective plane; binary
forms are their restrictions to a rational curve.

Division uses the lexicographic monomial order.  A single polynomial is a
Groebner basis of the ideal it generates, so the division algorithm leaves a
zero remainder exactly when the divisor divides the dividend.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping

from .errors import NotDivisibleError, ValidationError, ZeroSectionError

Exps = tuple[int, ...]


@dataclass(frozen=True)
class Form:
    terms: Mapping[Exps, Fraction]
    deg: int
    nvars: int

    def __post_init__(self):
        clean = {}
        for e, c in self.terms.items():
            c = Fraction(c)
            if c == 0:
                continue
            e = tuple(int(x) for x in e)
            if len(e) != self.nvars or any(x < 0 for x in e):
                raise ValidationError(f"form: bad exponent {e}")
            if sum(e) != self.deg:
                raise ValidationError(f"form: exponent {e} not of degree {self.deg}")
            clean[e] = c
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    # construction -----------------------------------------------------------

    @classmethod
    def zero(cls, deg: int, nvars: int = 3) -> "Form":
        return cls({}, deg, nvars)

    @classmethod
    def monomial(cls, exps: Exps, coeff=1) -> "Form":
        exps = tuple(exps)
        return cls({exps: Fraction(coeff)}, sum(exps), len(exps))

    @classmethod
    def from_records(cls, records, nvars: int = 3) -> "Form":
        """Build from ``[{"coeff": "-1", "exps": [0, 2, 0]}, ...]``."""
        records = list(records)
        if not records:
            raise ValidationError("form: at least one term is required")
        terms: dict[Exps, Fraction] = {}
        deg = None
        for rec in records:
            try:
                e = tuple(int(x) for x in rec["exps"])
                c = Fraction(rec["coeff"])
            except (KeyError, TypeError, ValueError) as exc:
                raise ValidationError(f"form: malformed term {rec!r}") from exc
            deg = sum(e) if deg is None else deg
            terms[e] = terms.get(e, Fraction(0)) + c
        return cls(terms, deg, nvars)

    def to_records(self) -> list[dict]:
        return [
            {"coeff": _rat(c), "exps": list(e)} for e, c in self.terms.items()
        ]

    # arithmetic --------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def _same_piece(self, other: "Form") -> None:
        if self.nvars != other.nvars or self.deg != other.deg:
            raise ValidationError("form: adding forms from different graded pieces")

    def __add__(self, other: "Form") -> "Form":
        self._same_piece(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return Form(out, self.deg, self.nvars)

    def __neg__(self) -> "Form":
        return Form({e: -c for e, c in self.terms.items()}, self.deg, self.nvars)

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def scale(self, c) -> "Form":
        c = Fraction(c)
        return Form({e: c * v for e, v in self.terms.items()}, self.deg, self.nvars)

    def __mul__(self, other: "Form") -> "Form":
        if self.nvars != other.nvars:
            raise ValidationError("form: multiplying forms in different variables")
        out: dict[Exps, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return Form(out, self.deg + other.deg, self.nvars)

    def __pow__(self, k: int) -> "Form":
        out = Form.monomial((0,) * self.nvars)
        for _ in range(k):
            out = out * self
        return out

    def leading(self) -> tuple[Exps, Fraction]:
        e = max(self.terms)
        return e, self.terms[e]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        names = "xyz" if self.nvars == 3 else "uv" if self.nvars == 2 else None
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            if names is None:
                mono = "*".join(f"x{i}^{a}" for i, a in enumerate(e) if a)
            else:
                mono = "*".join(
                    n if a == 1 else f"{n}^{a}" for n, a in zip(names, e) if a
                )
            parts.append(f"{c}*{mono}" if mono else str(c))
        return " + ".join(parts)


HomogeneousForm = Form
BinaryForm = Form


def _rat(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def monomials(deg: int, nvars: int = 3) -> Iterator[Exps]:
    """All exponent tuples of total degree ``deg``, in descending lex order."""
    if nvars == 1:
        yield (deg,)
        return
    for first in range(deg, -1, -1):
        for rest in monomials(deg - first, nvars - 1):
            yield (first,) + rest


def divide_exact(s: Form, f: Form) -> Form:
    """Quotient ``s / f``; raises :class:`NotDivisibleError` if it is not exact."""
    if f.is_zero():
        raise ZeroDivisionError("division by the zero form")
    if s.deg < f.deg:
        raise NotDivisibleError("degree of divisor exceeds degree of dividend")
    lf, cf = f.leading()
    rem = dict(s.terms)
    quot: dict[Exps, Fraction] = {}
    while rem:
        e = max(rem)
        c = rem[e]
        shift = tuple(a - b for a, b in zip(e, lf))
        if any(x < 0 for x in shift):
            raise NotDivisibleError("nonzero remainder")
        q = c / cf
        quot[shift] = q
        for ef, c2 in f.terms.items():
            t = tuple(a + b for a, b in zip(shift, ef))
            v = rem.get(t, Fraction(0)) - q * c2
            if v:
                rem[t] = v
            else:
                rem.pop(t, None)
    return Form(quot, s.deg - f.deg, s.nvars)


def ord_along(s: Form, f: Form) -> int:
    """Largest ``a`` with ``f**a`` dividing ``s``; ``f`` is trusted irreducible."""
    return strip_curve(s, f)[0]


def strip_curve(s: Form, f: Form) -> tuple[int, Form]:
    """``(a, s / f**a)`` with ``a = ord_along(s, f)``."""
    if s.is_zero():
        raise ZeroSectionError("order of vanishing of the zero section is undefined")
    a = 0
    while True:
        try:
            s2 = divide_exact(s, f)
        except NotDivisibleError:
            return a, s
        s = s2
        a += 1


# built-in curves -------------------------------------------------------------

CONIC = Form({(1, 0, 1): 1, (0, 2, 0): -1}, 2, 3)  # xz - y^2
LINE = Form({(0, 0, 1): 1}, 1, 3)  # z


def restrict_to_conic(s: Form) -> Form:
    """Substitute ``(x:y:z) = (u^2 : uv : v^2)``."""
    out: dict[Exps, Fraction] = {}
    for (a, b, c), coeff in s.terms.items():
        e = (2 * a + b, b + 2 * c)
        out[e] = out.get(e, Fraction(0)) + coeff
    return Form(out, 2 * s.deg, 2)


def restrict_to_line(s: Form) -> Form:
    """Substitute ``(x:y:z) = (u : v : 0)``."""
    out = {(a, b): coeff for (a, b, c), coeff in s.terms.items() if c == 0}
    return Form(out, s.deg, 2)


def ord_at_point(b: Form, point: tuple[int, int] = (1, 0)) -> int:
    """Order of vanishing of a binary form at ``(1:0)``, i.e. the power of ``v``."""
    return ord_at_point_lc(b, point)[0]


def ord_at_point_lc(b: Form, point: tuple[int, int] = (1, 0)) -> tuple[int, Fraction]:
    """Order at ``(1:0)`` along with the coefficient of the lowest ``v`` power."""
    if tuple(point) != (1, 0):
        raise ValidationError("ord_at_point: only the point (1:0) is supported")
    if b.is_zero():
        raise ZeroSectionError("order of vanishing of the zero form is undefined")
    j = min(e[1] for e in b.terms)
    return j, b.terms[(b.deg - j, j)]


def random_form(rng, deg: int, nvars: int = 3, nterms: int = 3, span: int = 3) -> Form:
    """Random nonzero form with small integer coefficients (test helper)."""
    monos = list(monomials(deg, nvars))
    while True:
        picks = rng.sample(monos, min(nterms, len(monos)))
        terms = {e: rng.choice([c for c in range(-span, span + 1) if c]) for e in picks}
        f = Form(terms, deg, nvars)
        if f:
            return f


def all_monomial_forms(deg: int, nvars: int = 3) -> list[Form]:
    return [Form.monomial(e) for e in monomials(deg, nvars)]
