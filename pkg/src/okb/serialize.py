"""Canonical JSON and SVG output.

Rationals are written as strings ``"p/q"`` (``"p"`` for integers) so reports
round-trip without floating point; keys are sorted and lists are emitted in
the library's lexicographic order, so identical inputs give identical bytes.
"""
from __future__ import annotations

import dataclasses
import json
import math
import os
import tempfile
from fractions import Fraction
from pathlib import Path

from .core import BodyReport, CheckResult
from .errors import ValidationError
from .geometry import PolyCone, Polytope


def rat(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def jsonable(obj):
    if isinstance(obj, (bool, int, str)) or obj is None:
        return obj
    if isinstance(obj, Fraction):
        return rat(obj)
    if isinstance(obj, Polytope):
        return {
            "ambient_dim": obj.ambient_dim,
            "dim": obj.dim,
            "vertices": [jsonable(v) for v in obj.vertices],
            "facets": [{"normal": jsonable(a), "offset": rat(b)} for a, b in obj.facets],
            "equations": [{"normal": jsonable(a), "offset": rat(b)} for a, b in obj.equations],
        }
    if isinstance(obj, PolyCone):
        return {
            "ambient_dim": obj.ambient_dim,
            "dim": obj.dim,
            "pointed": obj.pointed,
            "rays": [jsonable(r) for r in obj.rays],
            "facets": [jsonable(e) for e in obj.facets],
            "equations": [jsonable(l) for l in obj.equations],
            "lineality": [jsonable(l) for l in obj.lineality],
        }
    if isinstance(obj, CheckResult):
        return {"passed": obj.passed, "certificate": jsonable(obj.certificate)}
    if isinstance(obj, BodyReport):
        return {
            "kind": "body_report",
            "provenance": jsonable(obj.provenance),
            "kmax": obj.kmax,
            "observed_body": jsonable(obj.observed_body),
            "stabilized_at": obj.stabilized_at,
            "euclidean_volume": rat(obj.euclidean_volume),
            "normalized_volume": rat(obj.normalized_volume),
            "hilbert_leading": None if obj.hilbert_leading is None else rat(obj.hilbert_leading),
            "volume_comparison": jsonable(obj.volume_comparison),
            "checks": {k: jsonable(v) for k, v in obj.checks.items()},
            "all_passed": obj.all_passed,
        }
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = [jsonable(x) for x in obj]
        return sorted(items, key=json.dumps) if isinstance(obj, (set, frozenset)) else items
    if dataclasses.is_dataclass(obj):
        return {f.name: jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2) + "\n"


def write_atomic(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------------------
# SVG

_W = _H = 480
_PAD = 48


def _polygon_order(verts):
    if len(verts) < 3:
        return list(verts)
    cx = sum(v[0] for v in verts) / len(verts)
    cy = sum(v[1] for v in verts) / len(verts)
    return sorted(verts, key=lambda v: math.atan2(float(v[1] - cy), float(v[0] - cx)))


def svg_string(body: Polytope, title: str | None = None) -> str:
    if body.ambient_dim != 2:
        raise ValidationError(f"render_svg: body must be 2-dimensional, got R^{body.ambient_dim}")
    verts = list(body.vertices)
    xs = [Fraction(0)] + [v[0] for v in verts]
    ys = [Fraction(0)] + [v[1] for v in verts]
    x0, x1 = math.floor(min(xs)), max(math.ceil(max(xs)), math.floor(min(xs)) + 1)
    y0, y1 = math.floor(min(ys)), max(math.ceil(max(ys)), math.floor(min(ys)) + 1)
    scale = min((_W - 2 * _PAD) / (x1 - x0), (_H - 2 * _PAD) / (y1 - y0))

    def px(v):
        return (
            f"{_PAD + float(v[0] - x0) * scale:.3f}",
            f"{_H - _PAD - float(v[1] - y0) * scale:.3f}",
        )

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{_PAD}" y="24" font-family="monospace" font-size="14">{_esc(title)}</text>')
    out.append('<g stroke="#dddddd" stroke-width="1">')
    for gx in range(x0, x1 + 1):
        a, b = px((gx, y0)), px((gx, y1))
        out.append(f'<line x1="{a[0]}" y1="{a[1]}" x2="{b[0]}" y2="{b[1]}"/>')
    for gy in range(y0, y1 + 1):
        a, b = px((x0, gy)), px((x1, gy))
        out.append(f'<line x1="{a[0]}" y1="{a[1]}" x2="{b[0]}" y2="{b[1]}"/>')
    out.append("</g>")
    ox, oy = px((0, 0))
    ax, _ = px((x1, 0))
    _, ay = px((0, y1))
    out.append(
        f'<g stroke="black" stroke-width="1.5"><line x1="{px((x0, 0))[0]}" y1="{oy}" x2="{ax}" y2="{oy}"/>'
        f'<line x1="{ox}" y1="{px((0, y0))[1]}" x2="{ox}" y2="{ay}"/></g>'
    )
    if not verts:
        out.append(
            f'<text x="{_W // 2}" y="{_H // 2}" text-anchor="middle" font-family="monospace" '
            f'font-size="14">empty body</text>'
        )
    elif len(verts) == 1:
        p = px(verts[0])
        out.append(f'<circle cx="{p[0]}" cy="{p[1]}" r="4" fill="#1f4e99"/>')
    elif len(verts) == 2:
        a, b = px(verts[0]), px(verts[1])
        out.append(
            f'<line x1="{a[0]}" y1="{a[1]}" x2="{b[0]}" y2="{b[1]}" stroke="#1f4e99" stroke-width="3"/>'
        )
    else:
        pts = " ".join(",".join(px(v)) for v in _polygon_order(verts))
        out.append(
            f'<polygon points="{pts}" fill="#1f4e99" fill-opacity="0.25" stroke="#1f4e99" stroke-width="2"/>'
        )
    for v in verts:
        p = px(v)
        out.append(f'<circle cx="{p[0]}" cy="{p[1]}" r="3" fill="black"/>')
        label = f"({rat(v[0])},{rat(v[1])})"
        out.append(
            f'<text x="{float(p[0]) + 6:.3f}" y="{float(p[1]) - 6:.3f}" font-family="monospace" '
            f'font-size="12">{label}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_svg(body: Polytope, path, title: str | None = None) -> None:
    write_atomic(path, svg_string(body, title))


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
