"""Command line entry point: ``okb toric|plane|abstract|surface|verify``.

Exit codes: 0 when every check in the report passes, 2 when some check
failed (the report is still written), 1 on malformed input.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import serialize
from .core import (
    CheckResult,
    analyze,
    build_semigroup,
    observed_body,
    segment_inclusion_check,
    simplex,
    simplex_check,
    volume_report,
)
from .errors import OKBError, ValidationError
from .forms import Form
from .geometry import cone_equal, cone_from_generators, polytope_equal
from .models import TORIC_PRESETS, AbstractModel, PlaneModel, ToricModel, toric_preset
from .surface import (
    PRESETS as SURFACE_PRESETS,
    global_cone,
    global_fiber,
    membership_decomposition,
    nef_segment_check,
    ns_build,
    surface_preset,
)
from .valuations import PlaneFlag, ToricFlag, plane_valuation
from .verify import P1XP1_REFERENCE, run_all

DEFAULT_KMAX = 6


# ---------------------------------------------------------------------------
# config helpers


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"--config: cannot read {path}: {exc.strerror}") from exc
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"--config: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(cfg, dict):
        raise ValidationError("--config: top level must be a JSON object")
    return cfg


def _require(cfg: dict, key: str):
    if key not in cfg:
        raise ValidationError(f"config.{key}: missing required field")
    return cfg[key]


def _int(value, where: str, minimum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise ValidationError(f"{where}: expected an integer, got {value!r}")
    try:
        out = int(value)
    except ValueError:
        raise ValidationError(f"{where}: expected an integer, got {value!r}") from None
    if minimum is not None and out < minimum:
        raise ValidationError(f"{where}: must be >= {minimum}, got {out}")
    return out


def _int_matrix(value, where: str) -> list[list[int]]:
    if not isinstance(value, list) or not all(isinstance(r, list) for r in value):
        raise ValidationError(f"{where}: expected a list of integer lists")
    return [[_int(x, f"{where}[{i}][{j}]") for j, x in enumerate(r)] for i, r in enumerate(value)]


def _int_list(value, where: str) -> list[int]:
    if not isinstance(value, list):
        raise ValidationError(f"{where}: expected a list of integers")
    return [_int(x, f"{where}[{i}]") for i, x in enumerate(value)]


def _rational(value, where: str) -> Fraction:
    if isinstance(value, bool):
        raise ValidationError(f"{where}: expected a rational, got {value!r}")
    try:
        if isinstance(value, (int, str)):
            return Fraction(value)
    except (ValueError, ZeroDivisionError):
        pass
    raise ValidationError(f"{where}: expected a rational like \"p/q\", got {value!r}")


def _class_arg(text: str) -> tuple[Fraction, ...]:
    try:
        return tuple(Fraction(x) for x in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise ValidationError(f"--fiber: expected comma-separated rationals, got {text!r}") from None


def _kmax(args, cfg: dict, default: int | None = DEFAULT_KMAX) -> int | None:
    if args.kmax is not None:
        return _int(args.kmax, "--kmax", 1)
    if "kmax" in cfg:
        return _int(cfg["kmax"], "config.kmax", 1)
    return default


# ---------------------------------------------------------------------------
# commands


def _toric(args) -> tuple[dict, object, str]:
    cfg = _load_config(args.config)
    if args.preset and cfg:
        raise ValidationError("--preset: cannot be combined with --config")
    if args.preset:
        if args.preset not in TORIC_PRESETS:
            raise ValidationError(
                f"--preset: unknown toric preset {args.preset!r} "
                f"(choose from {', '.join(sorted(TORIC_PRESETS))})"
            )
        model = toric_preset(args.preset)
    elif cfg:
        verts = _int_matrix(_require(cfg, "polytope"), "config.polytope")
        model = _wrap("config.polytope", lambda: ToricModel(tuple(map(tuple, verts)), name="config"))
    else:
        raise ValidationError("toric: give --preset or --config")
    flag = None
    if "flag" in cfg:
        fcfg = cfg["flag"]
        if not isinstance(fcfg, dict):
            raise ValidationError("config.flag: expected an object with vertex and matrix")
        vertex = _int_list(_require_in(fcfg, "vertex", "config.flag"), "config.flag.vertex")
        matrix = _int_matrix(_require_in(fcfg, "matrix", "config.flag"), "config.flag.matrix")
        flag = _wrap("config.flag", lambda: ToricFlag(tuple(vertex), tuple(map(tuple, matrix))))
    kmax = _kmax(args, cfg)
    if flag is None:
        report = analyze(model, None, kmax, tuple(args.homogeneity))
    else:
        report = _wrap("config.flag", lambda: analyze(model, flag, kmax, tuple(args.homogeneity)))
    return serialize.jsonable(report), report.observed_body, f"toric {model.name} kmax={kmax}"


def _plane(args) -> tuple[dict, object, str]:
    cfg = _load_config(args.config)
    d = args.d if args.d is not None else cfg.get("d", 2)
    d = _int(d, "--d" if args.d is not None else "config.d", 1)
    curve = args.flag
    if curve is None:
        fcfg = cfg.get("flag", {"curve": "conic"})
        if not isinstance(fcfg, dict):
            raise ValidationError("config.flag: expected an object like {\"curve\": \"conic\"}")
        curve = fcfg.get("curve", "conic")
    flag = _wrap("config.flag.curve" if args.flag is None else "--flag", lambda: PlaneFlag(curve))
    kmax = _kmax(args, cfg)
    model = PlaneModel(d)
    report = analyze(model, flag, kmax, tuple(args.homogeneity))
    out = serialize.jsonable(report)
    if "forms" in cfg:
        out["forms"] = _form_values(cfg["forms"], flag)
    return out, report.observed_body, f"plane d={d} {curve} kmax={kmax}"


def _form_values(forms, flag: PlaneFlag) -> list[dict]:
    if not isinstance(forms, list):
        raise ValidationError("config.forms: expected a list of record lists")
    out = []
    for i, records in enumerate(forms):
        where = f"config.forms[{i}]"
        f = _wrap(where, lambda: Form.from_records(records))
        if f.nvars != 3:
            raise ValidationError(f"{where}: plane forms need 3 exponents per term")
        value = _wrap(where, lambda: plane_valuation(f, flag))
        out.append({"form": str(f), "degree": f.deg, "value": list(value)})
    return out


def _abstract(args) -> tuple[dict, object, str]:
    cfg = _load_config(args.config)
    if not cfg:
        raise ValidationError("abstract: --config is required")
    raw = _require(cfg, "points")
    if not isinstance(raw, list) or not raw:
        raise ValidationError("config.points: expected a non-empty list of {\"k\", \"a\"} objects")
    pts = []
    for i, p in enumerate(raw):
        where = f"config.points[{i}]"
        if not isinstance(p, dict):
            raise ValidationError(f"{where}: expected an object with k and a")
        k = _int(_require_in(p, "k", where), f"{where}.k", 1)
        a = _int_list(_require_in(p, "a", where), f"{where}.a")
        pts.append((k, tuple(a)))
    model = _wrap("config.points", lambda: AbstractModel.from_points(pts, name=cfg.get("name", "abstract")))
    kmax = _kmax(args, cfg, default=None)
    S = build_semigroup(model, None, kmax)
    body, stab = observed_body(S)
    expect = cfg.get("expect", {})
    if not isinstance(expect, dict):
        raise ValidationError("config.expect: expected an object")
    simplex_b = _rational(expect["simplex_b"], "config.expect.simplex_b") if "simplex_b" in expect else None
    report = volume_report(S, None, body, stab, simplex_b=simplex_b)
    if simplex_b is not None:
        if simplex_b <= 0:
            raise ValidationError("config.expect.simplex_b: must be positive")
        report.add(simplex_check(body, simplex_b, model.n, S))
    if "segment_b" in expect:
        b = _rational(expect["segment_b"], "config.expect.segment_b")
        if b < 0:
            raise ValidationError("config.expect.segment_b: must be nonnegative")
        report.add(segment_inclusion_check(body, b))
    return serialize.jsonable(report), body, f"abstract {model.name}"


def _surface(args) -> tuple[dict, object, str]:
    cfg = _load_config(args.config)
    if args.preset and cfg:
        raise ValidationError("--preset: cannot be combined with --config")
    if args.preset:
        if args.preset not in SURFACE_PRESETS:
            raise ValidationError(
                f"--preset: unknown surface preset {args.preset!r} "
                f"(choose from {', '.join(sorted(SURFACE_PRESETS))})"
            )
        S = surface_preset(args.preset)
        name = args.preset
    elif cfg:
        Q = _int_matrix(_require(cfg, "intersection"), "config.intersection")
        eff = _int_matrix(_require(cfg, "eff"), "config.eff")
        ample = _int_list(_require(cfg, "ample"), "config.ample")
        labels = cfg.get("labels")
        if labels is not None and (not isinstance(labels, list) or not all(isinstance(x, str) for x in labels)):
            raise ValidationError("config.labels: expected a list of strings")
        S = _wrap("config", lambda: ns_build(Q, eff, ample, labels))
        name = "config"
    else:
        raise ValidationError("surface: give --preset or --config")

    G = global_cone(S)
    classes = [_class_arg(t) for t in args.fiber] or [tuple(Fraction(x) for x in S.ample)]
    fibers = []
    for L in classes:
        if len(L) != S.r:
            raise ValidationError(f"--fiber: class {','.join(map(str, L))} must have {S.r} entries")
        fibers.append({"class": list(L), "body": global_fiber(G, L)})

    checks: dict[str, CheckResult] = {}

    def add(c: CheckResult):
        checks[c.name] = c

    if name == "p1xp1":
        ref = cone_from_generators(P1XP1_REFERENCE)
        add(CheckResult(
            "reference_generators",
            cone_equal(G.cone, ref) and len(G.cone.rays) == len(P1XP1_REFERENCE),
            {"reference": P1XP1_REFERENCE, "extreme_rays": len(G.cone.rays)},
        ))
    members = []
    for g in G.generators:
        dec = membership_decomposition(G, g.vector)
        members.append({"generator": g.label, "recombines": dec.recombine() == g.vector})
    add(CheckResult("generator_membership", all(m["recombines"] for m in members), {"generators": members}))
    DD = S.dot(S.ample, S.ample)
    fD = global_fiber(G, S.ample)
    sx = simplex(DD, 2)
    add(CheckResult(
        "fiber_simplex",
        polytope_equal(fD, sx),
        {"b": DD, "n": 2, "fiber": fD, "target": sx},
    ))
    for xi in list(S.eff) + [S.ample]:
        add(nef_segment_check(G, xi))

    out = {
        "kind": "global_cone_report",
        "surface": {
            "name": name,
            "intersection": [list(r) for r in S.Q],
            "eff": [list(g) for g in S.eff],
            "ample": list(S.ample),
            "labels": list(S.labels),
            "D.D": DD,
        },
        "generators": [{"label": g.label, "vector": list(g.vector)} for g in G.generators],
        "cone": G.cone,
        "fibers": fibers,
        "checks": checks,
        "all_passed": all(c.passed for c in checks.values()),
    }
    first = fibers[0]
    title = f"surface {name} fiber over ({','.join(serialize.rat(x) for x in first['class'])})"
    return serialize.jsonable(out), first["body"], title


def _require_in(obj: dict, key: str, where: str):
    if key not in obj:
        raise ValidationError(f"{where}.{key}: missing required field")
    return obj[key]


def _wrap(where: str, fn):
    """Run ``fn`` and prefix validation errors with the offending field."""
    try:
        return fn()
    except ValidationError as exc:
        msg = str(exc)
        raise ValidationError(msg if msg.startswith(where) else f"{where}: {msg}") from exc


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="okb", description="Exact Newton-Okounkov bodies of desk-scale models.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, presets: bool = True):
        p.add_argument("--config", help="JSON configuration file")
        if presets:
            p.add_argument("--preset", help="built-in model name")
        p.add_argument("--kmax", help="largest degree to enumerate")
        p.add_argument("--out", help="write the JSON report here (default: stdout)")
        p.add_argument("--svg", help="render the 2-D body or fiber to this SVG file")

    p = sub.add_parser("toric", help="lattice polytope models")
    common(p)
    p.add_argument("--homogeneity", type=int, action="append", default=[], metavar="M",
                   help="also check the body of the M-th power (repeatable)")
    p = sub.add_parser("plane", help="O(d) on the projective plane")
    common(p, presets=False)
    p.add_argument("--d", type=int, help="degree of the bundle (default 2)")
    p.add_argument("--flag", choices=["conic", "line"], help="flag curve (default conic)")
    p.add_argument("--homogeneity", type=int, action="append", default=[], metavar="M")
    p = sub.add_parser("abstract", help="user-supplied valuation points")
    common(p, presets=False)
    p = sub.add_parser("surface", help="global cone from Neron-Severi data")
    common(p)
    p.add_argument("--fiber", action="append", default=[], metavar="L",
                   help="class for a fiber, e.g. 1,1 (repeatable; default the ample class)")
    p = sub.add_parser("verify", help="run the acceptance battery")
    p.add_argument("--only", type=int, action="append", metavar="N", help="run only criterion N")
    p.add_argument("--out", help="also write a JSON summary here")
    return parser


COMMANDS = {"toric": _toric, "plane": _plane, "abstract": _abstract, "surface": _surface}


def _verify(args) -> int:
    results = run_all(set(args.only) if args.only else None)
    for r in results:
        print(r.line())
    ok = all(r.passed for r in results)
    print(f"{sum(r.passed for r in results)}/{len(results)} criteria passed")
    if args.out:
        summary = [
            {"criterion": r.number, "name": r.name, "passed": r.passed, "detail": r.detail}
            for r in results
        ]
        serialize.write_atomic(args.out, serialize.dumps({"kind": "verify_summary", "criteria": summary}))
    return 0 if ok else 2


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            return _verify(args)
        for h in getattr(args, "homogeneity", []):
            if h < 1:
                raise ValidationError(f"--homogeneity: must be >= 1, got {h}")
        report, body, title = COMMANDS[args.command](args)
        svg = None
        if args.svg:
            if body.ambient_dim != 2:
                raise ValidationError(f"--svg: body lives in R^{body.ambient_dim}, only 2-D bodies render")
            svg = serialize.svg_string(body, title)
        text = serialize.dumps(report)
        if args.out:
            serialize.write_atomic(args.out, text)
        else:
            sys.stdout.write(text)
        if svg is not None:
            serialize.write_atomic(args.svg, svg)
        return 0 if report["all_passed"] else 2
    except OKBError as exc:
        print(f"okb: error: {_one_line(str(exc))}", file=sys.stderr)
        return 1


def _one_line(msg: str) -> str:
    return " ".join(msg.split())


def main(argv: list[str] | None = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
