"""Acceptance criteria, one test each; every test prints its PASS/FAIL line.

All comparisons are exact.  Runtime limits are part of the pass condition.
"""
from __future__ import annotations

import json
import time

import pytest

from okb.cli import run
from okb.verify import CRITERIA, _timed


@pytest.fixture
def report(capsys):
    def emit(result):
        with capsys.disabled():
            print("\n" + result.line())
        return result

    return emit


@pytest.mark.parametrize("number,name,limit,fn", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(number, name, limit, fn, report):
    result = report(_timed(number, name, limit, fn))
    assert result.passed, result.detail


def test_criterion_1_through_cli(tmp_path, report):
    """The generator list as emitted by ``okb surface --preset p1xp1``."""
    out = tmp_path / "r.json"

    def via_cli():
        t0 = time.perf_counter()
        code = run(["surface", "--preset", "p1xp1", "--out", str(out)])
        rep = json.loads(out.read_text())
        vecs = sorted(tuple(g["vector"]) for g in rep["generators"])
        expected = sorted(
            tuple(str(x) for x in v)
            for v in [(0, 1, 1, 1), (0, 0, 1, 0), (0, 0, 0, 1), (1, 0, 1, 0), (1, 0, 0, 1)]
        )
        ok = code == 0 and vecs == expected and rep["checks"]["reference_generators"]["passed"]
        return ok, f"exit={code}, generators={len(vecs)}, cli seconds={time.perf_counter() - t0:.2f}"

    result = report(_timed(1, "global cone of P1xP1 via the CLI", 1.0, via_cli))
    assert result.passed, result.detail
