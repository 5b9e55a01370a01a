"""Smoke test of the Python bindings. Run with `python python/smoke_test.py`
or `pytest python/`."""

import tempfile
from pathlib import Path

import pyporofrac as pf


def test_config_round_trip():
    cfg = pf.Config.preset("appendix", level=0)
    assert cfg.name == "appendix"
    assert cfg.c == 1e11
    again = pf.Config.from_toml(cfg.to_toml())
    assert again == cfg
    cfg.steps = 3
    assert cfg != again


def test_run_and_report():
    cfg = pf.Config.preset("appendix")
    scenario = pf.Scenario(cfg)
    assert scenario.dim == 2
    assert scenario.fractures == ["fracture"]
    assert "cells: 512" in scenario.mesh_info()
    with tempfile.TemporaryDirectory() as out:
        report = scenario.run(out)
        assert (Path(out) / "report.txt").exists()
    assert report.iterations[0] <= 10
    assert max(report.kkt) < 1e-8 * 1e6
    assert len(report.displacement) == scenario.num_cells
    assert all(len(u) == 2 for u in report.displacement)
    sets = {f["set"] for f in report.faces}
    assert sets <= {"open", "stick", "slide"}
    assert report.max_slip[-1]["fracture"] > 0.0


def test_errors():
    try:
        pf.Config.preset("nope")
    except ValueError as e:
        assert "unknown preset" in str(e)
    else:
        raise AssertionError("expected ValueError")
    cfg = pf.Config.preset("appendix-constant")
    text = cfg.to_toml().replace("max_iterations = 50", "max_iterations = 1")
    try:
        pf.Scenario(pf.Config.from_toml(text)).run()
    except pf.NonConvergenceError:
        pass
    else:
        raise AssertionError("expected NonConvergenceError")
    try:
        pf.Scenario.load("/nonexistent/scenario.toml")
    except OSError:
        pass
    else:
        raise AssertionError("expected OSError")


def test_oracles():
    assert pf.patch_error(2, seed=1) < 1e-10
    c = pf.consolidation(20, 1e-3, 0.1)
    assert c["l2_error"] < 0.05
    assert c["overshoot"] <= 0.05


if __name__ == "__main__":
    for name, f in list(globals().items()):
        if name.startswith("test_"):
            f()
            print(f"{name}: ok")
