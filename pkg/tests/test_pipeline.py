import json

import numpy as np
import pytest

from scspfit.approx import CANONICAL_SPECS
from scspfit.bankio import FilterBank
from scspfit.kernels import FilterGrid, ideal_filter
from scspfit.pipeline import (PipelineConfig, default_assignment, load_assignment, resolve_threads,
                              run_pipeline)


@pytest.fixture(scope="module")
def bank():
    rng = np.random.default_rng(7)
    entries = []
    for i in range(1, 9):
        g = ideal_filter(CANONICAL_SPECS[i]).values
        entries.append((f"m{i}", FilterGrid(g + 0.005 * rng.normal(size=g.shape))))
    return FilterBank(entries)


FAST = ("A", "B", "C2", "D2", "S7L1")


def _csvs(path):
    return {p.name: p.read_bytes() for p in sorted(path.glob("*.csv"))}


def test_outputs_are_byte_identical(bank, tmp_path):
    cfg = PipelineConfig(default_assignment(bank), methods=FAST, render=False)
    run_pipeline(bank, cfg, tmp_path / "a")
    run_pipeline(bank, cfg, tmp_path / "b")
    a, b = _csvs(tmp_path / "a"), _csvs(tmp_path / "b")
    assert a == b and "overview.csv" in a
    assert (tmp_path / "a" / "fitted_specs.txt").read_bytes() == (tmp_path / "b" / "fitted_specs.txt").read_bytes()


def test_threads_do_not_change_output(bank, tmp_path, monkeypatch):
    cfg = PipelineConfig(default_assignment(bank), methods=FAST, render=False)
    run_pipeline(bank, cfg, tmp_path / "serial")
    monkeypatch.setenv("SCALESPACE_FIT_THREADS", "4")
    run_pipeline(bank, cfg, tmp_path / "threaded")
    assert _csvs(tmp_path / "serial") == _csvs(tmp_path / "threaded")


def test_tables_and_images(bank, tmp_path):
    cfg = PipelineConfig(default_assignment(bank), methods=("A", "B", "S7L2"), upscale=2)
    res = run_pipeline(bank, cfg, tmp_path)
    assert res.all_converged and not res.errors
    assert {"spreads", "monomial_responses", "normalized_responses", "dc_compensation", "weighted_spreads",
            "method_A", "method_B", "sharpen", "overview"} <= set(res.tables)
    assert len(res.tables["spreads"].rows) == 8
    assert [r[0] for r in res.tables["dc_compensation"].rows] == ["m7", "m8"]
    assert len(list((tmp_path / "learned").glob("*.ppm"))) == 8
    assert len(list((tmp_path / "idealized" / "B").glob("*.ppm"))) == 7
    assert (tmp_path / "idealized" / "S7L2" / "m7.ppm").exists()
    assert "m7.S7L2.gamma = " in (tmp_path / "fitted_specs.txt").read_text()


def test_stage_errors_do_not_abort(tmp_path):
    flat = FilterGrid(np.full((7, 7), 0.1))
    good = ideal_filter(CANONICAL_SPECS[8])
    bank = FilterBank([("flat", flat), ("good", good), ("orphan", good)])
    res = run_pipeline(bank, PipelineConfig({"flat": 8, "good": 8}, methods=("B",), render=False), tmp_path)
    assert ("good", "B") in res.fits
    assert any(e.startswith("flat:") for e in res.errors)
    assert any(e.startswith("orphan:") for e in res.errors)
    assert (tmp_path / "errors.txt").read_text().count("\n") == len(res.errors)


def test_assignment_files(tmp_path):
    p = tmp_path / "a.json"
    p.write_text(json.dumps({"x": 1, "y": "8"}))
    assert load_assignment(p) == {"x": 1, "y": 8}
    p = tmp_path / "a.txt"
    p.write_text("# roles\nx 5\n\ny 7  # sharpen\n")
    assert load_assignment(p) == {"x": 5, "y": 7}
    p.write_text("x 5 extra\n")
    with pytest.raises(ValueError):
        load_assignment(p)
    p.write_text("x 12\n")
    with pytest.raises(ValueError):
        load_assignment(p)


def test_default_assignment_limits():
    g = FilterGrid(np.ones((1, 1)))
    assert default_assignment(FilterBank([("a", g), ("b", g)])) == {"a": 1, "b": 2}
    with pytest.raises(ValueError):
        default_assignment(FilterBank([(f"f{i}", g) for i in range(10)]))


def test_thread_resolution(monkeypatch):
    monkeypatch.delenv("SCALESPACE_FIT_THREADS", raising=False)
    assert resolve_threads(3) == 3
    monkeypatch.setenv("SCALESPACE_FIT_THREADS", "2")
    assert resolve_threads(8) == 2
    monkeypatch.setenv("SCALESPACE_FIT_THREADS", "many")
    assert resolve_threads(5) == 5
