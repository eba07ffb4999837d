import csv
import json

import pytest

from rhlab.cli import EXIT_CONFIG, EXIT_OK, parse_grid, run


def _read(path):
    with open(path) as fh:
        return list(csv.reader(fh))


def test_parse_grid():
    assert list(parse_grid("-1:1:3", "--xgrid")) == [-1.0, 0.0, 1.0]
    assert list(parse_grid("0.5,2", "--xgrid")) == [0.5, 2.0]


def test_airy_csv_and_manifest(tmp_path):
    out = tmp_path / "a.csv"
    assert run(["airy", "--xmin=-2", "--xmax=2", "--n", "5", "--out", str(out), "--threads", "1"]) == EXIT_OK
    rows = _read(out)
    assert rows[0] == ["x", "quadrature", "series", "abs_diff"] and len(rows) == 6
    man = json.loads(out.with_suffix(".json").read_text())
    assert man["subcommand"] == "airy" and man["rows"] == 5 and man["status"] == "ok"


def test_sine_subcommand(tmp_path):
    out = tmp_path / "s.csv"
    assert run(["sine", "--n", "30", "--counts", "30", "--out", str(out)]) == EXIT_OK
    man = json.loads(out.with_suffix(".json").read_text())
    assert man["diagnostics"]["det_nystrom"] == pytest.approx(0.40008, abs=1e-5)


def test_overlapping_contour_is_config_error(tmp_path):
    c = tmp_path / "c.json"
    c.write_text(json.dumps([{"kind": "segment", "endpoints": [[-1, 0], [1, 0]]},
                             {"kind": "segment", "endpoints": [[0, 0], [2, 0]]}]))
    j = tmp_path / "j.json"
    j.write_text(json.dumps({"builtin": "upper_gaussian", "c": 0.5}))
    assert run(["solve", "--contour", str(c), "--jump", str(j), "--out", str(tmp_path / "o.csv")]) == EXIT_CONFIG


def test_unknown_flag_is_config_error(tmp_path):
    assert run(["airy", "--bogus"]) == EXIT_CONFIG


def test_szego_small(tmp_path):
    out = tmp_path / "z.csv"
    assert run(["szego", "--logcoeffs", "1:0.3", "--nmax", "4", "--out", str(out)]) == EXIT_OK
    rows = _read(out)
    assert rows[0][:3] == ["n", "logdet_direct", "asymptote"] and len(rows) == 6


def test_threads_env(tmp_path, monkeypatch):
    monkeypatch.setenv("RHLAB_THREADS", "2")
    out = tmp_path / "a.csv"
    run(["airy", "--n", "3", "--out", str(out)])
    assert json.loads(out.with_suffix(".json").read_text())["threads"] == 2


def test_output_may_not_clobber_input(tmp_path):
    c = tmp_path / "c.json"
    c.write_text(json.dumps([{"kind": "circle", "center": [0, 0], "radius": 1}]))
    j = tmp_path / "j.json"
    j.write_text(json.dumps({"builtin": "upper_gaussian", "c": 0.5}))
    before = c.read_text()
    assert run(["solve", "--contour", str(c), "--jump", str(j), "--out", str(tmp_path / "c.csv")]) == EXIT_CONFIG
    assert c.read_text() == before
