import json
import math

import pytest

from ltlab import ToleranceError
from ltlab.cli import _check_tolerances, main


def test_constants_table(capsys):
    assert main(["constants", "--d", "3", "--q", "1"]) == 0
    out = capsys.readouterr().out
    header, row = out.strip().split("\n")
    assert header.startswith("state_id") is False
    cells = dict(zip(header.split(","), row.split(",")))
    assert float(cells["kinetic"]) == pytest.approx(0.6 * (6 * math.pi**2) ** (2 / 3), rel=1e-12)
    assert len(cells["config_hash"]) == 12


def test_riesz_empty_mean_row(capsys):
    assert main(["riesz", "--k", "1", "--mu", "9.8696", "--boundary", "dirichlet"]) == 0
    out = capsys.readouterr().out
    header, row = out.strip().split("\n")
    cells = dict(zip(header.split(","), row.split(",")))
    assert float(cells["value"]) == 0.0
    assert cells["contributing_points"] == "0"
    assert float(cells["weyl_ratio"]) == 0.0


def test_riesz_sweep_and_neumann_blanks(capsys):
    assert main(["riesz", "--k", "2", "--mu-min", "10", "--mu-max", "1000",
                 "--mu-points", "5", "--boundary", "neumann"]) == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert len(lines) == 6
    cells = lines[1].split(",")
    header = lines[0].split(",")
    assert cells[header.index("bly_gap")] == ""
    assert cells[header.index("weyl_ratio")] == ""


def test_scan_reports_growth_exponents(capsys):
    assert main(["scan", "--family", "box", "--d", "1", "--n-min", "4",
                 "--n-max", "16", "--grid-n", "256"]) == 0
    out = capsys.readouterr().out
    lines = out.strip().split("\n")
    assert lines[0].startswith("# N kinetic")
    assert len([l for l in lines if not l.startswith("#")]) == 3
    exponents = [l for l in lines if l.startswith("# kinetic_exponent")]
    assert len(exponents) == 1
    assert float(exponents[0].split()[-1]) == pytest.approx(3.0, abs=0.35)


def test_corpus_then_partition_roundtrip(tmp_path, capsys):
    out_dir = tmp_path / "states"
    assert main(["corpus", "--d", "1", "--n", "128", "--seed", "5",
                 "--box-sizes", "3", "--slater-sizes", "", "--bump-counts", "",
                 "--output-dir", str(out_dir), "--with-density",
                 "--out", str(tmp_path / "manifest.csv")]) == 0
    manifest = (tmp_path / "manifest.csv").read_text().strip().split("\n")
    assert len(manifest) == 2
    state_path = dict(zip(manifest[0].split(","), manifest[1].split(",")))["path"]

    assert main(["partition", "--state", state_path, "--lambda-frac", "0.4",
                 "--out", str(tmp_path / "part.json")]) == 0
    payload = json.loads((tmp_path / "part.json").read_text())
    assert payload["format"] == "ltlab-partition"
    assert payload["group_inequality_total"] >= 0.0
    assert all(v >= 0.0 for v in payload["group_inequality_values"])


def test_verify_deterministic_and_worker_invariant(tmp_path):
    args = ["verify", "--d", "1", "--n", "64", "--seed", "2", "--box-sizes", "2",
            "--slater-sizes", "3", "--bump-counts", "", "--eps-points", "4"]
    assert main(args + ["--out", str(tmp_path / "a.csv")]) == 0
    assert main(args + ["--out", str(tmp_path / "b.csv")]) == 0
    assert main(args + ["--workers", "4", "--out", str(tmp_path / "c.csv")]) == 0
    a = (tmp_path / "a.csv").read_bytes()
    assert a == (tmp_path / "b.csv").read_bytes()
    assert a == (tmp_path / "c.csv").read_bytes()


def test_verify_json_nests_per_cube_tables(tmp_path):
    assert main(["verify", "--d", "1", "--n", "64", "--seed", "1", "--box-sizes", "2",
                 "--slater-sizes", "", "--bump-counts", "", "--eps-points", "3",
                 "--format", "json", "--out", str(tmp_path / "r.json")]) == 0
    doc = json.loads((tmp_path / "r.json").read_text())
    ids = {row["inequality_id"] for row in doc["rows"]}
    assert {"hoffmann_ostenhof", "lt_ratio", "local_bound_exact",
            "aggregate", "poincare_sobolev", "main"} <= ids
    local = next(r for r in doc["rows"] if r["inequality_id"] == "local_bound_exact")
    assert isinstance(local["per_cube"], list) and local["per_cube"]
    assert doc["meta"]["config_hash"] == doc["rows"][0]["config_hash"]


def test_config_file_merges_under_flags(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("d = 3\nq = 2\n# comment line\n")
    assert main(["constants", "--config", str(cfg)]) == 0
    first = capsys.readouterr().out
    assert main(["constants", "--d", "3", "--q", "2"]) == 0
    second = capsys.readouterr().out
    # Same parameters, but the hash covers the config path only via its values.
    assert first.split(",")[:2] == second.split(",")[:2]
    assert "3,2," in first


def test_config_file_rejects_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("granularity = 9\n")
    assert main(["constants", "--config", str(cfg)]) == 2
    record = json.loads(capsys.readouterr().err)
    assert record["error"] == "PreconditionError"
    assert record["exit_code"] == 2


def test_precondition_failure_exit_code(capsys):
    assert main(["riesz", "--k", "1", "--mu", "-4.0"]) == 2
    record = json.loads(capsys.readouterr().err)
    assert record["error"] == "PreconditionError"


def test_output_dir_env_var(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("LTLAB_OUTPUT_DIR", str(tmp_path))
    assert main(["constants", "--d", "1", "--out", "nested/c.csv"]) == 0
    assert (tmp_path / "nested" / "c.csv").exists()


def test_check_tolerances_raises_on_rigorous_violation():
    rows = [{"inequality_id": "hoffmann_ostenhof", "lhs": 10.0, "slack": -1.0,
             "state_id": "synthetic"}]
    with pytest.raises(ToleranceError):
        _check_tolerances(rows)
    benign = [{"inequality_id": "main", "lhs": 10.0, "slack": -5.0, "state_id": "s"}]
    _check_tolerances(benign)


def test_tolerance_violation_exit_code(tmp_path, monkeypatch, capsys):
    import ltlab.cli as cli

    monkeypatch.setitem(cli.RIGOROUS_TOLERANCES, "main", 1e-30)
    code = main(["verify", "--d", "1", "--n", "128", "--seed", "2", "--box-sizes", "",
                 "--slater-sizes", "", "--bump-counts", "1", "--eps-points", "4",
                 "--out", str(tmp_path / "r.csv")])
    assert code == 3
    record = json.loads(capsys.readouterr().err)
    assert record["error"] == "ToleranceError"
    # The report is still written before the failure is signalled.
    assert (tmp_path / "r.csv").exists()
