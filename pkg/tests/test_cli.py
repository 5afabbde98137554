import csv
import json
import subprocess
import sys

import pytest

from beamalign.cli import CSV_COLUMNS, main
from beamalign.scenario import builtin_scenario, write_scenario

FAST = ["--mc", "10", "--mc-inner", "4"]


@pytest.fixture
def scenario_file(tmp_path):
    s = builtin_scenario(codebook={"m_tx": 16, "m_rx": 16}, arrays={"n_tx": 16, "n_rx": 16})
    path = tmp_path / "scenario.json"
    write_scenario(s, path)
    return str(path)


def test_sweep_csv_schema(scenario_file, tmp_path):
    out = tmp_path / "r.csv"
    rc = main(["sweep", "--scenario", scenario_file, "--sweep", "snr:0:10:5", "--trials", "3",
               "--seed", "7", "--out", str(out), *FAST])
    assert rc == 0
    rows = list(csv.DictReader(out.open()))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert len(rows) == 4 * 3
    assert {r["strategy"] for r in rows} == {"idealized", "naive", "one-step", "two-step"}
    assert {r["sweep_value"] for r in rows} == {"0.0", "5.0", "10.0"}
    assert all(r["n_trials"] == "3" and r["seed"] == "7" for r in rows)
    meta = json.loads((tmp_path / "r.csv.meta.json").read_text())
    assert meta["seed"] == 7 and len(meta["param_hash"]) == 16


def test_sweep_d_axis_with_builtin_name(tmp_path, capsys):
    rc = main(["sweep", "--scenario", "params-B", "--strategies", "naive,idealized", "--sweep", "d:1:3",
               "--trials", "2", *FAST])
    assert rc == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert [l.split(",")[0] for l in lines[1:]] == ["naive"] * 3 + ["idealized"] * 3


@pytest.mark.parametrize("cmd", ["sweep", "snapshot"])
def test_identical_runs_are_byte_identical(cmd, scenario_file, tmp_path):
    extra = ["--sweep", "d:1:4", "--trials", "4"] if cmd == "sweep" else []
    outs = []
    for i in range(2):
        out = tmp_path / f"{cmd}{i}.out"
        assert main([cmd, "--scenario", scenario_file, "--seed", "3", "--out", str(out), *FAST, *extra]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    if cmd == "sweep":
        assert (tmp_path / "sweep0.out.meta.json").read_bytes() == (tmp_path / "sweep1.out.meta.json").read_bytes()


def test_seed_changes_output(scenario_file, tmp_path):
    texts = []
    for seed in ("1", "2"):
        out = tmp_path / f"s{seed}.csv"
        main(["sweep", "--scenario", scenario_file, "--strategies", "naive", "--trials", "5",
              "--seed", seed, "--out", str(out)])
        texts.append(out.read_text())
    assert texts[0] != texts[1]


def test_snapshot_document(scenario_file, capsys):
    assert main(["snapshot", "--scenario", scenario_file, "--d", "7", *FAST]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert set(doc) >= {"true_positions", "views", "selections", "seed", "param_hash"}
    assert len(doc["selections"]["two-step"]["tx"]) == 7
    assert {"index", "angle"} == set(doc["selections"]["naive"]["rx"][0])


@pytest.mark.parametrize("strategies", ["", " , ", "greedy"])
def test_bad_strategy_list_is_usage_error(strategies, capsys):
    assert main(["sweep", "--strategies", strategies, "--trials", "1"]) == 2
    assert "--strategies" in capsys.readouterr().err


def test_bad_sweep_is_usage_error(capsys):
    assert main(["sweep", "--sweep", "snr:10:0", "--trials", "1"]) == 2
    assert "--sweep" in capsys.readouterr().err


def test_invalid_scenario_reports_field(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"errors": {"radii_tx": [0, -1, 2, 3]}}))
    assert main(["sweep", "--scenario", str(p), "--trials", "1"]) == 1
    assert "errors.radii_tx[1]" in capsys.readouterr().err


def test_validate_reports_each_check(tmp_path, capsys):
    out = tmp_path / "v.txt"
    assert main(["validate", "--samples", "20000", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 3 and all(l.startswith("PASS") for l in lines)
    assert capsys.readouterr().out.splitlines() == lines


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "beamalign", "sweep", "--strategies", ""], capture_output=True, text=True
    )
    assert proc.returncode == 2 and "usage" in proc.stderr
