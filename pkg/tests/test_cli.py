import csv
import json
import math

import pytest

from magicpower.cli import main
from magicpower.experiments import EXPERIMENTS


def _config(tmp_path, doc, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def _csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def test_list_names_every_experiment(capsys):
    assert main(["list"]) == 0
    out = capsys.readouterr().out
    for name in ("edge-mp", "theorem1", "relaxation", "osnp", "floquet-r",
                 "ep-mp-scatter", "edge-appendix", "embedded-mp"):
        assert name in out and name in EXPERIMENTS


def test_edge_mp_rows(tmp_path):
    out = tmp_path / "edge.csv"
    cfg = _config(tmp_path, {"experiment": "edge-mp", "parameters": {"edges": ["Id–CNOT"], "n_points": 50}})
    assert main(["run", "--config", cfg, "--out", str(out), "--seed", "4"]) == 0
    rows = _csv(out)
    assert len(rows) == 50
    for r in rows:
        assert abs(float(r["mp"]) - math.sin(2 * float(r["parameter"])) ** 2 / 5) < 1e-10
        assert r["seed"] == "4"
    assert main(["replay", str(out)]) == 0


def test_theorem1_exhaustive_row(tmp_path, capsys):
    cfg = _config(tmp_path, {"experiment": "theorem1", "seed": 1})
    assert main(["run", "--config", cfg, "--format", "json"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert len(rows) == 1
    assert abs(rows[0]["estimate"] - rows[0]["predicted"]) < 1e-12


def test_floquet_rows(tmp_path):
    out = tmp_path / "r.json"
    cfg = _config(tmp_path, {"experiment": "floquet-r", "seed": 2, "parameters": {
        "n_qubits": 6, "edge": "DCNOT–SWAP", "n_points": 20, "n_realizations": 2}})
    assert main(["run", "--config", cfg, "--out", str(out)]) == 0
    rows = json.loads(out.read_text())
    assert len(rows) == 20
    assert all({"r_mean", "r_stderr"} <= set(r) for r in rows)
    assert len({tuple(r) for r in rows}) == 1  # identical keys


def test_relaxation_replay_and_tamper(tmp_path, capsys):
    out = tmp_path / "relax.csv"
    cfg = _config(tmp_path, {"experiment": "relaxation", "seed": 11,
                             "parameters": {"steps": 4, "n_realizations": 60}})
    assert main(["run", "--config", cfg, "--out", str(out)]) == 0
    assert main(["replay", str(out)]) == 0
    assert "OK" in capsys.readouterr().out
    rows = _csv(out)
    rows[2]["estimate"] = repr(float(rows[2]["estimate"]) + 1e-9)
    with open(out, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]))
        w.writeheader()
        w.writerows(rows)
    assert main(["replay", str(out)]) == 1
    assert "row 2" in capsys.readouterr().out


def test_csv_quoting_round_trip(tmp_path):
    out = tmp_path / "q.csv"
    cfg = _config(tmp_path, {"experiment": "edge-appendix", "seed": 0, "parameters": {"n_points": 3}})
    assert main(["run", "--config", cfg, "--out", str(out)]) == 0
    rows = _csv(out)
    assert len(rows) == 9
    # the config column holds quoted JSON with commas
    assert json.loads(rows[0]["config"])["experiment"] == "edge-appendix"
    assert out.read_bytes().count(b"\r\n") == 10


def test_flag_overrides_config(tmp_path):
    out_cfg = tmp_path / "from_config.csv"
    out_flag = tmp_path / "from_flag.json"
    cfg = _config(tmp_path, {"experiment": "edge-mp", "seed": 3, "output_path": str(out_cfg),
                             "parameters": {"n_points": 2}})
    assert main(["run", "--config", cfg, "--out", str(out_flag), "--seed", "8"]) == 0
    assert not out_cfg.exists()
    assert json.loads(out_flag.read_text())[0]["seed"] == 8


def test_exit_codes(tmp_path, capsys):
    assert main(["run", "--config", _config(tmp_path, {"experiment": "nope"})]) == 2
    assert "valid names" in capsys.readouterr().err
    assert main(["run", "--config", _config(tmp_path, {"experiment": "edge-mp",
                                                       "parameters": {"bogus": 1}})]) == 2
    assert main(["run", "--config", str(tmp_path / "missing.json")]) == 2
    big = _config(tmp_path, {"experiment": "floquet-r", "parameters": {"n_qubits": 12}})
    assert main(["run", "--config", big]) == 3
    assert "MiB" in capsys.readouterr().err
    assert main(["bogus-command"]) == 2


@pytest.mark.parametrize("name", ["ep-mp-scatter", "embedded-mp", "osnp"])
def test_small_runs(name, tmp_path, capsys):
    params = {"ep-mp-scatter": {"n_gates": 5},
              "embedded-mp": {"n_points": 2, "n_samples": 50},
              "osnp": {"n_sites": 3, "n_points": 2, "n_cliffords": 20, "n_states": 8}}[name]
    cfg = _config(tmp_path, {"experiment": name, "seed": 5, "parameters": params})
    assert main(["run", "--config", cfg, "--format", "json"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert rows and all("estimate" in r and "wall_time_ms" in r for r in rows)
