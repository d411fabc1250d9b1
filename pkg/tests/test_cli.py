import json
import math

import pytest

from spinxfer import cli
from spinxfer.cli import LENGTH_ADJUST, assemble_tables, main
from spinxfer.dynamics import two_spin_time

SIM_ARGS = [
    "simulate",
    "--model", "xy",
    "--scheme", "webm",
    "--range", "all",
    "--n", "10",
    "--delta", "8",
    "--tau-max", "50",
    "--threshold", "0.9",
]


def read_rows(path):
    lines = path.read_text().splitlines()
    return lines[0], [line.split(",") for line in lines[1:]]


def test_simulate_writes_trace_peaks_figure(tmp_path, capsys):
    out = tmp_path / "run"
    assert main(SIM_ARGS + ["--out", str(out)]) == 0
    header, rows = read_rows(out / "trace.csv")
    assert header == "tau,p"
    assert rows[0][0] == "0"
    assert float(rows[0][1]) == pytest.approx(0.0, abs=1e-20)
    assert all(0.0 <= float(p) <= 1.0 + 1e-12 for _, p in rows)
    header, rows = read_rows(out / "peaks.csv")
    assert header == "T,P"
    assert len(rows) == 1
    assert float(rows[0][0]) == pytest.approx(21.5183828, abs=1e-4)
    assert float(rows[0][1]) == pytest.approx(0.975648798, abs=1e-7)
    assert (out / "trace.png").stat().st_size > 0
    text = capsys.readouterr().out
    assert "first peak above 0.9: T = 21.5183828, P = 0.975648798" in text


def test_simulate_reruns_byte_identical(tmp_path):
    a = tmp_path / "a"
    b = tmp_path / "b"
    assert main(SIM_ARGS + ["--out", str(a)]) == 0
    assert main(SIM_ARGS + ["--out", str(b)]) == 0
    assert (a / "trace.csv").read_bytes() == (b / "trace.csv").read_bytes()
    assert (a / "peaks.csv").read_bytes() == (b / "peaks.csv").read_bytes()


def test_simulate_flags_override_config(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "model": "xy",
        "scheme": "webm",
        "range": "all",
        "n": 10,
        "delta": 8.0,
        "tau_max": 5.0,
        "threshold": 0.9,
        "out": str(tmp_path / "ignored"),
    }))
    out = tmp_path / "real"
    assert main(["simulate", "--config", str(cfg), "--tau-max", "50", "--out", str(out)]) == 0
    assert not (tmp_path / "ignored").exists()
    _, rows = read_rows(out / "peaks.csv")
    # the 5.0 window from the config holds no peak; the flag window does
    assert rows and float(rows[0][0]) == pytest.approx(21.5183828, abs=1e-4)


def test_unknown_config_key_is_an_error(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"modle": "xy", "zeta": 1}))
    assert main(["simulate", "--config", str(cfg)]) == 2
    err = capsys.readouterr().err
    assert "unknown config keys: modle, zeta" in err


def test_config_missing_scheme_parameter(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"scheme": "webm", "tau_max": 5.0, "out": str(tmp_path / "o")}))
    assert main(["simulate", "--config", str(cfg)]) == 2
    assert "needs delta" in capsys.readouterr().err


def test_secular_command(tmp_path, capsys):
    out = tmp_path / "sec"
    assert main(["secular", "--n", "10", "--delta", "8", "--out", str(out)]) == 0
    header, rows = read_rows(out / "secular.csv")
    assert header == "lambda,re_p,im_p,parity,normalization"
    assert len(rows) == 10
    assert any(row[0] == "0.117891703" for row in rows)
    parities = [row[3] for row in rows]
    assert parities.count("sym") == 5 and parities.count("anti") == 5
    assert "10 roots (5 symmetric)" in capsys.readouterr().out


def test_secular_command_rejects_small_chain(tmp_path, capsys):
    assert main(["secular", "--n", "2", "--delta", "8", "--out", str(tmp_path)]) == 2
    assert "error:" in capsys.readouterr().err


def test_perfect4_command(tmp_path, capsys):
    out = tmp_path / "p4"
    assert main(["perfect4", "--max-n", "3", "--out", str(out)]) == 0
    header, rows = read_rows(out / "perfect4.csv")
    assert header == "n1,n2,n3,branch,omega,delta,tau0,p_tau0"
    ground = [r for r in rows if r[:4] == ["0", "1", "", "zero-field"]]
    assert len(ground) == 1
    assert float(ground[0][5]) == pytest.approx(2.0 / math.sqrt(3.0))
    assert float(ground[0][6]) == pytest.approx(math.pi * math.sqrt(3.0))
    assert float(ground[0][7]) == pytest.approx(1.0, abs=1e-9)
    text = capsys.readouterr().out
    assert "solutions up to max_n = 3" in text


def test_optimize_command_blank_fields_when_nothing_qualifies(tmp_path):
    out = tmp_path / "opt"
    args = ["optimize", "elfm", "xy", "all", "--lo", "2.19", "--hi", "2.21",
            "--step", "0.01", "--tau-max", "5", "--out", str(out)]
    assert main(args) == 0
    header, rows = read_rows(out / "optimize.csv")
    assert header == "param,T,P"
    assert [r[1:] for r in rows] == [["", ""]] * 3
    assert (out / "optimize.png").stat().st_size > 0


def test_optimize_command_reports_best(tmp_path, capsys):
    out = tmp_path / "opt"
    args = ["optimize", "elfm", "xy", "all", "--lo", "2.203", "--hi", "2.203",
            "--step", "1", "--tau-max", "1000", "--out", str(out)]
    assert main(args) == 0
    _, rows = read_rows(out / "optimize.csv")
    assert len(rows) == 1 and rows[0][1] != ""
    assert "best omega = 2.203" in capsys.readouterr().out


def synthetic_results():
    times = {
        "xy-webm-all": 2.0, "xxz-webm-all": 3.0, "xy-webm-nn": 4.0, "xxz-webm-nn": 5.0,
        "xy-elfm-all": 6.0, "xxz-elfm-all": 7.0, "xy-elfm-nn": 8.0, "xxz-elfm-nn": 9.0,
    }
    results = {}
    for name, t in times.items():
        model, scheme, rng = name.split("-")
        results[name] = {
            "model": model, "scheme": scheme, "range": rng, "parameter": 1.0,
            "window": 10.0, "time": t, "probability": 0.99,
            "length": 1.0 if scheme == "webm" else 2.0,
        }
    return results


def test_assemble_tables_arithmetic():
    tables = assemble_tables(synthetic_results())
    tau2_webm = two_spin_time(1.0)
    tau2_elfm = two_spin_time(2.0)
    assert tables["table1"]["values"][0] == pytest.approx(
        [2.0 / tau2_webm, 3.0 / tau2_webm, 4.0 / tau2_webm, 5.0 / tau2_webm]
    )
    assert tables["table1"]["values"][1] == pytest.approx(
        [6.0 / tau2_elfm, 7.0 / tau2_elfm, 8.0 / tau2_elfm, 9.0 / tau2_elfm]
    )
    expected = {
        "table2": [[4.0 / 2.0, 8.0 / 6.0], [5.0 / 3.0, 9.0 / 7.0]],
        "table3": [[2.0 / 3.0, 4.0 / 5.0], [6.0 / 7.0, 8.0 / 9.0]],
        "table4": [
            [2.0 / 6.0 * LENGTH_ADJUST, 4.0 / 8.0 * LENGTH_ADJUST],
            [3.0 / 7.0 * LENGTH_ADJUST, 5.0 / 9.0 * LENGTH_ADJUST],
        ],
    }
    for name, want in expected.items():
        for row, want_row in zip(tables[name]["values"], want):
            assert row == pytest.approx(want_row)


def test_tables_command_outputs(tmp_path, monkeypatch, capsys):
    monkeypatch.setattr(cli, "run_reference_experiments", synthetic_results)
    out = tmp_path / "tables"
    assert main(["tables", "--out", str(out)]) == 0
    for name in ("table1", "table2", "table3", "table4"):
        header, rows = read_rows(out / f"{name}.csv")
        assert len(rows) == 2
        assert header.split(",")[0] in ("scheme", "model")
    payload = json.loads((out / "tables.json").read_text())
    assert set(payload) == {"experiments", "tables"}
    assert payload["experiments"]["xy-webm-all"]["time"] == 2.0
    assert "length" not in payload["experiments"]["xy-webm-all"]
    assert (out / "tables.png").stat().st_size > 0
    assert "xy-webm-all: T = 2, P = 0.99" in capsys.readouterr().out
