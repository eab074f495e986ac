import csv
import json
import subprocess
import sys

import pytest

from maxwell_bec.cli import main

REG36_SPEC = {"lambda": {"3": 1.0}, "rho": {"6": 1.0}}
STCO_SPEC = {"lambda": {"2": 0.4, "7": 0.6}, "rho": {"7": 1.0}}
DJ_SPEC = {"lambda": {"2": 0.3, "3": 0.3, "14": 0.4}, "rho": {"7": 1.0}}
ROW1_SPEC = {"lambda": {"2": 1.0}, "rho": {"6": 0.4, "7": 0.6}}
ROW3_SPEC = {"lambda": {"2": 0.2857, "3": 0.306147, "10": 0.408153}, "rho": {"7": 1.0}}


@pytest.fixture
def spec(tmp_path):
    def write(d, name="ens.json"):
        p = tmp_path / name
        p.write_text(json.dumps(d))
        return str(p)

    return write


def read_csv(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


def test_thresholds_regular(spec, tmp_path):
    out = tmp_path / "t.csv"
    assert main(["thresholds", "--ensemble", spec(REG36_SPEC), "--out", str(out)]) == 0
    (row,) = read_csv(out)
    assert float(row["eps_bp"]) == pytest.approx(0.4294, abs=1e-4)
    assert row["eps_stab"] == "inf"
    assert float(row["eps_sh"]) == 0.5
    assert float(row["eps_map_upper"]) == pytest.approx(0.48815, abs=1e-5)
    assert float(row["eps_map"]) == pytest.approx(0.48815, abs=1e-5)
    assert row["map_tight"] == "true"


@pytest.mark.parametrize("d,bp,upper", [(ROW3_SPEC, 0.4804, 0.4935), (ROW1_SPEC, 0.1786, 0.1786)])
def test_thresholds_table_rows(spec, tmp_path, d, bp, upper):
    out = tmp_path / "t.csv"
    assert main(["thresholds", "--ensemble", spec(d), "--out", str(out)]) == 0
    (row,) = read_csv(out)
    assert float(row["eps_bp"]) == pytest.approx(bp, abs=1e-4)
    assert float(row["eps_map_upper"]) == pytest.approx(upper, abs=1e-4)


def test_thresholds_stdout(spec, capsys):
    assert main(["thresholds", "--ensemble", spec(REG36_SPEC)]) == 0
    text = capsys.readouterr().out
    assert text.startswith("design_rate,eps_bp")


@pytest.mark.parametrize("kind", ["bp", "ebp", "map"])
def test_curve_double_jump(spec, tmp_path, kind):
    out = tmp_path / f"{kind}.csv"
    assert main(["curve", "--kind", kind, "--ensemble", spec(DJ_SPEC), "--out", str(out), "--grid", "400"]) == 0
    rows = read_csv(out)
    assert list(rows[0]) == ["epsilon", "h", "x"]
    meta = json.loads((tmp_path / f"{kind}.csv.json").read_text())
    assert meta["design_rate"] == pytest.approx(0.48718, abs=1e-5)
    eps = [j["epsilon"] for j in meta["jumps"]]
    if kind == "map":
        assert eps == pytest.approx([0.4913, 0.5186], abs=1e-4)
        assert meta["certified"] == [True, False]
        assert meta["area_closed_form"] == pytest.approx(meta["design_rate"], abs=1e-6)
    if kind == "bp":
        assert eps == pytest.approx([0.48437, 0.51553], abs=1e-5)
    if kind == "ebp":
        assert meta["area_numeric"] == pytest.approx(meta["design_rate"], abs=1e-8)


def test_curve_stco_map(spec, tmp_path):
    out = tmp_path / "m.csv"
    assert main(["curve", "--kind", "map", "--ensemble", spec(STCO_SPEC), "--out", str(out)]) == 0
    meta = json.loads((tmp_path / "m.csv.json").read_text())
    assert meta["jumps"][0]["epsilon"] == pytest.approx(5 / 12, abs=1e-9)


def test_partition(spec, tmp_path):
    out = tmp_path / "p.csv"
    assert main(["partition", "--ensemble", spec(DJ_SPEC), "--out", str(out)]) == 0
    rows = read_csv(out)
    assert len(rows) == 2
    assert float(rows[1]["x_low"]) == pytest.approx(0.37016, abs=1e-4)


def test_trajectory(spec, tmp_path):
    out = tmp_path / "tr.csv"
    assert main(["trajectory", "--ensemble", spec(REG36_SPEC), "--epsilon", "0.46", "--out", str(out)]) == 0
    rows = read_csv(out)
    assert float(rows[0]["determined"]) == pytest.approx(0.6561, abs=1e-4)
    assert max(float(r["entropy"]) for r in rows) == pytest.approx(0.0201509, abs=1e-6)


def test_psi_scan(spec, tmp_path):
    out = tmp_path / "psi.csv"
    assert main(["psi", "--ensemble", spec(REG36_SPEC), "--epsilon", "0.52", "--grid", "200",
                 "--out", str(out)]) == 0
    rows = read_csv(out)
    last = rows[-1]
    assert float(last["u"]) == 1.0 and abs(float(last["psi"])) < 1e-12
    meta = json.loads((tmp_path / "psi.csv.json").read_text())
    assert meta["verdict"] == "certified"


def test_psi_empty_residual(spec):
    assert main(["psi", "--ensemble", spec(REG36_SPEC), "--epsilon", "0.3"]) == 2


def test_entropy_sweep(spec, tmp_path):
    out = tmp_path / "s.csv"
    assert main(["entropy-sweep", "--ensemble", spec(REG36_SPEC), "--grid", "11", "--out", str(out)]) == 0
    rows = read_csv(out)
    assert float(rows[-1]["epsilon"]) == 1.0 and float(rows[-1]["entropy"]) == pytest.approx(0.5)


def test_simulate_deterministic(spec, tmp_path, monkeypatch):
    monkeypatch.setenv("MAXWELL_THREADS", "2")
    paths = []
    for k in range(2):
        out = tmp_path / f"sim{k}.csv"
        logs = tmp_path / f"logs{k}"
        assert main(["simulate", "--ensemble", spec(REG36_SPEC), "--epsilon", "0.46", "--n", "300",
                     "--trials", "4", "--seed", "123", "--grid", "50", "--out", str(out),
                     "--log-dir", str(logs)]) == 0
        paths.append((out, logs))
    assert paths[0][0].read_bytes() == paths[1][0].read_bytes()
    logs = sorted(paths[0][1].iterdir())
    assert len(logs) == 4
    assert logs[0].read_text().startswith("time,kind,bit,entropy,determined")
    assert read_csv(paths[0][0])[0].keys() == {"bin", "determined_frac", "mean", "q05", "q95"}


def test_simulate_rounds(spec, tmp_path):
    out = tmp_path / "r.csv"
    assert main(["simulate", "--ensemble", spec(REG36_SPEC), "--epsilon", "0.5", "--n", "200", "--trials", "3",
                 "--strategy", "rounds", "--delta-gamma", "0.05", "--out", str(out)]) == 0


def test_exact_exit(tmp_path):
    out = tmp_path / "x.csv"
    assert main(["exact-exit", "--code", "hamming3", "--out", str(out)]) == 0
    meta = json.loads((tmp_path / "x.csv.json").read_text())
    assert meta["integral"] == "4/7" and meta["area_identity"] is True
    coeffs = [r["coefficient"] for r in read_csv(out)]
    assert coeffs == ["0", "0", "3", "4", "-15", "12", "-3"]


def test_exact_exit_graph_file(tmp_path):
    g = tmp_path / "g.txt"
    g.write_text("# n=3 m=1\nv 0: 0\nv 1: 0\nv 2: 0\n")
    out = tmp_path / "x.csv"
    assert main(["exact-exit", "--graph", str(g), "--out", str(out)]) == 0
    assert json.loads((tmp_path / "x.csv.json").read_text())["integral"] == "2/3"


def test_exact_exit_size_bound():
    assert main(["exact-exit", "--code", "hamming5"]) == 4


def test_gldpc(tmp_path):
    out = tmp_path / "g.csv"
    assert main(["gldpc", "--code", "hamming3", "--out", str(out)]) == 0
    (row,) = read_csv(out)
    assert float(row["eps_bp"]) == pytest.approx(0.75645, abs=1e-4)
    assert float(row["eps_map_upper"]) == pytest.approx(0.85616, abs=1e-4)


@pytest.mark.parametrize(
    "argv",
    [
        ["thresholds"],
        ["trajectory", "--epsilon", "0.5"],
        ["thresholds", "--ensemble", "/nonexistent.json"],
        ["thresholds", "--ensemble", "ENS", "--tol", "-1"],
        ["trajectory", "--ensemble", "ENS", "--epsilon", "1.5"],
        ["simulate", "--ensemble", "ENS", "--epsilon", "0.5", "--n", "100"],
        ["simulate", "--ensemble", "ENS", "--epsilon", "0.5", "--n", "100", "--trials", "3", "--seed", "-4"],
        ["exact-exit", "--code", "golay"],
    ],
)
def test_validation_errors(spec, argv):
    path = spec(REG36_SPEC)
    assert main([path if a == "ENS" else a for a in argv]) == 2


@pytest.mark.parametrize(
    "bad",
    [
        {"lambda": {"3": 1.0}},
        {"lambda": {"1": 0.5, "3": 0.5}, "rho": {"6": 1.0}},
        {"lambda": {"3": 0.5}, "rho": {"6": 1.0}},
        {"lambda": {"3": -1.0, "4": 2.0}, "rho": {"6": 1.0}},
    ],
)
def test_bad_ensemble(spec, capsys, bad):
    assert main(["thresholds", "--ensemble", spec(bad)]) == 2
    assert "error" in capsys.readouterr().err


def test_malformed_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert main(["thresholds", "--ensemble", str(p)]) == 2


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    text = capsys.readouterr().out
    assert "de_tol=1e-12" in text and "csv_digits=12" in text


def test_console_script_module(spec):
    res = subprocess.run([sys.executable, "-m", "maxwell_bec.cli", "thresholds", "--ensemble", spec(REG36_SPEC)],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("design_rate")
