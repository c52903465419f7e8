import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from pdda.arfima import TimeSeries
from pdda.cli import main
from pdda.estimators import EstimatorReport
from pdda.montecarlo import rows_from_csv, rows_from_json, rows_to_csv, rows_to_json, split_seed
from pdda.recurrence import RecurrenceCurve

REPRO = Path(__file__).resolve().parent.parent / "repro"


def run(*argv):
    return main([str(a) for a in argv])


def test_generate_univariate(tmp_path):
    out = tmp_path / "x.csv"
    assert run("generate", "--hurst", "0.5", "--n", 1024, "--seed", 1, "--out", out) == 0
    ts = TimeSeries.from_csv(out.read_text())
    assert ts.values.shape == (1024, 1)
    assert abs(ts.values.mean()) < 3 / np.sqrt(1024)
    side = json.loads((tmp_path / "x.csv.config.json").read_text())
    assert side["spec"]["truncation"] == 2048 and side["spec"]["burn_in"] == 0


def test_generate_bivariate_shape_and_determinism(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for out in (a, b):
        assert run("generate", "--hurst", "0.7,0.3", "--rho", 0.3, "--n", 3000, "--seed", 7, "--out", out) == 0
    assert a.read_bytes() == b.read_bytes()
    assert TimeSeries.from_csv(a.read_text()).values.shape == (3000, 2)


def test_generate_json_round_trip(tmp_path):
    out = tmp_path / "x.json"
    assert run("generate", "--hurst", "0.6", "--n", 50, "--format", "json", "--out", out) == 0
    text = out.read_text()
    assert json.dumps(json.loads(text), indent=2) + "\n" == text


def test_generate_csv_round_trip(tmp_path):
    out = tmp_path / "x.csv"
    run("generate", "--hurst", "0.3,0.9", "--n", 200, "--seed", 3, "--out", out)
    text = out.read_text()
    assert TimeSeries.from_csv(text).to_csv() == text


@pytest.mark.parametrize(
    "argv, code",
    [
        (["generate", "--hurst", "1.2", "--n", "10"], 2),
        (["generate", "--hurst", "0.5"], 2),
        (["generate", "--hurst", "0.5,0.5,0.5", "--rho", "-0.9", "--n", "10"], 2),
        (["estimate", "--hurst", "0.5", "--n", "100", "--rs-window", "8"], 2),
        (["recurrence", "--hurst", "0.3,0.3", "--n", "1000", "--epsilon", "0"], 2),
        (["sweep", "--h-grid", "0.5", "--n", "100", "--replicates", "0"], 2),
    ],
)
def test_invalid_flags_exit_codes(argv, code, capsys):
    # argparse rejects malformed values itself and exits with status 2.
    try:
        status = main(argv)
    except SystemExit as exc:
        status = exc.code
    assert status == code
    assert capsys.readouterr().err


def test_estimate_from_generated_series(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert run("estimate", "--hurst", 0.75, "--n", 20000, "--seed", 1, "--out", out) == 0
    rep = EstimatorReport.from_dict(json.loads(out.read_text()))
    assert abs(rep.h_rs - 0.75) < 0.1 and abs(rep.h_msd - 0.75) < 0.1
    assert rep.local_curve is None


def test_estimate_local_slope_and_round_trip(tmp_path):
    out = tmp_path / "r.json"
    assert run("estimate", "--hurst", "0.25,0.5", "--rho", 0.3, "--n", 3000, "--local-slope", "--out", out) == 0
    text = out.read_text()
    d = json.loads(text)
    assert len(d["local"]) >= 5 and set(d["local"][0]) == {"tau", "h"}
    assert EstimatorReport.from_dict(d).to_json() == text


def test_estimate_input_file_and_fit_windows(tmp_path):
    series = tmp_path / "x.csv"
    run("generate", "--hurst", "0.6", "--n", 4096, "--seed", 2, "--out", series)
    out = tmp_path / "r.json"
    assert run("estimate", "--input", series, "--rs-window", "16:512", "--msd-window", "4:64", "--out", out) == 0
    d = json.loads(out.read_text())
    assert d["fits"]["rs"]["range"] == [16.0, 512.0]
    assert d["fits"]["msd"]["range"] == [4.0, 64.0]


def test_estimate_nan_input_is_data_error(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("t,x1\n0,0.1\n1,nan\n2,0.3\n3,0.2\n")
    assert run("estimate", "--input", bad) == 3
    assert "DataError" in capsys.readouterr().err


def test_estimate_fit_error_exit_code(tmp_path):
    series = tmp_path / "x.csv"
    run("generate", "--hurst", "0.6", "--n", 200, "--out", series)
    assert run("estimate", "--input", series, "--msd-window", "150:151") == 4


def test_sweep_single_replicate_matches_estimate(tmp_path):
    sweep_out, est_out = tmp_path / "s.csv", tmp_path / "e.json"
    assert run("sweep", "--h-grid", 0.7, "--n", 2000, "--replicates", 1, "--seed", 5, "--out", sweep_out) == 0
    seed = split_seed(5, 0, 0)
    assert run("estimate", "--hurst", 0.7, "--n", 2000, "--seed", seed, "--out", est_out) == 0
    rows = {r.estimator: r for r in rows_from_csv(sweep_out.read_text())}
    rep = json.loads(est_out.read_text())
    assert rows["rs"].mean_h == rep["h_rs"]
    assert rows["msd"].mean_h == rep["h_msd"]
    assert rows["rs"].sd == 0.0


def test_sweep_formats_round_trip_and_threads(tmp_path):
    a, b, j = tmp_path / "a.csv", tmp_path / "b.csv", tmp_path / "a.json"
    common = ["sweep", "--h-grid", "0.4,0.6", "--h-fixed", "0.3", "--rho", 0.3, "--n", 1000, "--replicates", 3]
    assert run(*common, "--out", a) == 0
    assert run(*common, "--threads", 0, "--out", b) == 0
    assert run(*common, "--format", "json", "--out", j) == 0
    assert a.read_bytes() == b.read_bytes()
    assert rows_to_csv(rows_from_csv(a.read_text())) == a.read_text()
    assert rows_to_json(rows_from_json(j.read_text())) == j.read_text()
    assert rows_from_csv(a.read_text())[0].hurst == (0.4, 0.3)


def test_sweep_per_replicate_output(tmp_path):
    out, per = tmp_path / "s.csv", tmp_path / "reps.csv"
    assert run("sweep", "--h-grid", 0.5, "--n", 500, "--replicates", 4, "--per-replicate", per, "--out", out) == 0
    assert len(per.read_text().splitlines()) == 5


def test_sweep_failures_exit_nonzero(tmp_path):
    assert run("sweep", "--h-grid", 0.5, "--n", 100, "--replicates", 2, "--rs-window", "200:300") == 4


def test_recurrence_outputs_and_round_trip(tmp_path):
    out = tmp_path / "p.csv"
    assert run("recurrence", "--hurst", "0.3,0.3", "--rho", 0.3, "--n", 5000, "--epsilon", 0.5, "--out", out) == 0
    text = out.read_text()
    assert RecurrenceCurve.from_csv(text, 0.5).to_csv() == text
    report = tmp_path / "p.csv.report.json"
    rtext = report.read_text()
    d = json.loads(rtext)
    assert d["predicted_decay"] == pytest.approx(-0.6)
    assert d["d_range_theoretical"] == 2.0
    assert json.dumps(d, indent=2) + "\n" == rtext


def test_recurrence_input_requires_h_max(tmp_path):
    series = tmp_path / "x.csv"
    run("generate", "--hurst", "0.3", "--n", 3000, "--out", series)
    assert run("recurrence", "--input", series) == 2
    assert run("recurrence", "--input", series, "--h-max", 0.3, "--epsilon", 0.5, "--format", "json",
               "--out", tmp_path / "r.json") == 0


def test_config_file_supplies_defaults(tmp_path):
    cfg = tmp_path / "g.cfg"
    cfg.write_text("[generate]\nhurst = 0.4,0.6\nn = 300\nseed = 9\n")
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run("generate", "--config", cfg, "--out", a) == 0
    assert run("generate", "--hurst", "0.4,0.6", "--n", 300, "--seed", 9, "--out", b) == 0
    assert a.read_bytes() == b.read_bytes()
    # Explicit flags override the file.
    assert run("generate", "--config", cfg, "--n", 100, "--out", a) == 0
    assert len(a.read_text().splitlines()) == 101


def test_config_file_unknown_key(tmp_path):
    cfg = tmp_path / "g.cfg"
    cfg.write_text("[generate]\nbogus = 1\n")
    assert run("generate", "--config", cfg) == 2


@pytest.mark.parametrize("name", sorted(p.name for p in REPRO.glob("*.cfg")))
def test_repro_recipes_parse(name):
    from pdda.cli import _apply_config, build_parser

    text = (REPRO / name).read_text()
    command = [line.strip("[]") for line in text.splitlines() if line.startswith("[")][0]
    args = _apply_config(build_parser(), [command, "--config", str(REPRO / name)])
    assert args.command == command
    assert args.n is not None


def test_fig4a_recipe_runs(tmp_path):
    out = tmp_path / "f4a.csv"
    assert run("sweep", "--config", REPRO / "fig4a.cfg", "--out", out) == 0
    rows = rows_from_csv(out.read_text())
    assert len(rows) == 34
    rs = {r.hurst[0]: r.mean_h for r in rows if r.estimator == "rs"}
    msd = {r.hurst[0]: r.mean_h for r in rows if r.estimator == "msd"}
    for h1 in (0.6, 0.75, 0.9):
        assert abs(rs[h1] - h1) <= 0.08
        assert msd[h1] <= rs[h1] + 0.02


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "pdda", "generate", "--hurst", "0.5", "--n", "20"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "t,x1" and len(proc.stdout.splitlines()) == 21
    assert json.loads(proc.stderr)["command"] == "generate"
    bad = subprocess.run([sys.executable, "-m", "pdda", "generate", "--hurst", "0.5", "--n", "1"], capture_output=True)
    assert bad.returncode == 2
