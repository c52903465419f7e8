import numpy as np
import pytest

from pdda.arfima import arfima
from pdda.errors import ParameterError
from pdda.estimators import estimate
from pdda.montecarlo import (
    SweepConfig,
    rows_from_csv,
    rows_from_json,
    rows_to_csv,
    rows_to_json,
    run_sweep,
    split_seed,
)


def test_split_seed_examples():
    assert split_seed(7, 3, 11) == split_seed(7, 3, 11)
    assert split_seed(7, 0, 0) != split_seed(7, 0, 1)
    assert split_seed(7, 0, 0) != split_seed(8, 0, 0)
    assert 0 <= split_seed(2**64 - 1, 2**32 - 1, 2**32 - 1) < 2**64


def test_split_seed_no_collisions_on_grid():
    seeds = {split_seed(12345, p, r) for p in range(100) for r in range(100)}
    assert len(seeds) == 10**4


def test_split_seed_rejects_out_of_range_indices():
    with pytest.raises(ParameterError):
        split_seed(0, 2**32, 0)
    with pytest.raises(ParameterError):
        split_seed(0, 0, -1)


def test_config_validation():
    with pytest.raises(ParameterError):
        SweepConfig((0.5,), 100, 0)
    with pytest.raises(ParameterError):
        SweepConfig((), 100, 1)
    with pytest.raises(ParameterError):
        SweepConfig((0.5, 1.2), 100, 1)
    with pytest.raises(ParameterError):
        SweepConfig((0.5,), 100, 1, m=3, rho=-0.6)


def test_config_hurst_resolution():
    cfg = SweepConfig((0.4, (0.7, 0.3)), 100, 1, m=3)
    assert cfg.hurst_at(0) == (0.4, 0.4, 0.4)
    assert cfg.hurst_at(1) == (0.7, 0.3)
    assert cfg.spec_for(1, 4).seed == split_seed(0, 1, 4)


def test_single_replicate_degenerates():
    cfg = SweepConfig((0.3, 0.8), 1500, 1, master_seed=9)
    res = run_sweep(cfg)
    for row in res.rows:
        assert row.sd == 0.0
        assert row.rmse == pytest.approx(abs(row.bias), rel=1e-15)
    # Same seed through the single-series path.
    rep = estimate(arfima(0.8, 1500, seed=split_seed(9, 1, 0)))
    assert res.row(1, "rs").mean_h == rep.h_rs
    assert res.row(1, "msd").mean_h == rep.h_msd


def test_reference_is_max_exponent():
    res = run_sweep(SweepConfig(((0.2, 0.6),), 1000, 2))
    assert res.rows[0].h_ref == 0.6
    assert res.rows[0].bias == pytest.approx(res.rows[0].mean_h - 0.6, abs=1e-15)


def test_rmse_identity():
    cfg = SweepConfig((0.25, 0.5, 0.75), 1024, 12, master_seed=3)
    res = run_sweep(cfg)
    R = cfg.replicates
    for row in res.rows:
        assert row.rmse**2 == pytest.approx(row.bias**2 + row.sd**2 * (R - 1) / R, abs=1e-9)
        est = res.estimates[row.estimator][row.point]
        assert row.mean_h == pytest.approx(est.mean(), abs=1e-15)
        assert row.sd == pytest.approx(est.std(ddof=1), abs=1e-15)


def test_deterministic_and_thread_independent():
    cfg = SweepConfig((0.3, (0.7, 0.3)), 1200, 6, rho=0.3, m=2, master_seed=41)
    a = run_sweep(cfg)
    b = run_sweep(cfg)
    c = run_sweep(cfg, threads=4)
    assert a.to_csv() == b.to_csv() == c.to_csv()
    assert a.replicates_csv() == c.replicates_csv()
    for name in ("rs", "msd"):
        assert a.estimates[name].tobytes() == c.estimates[name].tobytes()


def test_progress_callback_counts_every_replicate():
    seen = []
    run_sweep(SweepConfig((0.5, 0.6), 512, 3), progress=seen.append)
    assert seen == list(range(1, 7))


def test_failed_replicates_recorded_and_excluded():
    # A window range beyond the series length makes every R/S fit fail.
    cfg = SweepConfig((0.5,), 256, 3, rs_range=(300, 400), window_sizes=(2, 4))
    res = run_sweep(cfg)
    assert res.failures == 3
    assert all("Error" in msg for msg in res.errors.values())
    row = res.row(0, "rs")
    assert row.replicates == 0 and row.failures == 3 and np.isnan(row.mean_h)


def test_table_round_trips():
    res = run_sweep(SweepConfig((0.35, (0.6, 0.3)), 800, 3, m=2))
    text = res.to_csv()
    assert text.splitlines()[0] == "h_ref,estimator,mean_h,bias,sd,rmse,replicates,failures,hurst"
    assert rows_to_csv(rows_from_csv(text)) == text
    assert rows_from_csv(text) == res.rows
    js = res.to_json()
    assert rows_to_json(rows_from_json(js)) == js
    lines = res.replicates_csv().splitlines()
    assert lines[0] == "point,hurst,replicate,seed,h_rs,h_msd,error" and len(lines) == 7


def test_large_sample_msd_example():
    res = run_sweep(SweepConfig((0.35,), 32768, 50, master_seed=1))
    assert abs(res.row(0, "msd").bias - 0.0043) <= 0.01
