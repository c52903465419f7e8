"""Monte Carlo sweeps: bias, SD and RMSE of both estimators over a parameter grid."""

from __future__ import annotations

import csv
import io
import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .arfima import ArfimaSpec, generate
from .errors import PDDAError, ParameterError
from .estimators import msd_pdda, rs_pdda
from .path import cumulative_path

__all__ = [
    "SweepConfig",
    "SweepRow",
    "SweepResult",
    "split_seed",
    "run_sweep",
    "rows_to_csv",
    "rows_from_csv",
    "rows_to_json",
    "rows_from_json",
    "ESTIMATORS",
]

log = logging.getLogger(__name__)

ESTIMATORS = ("rs", "msd")
_MASK = (1 << 64) - 1


def _mix64(z: int) -> int:
    """splitmix64 finaliser: a bijection on 64-bit integers."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def split_seed(master: int, point: int, replicate: int) -> int:
    """Per-replicate seed ``mix(((point << 32) | replicate) ^ mix(master))``.

    For a fixed master seed the map is injective over ``point, replicate < 2**32``,
    so a sweep grid never reuses a stream.
    """
    if not (0 <= point < 2**32 and 0 <= replicate < 2**32):
        raise ParameterError("point and replicate indices must lie in [0, 2**32)")
    key = (int(point) << 32) | int(replicate)
    return _mix64(key ^ _mix64(int(master)))


@dataclass(frozen=True)
class SweepConfig:
    """A grid of Hurst settings run through both estimators.

    Each entry of ``h_values`` is a scalar (isotropic, repeated ``m`` times)
    or a tuple of per-coordinate exponents (anisotropic; ``m`` is ignored).
    """

    h_values: tuple
    n_samples: int
    replicates: int
    rho: float = 0.0
    m: int = 1
    master_seed: int = 0
    rs_range: Optional[Tuple[int, int]] = None
    msd_range: Optional[Tuple[int, int]] = None
    window_sizes: Optional[tuple] = None
    lags: Optional[tuple] = None
    truncation: Optional[int] = None
    burn_in: int = 0

    def __post_init__(self):
        if int(self.replicates) != self.replicates or self.replicates < 1:
            raise ParameterError(f"replicates must be >= 1, got {self.replicates}")
        if int(self.m) != self.m or self.m < 1:
            raise ParameterError(f"m must be >= 1, got {self.m}")
        if len(self.h_values) == 0:
            raise ParameterError("h_values is empty")
        # Build every spec once so invalid settings fail before any work starts.
        for i in range(len(self.h_values)):
            self.spec_for(i, 0)

    def hurst_at(self, point: int) -> Tuple[float, ...]:
        h = self.h_values[point]
        if np.ndim(h) == 0:
            return (float(h),) * int(self.m)
        return tuple(float(v) for v in h)

    def spec_for(self, point: int, replicate: int) -> ArfimaSpec:
        return ArfimaSpec(
            hurst_exponents=self.hurst_at(point),
            length=self.n_samples,
            rho=self.rho,
            truncation=self.truncation,
            burn_in=self.burn_in,
            seed=split_seed(self.master_seed, point, replicate),
        )


@dataclass(frozen=True)
class SweepRow:
    point: int
    hurst: Tuple[float, ...]
    h_ref: float
    estimator: str
    mean_h: float
    bias: float
    sd: float
    rmse: float
    replicates: int
    failures: int


@dataclass
class SweepResult:
    """Aggregates per (grid point, estimator) plus the raw replicate estimates.

    ``estimates[estimator]`` has shape (points, replicates); failed
    replicates hold NaN and their messages are kept in ``errors``.
    """

    config: SweepConfig
    rows: List[SweepRow]
    estimates: Dict[str, np.ndarray]
    errors: Dict[Tuple[int, int], str] = field(default_factory=dict)

    @property
    def failures(self) -> int:
        return len(self.errors)

    def row(self, point: int, estimator: str) -> SweepRow:
        for r in self.rows:
            if r.point == point and r.estimator == estimator:
                return r
        raise KeyError((point, estimator))

    def table(self, estimator: str) -> List[SweepRow]:
        return [r for r in self.rows if r.estimator == estimator]

    def to_csv(self) -> str:
        return rows_to_csv(self.rows)

    def to_json(self) -> str:
        return rows_to_json(self.rows)

    def replicates_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["point", "hurst", "replicate", "seed", "h_rs", "h_msd", "error"])
        cfg = self.config
        for p in range(len(cfg.h_values)):
            for r in range(cfg.replicates):
                w.writerow(
                    [p, ";".join(repr(h) for h in cfg.hurst_at(p)), r, split_seed(cfg.master_seed, p, r),
                     repr(float(self.estimates["rs"][p, r])), repr(float(self.estimates["msd"][p, r])),
                     self.errors.get((p, r), "")]
                )
        return buf.getvalue()


_CSV_HEADER = ["h_ref", "estimator", "mean_h", "bias", "sd", "rmse", "replicates", "failures", "hurst"]


def rows_to_csv(rows: Sequence[SweepRow]) -> str:
    """Aggregate table; the trailing ``hurst`` column lists the exponents ``;``-joined."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(_CSV_HEADER)
    for r in rows:
        w.writerow(
            [repr(r.h_ref), r.estimator, repr(r.mean_h), repr(r.bias), repr(r.sd), repr(r.rmse),
             r.replicates, r.failures, ";".join(repr(h) for h in r.hurst)]
        )
    return buf.getvalue()


def rows_from_csv(text: str) -> List[SweepRow]:
    rows = []
    points: Dict[Tuple[float, ...], int] = {}
    for rec in csv.DictReader(io.StringIO(text)):
        hurst = tuple(float(h) for h in rec["hurst"].split(";"))
        point = points.setdefault(hurst, len(points))
        rows.append(
            SweepRow(point, hurst, float(rec["h_ref"]), rec["estimator"], float(rec["mean_h"]),
                     float(rec["bias"]), float(rec["sd"]), float(rec["rmse"]),
                     int(rec["replicates"]), int(rec["failures"]))
        )
    return rows


def rows_to_json(rows: Sequence[SweepRow]) -> str:
    keys = _CSV_HEADER[:-1]
    out = [dict({k: getattr(r, k) for k in keys}, hurst=list(r.hurst)) for r in rows]
    return json.dumps(out, indent=2) + "\n"


def rows_from_json(text: str) -> List[SweepRow]:
    rows = []
    points: Dict[Tuple[float, ...], int] = {}
    for rec in json.loads(text):
        hurst = tuple(float(h) for h in rec["hurst"])
        point = points.setdefault(hurst, len(points))
        rows.append(
            SweepRow(point, hurst, rec["h_ref"], rec["estimator"], rec["mean_h"], rec["bias"],
                     rec["sd"], rec["rmse"], rec["replicates"], rec["failures"])
        )
    return rows


def _summarise(est: np.ndarray, h_ref: float) -> Tuple[float, float, float, float, int]:
    ok = est[np.isfinite(est)]
    k = ok.size
    if k == 0:
        nan = float("nan")
        return nan, nan, nan, nan, 0
    mean = float(ok.mean())
    sd = float(ok.std(ddof=1)) if k > 1 else 0.0
    rmse = float(np.sqrt(np.mean((ok - h_ref) ** 2)))
    return mean, mean - h_ref, sd, rmse, k


def _one_replicate(cfg: SweepConfig, point: int, replicate: int):
    try:
        path = cumulative_path(generate(cfg.spec_for(point, replicate)))
        h_rs, _ = rs_pdda(path, cfg.window_sizes, cfg.rs_range)
        h_msd, _ = msd_pdda(path, cfg.lags, cfg.msd_range)
        return h_rs, h_msd, None
    except PDDAError as exc:
        return float("nan"), float("nan"), f"{type(exc).__name__}: {exc}"


def run_sweep(config: SweepConfig, threads: int = 1, progress=None) -> SweepResult:
    """Run every replicate of every grid point and aggregate.

    ``threads=0`` uses one worker per CPU. Work is keyed by (point, replicate)
    and aggregated in index order, so results do not depend on ``threads``.
    ``progress``, if given, is called with the number of finished replicates.
    """
    if threads < 0:
        raise ParameterError("threads must be >= 0")
    workers = (os.cpu_count() or 1) if threads == 0 else threads
    n_points, R = len(config.h_values), config.replicates
    tasks = [(p, r) for p in range(n_points) for r in range(R)]

    est = {name: np.full((n_points, R), np.nan) for name in ESTIMATORS}
    errors: Dict[Tuple[int, int], str] = {}

    def record(task, out):
        p, r = task
        est["rs"][p, r], est["msd"][p, r], err = out
        if err is not None:
            errors[(p, r)] = err
            log.warning("replicate (%d, %d) failed: %s", p, r, err)

    if workers == 1:
        for i, task in enumerate(tasks):
            record(task, _one_replicate(config, *task))
            if progress:
                progress(i + 1)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for i, (task, out) in enumerate(zip(tasks, pool.map(lambda t: _one_replicate(config, *t), tasks))):
                record(task, out)
                if progress:
                    progress(i + 1)

    rows = []
    for p in range(n_points):
        hurst = config.hurst_at(p)
        h_ref = max(hurst)
        for name in ESTIMATORS:
            mean, bias, sd, rmse, k = _summarise(est[name][p], h_ref)
            rows.append(SweepRow(p, hurst, h_ref, name, mean, bias, sd, rmse, k, R - k))
    return SweepResult(config, rows, est, errors)
