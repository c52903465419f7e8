"""Hurst exponent estimators built on path geometry.

Two routes share one log-log regression engine:

* ``rs_pdda``: slope of ln E[R_D/S_D] against ln n (window diameter over
  increment dispersion).
* ``msd_pdda``: half the slope of ln M2(tau) against ln tau.

``local_hurst`` gives the scale-dependent exponent of a distance profile.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import FitError, ParameterError
from .path import (
    CumulativePath,
    DistanceProfile,
    cumulative_path,
    distance_profile,
    log_lag_grid,
    window_geometry,
)

__all__ = [
    "LogLogFit",
    "EstimatorReport",
    "loglog_fit",
    "rs_pdda",
    "msd_pdda",
    "local_hurst",
    "estimate",
    "default_rs_range",
    "default_msd_range",
    "default_msd_lags",
    "default_rs_windows",
    "local_lag_grid",
]

RS_MIN_WINDOW = 16
RS_GRID_POINTS = 20
MSD_MIN_LAG = 4
MSD_MAX_LAG = 128
MSD_GRID_POINTS = 20


@dataclass(frozen=True)
class LogLogFit:
    """OLS fit of ``ln(ordinate) = intercept + slope * ln(abscissa)``."""

    slope: float
    intercept: float
    r_squared: float
    fit_range: Tuple[float, float]
    points_used: int

    def to_dict(self) -> dict:
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "r2": self.r_squared,
            "range": [self.fit_range[0], self.fit_range[1]],
            "n_points": self.points_used,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LogLogFit":
        return cls(
            slope=d["slope"],
            intercept=d["intercept"],
            r_squared=d["r2"],
            fit_range=tuple(d["range"]),
            points_used=d["n_points"],
        )


@dataclass(frozen=True)
class EstimatorReport:
    """Both route estimates with their fits and an optional local-slope curve.

    ``out_of_range`` flags estimates outside (0, 1); they are never clamped.
    """

    h_rs: float
    h_msd: float
    fit_rs: LogLogFit
    fit_msd: LogLogFit
    local_curve: Optional[Tuple[Tuple[int, float], ...]] = None
    out_of_range: Tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        d = {
            "h_rs": self.h_rs,
            "h_msd": self.h_msd,
            "fits": {"rs": self.fit_rs.to_dict(), "msd": self.fit_msd.to_dict()},
        }
        if self.local_curve is not None:
            d["local"] = [{"tau": int(t), "h": float(h)} for t, h in self.local_curve]
        if self.out_of_range:
            d["out_of_range"] = list(self.out_of_range)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "EstimatorReport":
        local = d.get("local")
        return cls(
            h_rs=d["h_rs"],
            h_msd=d["h_msd"],
            fit_rs=LogLogFit.from_dict(d["fits"]["rs"]),
            fit_msd=LogLogFit.from_dict(d["fits"]["msd"]),
            local_curve=None if local is None else tuple((e["tau"], e["h"]) for e in local),
            out_of_range=tuple(d.get("out_of_range", ())),
        )


def loglog_fit(abscissa, ordinate, fit_range=None, weights=None) -> LogLogFit:
    """Least-squares line through ``(ln a, ln o)``.

    Points with a non-positive coordinate, or an abscissa outside the closed
    ``fit_range``, are dropped. Optional ``weights`` give weighted least
    squares. Raises :class:`FitError` if fewer than three points remain.
    """
    a = np.asarray(abscissa, dtype=float)
    o = np.asarray(ordinate, dtype=float)
    if a.shape != o.shape:
        raise ParameterError("abscissa and ordinate differ in length")
    keep = (a > 0) & (o > 0) & np.isfinite(a) & np.isfinite(o)
    if fit_range is not None:
        lo, hi = fit_range
        keep &= (a >= lo) & (a <= hi)
    if keep.sum() < 3:
        raise FitError(f"only {int(keep.sum())} usable points in fit range {fit_range}; need 3")

    lx, ly = np.log(a[keep]), np.log(o[keep])
    w = np.ones_like(lx) if weights is None else np.asarray(weights, dtype=float)[keep]
    w = w / w.sum()
    mx, my = w @ lx, w @ ly
    sxx = w @ (lx - mx) ** 2
    if sxx == 0:
        raise FitError("abscissa values are all equal inside the fit range")
    sxy = w @ ((lx - mx) * (ly - my))
    slope = sxy / sxx
    intercept = my - slope * mx
    syy = w @ (ly - my) ** 2
    r2 = 1.0 if syy == 0 else min(1.0, max(0.0, sxy * sxy / (sxx * syy)))
    rng = (float(a[keep].min()), float(a[keep].max())) if fit_range is None else (float(lo), float(hi))
    return LogLogFit(float(slope), float(intercept), float(r2), rng, int(keep.sum()))


def default_rs_range(n: int) -> Tuple[int, int]:
    return (RS_MIN_WINDOW, n // 2)


def default_rs_windows(n: int, fit_range=None) -> np.ndarray:
    """Log-spaced window sizes spanning the R/S fit range."""
    lo, hi = default_rs_range(n) if fit_range is None else fit_range
    return log_lag_grid(int(max(lo, 2)), int(min(hi, n)), RS_GRID_POINTS)


def default_msd_range(n: int) -> Tuple[int, int]:
    return (MSD_MIN_LAG, max(MSD_MIN_LAG, min(MSD_MAX_LAG, n // 10)))


def default_msd_lags(n: int, fit_range=None) -> np.ndarray:
    """Log-spaced lags spanning the MSD fit range."""
    lo, hi = default_msd_range(n) if fit_range is None else fit_range
    return log_lag_grid(int(lo), int(min(hi, n - 1)), MSD_GRID_POINTS)


def _as_path(x) -> CumulativePath:
    return x if isinstance(x, CumulativePath) else cumulative_path(x)


def rs_pdda(x, window_sizes=None, fit_range=None) -> Tuple[float, LogLogFit]:
    """Route 1: slope of ln E[R_D/S_D] against ln n.

    ``x`` is a :class:`TimeSeries`, an (N,) / (N, m) array, or a
    :class:`CumulativePath`. Defaults: 20 log-spaced windows over ``[16, N // 2]``.
    """
    path = _as_path(x)
    n = path.n
    if fit_range is None:
        fit_range = default_rs_range(n)
    if window_sizes is None:
        window_sizes = default_rs_windows(n, fit_range)
    geom = window_geometry(path, window_sizes=window_sizes)
    fit = loglog_fit(geom.window_sizes, geom.ratios, fit_range)
    return fit.slope, fit


def msd_from_profile(profile: DistanceProfile, fit_range=None, weighted: bool = False) -> Tuple[float, LogLogFit]:
    """Half the log-log slope of an existing distance profile."""
    weights = profile.pair_counts if weighted else None
    fit = loglog_fit(profile.lags, profile.m2, fit_range, weights=weights)
    return fit.slope / 2.0, fit


def msd_pdda(x, lags=None, fit_range=None, weighted: bool = False) -> Tuple[float, LogLogFit]:
    """Route 2: half the slope of ln M2(tau) against ln tau.

    Defaults: 20 log-spaced lags over ``[4, min(128, N // 10)]``.
    ``weighted=True`` weights each lag by its pair count.
    """
    path = _as_path(x)
    n = path.n
    if fit_range is None:
        fit_range = default_msd_range(n)
    if lags is None:
        lags = default_msd_lags(n, fit_range)
    return msd_from_profile(distance_profile(path, lags), fit_range, weighted)


def _moving_average(v: np.ndarray, window: int) -> np.ndarray:
    if window <= 1:
        return v.copy()
    half = window // 2
    out = np.empty_like(v)
    for i in range(v.size):
        lo, hi = max(0, i - half), min(v.size, i + half + 1)
        out[i] = v[lo:hi].mean()
    return out


def local_hurst(profile: DistanceProfile, smoothing_window: int = 5) -> np.ndarray:
    """Scale-dependent exponent ``0.5 * dln M2 / dln tau`` at every profile lag.

    Second-order centred differences on the (possibly non-uniform) log-lag
    grid, one-sided at the ends, then a centred moving average over
    ``smoothing_window`` grid points (truncated at the edges; 1 disables).
    Returns an array of shape (L, 2) with columns ``tau, H_loc``.
    """
    if profile.lags.size < 5:
        raise ParameterError(f"local_hurst needs at least 5 lags, got {profile.lags.size}")
    if smoothing_window < 1:
        raise ParameterError("smoothing_window must be >= 1")
    if np.any(profile.m2 <= 0):
        raise FitError("distance profile has non-positive entries; log slope undefined")
    lt = np.log(profile.lags.astype(float))
    lm = np.log(profile.m2)
    h = 0.5 * np.gradient(lm, lt, edge_order=1)
    h = _moving_average(h, int(smoothing_window))
    return np.column_stack([profile.lags, h])


def local_lag_grid(n: int, num: int = 40) -> np.ndarray:
    """Log-spaced lags from 1 to ``n // 10`` for local-slope curves."""
    return log_lag_grid(1, max(5, n // 10), num)


def estimate(
    x,
    rs_range=None,
    msd_range=None,
    window_sizes=None,
    lags=None,
    local: bool = False,
    smoothing_window: int = 5,
) -> EstimatorReport:
    """Run both routes on one series and collect an :class:`EstimatorReport`."""
    path = _as_path(x)
    h_rs, fit_rs = rs_pdda(path, window_sizes, rs_range)
    h_msd, fit_msd = msd_pdda(path, lags, msd_range)

    curve = None
    if local:
        prof = distance_profile(path, local_lag_grid(path.n))
        lh = local_hurst(prof, smoothing_window)
        curve = tuple((int(t), float(h)) for t, h in lh)

    flagged = tuple(
        name for name, h in (("h_rs", h_rs), ("h_msd", h_msd)) if not 0.0 < h < 1.0
    )
    if flagged:
        warnings.warn(f"estimates outside (0, 1): {', '.join(flagged)}; check the fit ranges")
    return EstimatorReport(float(h_rs), float(h_msd), fit_rs, fit_msd, curve, flagged)
