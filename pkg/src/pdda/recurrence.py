"""Lagged recurrence probability and its range-dimension scaling.

``P(eps, tau)`` is the fraction of path pairs ``(t, t + tau)`` whose
Euclidean separation is at most ``eps``. For a self-similar trajectory its
decay in ``tau`` has exponent ``-H * min(m, 1/H)``: ``-m H`` for rough,
space-filling paths and ``-1`` once the range dimension saturates.
"""

from __future__ import annotations

import csv
import io
import json
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .arfima import TimeSeries
from .errors import DataError, FitError, ParameterError
from .estimators import LogLogFit, loglog_fit
from .path import CumulativePath, _check_lags, cumulative_path

__all__ = [
    "RecurrenceCurve",
    "RangeDimensionReport",
    "DEFAULT_EPSILON",
    "DEFAULT_TAU_FIT",
    "normalize_unit_variance",
    "normalized_path",
    "recurrence_probability",
    "range_dimension",
    "predicted_decay",
    "decay_report",
    "epsilon_scaling",
]

DEFAULT_EPSILON = 0.2
DEFAULT_TAU_FIT = (8, 55)


@dataclass(frozen=True)
class RecurrenceCurve:
    epsilon: float
    lags: np.ndarray
    p: np.ndarray
    recurrent: np.ndarray
    total: np.ndarray

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["tau", "p", "recurrent", "total"])
        for t, p, r, n in zip(self.lags, self.p, self.recurrent, self.total):
            w.writerow([int(t), repr(float(p)), int(r), int(n)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, epsilon: float) -> "RecurrenceCurve":
        rows = list(csv.DictReader(io.StringIO(text)))
        return cls(
            epsilon=epsilon,
            lags=np.array([int(r["tau"]) for r in rows]),
            p=np.array([float(r["p"]) for r in rows]),
            recurrent=np.array([int(r["recurrent"]) for r in rows]),
            total=np.array([int(r["total"]) for r in rows]),
        )


@dataclass(frozen=True)
class RangeDimensionReport:
    d_range_theoretical: float
    predicted_decay: float
    fitted_decay: float
    fit: LogLogFit
    h_max: float
    m: int
    epsilon: float

    def to_dict(self) -> dict:
        return {
            "h_max": self.h_max,
            "m": self.m,
            "epsilon": self.epsilon,
            "d_range_theoretical": self.d_range_theoretical,
            "predicted_decay": self.predicted_decay,
            "fitted_decay": self.fitted_decay,
            "fit": self.fit.to_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "RangeDimensionReport":
        return cls(
            d_range_theoretical=d["d_range_theoretical"],
            predicted_decay=d["predicted_decay"],
            fitted_decay=d["fitted_decay"],
            fit=LogLogFit.from_dict(d["fit"]),
            h_max=d["h_max"],
            m=d["m"],
            epsilon=d["epsilon"],
        )


def normalize_unit_variance(v) -> np.ndarray:
    """Divide each column by its sample standard deviation (``ddof=0``).

    Column means are left alone. Raises :class:`DataError` on a constant column.
    """
    a = np.asarray(v.values if isinstance(v, TimeSeries) else v, dtype=float)
    if a.ndim == 1:
        a = a[:, None]
    sd = a.std(axis=0)
    if np.any(sd == 0):
        raise DataError("cannot normalise a zero-variance column")
    return a / sd


def normalized_path(x) -> CumulativePath:
    """Cumulative path of the series after per-coordinate unit-variance scaling."""
    return cumulative_path(normalize_unit_variance(x))


def recurrence_probability(path: CumulativePath, epsilon: float = DEFAULT_EPSILON, lags=None) -> RecurrenceCurve:
    """Fraction of pairs ``(t, t + tau)`` within Euclidean distance ``epsilon``.

    The comparison is closed (``<=``) and done on squared distances.
    Default lags are ``1..min(N - 1, 100)``.
    """
    if not (np.isfinite(epsilon) and epsilon > 0):
        raise ParameterError(f"epsilon must be positive, got {epsilon}")
    z = path.z
    n = path.n
    lags = _check_lags(np.arange(1, min(n - 1, 100) + 1) if lags is None else lags, n)
    eps2 = float(epsilon) ** 2
    rec = np.empty(lags.size, dtype=np.int64)
    for i, tau in enumerate(lags):
        d2 = np.zeros(n - tau)
        for k in range(z.shape[1]):
            dz = z[tau:, k] - z[:-tau, k]
            d2 += dz * dz
        rec[i] = np.count_nonzero(d2 <= eps2)
    total = n - lags
    return RecurrenceCurve(float(epsilon), lags, rec / total, rec, total)


def range_dimension(h_max: float, m: int) -> float:
    """``min(m, 1 / h_max)``."""
    if not 0.0 < h_max < 1.0:
        raise ParameterError(f"h_max must lie in (0, 1), got {h_max}")
    if int(m) != m or m < 1:
        raise ParameterError(f"m must be a positive integer, got {m}")
    return float(min(int(m), 1.0 / h_max))


def predicted_decay(h_max: float, m: int) -> float:
    """Theoretical ``tau`` exponent of P: ``-m H`` if ``1/H > m`` else ``-1``."""
    return -h_max * range_dimension(h_max, m)


def decay_report(
    curve: RecurrenceCurve,
    h_max: float,
    m: int,
    fit_range: Tuple[float, float] = DEFAULT_TAU_FIT,
) -> RangeDimensionReport:
    """Fit the ``tau`` decay of ``curve`` and set it against the theory.

    Lags with no recurrent pair are dropped with a warning; if fewer than
    three lags survive a :class:`FitError` suggests a larger ``epsilon``.
    """
    lo, hi = fit_range
    inside = (curve.lags >= lo) & (curve.lags <= hi)
    zero = inside & (curve.recurrent == 0)
    if np.any(zero):
        warnings.warn(
            f"{int(zero.sum())} lag(s) in [{lo}, {hi}] have no recurrent pairs and are excluded"
        )
    try:
        fit = loglog_fit(curve.lags, curve.p, fit_range)
    except FitError as exc:
        raise FitError(f"{exc}; recurrence probabilities vanish, try a larger epsilon") from None
    return RangeDimensionReport(
        d_range_theoretical=range_dimension(h_max, m),
        predicted_decay=predicted_decay(h_max, m),
        fitted_decay=fit.slope,
        fit=fit,
        h_max=float(h_max),
        m=int(m),
        epsilon=curve.epsilon,
    )


def epsilon_scaling(path: CumulativePath, tau: int, epsilons: Sequence[float]) -> LogLogFit:
    """Log-log slope of ``P(eps, tau)`` against ``eps`` at one fixed lag."""
    eps = np.asarray(epsilons, dtype=float)
    p = np.array([recurrence_probability(path, e, [tau]).p[0] for e in eps])
    return loglog_fit(eps, p)
