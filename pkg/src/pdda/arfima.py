"""Univariate and multivariate ARFIMA(0, d, 0) generation.

Each coordinate k is a truncated MA(K) filter of Gaussian innovations,

    X_t^(k) = sum_{j=0}^{K} a_j(d_k) eps_{t-j}^(k),    d_k = H_k - 1/2,

with equicorrelated innovations (unit variance, pairwise correlation rho).
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.signal import fftconvolve

from .errors import DataError, ParameterError

__all__ = [
    "ArfimaSpec",
    "TimeSeries",
    "default_truncation",
    "fractional_coefficients",
    "innovation_factor",
    "generate",
]

MIN_TRUNCATION = 2048


def default_truncation(n: int) -> int:
    """Default MA truncation: ``max(n, 2048)``."""
    return max(int(n), MIN_TRUNCATION)


@dataclass(frozen=True)
class ArfimaSpec:
    """Parameters of an m-variate ARFIMA(0, d, 0) simulation.

    ``truncation=None`` resolves to :func:`default_truncation` of ``length``.
    Construction validates every invariant and raises :class:`ParameterError`.
    """

    hurst_exponents: tuple
    length: int
    rho: float = 0.0
    truncation: Optional[int] = None
    burn_in: int = 0
    seed: int = 0

    def __post_init__(self):
        hs = np.atleast_1d(np.asarray(self.hurst_exponents, dtype=float))
        if hs.ndim != 1 or hs.size == 0:
            raise ParameterError("hurst_exponents must be a non-empty sequence")
        if not np.all((hs > 0.0) & (hs < 1.0)):
            raise ParameterError(f"every Hurst exponent must lie in (0, 1), got {hs.tolist()}")
        object.__setattr__(self, "hurst_exponents", tuple(float(h) for h in hs))

        if int(self.length) != self.length or self.length < 2:
            raise ParameterError(f"length N must be an integer >= 2, got {self.length}")
        object.__setattr__(self, "length", int(self.length))

        if self.truncation is None:
            object.__setattr__(self, "truncation", default_truncation(self.length))
        if int(self.truncation) != self.truncation or self.truncation < 1:
            raise ParameterError(f"truncation K must be an integer >= 1, got {self.truncation}")
        object.__setattr__(self, "truncation", int(self.truncation))

        if int(self.burn_in) != self.burn_in or self.burn_in < 0:
            raise ParameterError(f"burn_in B must be a non-negative integer, got {self.burn_in}")
        object.__setattr__(self, "burn_in", int(self.burn_in))

        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise ParameterError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        object.__setattr__(self, "seed", int(self.seed))

        rho = float(self.rho)
        _check_rho(rho, hs.size)
        object.__setattr__(self, "rho", rho)

    @property
    def m(self) -> int:
        return len(self.hurst_exponents)

    @property
    def d(self) -> np.ndarray:
        """Fractional integration parameters ``H_k - 0.5``."""
        return np.asarray(self.hurst_exponents) - 0.5

    @property
    def h_max(self) -> float:
        return max(self.hurst_exponents)

    def to_dict(self) -> dict:
        return {
            "hurst_exponents": list(self.hurst_exponents),
            "rho": self.rho,
            "length": self.length,
            "truncation": self.truncation,
            "burn_in": self.burn_in,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ArfimaSpec":
        return cls(
            hurst_exponents=tuple(d["hurst_exponents"]),
            length=d["length"],
            rho=d.get("rho", 0.0),
            truncation=d.get("truncation"),
            burn_in=d.get("burn_in", 0),
            seed=d.get("seed", 0),
        )


@dataclass(frozen=True)
class TimeSeries:
    """An N x m sample matrix, optionally tagged with the spec that produced it."""

    values: np.ndarray
    spec: Optional[ArfimaSpec] = field(default=None, compare=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim == 1:
            v = v[:, None]
        if v.ndim != 2:
            raise DataError(f"time series must be 1-D or 2-D, got shape {v.shape}")
        if v.shape[0] < 2 or v.shape[1] < 1:
            raise DataError(f"time series needs N >= 2 rows and m >= 1 columns, got {v.shape}")
        if not np.all(np.isfinite(v)):
            raise DataError("time series contains non-finite values")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def m(self) -> int:
        return self.values.shape[1]

    def to_csv(self) -> str:
        """Serialize as ``t,x1,...,xm`` with 17 significant digits."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t"] + [f"x{k + 1}" for k in range(self.m)])
        for t, row in enumerate(self.values):
            w.writerow([t] + [repr(float(v)) for v in row])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "TimeSeries":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows:
            raise DataError("empty CSV")
        header, body = rows[0], rows[1:]
        if header[0].strip() != "t":
            raise DataError("CSV header must start with 't'")
        try:
            values = np.array([[float(v) for v in r[1:]] for r in body if r], dtype=float)
        except ValueError as exc:
            raise DataError(f"unparseable value in CSV: {exc}") from None
        if values.ndim != 2 or values.shape[1] != len(header) - 1:
            raise DataError("CSV rows do not match header width")
        return cls(values)


def _check_rho(rho: float, m: int) -> None:
    if not np.isfinite(rho) or abs(rho) > 1.0:
        raise ParameterError(f"rho must lie in [-1, 1], got {rho}")
    if m >= 2 and rho < -1.0 / (m - 1):
        raise ParameterError(
            f"rho={rho} makes the {m}x{m} innovation covariance indefinite; need rho >= {-1.0 / (m - 1):.6g}"
        )


def fractional_coefficients(d: float, K: int) -> np.ndarray:
    """MA coefficients ``a_0..a_K`` of ``(1 - B)^{-d}``.

    ``a_0 = 1`` and ``a_k = a_{k-1} (k - 1 + d) / k``.

    >>> fractional_coefficients(0.25, 2)
    array([1.     , 0.25   , 0.15625])
    """
    if not -0.5 < d < 0.5:
        raise ParameterError(f"d must lie in (-0.5, 0.5), got {d}")
    if int(K) != K or K < 1:
        raise ParameterError(f"K must be a positive integer, got {K}")
    k = np.arange(1, int(K) + 1, dtype=float)
    a = np.empty(int(K) + 1)
    a[0] = 1.0
    a[1:] = np.cumprod((k - 1.0 + d) / k)
    return a


def innovation_factor(m: int, rho: float) -> np.ndarray:
    """Lower-triangular ``L`` with ``L @ L.T`` the equicorrelation matrix.

    Works for singular (positive semi-definite) cases such as ``rho = 1``:
    a zero pivot yields a zero column instead of failing.
    """
    if int(m) != m or m < 1:
        raise ParameterError(f"m must be a positive integer, got {m}")
    m = int(m)
    _check_rho(float(rho), m)
    cov = np.full((m, m), float(rho))
    np.fill_diagonal(cov, 1.0)

    L = np.zeros((m, m))
    tol = 1e-14
    for j in range(m):
        pivot = cov[j, j] - L[j, :j] @ L[j, :j]
        if pivot <= tol:
            continue
        L[j, j] = np.sqrt(pivot)
        for i in range(j + 1, m):
            L[i, j] = (cov[i, j] - L[i, :j] @ L[j, :j]) / L[j, j]
    return L


def _ma_filter(eps: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
    """Causal FIR filter ``y_t = sum_j coeffs_j eps_{t-j}`` (zero pre-sample)."""
    coeffs = np.trim_zeros(coeffs, "b")
    if coeffs.size == 1:
        return eps * coeffs[0]
    return fftconvolve(eps, coeffs)[: eps.size]


def generate(spec: ArfimaSpec) -> TimeSeries:
    """Draw one ARFIMA realisation.

    ``B + N + K`` standard-normal innovation vectors are drawn from
    ``numpy.random.default_rng(seed)`` (PCG64), correlated through
    :func:`innovation_factor`, filtered per coordinate, and the first
    ``B + K`` outputs are discarded.
    """
    n, K, B, m = spec.length, spec.truncation, spec.burn_in, spec.m
    total = B + n + K
    rng = np.random.default_rng(spec.seed)
    white = rng.standard_normal((total, m))
    L = innovation_factor(m, spec.rho)
    eps = white if m == 1 else white @ L.T

    out = np.empty((n, m))
    for k, d in enumerate(spec.d):
        filtered = _ma_filter(eps[:, k], fractional_coefficients(float(d), K))
        out[:, k] = filtered[B + K :]
    return TimeSeries(out, spec)


def arfima(
    hurst: float | Sequence[float],
    n: int,
    rho: float = 0.0,
    seed: int = 0,
    truncation: Optional[int] = None,
    burn_in: int = 0,
) -> TimeSeries:
    """Shorthand for ``generate(ArfimaSpec(...))``."""
    return generate(
        ArfimaSpec(
            hurst_exponents=tuple(np.atleast_1d(hurst)),
            length=n,
            rho=rho,
            truncation=truncation,
            burn_in=burn_in,
            seed=seed,
        )
    )
