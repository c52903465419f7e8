"""Cumulative deviate paths and the distance-plot quantities built on them.

Nothing here materialises the N x N distance matrix unless asked to via
:func:`distance_matrix`; the lag profile and window geometry are streamed.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.spatial import ConvexHull, QhullError
from scipy.spatial.distance import pdist, squareform

from .arfima import TimeSeries
from .errors import DataError, EstimationError, ParameterError, SizeError

__all__ = [
    "CumulativePath",
    "DistanceProfile",
    "WindowGeometry",
    "cumulative_path",
    "path_from_points",
    "distance_profile",
    "window_geometry",
    "distance_matrix",
    "diameter",
    "default_lag_grid",
    "default_window_sizes",
    "log_lag_grid",
]

# Brute-force pairwise blocks are capped at this many squared distances per chunk.
_CHUNK_ELEMS = 1 << 22
# Above this block size the multivariate diameter is taken over hull vertices only.
_HULL_MIN_POINTS = 256


@dataclass(frozen=True)
class CumulativePath:
    """Cumulative deviate path ``z`` (N x m) of a :class:`TimeSeries`."""

    z: np.ndarray
    source: Optional[TimeSeries] = field(default=None, compare=False, repr=False)

    @property
    def n(self) -> int:
        return self.z.shape[0]

    @property
    def m(self) -> int:
        return self.z.shape[1]

    def increments(self) -> np.ndarray:
        """First differences of the path, with an implicit zero before ``z[0]``."""
        return np.diff(self.z, axis=0, prepend=np.zeros((1, self.m)))


@dataclass(frozen=True)
class DistanceProfile:
    """Mean squared separation ``M2(tau)`` on a grid of lags."""

    lags: np.ndarray
    m2: np.ndarray
    pair_counts: np.ndarray

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["tau", "m2", "pairs"])
        for t, v, c in zip(self.lags, self.m2, self.pair_counts):
            w.writerow([int(t), repr(float(v)), int(c)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "DistanceProfile":
        rows = list(csv.DictReader(io.StringIO(text)))
        return cls(
            lags=np.array([int(r["tau"]) for r in rows]),
            m2=np.array([float(r["m2"]) for r in rows]),
            pair_counts=np.array([int(r["pairs"]) for r in rows]),
        )


@dataclass(frozen=True)
class WindowGeometry:
    """Block-averaged diameter and dispersion per window size.

    ``ratios`` holds the block average of ``R_D / S_D`` (not the ratio of the
    averages); ``blocks`` the number of non-constant blocks that entered it.
    """

    window_sizes: np.ndarray
    diameters: np.ndarray
    dispersions: np.ndarray
    ratios: np.ndarray
    blocks: np.ndarray

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "rd", "sd"])
        for n, rd, sd in zip(self.window_sizes, self.diameters, self.dispersions):
            w.writerow([int(n), repr(float(rd)), repr(float(sd))])
        return buf.getvalue()


def _as_matrix(x) -> np.ndarray:
    if isinstance(x, TimeSeries):
        return x.values
    if isinstance(x, CumulativePath):
        return x.z
    a = np.asarray(x, dtype=float)
    return a[:, None] if a.ndim == 1 else a


def cumulative_path(x) -> CumulativePath:
    """Running sum of mean-centred samples, per coordinate.

    Accepts a :class:`TimeSeries` or anything array-like of shape (N,) or (N, m).
    """
    ts = x if isinstance(x, TimeSeries) else None
    v = _as_matrix(x)
    if v.ndim != 2 or v.shape[0] < 2:
        raise DataError(f"need at least 2 samples, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise DataError("input contains non-finite values")
    z = np.cumsum(v - v.mean(axis=0), axis=0)
    z.setflags(write=False)
    return CumulativePath(z, ts)


def path_from_points(z) -> CumulativePath:
    """Wrap an already-integrated trajectory (bypasses centring and summation)."""
    z = _as_matrix(z).astype(float, copy=True)
    if z.ndim != 2 or z.shape[0] < 2:
        raise DataError(f"need at least 2 path points, got shape {z.shape}")
    if not np.all(np.isfinite(z)):
        raise DataError("path contains non-finite values")
    z.setflags(write=False)
    return CumulativePath(z, None)


def default_lag_grid(n: int) -> np.ndarray:
    """All integer lags ``1..max(1, n // 10)``."""
    return np.arange(1, max(1, n // 10) + 1)


def log_lag_grid(lo: int, hi: int, num: int = 20) -> np.ndarray:
    """Roughly ``num`` log-spaced distinct integers in ``[lo, hi]``."""
    if lo < 1 or hi < lo:
        raise ParameterError(f"invalid lag range [{lo}, {hi}]")
    grid = np.round(np.logspace(np.log10(lo), np.log10(hi), num)).astype(int)
    return np.unique(np.clip(grid, lo, hi))


def default_window_sizes(n: int, lo: int = 8, hi: Optional[int] = None) -> np.ndarray:
    """Dyadic window sizes ``lo, 2 lo, ...`` not exceeding ``hi`` (default ``n // 4``)."""
    hi = n // 4 if hi is None else hi
    sizes = []
    w = lo
    while w <= hi:
        sizes.append(w)
        w *= 2
    return np.array(sizes, dtype=int)


def _check_lags(lags, n: int) -> np.ndarray:
    lags = np.asarray(lags)
    if lags.size == 0:
        raise ParameterError("lag grid is empty")
    if not np.all(lags == np.round(lags)):
        raise ParameterError("lags must be integers")
    lags = lags.astype(int)
    if lags.min() < 1 or lags.max() >= n:
        raise ParameterError(f"lags must lie in [1, {n - 1}], got [{lags.min()}, {lags.max()}]")
    if np.any(np.diff(lags) <= 0):
        raise ParameterError("lags must be strictly increasing")
    return lags


def distance_profile(path: CumulativePath, lags: Optional[Sequence[int]] = None) -> DistanceProfile:
    """``M2(tau)``: mean squared Euclidean increment of the path at each lag.

    One O(N m) pass per lag; coordinate contributions are summed in index
    order so the result is exactly the sum of univariate profiles.
    """
    z = path.z
    n = path.n
    lags = _check_lags(default_lag_grid(n) if lags is None else lags, n)
    m2 = np.empty(lags.size)
    for i, tau in enumerate(lags):
        acc = 0.0
        for k in range(z.shape[1]):
            dz = z[tau:, k] - z[:-tau, k]
            acc += np.dot(dz, dz) / (n - tau)
        m2[i] = acc
    return DistanceProfile(lags=lags, m2=m2, pair_counts=n - lags)


def _pairwise_max_sq(pts: np.ndarray) -> float:
    """Largest squared distance among the rows of ``pts`` (exact)."""
    p = pts.shape[0]
    rows = max(1, _CHUNK_ELEMS // max(p, 1))
    best = 0.0
    for s in range(0, p, rows):
        chunk = pts[s : s + rows]
        d2 = np.zeros((chunk.shape[0], p))
        for k in range(pts.shape[1]):
            diff = chunk[:, k, None] - pts[None, :, k]
            d2 += diff * diff
        best = max(best, float(d2.max()))
    return best


def diameter(points) -> float:
    """Exact Euclidean diameter of a point cloud (rows are points)."""
    pts = _as_matrix(points)
    if pts.shape[1] == 1:
        return float(pts.max() - pts.min())
    if pts.shape[0] > _HULL_MIN_POINTS and pts.shape[1] <= 8:
        try:
            pts = pts[ConvexHull(pts).vertices]
        except QhullError:
            pass  # degenerate (e.g. collinear) cloud: fall back to the full scan
    return float(np.sqrt(_pairwise_max_sq(pts)))


def _block_diameters(blocks: np.ndarray) -> np.ndarray:
    """Diameters of a stack of blocks, shape (nb, n, m) -> (nb,)."""
    nb, n, m = blocks.shape
    if m == 1:
        return blocks[:, :, 0].max(axis=1) - blocks[:, :, 0].min(axis=1)
    if n > _HULL_MIN_POINTS:
        return np.array([diameter(b) for b in blocks])
    per = max(1, _CHUNK_ELEMS // (n * n))
    out = np.empty(nb)
    for s in range(0, nb, per):
        b = blocks[s : s + per]
        d2 = np.zeros((b.shape[0], n, n))
        for k in range(m):
            diff = b[:, :, None, k] - b[:, None, :, k]
            d2 += diff * diff
        out[s : s + per] = np.sqrt(d2.reshape(b.shape[0], -1).max(axis=1))
    return out


def window_geometry(
    path: CumulativePath,
    x=None,
    window_sizes: Optional[Sequence[int]] = None,
    recenter: bool = True,
) -> WindowGeometry:
    """Block diameter ``R_D(n)`` and dispersion ``S_D(n)`` per window size.

    The series is cut into ``N // n`` non-overlapping blocks. Within a block
    the path points are re-integrated from the block-centred increments
    (equivalently, the global path segment minus its chord), so in one dimension ``R_D / S_D``
    is exactly the classical rescaled range of that block. ``recenter=False``
    uses the raw global path segment instead.

    ``S_D`` is ``sqrt(trace(Cov))`` of the increments ``x`` in the block,
    with a ``1/n`` normalisation. ``x`` defaults to the path's source series,
    or to the path increments when there is none. Blocks with ``S_D == 0``
    are skipped.
    """
    n_total = path.n
    if x is None:
        xv = path.source.values if path.source is not None else path.increments()
    else:
        xv = _as_matrix(x)
    if xv.shape != path.z.shape:
        raise DataError(f"increments shape {xv.shape} does not match path shape {path.z.shape}")

    sizes = np.asarray(
        default_window_sizes(n_total) if window_sizes is None else window_sizes, dtype=int
    )
    if sizes.size == 0:
        raise ParameterError("window size grid is empty")
    if sizes.min() < 2 or sizes.max() > n_total:
        raise ParameterError(f"window sizes must lie in [2, {n_total}]")

    rd_out, sd_out, ratio_out, used = [], [], [], []
    for n in sizes:
        nb = n_total // n
        xb = xv[: nb * n].reshape(nb, n, -1)
        if recenter:
            zb = np.cumsum(xb - xb.mean(axis=1, keepdims=True), axis=1)
        else:
            zb = path.z[: nb * n].reshape(nb, n, -1)
        sd = np.sqrt(xb.var(axis=1).sum(axis=1))
        ok = sd > 0
        if not np.any(ok):
            raise EstimationError(f"every block of size {n} is constant")
        rd = _block_diameters(zb[ok])
        rd_out.append(rd.mean())
        sd_out.append(sd[ok].mean())
        ratio_out.append(np.mean(rd / sd[ok]))
        used.append(int(ok.sum()))

    return WindowGeometry(
        window_sizes=sizes,
        diameters=np.array(rd_out),
        dispersions=np.array(sd_out),
        ratios=np.array(ratio_out),
        blocks=np.array(used),
    )


def distance_matrix(path: CumulativePath, max_points: int = 5000) -> np.ndarray:
    """Dense Euclidean distance matrix of the path points.

    Meant for plotting and cross-checks only. Raises :class:`SizeError`
    when ``N > max_points``; use :func:`distance_profile` or
    :func:`window_geometry` for long series.
    """
    if path.n > max_points:
        raise SizeError(
            f"N={path.n} exceeds max_points={max_points}; "
            "use distance_profile/window_geometry for long series"
        )
    return squareform(pdist(path.z))


def distance_matrix_csv(d: np.ndarray) -> str:
    """Plain CSV grid (no header) for external heatmap rendering."""
    buf = io.StringIO()
    np.savetxt(buf, d, delimiter=",", fmt="%.17g")
    return buf.getvalue()
