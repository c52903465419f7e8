"""Pairwise distance-diffusion analysis of long-memory processes.

Hurst exponent estimation from the geometry of cumulative paths: the
rescaled diameter route, the mean-squared-displacement route, local
scale-dependent exponents, and recurrence-probability scaling.
"""

__version__ = "0.1.0"

from .errors import DataError, EstimationError, FitError, ParameterError, PDDAError, SizeError  # noqa: F401
from .arfima import ArfimaSpec, TimeSeries, arfima, fractional_coefficients, generate, innovation_factor  # noqa: F401
from .path import (  # noqa: F401
    CumulativePath,
    DistanceProfile,
    WindowGeometry,
    cumulative_path,
    distance_matrix,
    distance_profile,
    path_from_points,
    window_geometry,
)
from .estimators import EstimatorReport, LogLogFit, estimate, local_hurst, loglog_fit, msd_pdda, rs_pdda  # noqa: F401
from .recurrence import (  # noqa: F401
    RangeDimensionReport,
    RecurrenceCurve,
    decay_report,
    normalize_unit_variance,
    range_dimension,
    recurrence_probability,
)
from .montecarlo import SweepConfig, SweepResult, run_sweep, split_seed  # noqa: F401
