"""The Beta Rank Function ``x(u) = A (1-u)^b / u^a`` and its log-space law.

``u`` is the normalized rank (the survival probability), ``a`` controls the
right tail and ``b`` the left tail of ``Z = log X``.
"""
from ._types import (
    BrfError,
    BrfParams,
    ConvergenceError,
    DataError,
    DegenerateDistributionError,
    DomainError,
    ModelViolationError,
    NumericConfig,
    RankPoint,
)
from .closed_forms import (
    SpecialCase,
    closed_density_x,
    closed_survival,
    lavalette_density_z,
    special_case_of,
)
from .core import (
    DEFAULT_CONFIG,
    bisect_survival,
    cdf,
    density_from_u,
    density_x,
    density_z,
    log_rank_size,
    rank_point,
    rank_size,
    survival,
    tail_density_z,
)
from .estimation import (
    FitResult,
    LogHistogram,
    NegativeDiscriminantError,
    ShapeClass,
    ShapeThresholds,
    ShapeVariant,
    classify_shape,
    fit_moments,
    fit_rank,
    fit_tails,
    log_histogram,
    log_returns,
    rank_to_continuous_scale,
)
from .numeric_pdf import PdfGrid, error_bound, numeric_cdf, pdf_grid
from .sampling import SampleSet, sample_x, sample_z, uniform_ranks
from .special import PoleError, beta_complex, charfn_z, log_gamma_complex
from .stats import (
    LogStats,
    TaylorCoeffs,
    XMode,
    raw_moment_x,
    taylor_coeffs,
    x_median,
    x_mode,
    z_mode,
    z_stats,
)

__version__ = "0.1.0"
