"""Parameter estimation and log-space data pipelines.

Three estimators are provided:

* :func:`fit_moments` -- match the sample mean and variance of ``z = log x``
  to ``E[Z] = a - b`` and ``Var[Z] = (a-b)^2 + pi^2 ab / 3`` (with A = 1),
  optionally bias-corrected by a leave-one-out jackknife;
* :func:`fit_tails` -- log-linear regression on the two exponential tails of
  the log-space histogram;
* :func:`fit_rank` -- least squares on the discrete rank-size form
  ``log x = C - a log r + b log(N + 1 - r)``.

:func:`classify_shape` reads the log-space histogram and decides between a
one-sided power law, a lognormal-like law and a two-sided BRF.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from ._types import BrfParams, DataError, ModelViolationError

__all__ = [
    "LogHistogram",
    "FitResult",
    "ShapeClass",
    "ShapeVariant",
    "ShapeThresholds",
    "NegativeDiscriminantError",
    "log_returns",
    "log_histogram",
    "fit_moments",
    "fit_tails",
    "fit_rank",
    "rank_to_continuous_scale",
    "classify_shape",
]


class NegativeDiscriminantError(ModelViolationError):
    """``Zbar^2 (pi^2 - 12) + 12 S^2 < 0``: no real moment estimate exists."""


@dataclass(frozen=True, eq=False)
class LogHistogram:
    edges: np.ndarray
    counts: np.ndarray
    density: np.ndarray
    n_total: int

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.edges)

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.edges[:-1] + self.edges[1:])

    @property
    def n_inside(self) -> int:
        return int(self.counts.sum())

    @property
    def complete(self) -> bool:
        """False when some data fell outside the edges (mass < 1)."""
        return self.n_inside == self.n_total

    def quantile(self, q: float) -> float:
        """Approximate data quantile from the binned counts (linear in-bin)."""
        cum = np.concatenate([[0.0], np.cumsum(self.counts)]) / max(self.n_inside, 1)
        return float(np.interp(q, cum, self.edges))


@dataclass
class FitResult:
    params: BrfParams
    method: str
    diagnostics: dict = field(default_factory=dict)


def log_returns(prices) -> np.ndarray:
    """``log(S_t / S_{t-1})`` for consecutive prices."""
    s = np.asarray(prices, dtype=float)
    if s.ndim != 1 or s.size < 2:
        raise DataError("need at least 2 prices")
    if np.any(~(s > 0)):
        raise DataError("prices must be positive")
    return np.diff(np.log(s))


def log_histogram(values, bins=100, *, pre_logged: bool = False) -> LogHistogram:
    """Histogram of ``z = log x`` with density ``counts / (N * width)``.

    ``bins`` is a bin count (equal widths spanning the data) or an explicit
    increasing sequence of edges in z.  N counts all values, so with explicit
    edges that miss data the density integrates to less than one.
    """
    v = np.asarray(values, dtype=float).ravel()
    if v.size < 10:
        raise DataError(f"need at least 10 values, got {v.size}")
    if not np.all(np.isfinite(v)):
        raise DataError("values must be finite")
    if pre_logged:
        z = v
    else:
        if np.any(v <= 0):
            raise DataError("values must be positive before log-transforming")
        z = np.log(v)
    if np.ndim(bins) == 0:
        nb = int(bins)
        if nb < 1:
            raise DataError("bins must be >= 1")
        lo, hi = float(z.min()), float(z.max())
        if not hi > lo:
            raise DataError("degenerate data range: all values are equal")
        edges = np.linspace(lo, hi, nb + 1)
    else:
        edges = np.asarray(bins, dtype=float)
        if edges.ndim != 1 or edges.size < 2 or np.any(np.diff(edges) <= 0):
            raise DataError("explicit edges must be strictly increasing")
    counts, _ = np.histogram(z, bins=edges)
    density = counts / (z.size * np.diff(edges))
    return LogHistogram(edges=edges, counts=counts.astype(np.int64), density=density, n_total=int(z.size))


def _moment_estimate(mean, var):
    disc = mean**2 * (math.pi**2 - 12.0) + 12.0 * var
    root = np.sqrt(np.maximum(disc, 0.0))
    a = mean / 2.0 + root / (2.0 * math.pi)
    b = -mean / 2.0 + root / (2.0 * math.pi)
    return a, b, disc


def fit_moments(z_values, jackknife: bool = False, *, scale: float | None = None) -> FitResult:
    """Method-of-moments estimate of (a, b) from log-data, taking A = 1.

    Users must pre-scale the data so that ``log A = 0``, or pass ``scale``
    to have ``log(scale)`` subtracted first (the result then carries
    ``A = scale``).  With ``jackknife=True`` the estimate is the
    leave-one-out bias-corrected ``n theta - (n-1) mean(theta_(i))``.
    Negative estimates are clamped to 0 and flagged in the diagnostics.
    """
    z = np.asarray(z_values, dtype=float).ravel()
    n = z.size
    if n < 3:
        raise DataError(f"need at least 3 values, got {n}")
    if not np.all(np.isfinite(z)):
        raise DataError("values must be finite")
    A = 1.0
    if scale is not None:
        A = float(scale)
        z = z - math.log(A)
    mean = float(z.mean())
    ss = float(np.sum((z - mean) ** 2))
    var = ss / (n - 1)
    a_hat, b_hat, disc = _moment_estimate(mean, var)
    if disc < 0:
        raise NegativeDiscriminantError(
            f"discriminant {disc:.6g} < 0: sample variance too small for the mean"
        )
    diag = {"n": n, "mean": mean, "variance": var, "discriminant": disc}
    a_hat, b_hat = float(a_hat), float(b_hat)
    diag["raw_a"], diag["raw_b"] = a_hat, b_hat
    method = "moments"

    if jackknife:
        # leave-one-out mean and variance in O(n)
        d = z - mean
        loo_mean = mean - d / (n - 1)
        loo_var = (ss - d**2 * n / (n - 1)) / (n - 2) if n > 3 else np.full(n, var)
        la, lb, ldisc = _moment_estimate(loo_mean, loo_var)
        a_jk = n * a_hat - (n - 1) * la.mean()
        b_jk = n * b_hat - (n - 1) * lb.mean()
        diag["jackknife_se_a"] = float(np.sqrt((n - 1) / n * np.sum((la - la.mean()) ** 2)))
        diag["jackknife_se_b"] = float(np.sqrt((n - 1) / n * np.sum((lb - lb.mean()) ** 2)))
        diag["jackknife_negative_discriminants"] = int(np.sum(ldisc < 0))
        a_hat, b_hat = float(a_jk), float(b_jk)
        method = "moments_jackknife"

    diag["clamped_a"] = a_hat < 0
    diag["clamped_b"] = b_hat < 0
    a_hat, b_hat = max(a_hat, 0.0), max(b_hat, 0.0)
    return FitResult(params=BrfParams(A, a_hat, b_hat), method=method, diagnostics=diag)


def _ols_line(x, y):
    # slope, intercept, R^2, residual norm
    X = np.column_stack([np.ones_like(x), x])
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    resid = y - X @ coef
    ss_res = float(resid @ resid)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return float(coef[1]), float(coef[0]), r2, math.sqrt(ss_res)


def fit_tails(
    hist: LogHistogram,
    left_quantile: float = 0.1,
    right_quantile: float = 0.9,
    *,
    min_count: int = 5,
) -> FitResult:
    """Estimate (a, b) from the slopes of ``log f`` in the two tails.

    Bins left of the ``left_quantile`` of the data give slope ``1/b``, bins
    right of ``right_quantile`` give slope ``-1/a``.  Bins with fewer than
    ``min_count`` observations are skipped: the log of a small Poisson count
    is biased low, and empty bins have no logarithm.
    """
    if not 0 < left_quantile < right_quantile < 1:
        raise DataError("need 0 < left_quantile < right_quantile < 1")
    c = hist.centers
    usable = hist.counts >= max(int(min_count), 1)
    z_lo = hist.quantile(left_quantile)
    z_hi = hist.quantile(right_quantile)
    diag: dict = {"z_left_cut": z_lo, "z_right_cut": z_hi, "min_count": int(min_count)}

    slopes = {}
    for side, mask in (("left", usable & (c < z_lo)), ("right", usable & (c > z_hi))):
        k = int(mask.sum())
        if k < 3:
            raise DataError(f"{side} tail has {k} usable bins, need at least 3")
        slope, icpt, r2, rn = _ols_line(c[mask], np.log(hist.density[mask]))
        diag[f"{side}_slope"] = slope
        diag[f"{side}_intercept"] = icpt
        diag[f"{side}_r2"] = r2
        diag[f"{side}_residual_norm"] = rn
        diag[f"{side}_bins"] = k
        slopes[side] = slope
    if slopes["left"] <= 0:
        raise ModelViolationError(f"left tail slope {slopes['left']:.4g} is not positive")
    if slopes["right"] >= 0:
        raise ModelViolationError(f"right tail slope {slopes['right']:.4g} is not negative")
    a_hat = -1.0 / slopes["right"]
    b_hat = 1.0 / slopes["left"]
    return FitResult(params=BrfParams(1.0, a_hat, b_hat), method="tails", diagnostics=diag)


def fit_rank(x_values) -> FitResult:
    """Least squares ``log x_(r) = C - a log r + b log(N + 1 - r)``.

    Ranks run 1..N over the data sorted in decreasing order.  The returned
    ``A`` is ``exp(C)`` on the discrete-rank scale; use
    :func:`rank_to_continuous_scale` for the scale on normalized ranks.
    """
    x = np.asarray(x_values, dtype=float).ravel()
    if np.any(~(x > 0)) or not np.all(np.isfinite(x)):
        raise DataError("rank regression needs positive finite values")
    n_distinct = np.unique(x).size
    if n_distinct < 4:
        raise DataError(f"need at least 4 distinct values, got {n_distinct}")
    xs = np.sort(x)[::-1]
    n = xs.size
    r = np.arange(1, n + 1, dtype=float)
    r2 = n + 1.0 - r
    X = np.column_stack([np.ones(n), -np.log(r), np.log(r2)])
    y = np.log(xs)
    coef, _, rank, _ = np.linalg.lstsq(X, y, rcond=None)
    if rank < 3:
        raise DataError("degenerate design matrix")
    resid = y - X @ coef
    C, a_hat, b_hat = (float(v) for v in coef)
    ties = 1.0 - n_distinct / n
    diag = {
        "C": C,
        "n": n,
        "residual_norm": float(np.sqrt(resid @ resid)),
        "rmse": float(np.sqrt(np.mean(resid**2))),
        "tie_fraction": ties,
        "ties_flagged": ties > 0.5,
        "clamped_a": a_hat < 0,
        "clamped_b": b_hat < 0,
    }
    return FitResult(
        params=BrfParams(math.exp(C), max(a_hat, 0.0), max(b_hat, 0.0)),
        method="rank_regression",
        diagnostics=diag,
    )


def rank_to_continuous_scale(C: float, a: float, b: float, n: int) -> float:
    """Scale ``A`` of the BRF on ranks ``u = r / (N + 1)``: ``e^C (N+1)^(b-a)``."""
    return math.exp(C) * (n + 1.0) ** (b - a)


class ShapeVariant(enum.Enum):
    ONE_SIDED_POWER_LAW = "OneSidedPowerLaw"
    LOGNORMAL_LIKE = "LognormalLike"
    TWO_SIDED_BRF = "TwoSidedBrf"
    INSUFFICIENT = "Insufficient"


@dataclass(frozen=True)
class ShapeThresholds:
    min_occupied: int = 20  # occupied bins needed at all
    min_side_bins: int = 5  # bins per side of the peak
    edge_fraction: float = 0.1  # peak this close to the left end -> power law
    r2_linear: float = 0.95
    slope_gap: float = 0.25  # relative slope difference separating BRF/lognormal
    curvature_gain: float = 0.10  # relative RSS drop from adding a quadratic
    min_count: int = 5  # bins below this are too noisy to fit
    peak_drop: float = 1.0  # skip bins within this many log-units of the peak


@dataclass
class ShapeClass:
    variant: ShapeVariant
    evidence: dict


def _side_fit(x, y):
    slope, _, r2, _ = _ols_line(x, y)
    lin_rss = float(np.sum((y - np.polyval(np.polyfit(x, y, 1), x)) ** 2))
    quad_rss = float(np.sum((y - np.polyval(np.polyfit(x, y, 2), x)) ** 2)) if x.size > 3 else lin_rss
    gain = 1.0 - quad_rss / lin_rss if lin_rss > 0 else 0.0
    return {"slope": slope, "r2": r2, "curvature_gain": gain, "bins": int(x.size)}


def classify_shape(hist: LogHistogram, thresholds: ShapeThresholds = ShapeThresholds()) -> ShapeClass:
    """Read the shape of the log-space histogram with the y-axis in log scale.

    Each side of the modal bin is fitted by a line in ``log f``, using bins
    with at least ``min_count`` observations that lie more than ``peak_drop``
    below the peak in ``log f`` (the rounded top of a smooth peak is not part
    of either tail).
    """
    th = thresholds
    counts = hist.counts
    occupied = np.flatnonzero(counts > 0)
    ev: dict = {"occupied_bins": int(occupied.size)}
    if occupied.size < th.min_occupied:
        return ShapeClass(ShapeVariant.INSUFFICIENT, ev)

    c = hist.centers
    logf = np.log(np.where(counts > 0, hist.density, np.nan))
    peak = int(np.argmax(hist.density))
    first, last = occupied[0], occupied[-1]
    peak_frac = (c[peak] - c[first]) / (c[last] - c[first])
    ev["peak_center"] = float(c[peak])
    ev["peak_fraction"] = float(peak_frac)

    usable = (counts >= th.min_count) & (logf <= logf[peak] - th.peak_drop)
    idx = np.arange(counts.size)
    sides = {}
    for name, mask in (("left", usable & (idx < peak)), ("right", usable & (idx > peak))):
        k = int(mask.sum())
        sides[name] = _side_fit(c[mask], logf[mask]) if k >= 3 else {"bins": k}
        ev[name] = sides[name]
    left_occupied = int(np.sum((counts > 0) & (idx < peak)))
    ev["left_occupied_bins"] = left_occupied

    left, right = sides["left"], sides["right"]
    right_linear = right["bins"] >= th.min_side_bins and right["r2"] >= th.r2_linear
    if (peak_frac <= th.edge_fraction or left_occupied < th.min_side_bins) and right_linear:
        return ShapeClass(ShapeVariant.ONE_SIDED_POWER_LAW, ev)
    if left["bins"] < th.min_side_bins or right["bins"] < th.min_side_bins:
        return ShapeClass(ShapeVariant.INSUFFICIENT, ev)

    sl, sr = abs(left["slope"]), abs(right["slope"])
    gap = abs(sl - sr) / max(sl, sr)
    ev["slope_gap"] = gap
    if gap <= th.slope_gap:
        return ShapeClass(ShapeVariant.LOGNORMAL_LIKE, ev)
    # linearity outranks the quadratic gain: a smooth two-sided peak keeps
    # some curvature on both flanks even when the tails are exponential
    if left["r2"] >= th.r2_linear and right["r2"] >= th.r2_linear:
        return ShapeClass(ShapeVariant.TWO_SIDED_BRF, ev)
    if left["curvature_gain"] > th.curvature_gain and right["curvature_gain"] > th.curvature_gain:
        return ShapeClass(ShapeVariant.LOGNORMAL_LIKE, ev)
    return ShapeClass(ShapeVariant.INSUFFICIENT, ev)
