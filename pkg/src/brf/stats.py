"""Analytic summary statistics of X and of Z = log X."""
from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.special import gammaln

from ._types import BrfParams, DomainError
from .core import rank_size

__all__ = [
    "LogStats",
    "TaylorCoeffs",
    "XMode",
    "z_stats",
    "z_mode",
    "raw_moment_x",
    "x_mode",
    "x_median",
    "taylor_coeffs",
]


@dataclass(frozen=True)
class LogStats:
    mean: float
    variance: float
    median: float
    mode: float | None  # None when a = 0 or b = 0 (peak on a support edge)
    partition_left: float
    partition_right: float

    @property
    def mode_defined(self) -> bool:
        return self.mode is not None


@dataclass(frozen=True)
class TaylorCoeffs:
    """``f_Z(z) = c1 - c2 (z - z0)^2 + c3 (z - z0)^3 + O((z - z0)^4)``."""

    c1: float
    c2: float
    c3: float
    z0: float


@dataclass(frozen=True)
class XMode:
    u0: float | None
    x0: float | None
    at_boundary: bool


def z_mode(params: BrfParams) -> float:
    """Peak of f_Z; the rank at the peak is ``sqrt(a) / (sqrt(a) + sqrt(b))``."""
    a, b = params.a, params.b
    if a <= 0 or b <= 0:
        raise DomainError("the mode of f_Z is interior only for a > 0 and b > 0")
    return (
        params.log_A
        + (a - b) * math.log(math.sqrt(a) + math.sqrt(b))
        - (a * math.log(a) - b * math.log(b)) / 2.0
    )


def z_stats(params: BrfParams) -> LogStats:
    params.require_nondegenerate()
    a, b = params.a, params.b
    mode = z_mode(params) if a > 0 and b > 0 else None
    sa, sb = math.sqrt(a), math.sqrt(b)
    return LogStats(
        mean=params.log_A + a - b,
        variance=(a - b) ** 2 + math.pi**2 * a * b / 3.0,
        median=params.log_A - math.log(2.0) * (b - a),
        mode=mode,
        partition_left=sb / (sa + sb),
        partition_right=sa / (sa + sb),
    )


def raw_moment_x(params: BrfParams, n: int) -> float:
    """``E[X^n] = A^n B(1 - na, 1 + nb)``; ``math.inf`` once ``n >= 1/a``."""
    if n < 1 or int(n) != n:
        raise DomainError(f"n must be a positive integer, got {n}")
    a, b = params.a, params.b
    if n * a >= 1.0:
        return math.inf
    log_m = (
        n * params.log_A
        + gammaln(1.0 - n * a)
        + gammaln(1.0 + n * b)
        - gammaln(2.0 + n * b - n * a)
    )
    return math.exp(log_m)


def x_mode(params: BrfParams) -> XMode:
    """Peak of f_X from ``d^2 x / du^2 = 0``.

    Uses the ``v = 1/u`` form ``u0 = a(a+1) / (a(a-b+1) + sqrt(ab(a-b+1)))``,
    which has no ``a - b`` denominator and reduces to ``(1+a)/2`` at ``a = b``.
    A root at ``u0 >= 1`` puts the peak on the support edge ``x(1)``.
    """
    params.require_nondegenerate()
    a, b = params.a, params.b
    if a == 0:
        # f_X proportional to x^(1/b - 1) on (0, A]
        if b < 1:
            return XMode(u0=0.0, x0=params.A, at_boundary=True)
        return XMode(u0=None, x0=None, at_boundary=True)
    if a <= b - 1:
        return XMode(u0=None, x0=None, at_boundary=True)
    k = a - b + 1.0
    u0 = a * (a + 1.0) / (a * k + math.sqrt(a * b * k))
    if u0 >= 1.0:
        return XMode(u0=1.0, x0=rank_size(params, 1.0), at_boundary=True)
    return XMode(u0=u0, x0=rank_size(params, u0), at_boundary=False)


def x_median(params: BrfParams) -> float:
    params.require_nondegenerate()
    return params.A * 2.0 ** (params.a - params.b)


def taylor_coeffs(params: BrfParams) -> TaylorCoeffs:
    a, b = params.a, params.b
    if a <= 0 or b <= 0:
        raise DomainError("Taylor coefficients need a > 0 and b > 0")
    sa, sb = math.sqrt(a), math.sqrt(b)
    s = sa + sb
    return TaylorCoeffs(
        c1=1.0 / s**2,
        c2=1.0 / (sa * s**4 * sb),
        c3=(sa - sb) / (a * s**5 * b),
        z0=z_mode(params),
    )
