"""Rank-size function, its inverse, and pointwise densities.

Everything is parameterised by the normalized rank ``u`` in ``(0, 1]``.  The
rank-size function ``x(u) = A (1-u)^b / u^a`` is the inverse survival
function, so ``u(x) = 1 - F(x)``.  Densities follow from

    f_Z(z) = x f_X(x) = 1 / (b/(1-u) + a/u),

which only needs ``u(x)``.
"""
from __future__ import annotations

import math

import numpy as np

from ._types import (
    BrfParams,
    ConvergenceError,
    DomainError,
    NumericConfig,
    RankPoint,
)
from .closed_forms import closed_survival

__all__ = [
    "rank_size",
    "log_rank_size",
    "rank_point",
    "bisect_survival",
    "survival",
    "cdf",
    "density_z",
    "density_x",
    "density_from_u",
    "tail_density_z",
]

DEFAULT_CONFIG = NumericConfig()


def _scalar_out(value, scalar: bool):
    return float(value) if scalar else value


def rank_size(params: BrfParams, u):
    """Value ``x`` of an observation with normalized rank ``u``."""
    scalar = np.ndim(u) == 0
    u = np.asarray(u, dtype=float)
    if np.any(~((u > 0) & (u <= 1))):
        raise DomainError("rank u must lie in (0, 1]")
    with np.errstate(over="ignore", under="ignore"):
        x = params.A * (1.0 - u) ** params.b / u**params.a
    return _scalar_out(x, scalar)


def log_rank_size(params: BrfParams, u):
    """``z = log x(u) = log A + b log(1-u) - a log u`` for u in (0, 1)."""
    scalar = np.ndim(u) == 0
    u = np.asarray(u, dtype=float)
    if np.any(~((u > 0) & (u < 1))):
        raise DomainError("rank u must lie in (0, 1)")
    z = params.log_A + params.b * np.log1p(-u) - params.a * np.log(u)
    return _scalar_out(z, scalar)


def rank_point(params: BrfParams, u: float) -> RankPoint:
    x = rank_size(params, u)
    z = math.log(x) if x > 0 else -math.inf
    return RankPoint(u=float(u), x=x, z=z, F=1.0 - float(u))


def bisect_survival(params: BrfParams, x, cfg: NumericConfig = DEFAULT_CONFIG, *, strict=True):
    """Solve ``(x/A) u^a - (1-u)^b = 0`` for u by bisection.

    The residual is evaluated in log form, ``log(x/A) + a log u - b log(1-u)``,
    which is increasing in u.  The bracket is ``(eps, 1 - eps)`` with
    ``eps = min(t, 1e-15)``; a root outside it is reported as 0 or 1, which is
    within ``t`` of the truth.  Returns the bracket midpoint once the bracket
    is narrower than ``t``.

    With ``strict=False`` the pair ``(u, converged)`` is returned instead of
    raising :class:`ConvergenceError`.
    """
    params.require_nondegenerate()
    scalar = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(~(x > 0)):
        raise DomainError("x must be > 0")
    a, b = params.a, params.b
    lx = np.log(x) - params.log_A

    def resid(u):
        return lx + a * np.log(u) - b * np.log1p(-u)

    eps = min(cfg.t, 1e-15)
    lo = np.full_like(x, eps)
    hi = np.full_like(x, 1.0 - eps)
    above = resid(lo) >= 0  # root below the bracket: x is in the far right tail
    below = resid(hi) <= 0  # root above the bracket: far left tail

    n_iter = 0
    while n_iter < cfg.max_iter and np.any(hi - lo > cfg.t):
        mid = 0.5 * (lo + hi)
        pos = resid(mid) > 0
        hi = np.where(pos, mid, hi)
        lo = np.where(pos, lo, mid)
        n_iter += 1
    converged = (hi - lo) <= cfg.t
    u = np.where(above, 0.0, np.where(below, 1.0, 0.5 * (lo + hi)))
    converged = converged | above | below
    if strict:
        if not np.all(converged):
            raise ConvergenceError(
                f"bisection did not reach t={cfg.t} within max_iter={cfg.max_iter}"
            )
        return _scalar_out(u[0] if scalar else u, scalar)
    if scalar:
        return float(u[0]), bool(converged[0])
    return u, converged


def survival(params: BrfParams, x, cfg: NumericConfig = DEFAULT_CONFIG):
    """``u(x) = 1 - F(x)``: exact on analytic parameter lines, else bisection."""
    params.require_nondegenerate()
    u = closed_survival(params, x)
    if u is None:
        u = bisect_survival(params, x, cfg)
    return u


def cdf(params: BrfParams, x, cfg: NumericConfig = DEFAULT_CONFIG):
    u = survival(params, x, cfg)
    return 1.0 - u


def _outside_support(params: BrfParams, lx):
    # a = 0: support (0, A]; b = 0: support [A, inf)
    if params.a == 0:
        return lx > 0
    if params.b == 0:
        return lx < 0
    return np.zeros(np.shape(lx), dtype=bool)


def density_from_u(params: BrfParams, u):
    """``1 / (b/(1-u) + a/u)`` with the correct limits at u = 0 and u = 1."""
    a, b = params.a, params.b
    u = np.asarray(u, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        if a == 0:
            f = (1.0 - u) / b
        elif b == 0:
            f = u / a
        else:
            f = u * (1.0 - u) / (b * u + a * (1.0 - u))
    return np.where(np.isfinite(f), f, 0.0)


def density_z(params: BrfParams, z, cfg: NumericConfig = DEFAULT_CONFIG):
    """Density of ``Z = log X`` at ``z``."""
    params.require_nondegenerate()
    scalar = np.ndim(z) == 0
    z = np.asarray(z, dtype=float)
    with np.errstate(over="ignore", under="ignore"):
        x = np.exp(z)
    # u is a function of z alone; clip x away from 0/inf so the solvers
    # stay finite, the support mask below covers the rest
    x = np.clip(x, np.finfo(float).tiny, np.finfo(float).max)
    u = survival(params, x, cfg)
    f = density_from_u(params, u)
    f = np.where(_outside_support(params, z - params.log_A), 0.0, f)
    return _scalar_out(f, scalar)


def density_x(params: BrfParams, x, cfg: NumericConfig = DEFAULT_CONFIG):
    """Density of X, ``f_X(x) = f_Z(log x) / x = -du/dx``."""
    scalar = np.ndim(x) == 0
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise DomainError("x must be > 0")
    f = np.asarray(density_z(params, np.log(x), cfg)) / x
    return _scalar_out(f, scalar)


def tail_density_z(params: BrfParams, z, side: str):
    """Exponential tail approximants of ``f_Z``.

    ``side="right"`` gives ``exp(-(z - log A)/a) / a`` and ``side="left"``
    gives ``exp((z - log A)/b) / b``.
    """
    params.require_nondegenerate()
    scalar = np.ndim(z) == 0
    zp = np.asarray(z, dtype=float) - params.log_A
    with np.errstate(over="ignore", under="ignore"):
        if side == "right":
            if params.a == 0:
                raise DomainError("right tail needs a > 0")
            f = np.exp(-zp / params.a) / params.a
        elif side == "left":
            if params.b == 0:
                raise DomainError("left tail needs b > 0")
            f = np.exp(zp / params.b) / params.b
        else:
            raise DomainError(f"side must be 'left' or 'right', got {side!r}")
    return _scalar_out(f, scalar)
