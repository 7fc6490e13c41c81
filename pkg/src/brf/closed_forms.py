"""Exact survival functions and densities on the analytically solvable lines.

The BRF ``x(u) = A (1-u)^b / u^a`` can be inverted in closed form when
``a = 0``, ``b = 0``, ``a = b``, ``a = 2b``, ``b = 2a``, ``a = 3b`` or
``b = 3a``.  On the ``k = 2`` lines the inversion is a quadratic, on the
``k = 3`` lines a depressed cubic ``y^3 + p y = q`` with ``p = q`` that is
solved with Cardano's formula.
"""
from __future__ import annotations

import enum

import numpy as np
from scipy.special import expit

from ._types import BrfParams, DomainError

__all__ = [
    "SpecialCase",
    "special_case_of",
    "closed_survival",
    "closed_density_x",
    "lavalette_density_z",
    "TAG_RTOL",
]

TAG_RTOL = 1e-12


class SpecialCase(enum.Enum):
    DEGENERATE = "degenerate"
    POWER_ENDPOINT = "power_endpoint"  # a = 0
    PARETO = "pareto"  # b = 0
    LAVALETTE = "lavalette"  # a = b
    TWICE_RIGHT = "twice_right"  # a = 2b
    TWICE_LEFT = "twice_left"  # b = 2a
    THRICE_RIGHT = "thrice_right"  # a = 3b
    THRICE_LEFT = "thrice_left"  # b = 3a
    GENERAL = "general"

    @property
    def analytic(self) -> bool:
        return self not in (SpecialCase.DEGENERATE, SpecialCase.GENERAL)


def _on_line(big: float, small: float, k: float) -> bool:
    return abs(big - k * small) <= TAG_RTOL * max(big, k * small)


def special_case_of(params: BrfParams) -> SpecialCase:
    """Classify ``params`` onto one of the analytic parameter lines."""
    a, b = params.a, params.b
    if a == 0 and b == 0:
        return SpecialCase.DEGENERATE
    if a == 0:
        return SpecialCase.POWER_ENDPOINT
    if b == 0:
        return SpecialCase.PARETO
    if _on_line(a, b, 1.0):
        return SpecialCase.LAVALETTE
    if _on_line(a, b, 2.0):
        return SpecialCase.TWICE_RIGHT
    if _on_line(b, a, 2.0):
        return SpecialCase.TWICE_LEFT
    if _on_line(a, b, 3.0):
        return SpecialCase.THRICE_RIGHT
    if _on_line(b, a, 3.0):
        return SpecialCase.THRICE_LEFT
    return SpecialCase.GENERAL


def _quadratic_root(w):
    """Root in (0, 1) of ``w y^2 + y - 1 = 0``, free of cancellation."""
    s = np.sqrt(1.0 + 4.0 * w)
    return 2.0 / (1.0 + s), s


def _cardano(c):
    """Real root in (0, 1) of ``y^3 + c y - c = 0`` for ``c > 0``.

    Cardano with ``p = q = c``:
    ``y = cbrt(S + c/2) - cbrt(S - c/2)``, ``S = sqrt((c/2)^2 + (c/3)^3)``.
    ``S`` is formed as ``(c/2) sqrt(1 + 4c/27)`` and ``cbrt(S - c/2)`` as
    ``(c/3) / cbrt(S + c/2)`` so nothing cancels or underflows.  Returns the
    root along with ``S``, ``cbrt(S + c/2)`` and ``cbrt(S - c/2)``.
    """
    with np.errstate(over="ignore", invalid="ignore"):
        root = (c / 2.0) * np.sqrt(1.0 + 4.0 * c / 27.0)
        cp = np.cbrt(root + c / 2.0)
        cm = (c / 3.0) / cp
        y = cp - cm
        # one Newton polish step; the difference of cube roots loses digits
        # once c is large
        y = y - (y**3 + c * (y - 1.0)) / (3.0 * y**2 + c)
    # past c ~ 1e200 S overflows, and y = 1 to double precision anyway;
    # an underflowed c has the root 0
    y = np.where(c > 1e200, 1.0, np.where(c == 0.0, 0.0, y))
    return np.clip(y, 0.0, 1.0), root, cp, cm


def _cardano_derivative(c, y, root, cp, cm):
    """``c dy/dc`` for the Cardano root.

    For ``c <= 1`` this is the differentiated closed form
    ``(1/6) [ (c + cQ/S) / cbrt(S + c/2)^2 + (c - cQ/S) / cbrt(S - c/2)^2 ]``
    with ``Q = c/2 + c^2/9``.  ``c - cQ/S`` equals
    ``-c (2c^3/27 + c^4/81) / (S (S + Q))``, which is used to avoid
    cancellation.  For larger ``c`` that expression loses about ``c^2`` ulps,
    so the implicit derivative ``y^3 / (3y^2 + c)`` of the cubic takes over.
    """
    with np.errstate(over="ignore", invalid="ignore", divide="ignore", under="ignore"):
        q = c / 2.0 + c**2 / 9.0
        first = (c + c * q / root) / cp**2
        # second term over cbrt(S - c/2)^2 = (c/3)^2 / cp^2, with the c^2 cancelled
        second = -9.0 * (2.0 / 27.0 + c / 81.0) * (c / root) * (c / (root + q)) * cp**2
        closed = (first + second) / 6.0
        implicit = y**3 / (3.0 * y**2 + c)
    return np.where(c == 0.0, 0.0, np.where(c <= 1.0, closed, implicit))


def _prep(params: BrfParams, x):
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise DomainError("x must be > 0")
    return x, np.log(x) - params.log_A


def closed_survival(params: BrfParams, x):
    """Exact u(x) = 1 - F(x), or ``None`` when no closed form exists.

    On the ``a = 0`` line the support is ``(0, A]`` and ``u = 0`` is returned
    for ``x > A``; on the ``b = 0`` line ``u = 1`` is returned for ``x < A``.
    """
    tag = special_case_of(params)
    if not tag.analytic:
        return None
    scalar = np.ndim(x) == 0
    x, lx = _prep(params, x)
    a, b = params.a, params.b

    with np.errstate(over="ignore", under="ignore", divide="ignore", invalid="ignore"):
        if tag is SpecialCase.POWER_ENDPOINT:
            u = np.where(lx >= 0, 0.0, -np.expm1(lx / b))
        elif tag is SpecialCase.PARETO:
            u = np.where(lx <= 0, 1.0, np.exp(-lx / a))
        elif tag is SpecialCase.LAVALETTE:
            # 1 / (1 + (x/A)^(1/a)), a logistic function of log(x/A) / a
            u = expit(-lx / a)
        elif tag is SpecialCase.TWICE_RIGHT:
            u, _ = _quadratic_root(np.exp(lx / b))
        elif tag is SpecialCase.TWICE_LEFT:
            w = np.exp(-lx / a)
            s = np.sqrt(1.0 + 4.0 * w)
            # 1 - 2/(1+s) = 4w/(1+s)^2
            u = 4.0 * w / (1.0 + s) ** 2
            u = np.where(np.isfinite(w), u, 1.0)
        elif tag is SpecialCase.THRICE_RIGHT:
            u, *_ = _cardano(np.exp(-lx / b))
        else:  # THRICE_LEFT
            F, *_ = _cardano(np.exp(lx / a))
            # 1 - F = F^3 / d, free of cancellation once F is near 1
            u = np.where(F < 0.5, 1.0 - F, F**3 * np.exp(-lx / a))
    u = np.asarray(u, dtype=float)
    return float(u) if scalar else u


def closed_density_x(params: BrfParams, x):
    """Exact pdf ``f_X(x) = -du/dx`` on the analytic lines, else ``None``."""
    tag = special_case_of(params)
    if not tag.analytic:
        return None
    scalar = np.ndim(x) == 0
    x, lx = _prep(params, x)
    a, b, A = params.a, params.b, params.A

    with np.errstate(over="ignore", under="ignore", divide="ignore", invalid="ignore"):
        if tag is SpecialCase.POWER_ENDPOINT:
            f = np.where(lx <= 0, np.exp((1.0 / b - 1.0) * lx) / (b * A), 0.0)
        elif tag is SpecialCase.PARETO:
            f = np.where(lx >= 0, np.exp(-(1.0 / a + 1.0) * lx) / (a * A), 0.0)
        elif tag is SpecialCase.LAVALETTE:
            # (x/A)^(1/a) / (a x (1 + (x/A)^(1/a))^2), written symmetric in lx
            f = 1.0 / (a * x * (2.0 * np.cosh(lx / (2.0 * a))) ** 2)
        elif tag is SpecialCase.TWICE_RIGHT:
            # (s-1)/(2 b x y) - 1/(b x s) with y = (x/A)^(1/b), s = sqrt(1+4y);
            # the difference collapses to 4y / (b x s (1+s)^2)
            y = np.exp(lx / b)
            s = np.sqrt(1.0 + 4.0 * y)
            f = 4.0 * y / (b * x * s * (1.0 + s) ** 2)
        elif tag is SpecialCase.TWICE_LEFT:
            w = np.exp(-lx / a)
            s = np.sqrt(1.0 + 4.0 * w)
            f = 4.0 * w / (a * x * s * (1.0 + s) ** 2)
        elif tag is SpecialCase.THRICE_RIGHT:
            c = np.exp(-lx / b)
            y, root, cp, cm = _cardano(c)
            f = _cardano_derivative(c, y, root, cp, cm) / (b * x)
            # c overflowed: f ~ 1 / (b x c)
            f = np.where(np.isfinite(c), f, np.exp(lx / b - np.log(b * x)))
        else:  # THRICE_LEFT
            d = np.exp(lx / a)
            y, root, cp, cm = _cardano(d)
            f = _cardano_derivative(d, y, root, cp, cm) / (a * x)
            f = np.where(np.isfinite(d), f, np.exp(-lx / a - np.log(a * x)))
        f = np.where(np.isfinite(f), f, 0.0)
    f = np.asarray(f, dtype=float)
    return float(f) if scalar else f


def lavalette_density_z(params: BrfParams, z):
    """Density of ``log X`` when ``a = b``: a reciprocal squared catenary."""
    if special_case_of(params) is not SpecialCase.LAVALETTE:
        raise DomainError(f"lavalette_density_z needs a = b > 0, got a={params.a}, b={params.b}")
    a = params.a
    zp = np.asarray(z, dtype=float) - params.log_A
    with np.errstate(over="ignore"):
        f = 1.0 / (a * (np.exp(-zp / (2 * a)) + np.exp(zp / (2 * a))) ** 2)
    return float(f) if np.ndim(z) == 0 else f
