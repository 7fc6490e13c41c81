"""Complex log-gamma, complex Beta and the characteristic function of log X."""
from __future__ import annotations

import cmath
import math

import numpy as np

from ._types import BrfParams, DomainError

__all__ = ["log_gamma_complex", "beta_complex", "charfn_z", "PoleError"]


class PoleError(DomainError):
    """Gamma is evaluated at a non-positive integer."""


# Lanczos approximation, g = 7, n = 9
_G = 7.0
_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_LOG_PI = math.log(math.pi)


def _sinpi(z: complex) -> complex:
    # sin(pi z) with exact zeros at the integers
    x, y = z.real, z.imag
    r = math.fmod(x, 2.0)
    s = math.sin(math.pi * r) if r not in (0.0, 1.0, -1.0) else 0.0
    c = math.cos(math.pi * r) if r not in (0.5, -0.5, 1.5, -1.5) else 0.0
    return complex(s * math.cosh(math.pi * y), c * math.sinh(math.pi * y))


def _lanczos(z: complex) -> complex:
    # log Gamma(z) for Re(z) >= 0.5
    z = z - 1.0
    acc = _COEF[0]
    for k in range(1, len(_COEF)):
        acc += _COEF[k] / (z + k)
    t = z + _G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(acc)


def _log_gamma(z: complex) -> complex:
    if z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real):
        raise PoleError(f"Gamma has a pole at {z.real}")
    if z.imag == 0.0 and z.real > 0.0:
        # real axis: the C library value is exact at the small integers
        return complex(math.lgamma(z.real), 0.0)
    if z.real < 0.5:
        # reflection; the 2*pi*i multiple keeps the result on the branch that
        # is analytic off the negative real axis
        shift = math.copysign(2.0 * math.pi, z.imag) * math.floor(0.5 * z.real + 0.25)
        return complex(_LOG_PI, shift) - cmath.log(_sinpi(z)) - _log_gamma(1.0 - z)
    return _lanczos(z)


def log_gamma_complex(s):
    """Principal branch of log Gamma(s), analytic off the negative real axis.

    Accepts a Python/NumPy complex scalar or an array of them.
    """
    if np.ndim(s) == 0:
        return _log_gamma(complex(s))
    s = np.asarray(s, dtype=complex)
    out = np.empty_like(s)
    for idx, v in np.ndenumerate(s):
        out[idx] = _log_gamma(complex(v))
    return out


def beta_complex(p, q):
    """``B(p, q) = Gamma(p) Gamma(q) / Gamma(p + q)`` for complex arguments."""
    p = np.asarray(p, dtype=complex)
    q = np.asarray(q, dtype=complex)
    out = np.exp(log_gamma_complex(p) + log_gamma_complex(q) - log_gamma_complex(p + q))
    return complex(out) if out.ndim == 0 else out


def charfn_z(params: BrfParams, t):
    """Characteristic function of ``Z = log X``: ``A^{it} B(1 - iat, 1 + ibt)``."""
    t_arr = np.asarray(t, dtype=float)
    a, b = params.a, params.b
    scale = np.exp(1j * t_arr * params.log_A)
    val = scale * beta_complex(1.0 - 1j * a * t_arr, 1.0 + 1j * b * t_arr)
    return complex(val) if np.ndim(t) == 0 else val
