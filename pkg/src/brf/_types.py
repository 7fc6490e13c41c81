"""Parameter containers and exception classes shared across the package."""
from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "BrfParams",
    "NumericConfig",
    "RankPoint",
    "BrfError",
    "DomainError",
    "DegenerateDistributionError",
    "ConvergenceError",
    "DataError",
    "ModelViolationError",
]


class BrfError(Exception):
    """Base class for all errors raised by :mod:`brf`."""


class DomainError(BrfError, ValueError):
    """An argument lies outside the domain of the operation."""


class DegenerateDistributionError(BrfError):
    """Raised for a = b = 0, where the law is a point mass at x = A."""


class ConvergenceError(BrfError, ArithmeticError):
    """Root finding did not reach the requested tolerance."""


class DataError(BrfError, ValueError):
    """Input data are unusable (too few points, non-positive values, ...)."""


class ModelViolationError(BrfError):
    """Data are incompatible with the BRF model assumptions."""


@dataclass(frozen=True)
class BrfParams:
    """Scale ``A`` and tail exponents ``a`` (right) and ``b`` (left)."""

    A: float = 1.0
    a: float = 1.0
    b: float = 1.0

    def __post_init__(self):
        for name in ("A", "a", "b"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise DomainError(f"{name} must be finite, got {v}")
            object.__setattr__(self, name, v)
        if self.A <= 0:
            raise DomainError(f"A must be > 0, got {self.A}")
        if self.a < 0 or self.b < 0:
            raise DomainError(f"a and b must be >= 0, got a={self.a}, b={self.b}")

    @property
    def degenerate(self) -> bool:
        return self.a == 0.0 and self.b == 0.0

    @property
    def log_A(self) -> float:
        return math.log(self.A)

    def require_nondegenerate(self) -> None:
        if self.degenerate:
            raise DegenerateDistributionError(
                f"a = b = 0 is a point mass at x = A = {self.A}; no density exists"
            )

    def rescaled(self, c: float) -> BrfParams:
        return BrfParams(self.A * c, self.a, self.b)


@dataclass(frozen=True)
class NumericConfig:
    """Root-finding tolerance ``t`` on u and stencil step ``h``.

    When ``h`` is omitted it defaults to ``max(t**0.2, 1e-4)``, which balances
    the O(h^4) truncation error against the O(t/h) root-finding noise.
    """

    t: float = 1e-12
    h: float | None = None
    max_iter: int = 200

    def __post_init__(self):
        if not 0 < self.t < 1:
            raise DomainError(f"tolerance t must lie in (0, 1), got {self.t}")
        h = max(self.t ** 0.2, 1e-4) if self.h is None else float(self.h)
        if not h > 0:
            raise DomainError(f"step h must be > 0, got {h}")
        if int(self.max_iter) < 1:
            raise DomainError(f"max_iter must be >= 1, got {self.max_iter}")
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "max_iter", int(self.max_iter))


@dataclass(frozen=True)
class RankPoint:
    """One point of the rank-size curve: rank u, value x, z = log x, cdf F."""

    u: float
    x: float
    z: float
    F: float
