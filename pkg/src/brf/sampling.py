"""Inverse-transform sampling: uniform ranks pushed through ``x(u)``."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._types import BrfParams, DomainError
from .core import log_rank_size, rank_size

__all__ = ["SampleSet", "uniform_ranks", "sample_x", "sample_z"]


@dataclass(frozen=True, eq=False)
class SampleSet:
    values: np.ndarray
    params: BrfParams
    seed: int
    n: int
    log_space: bool = False


def uniform_ranks(n: int, seed: int) -> np.ndarray:
    """``n`` draws uniform on the open interval (0, 1) from PCG64(seed).

    ``Generator.random`` covers [0, 1); exact zeros are redrawn.
    """
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    rng = np.random.default_rng(seed)
    u = rng.random(int(n))
    bad = u == 0.0
    while np.any(bad):
        u[bad] = rng.random(int(bad.sum()))
        bad = u == 0.0
    return u


def sample_x(params: BrfParams, n: int, seed: int) -> SampleSet:
    """Draw ``n`` BRF variates ``x_i = A (1-u_i)^b / u_i^a``."""
    params.require_nondegenerate()
    u = uniform_ranks(n, seed)
    return SampleSet(values=rank_size(params, u), params=params, seed=int(seed), n=int(n))


def sample_z(params: BrfParams, n: int, seed: int) -> SampleSet:
    """Same draws as :func:`sample_x` (same seed), returned as ``z = log x``.

    Computing z directly avoids overflow of x in the far right tail.
    """
    params.require_nondegenerate()
    u = uniform_ranks(n, seed)
    return SampleSet(
        values=log_rank_size(params, u), params=params, seed=int(seed), n=int(n), log_space=True
    )
