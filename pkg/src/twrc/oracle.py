"""Brute-force reference computations used to certify the optimizer.

Nothing in here refines or searches cleverly: parameters are swept on a
uniform grid and every candidate region is solved exactly by enumerating the
vertices of the polygon.  Slow by design.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelParams, RatePair, capacity_c, polygon_lp
from .schemes import Scheme, constraint_table

_CHUNK = 40_000


@dataclass(frozen=True)
class OracleConfig:
    step: float = 1e-3
    rate_step: float = 1e-3

    def __post_init__(self):
        if not (0 < self.step <= 0.1):
            raise ValueError(f"step must be in (0, 0.1], got {self.step}")
        if not (0 < self.rate_step <= 0.1):
            raise ValueError(f"rate_step must be in (0, 0.1], got {self.rate_step}")


def unit_grid(step: float) -> np.ndarray:
    """``{i/n : i = 0..n}`` with ``n = ceil(1/step)``.

    Exact division keeps grids nested: halving the step yields a superset.
    """
    n = int(math.ceil(1.0 / step - 1e-9))
    return np.arange(n + 1) / n


def param_grid(scheme: Scheme, step: float) -> np.ndarray:
    """All grid points of the scheme's parameter box, shape ``(N, n_params)``."""
    d = scheme.n_params
    if d == 0:
        return np.zeros((1, 0))
    axis = unit_grid(step)
    mesh = np.meshgrid(*([axis] * d), indexing="ij")
    return np.column_stack([m.ravel() for m in mesh])


def _grid_values(scheme: Scheme, params: ChannelParams, cfg: OracleConfig, w) -> np.ndarray:
    grid = param_grid(scheme, cfg.step)
    out = np.empty(len(grid))
    for start in range(0, len(grid), _CHUNK):
        chunk = grid[start:start + _CHUNK]
        A, C = constraint_table(scheme, params, chunk if scheme.n_params else None)
        out[start:start + len(chunk)] = polygon_lp(A, C, w)
    return out


def grid_max_sum(scheme: Scheme, params: ChannelParams, cfg: OracleConfig = OracleConfig()) -> float:
    """Best sum rate over the uniform parameter grid."""
    return float(_grid_values(scheme, params, cfg, (1.0, 1.0)).max())


def grid_argmax_sum(scheme: Scheme, params: ChannelParams, cfg: OracleConfig = OracleConfig()):
    """``(value, parameters)`` of the best grid point (first in grid order)."""
    vals = _grid_values(scheme, params, cfg, (1.0, 1.0))
    i = int(np.argmax(vals))
    return float(vals[i]), tuple(param_grid(scheme, cfg.step)[i])


def _dominated(A: np.ndarray, C: np.ndarray, r1: float, r2: float, slack: float) -> np.ndarray:
    """Whether ``(r1, r2)`` is coordinatewise below some point of each polygon.

    Difference constraints (``R1 - R2 <= c`` and the reverse) are satisfied by
    raising the smaller coordinate to its least admissible value; every other
    constraint has nonnegative coefficients and so is monotone, which makes the
    least lifted point the right one to test.
    """
    n = C.shape[0]
    q1 = np.full(n, float(r1))
    q2 = np.full(n, float(r2))
    diff_rows = [i for i, (a, b) in enumerate(A) if a * b < 0]
    for _ in range(len(diff_rows) + 1):
        for i in diff_rows:
            if A[i, 0] > 0:
                q2 = np.maximum(q2, q1 - C[:, i])
            else:
                q1 = np.maximum(q1, q2 - C[:, i])
    lhs = np.outer(q1, A[:, 0]) + np.outer(q2, A[:, 1])
    return np.all(lhs <= C + slack, axis=1)


def contains(
    scheme: Scheme,
    params: ChannelParams,
    point,
    cfg: OracleConfig = OracleConfig(),
    slack: float = 1e-9,
) -> bool:
    """True when some grid choice of scheme parameters achieves ``point``.

    Achievability is down-closed (a user may always send fewer bits), so the
    point counts as achieved when it is dominated by a point of a region.
    """
    if isinstance(point, RatePair):
        r1, r2 = point.r1, point.r2
    else:
        r1, r2 = (float(v) for v in point)
    if r1 < -slack or r2 < -slack:
        return False
    grid = param_grid(scheme, cfg.step)
    for start in range(0, len(grid), _CHUNK):
        chunk = grid[start:start + _CHUNK]
        A, C = constraint_table(scheme, params, chunk if scheme.n_params else None)
        if _dominated(A, C, r1, r2, slack).any():
            return True
    return False


def frontier_r2(
    scheme: Scheme, params: ChannelParams, r1: float, cfg: OracleConfig = OracleConfig()
) -> float:
    """Largest multiple of ``cfg.rate_step`` that user 2 can reach while user 1 gets ``r1``.

    Returns ``-inf`` when ``r1`` itself is out of reach.  Uses only ``contains``.
    """
    if not contains(scheme, params, (r1, 0.0), cfg):
        return -math.inf
    top = int(math.ceil(capacity_c(params.snr2) / cfg.rate_step)) + 1
    lo, hi = 0, top
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if contains(scheme, params, (r1, mid * cfg.rate_step), cfg):
            lo = mid
        else:
            hi = mid
    return lo * cfg.rate_step
