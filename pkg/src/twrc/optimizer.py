"""Sum-rate maximisation over scheme parameters, frontier tracing, winner selection.

The parameter boxes are at most two-dimensional and the objectives have
kinks (clamps, minima), so the search is a dense grid followed by a few
rounds of local box refinement rather than anything gradient based.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np

from .channel import ChannelParams, RatePair, polygon_lp, validate
from .schemes import (
    ACHIEVABLE,
    Scheme,
    SchemeParams,
    constraint_table,
    make_params,
    oriented,
    region,
    sum_rate_closed_form,
)

# Relative width of the band of grid values treated as tied for the argmax.
_TIE_EPS = 1e-12


@dataclass(frozen=True)
class SearchConfig:
    coarse_grid: int = 201
    refine_iters: int = 3
    refine_shrink: float = 0.1
    tol: float = 1e-6

    def __post_init__(self):
        if int(self.coarse_grid) != self.coarse_grid or self.coarse_grid < 2:
            raise ValueError(f"coarse_grid must be an integer >= 2, got {self.coarse_grid}")
        if int(self.refine_iters) != self.refine_iters or self.refine_iters < 0:
            raise ValueError(f"refine_iters must be an integer >= 0, got {self.refine_iters}")
        if not (0 < self.refine_shrink < 1):
            raise ValueError(f"refine_shrink must be in (0, 1), got {self.refine_shrink}")
        if not self.tol > 0:
            raise ValueError(f"tol must be > 0, got {self.tol}")


@dataclass(frozen=True)
class SchemeResult:
    scheme: Scheme
    sum_rate: float
    best_params: SchemeParams
    argmax: RatePair
    swapped: bool = False

    @property
    def params_dict(self) -> Dict[str, float]:
        if self.best_params is None:
            return {}
        return dict(zip(self.scheme.param_names, self.best_params.as_tuple()))

    def to_dict(self) -> dict:
        return {
            "scheme": self.scheme.slug,
            "sum_rate": self.sum_rate,
            "params": self.params_dict,
            "argmax": [self.argmax.r1, self.argmax.r2],
            "swapped": self.swapped,
        }


def _pick(theta: np.ndarray, values: np.ndarray) -> Tuple[np.ndarray, float]:
    """Best value; among near-ties the lexicographically largest parameter row."""
    best = float(np.max(values))
    if not np.isfinite(best):
        return theta[-1], best
    ties = np.flatnonzero(values >= best - _TIE_EPS * (1.0 + abs(best)))
    rows = theta[ties]
    order = np.lexsort(rows.T[::-1])
    return rows[order[-1]], best


def _box_grid(lo: np.ndarray, hi: np.ndarray, n: int) -> np.ndarray:
    axes = [np.linspace(a, b, n) for a, b in zip(lo, hi)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.column_stack([m.ravel() for m in mesh])


@lru_cache(maxsize=8)
def _unit_box(dim: int, n: int) -> np.ndarray:
    grid = _box_grid(np.zeros(dim), np.ones(dim), n)
    grid.flags.writeable = False
    return grid


def grid_refine(
    objective: Callable[[np.ndarray], np.ndarray],
    dim: int,
    cfg: SearchConfig,
    seeds: Sequence[Sequence[float]] = (),
) -> Tuple[np.ndarray, float]:
    """Maximise a vectorised objective over ``[0, 1]^dim``.

    A full grid of ``cfg.coarse_grid`` points per axis is followed by
    ``cfg.refine_iters`` passes over a box around the incumbent whose half-width
    shrinks by ``cfg.refine_shrink`` each pass.  Stops early once a pass gains
    less than ``cfg.tol``.
    """
    theta = _unit_box(dim, cfg.coarse_grid)
    if len(seeds):
        theta = np.vstack([theta, np.asarray(seeds, dtype=float).reshape(-1, dim)])
    best_x, best_v = _pick(theta, objective(theta))
    half = 0.5
    for _ in range(cfg.refine_iters):
        half *= cfg.refine_shrink
        lo = np.clip(best_x - half, 0.0, 1.0)
        hi = np.clip(best_x + half, 0.0, 1.0)
        cand = np.vstack([_box_grid(lo, hi, cfg.coarse_grid), best_x[None, :]])
        x, v = _pick(cand, objective(cand))
        gain = v - best_v
        if v > best_v or (v == best_v and tuple(x) > tuple(best_x)):
            best_x, best_v = x, v
        if gain < cfg.tol:
            break
    return best_x, best_v


def optimize_sum_rate(
    scheme: Scheme, params: ChannelParams, cfg: SearchConfig = SearchConfig()
) -> SchemeResult:
    """Largest sum rate of ``scheme`` over its parameter box.

    Rate-splitting schemes are solved with the stronger user in the first
    role; the result is reported in the caller's user order with ``swapped``
    set when the roles were exchanged.
    """
    validate(params)
    swapped = False
    work = params
    if scheme.needs_orientation:
        work, swapped = oriented(params)

    if scheme.n_params:
        x, _ = grid_refine(
            lambda th: sum_rate_closed_form(scheme, work, th), scheme.n_params, cfg
        )
        sp = make_params(scheme, np.clip(x, 0.0, 1.0))
    else:
        sp = None
    value, vertex = region(scheme, work, sp).max_sum_rate()
    if swapped:
        vertex = vertex.swapped()
    return SchemeResult(scheme, value, sp, vertex, swapped)


def pareto_frontier(
    scheme: Scheme,
    params: ChannelParams,
    cfg: SearchConfig = SearchConfig(),
    n_points: int = 21,
) -> list:
    """Upper boundary of the union of the scheme's regions over its parameters.

    Returns ``n_points`` pairs ``(t, max R2 given R1 >= t)`` for ``t`` evenly
    spread over ``[0, max R1]``.  No time-sharing between parameter choices.
    """
    if n_points < 2:
        raise ValueError("n_points must be >= 2")
    validate(params)
    work, swapped = oriented(params) if scheme.needs_orientation else (params, False)
    # user axis of the caller's R1 / R2 inside the working orientation
    u1, u2 = (1, 0) if swapped else (0, 1)
    w_first = np.eye(2)[u1]
    w_second = np.eye(2)[u2]

    def table(th):
        return constraint_table(scheme, work, th if scheme.n_params else None)

    def lp(th, w, floor=None):
        A, C = table(th)
        if floor is not None:
            row = np.zeros((1, 2))
            row[0, u1] = -1.0
            A = np.vstack([A, row])
            C = np.hstack([C, np.full((C.shape[0], 1), -floor)])
        return polygon_lp(A, C, w)

    dim = scheme.n_params
    if dim:
        x1, r1_max = grid_refine(lambda th: lp(th, w_first), dim, cfg)
        seeds = [x1]
    else:
        r1_max = float(lp(None, w_first)[0])
        seeds = []

    targets = np.linspace(0.0, max(r1_max, 0.0), n_points)
    out = []
    for t in targets:
        if dim:
            _, r2 = grid_refine(lambda th: lp(th, w_second, t), dim, cfg, seeds=seeds)
        else:
            r2 = float(lp(None, w_second, t)[0])
        out.append(r2 if np.isfinite(r2) and r2 > 0 else 0.0)
    # the exact frontier is nonincreasing and every lower point stays achievable
    r2s = np.minimum.accumulate(np.asarray(out))
    return [RatePair(float(t), float(r)) for t, r in zip(targets, r2s)]


@dataclass(frozen=True)
class WinnerCell:
    snr1: float
    snr2: float
    sums: Dict[Scheme, float]
    winners: Tuple[Scheme, ...]
    margin: float
    results: Optional[Dict[Scheme, SchemeResult]] = field(default=None, compare=False, repr=False)

    @property
    def label(self) -> Scheme:
        """Single display label: first winner in CDF, nested, RS-sim, RS-TDM order."""
        return self.winners[0]


def classify(sums: Dict[Scheme, float], tie_tol: float) -> Tuple[Tuple[Scheme, ...], float]:
    """Winner set (all within ``tie_tol`` of the best) and margin to the runner-up."""
    order = [s for s in ACHIEVABLE if s in sums] + [s for s in sums if s not in ACHIEVABLE]
    best = max(sums.values())
    winners = tuple(s for s in order if sums[s] >= best - tie_tol)
    rest = [sums[s] for s in order if s not in winners]
    margin = best - max(rest) if rest else 0.0
    return winners, max(margin, 0.0)


def winner_at(
    params: ChannelParams,
    cfg: SearchConfig = SearchConfig(),
    tie_tol: float = 1e-4,
    schemes: Sequence[Scheme] = ACHIEVABLE,
) -> WinnerCell:
    """Which achievable schemes attain the highest optimised sum rate."""
    if not tie_tol > 0:
        raise ValueError("tie_tol must be > 0")
    if Scheme.OUTER_BOUND in schemes:
        raise ValueError("the outer bound is not an achievable scheme")
    results = {s: optimize_sum_rate(s, params, cfg) for s in schemes}
    sums = {s: r.sum_rate for s, r in results.items()}
    winners, margin = classify(sums, tie_tol)
    return WinnerCell(params.snr1, params.snr2, sums, winners, margin, results)

