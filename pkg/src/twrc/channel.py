"""Channel parameters, rate-region primitives and the Gaussian capacity function.

Everything here is linear-unit (powers and noise variances, never dB) and all
rates are in bits per channel use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np


class ValidationError(ValueError):
    """Invalid channel or scheme parameters."""


class OrientationError(ValueError):
    """A rate-splitting scheme was given p1 < p2; swap the user roles."""


class UnboundedRegionError(ValueError):
    """A region admits unbounded sum rate (a construction bug)."""


def capacity_c(x: float) -> float:
    """Gaussian capacity ``0.5 * log2(1 + x)`` for a nonnegative SNR ``x``."""
    x = float(x)
    if not math.isfinite(x) or x < 0:
        raise ValueError(f"capacity_c needs a finite SNR >= 0, got {x!r}")
    return 0.5 * math.log2(1.0 + x)


def clamp_plus(x: float) -> float:
    """``max(x, 0)``; maps the ``-inf`` produced by ``log(0)`` to 0."""
    if math.isnan(x):
        raise ValueError("clamp_plus got NaN")
    return x if x > 0.0 else 0.0


def half_log2(x):
    """Vectorised ``0.5 * log2(x)`` with ``log2(0) = -inf`` and no warnings."""
    with np.errstate(divide="ignore"):
        return 0.5 * np.log2(x)


@dataclass(frozen=True)
class Downlink:
    p0: float
    n1: float
    n2: float


@dataclass(frozen=True)
class ChannelParams:
    """Uplink powers ``p1, p2`` and noise ``n0``; optional relay downlink.

    ``downlink=None`` means the relay power is effectively unlimited, so the
    downlink constraints never bind and are dropped.
    """

    p1: float
    p2: float
    n0: float
    downlink: Optional[Downlink] = None

    @property
    def snr1(self) -> float:
        return self.p1 / self.n0

    @property
    def snr2(self) -> float:
        return self.p2 / self.n0

    @property
    def swap_needed(self) -> bool:
        return self.p2 > self.p1

    def swapped(self) -> "ChannelParams":
        """Exchange the two users (uplink powers and downlink noises)."""
        dl = self.downlink
        if dl is not None:
            dl = Downlink(p0=dl.p0, n1=dl.n2, n2=dl.n1)
        return replace(self, p1=self.p2, p2=self.p1, downlink=dl)

    def downlink_bounds(self) -> Tuple[float, float]:
        """Downlink limits ``(R1 max, R2 max)``; ``inf`` when inactive.

        User 2 decodes W1 over the N2 channel, user 1 decodes W2 over N1.
        """
        if self.downlink is None:
            return math.inf, math.inf
        dl = self.downlink
        return capacity_c(dl.p0 / dl.n2), capacity_c(dl.p0 / dl.n1)


def validate(params: ChannelParams) -> ChannelParams:
    """Check the parameter invariants and return ``params`` unchanged.

    All offending fields are listed in a single ValidationError.
    """
    problems = []

    def check(name, value, strict):
        try:
            v = float(value)
        except (TypeError, ValueError):
            problems.append(f"{name} must be a number")
            return
        if not math.isfinite(v):
            problems.append(f"{name} must be finite")
        elif strict and v <= 0:
            problems.append(f"{name} must be > 0")
        elif not strict and v < 0:
            problems.append(f"{name} must be >= 0")

    check("p1", params.p1, False)
    check("p2", params.p2, False)
    check("n0", params.n0, True)
    if params.downlink is not None:
        check("p0", params.downlink.p0, False)
        check("n1", params.downlink.n1, True)
        check("n2", params.downlink.n2, True)
    if problems:
        raise ValidationError("; ".join(problems))
    return params


@dataclass(frozen=True)
class RatePair:
    r1: float
    r2: float

    def __post_init__(self):
        for name in ("r1", "r2"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise ValueError(f"{name} must be finite and >= 0, got {v!r}")

    @property
    def total(self) -> float:
        return self.r1 + self.r2

    def swapped(self) -> "RatePair":
        return RatePair(self.r2, self.r1)


@dataclass(frozen=True)
class LinearConstraint:
    """``a*R1 + b*R2 <= c`` with ``a, b`` in {-1, 0, 1}."""

    a: int
    b: int
    c: float

    def __post_init__(self):
        if self.a not in (-1, 0, 1) or self.b not in (-1, 0, 1):
            raise ValueError(f"coefficients must be in {{-1, 0, 1}}, got ({self.a}, {self.b})")
        if self.a == 0 and self.b == 0:
            raise ValueError("constraint needs a nonzero coefficient")
        if not math.isfinite(self.c):
            raise ValueError("infinite bounds are omitted, not stored")

    def slack(self, r1: float, r2: float) -> float:
        return self.c - (self.a * r1 + self.b * r2)

    def mirrored(self) -> "LinearConstraint":
        return LinearConstraint(self.b, self.a, self.c)


# Candidate recession directions for a polygon in the nonnegative quadrant
# whose constraint coefficients are in {-1, 0, 1}.
_RAYS = ((1.0, 0.0), (0.0, 1.0), (1.0, 1.0))

# Feasibility slack for vertex filtering, relative to the bound magnitude.
_FEAS_TOL = 1e-12


@dataclass(frozen=True)
class RateRegion:
    """A bounded convex polygon ``{R >= 0 : a*R1 + b*R2 <= c for each constraint}``."""

    constraints: Tuple[LinearConstraint, ...] = field(default_factory=tuple)

    def __post_init__(self):
        seen = []
        for con in self.constraints:
            if con not in seen:
                seen.append(con)
        object.__setattr__(self, "constraints", tuple(seen))
        for d1, d2 in _RAYS:
            if all(con.a * d1 + con.b * d2 <= 0 for con in self.constraints):
                raise UnboundedRegionError(
                    f"region is unbounded along direction ({d1:g}, {d2:g})"
                )

    @classmethod
    def from_bounds(cls, bounds: Iterable[Tuple[int, int, float]]) -> "RateRegion":
        """Build from ``(a, b, c)`` triples, skipping ``c = +inf``."""
        cons = [LinearConstraint(a, b, float(c)) for a, b, c in bounds if c != math.inf]
        return cls(tuple(cons))

    def contains(self, point: RatePair | Sequence[float], slack: float = 1e-9) -> bool:
        r1, r2 = _as_xy(point)
        if r1 < -slack or r2 < -slack:
            return False
        return all(con.slack(r1, r2) >= -slack for con in self.constraints)

    def mirrored(self) -> "RateRegion":
        """The same region with the roles of R1 and R2 exchanged."""
        return RateRegion(tuple(con.mirrored() for con in self.constraints))

    def vertices(self) -> list:
        """Feasible pairwise intersections of the boundary lines (may repeat)."""
        lines = [(con.a, con.b, con.c) for con in self.constraints]
        lines += [(-1, 0, 0.0), (0, -1, 0.0)]
        out = []
        for i in range(len(lines)):
            a1, b1, c1 = lines[i]
            for j in range(i + 1, len(lines)):
                a2, b2, c2 = lines[j]
                det = a1 * b2 - a2 * b1
                if det == 0:
                    continue
                x = (c1 * b2 - c2 * b1) / det
                y = (a1 * c2 - a2 * c1) / det
                if self._feasible(x, y):
                    out.append((x if x > 0 else 0.0, y if y > 0 else 0.0))
        return out

    def _feasible(self, x: float, y: float) -> bool:
        if x < -_FEAS_TOL or y < -_FEAS_TOL:
            return False
        for con in self.constraints:
            if con.a * x + con.b * y > con.c + _FEAS_TOL * (1.0 + abs(con.c)):
                return False
        return True

    def max_sum_rate(self) -> Tuple[float, RatePair]:
        """Maximise ``R1 + R2`` by vertex enumeration.

        Ties are broken towards the lexicographically largest ``(R1, R2)``.
        """
        verts = self.vertices()
        if not verts:
            raise ValidationError("region is empty (a bound is negative)")
        best = max(x + y for x, y in verts)
        ties = [v for v in verts if v[0] + v[1] >= best - _FEAS_TOL * (1.0 + best)]
        r1, r2 = max(ties)
        return best, RatePair(r1, r2)


def _as_xy(point) -> Tuple[float, float]:
    if isinstance(point, RatePair):
        return point.r1, point.r2
    r1, r2 = point
    return float(r1), float(r2)


def polygon_lp(A: np.ndarray, C: np.ndarray, w) -> np.ndarray:
    """``max w.R`` over each polygon ``{R >= 0, A R <= C[i]}`` by vertex enumeration.

    ``A`` is ``(k, 2)``, ``C`` is ``(N, k)``.  Empty polygons give ``-inf``.
    """
    w = np.asarray(w, dtype=float)
    n, k = C.shape
    lines = np.vstack([A, [[-1.0, 0.0], [0.0, -1.0]]])
    rhs = np.hstack([C, np.zeros((n, 2))])
    best = np.full(n, -np.inf)
    m = k + 2
    for i in range(m):
        for j in range(i + 1, m):
            (a1, b1), (a2, b2) = lines[i], lines[j]
            det = a1 * b2 - a2 * b1
            if det == 0:
                continue
            c1, c2 = rhs[:, i], rhs[:, j]
            x = (c1 * b2 - c2 * b1) / det
            y = (a1 * c2 - a2 * c1) / det
            lhs = np.outer(x, A[:, 0]) + np.outer(y, A[:, 1])
            ok = np.all(lhs <= C + _FEAS_TOL * (1.0 + np.abs(C)), axis=1)
            ok &= (x >= -_FEAS_TOL) & (y >= -_FEAS_TOL)
            val = np.where(ok, w[0] * np.maximum(x, 0.0) + w[1] * np.maximum(y, 0.0), -np.inf)
            np.maximum(best, val, out=best)
    return best
