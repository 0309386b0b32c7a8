"""Rate regions of the outer bound and the four downlink-optimal relaying schemes.

Every scheme is described by a fixed table of constraint coefficients plus a
vectorised function giving the right-hand sides for a batch of scheme
parameters.  The scalar ``*_region`` constructors are thin wrappers over the
batched tables, so the optimizer, the oracle and the region objects all read
their bounds from one place.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from .channel import (
    ChannelParams,
    OrientationError,
    RatePair,
    RateRegion,
    ValidationError,
    capacity_c,
    half_log2,
)


class Scheme(enum.Enum):
    OUTER_BOUND = "OuterBound"
    CDF = "CDF"
    FDF_NESTED = "FdfNested"
    FDF_RS_SIM = "FdfRsSim"
    FDF_RS_TDM = "FdfRsTdm"

    @property
    def slug(self) -> str:
        return _SLUGS[self]

    @property
    def n_params(self) -> int:
        return _N_PARAMS[self]

    @property
    def param_names(self) -> Tuple[str, ...]:
        return _PARAM_NAMES[self]

    @property
    def needs_orientation(self) -> bool:
        """Rate-splitting schemes assume user 1 has the larger power."""
        return self in (Scheme.FDF_RS_SIM, Scheme.FDF_RS_TDM)

    @classmethod
    def parse(cls, name: str) -> "Scheme":
        key = name.strip()
        for s in cls:
            if key in (s.value, s.slug, s.name):
                return s
        choices = ", ".join(s.slug for s in cls)
        raise ValueError(f"unknown scheme {name!r} (choose from {choices})")


_SLUGS = {
    Scheme.OUTER_BOUND: "outer_bound",
    Scheme.CDF: "cdf",
    Scheme.FDF_NESTED: "fdf_nested",
    Scheme.FDF_RS_SIM: "fdf_rs_sim",
    Scheme.FDF_RS_TDM: "fdf_rs_tdm",
}
_PARAM_NAMES = {
    Scheme.OUTER_BOUND: (),
    Scheme.CDF: (),
    Scheme.FDF_NESTED: ("delta1", "delta2"),
    Scheme.FDF_RS_SIM: ("eta1", "eta2"),
    Scheme.FDF_RS_TDM: ("alpha",),
}
_N_PARAMS = {s: len(names) for s, names in _PARAM_NAMES.items()}

ACHIEVABLE = (Scheme.CDF, Scheme.FDF_NESTED, Scheme.FDF_RS_SIM, Scheme.FDF_RS_TDM)


def _unit_interval(**values):
    for name, v in values.items():
        if not (0.0 <= v <= 1.0):
            raise ValidationError(f"{name} must lie in [0, 1], got {v!r}")


@dataclass(frozen=True)
class NestedParams:
    """Power fractions used by each user for the nested lattice codewords."""

    delta1: float = 1.0
    delta2: float = 1.0

    def __post_init__(self):
        _unit_interval(delta1=self.delta1, delta2=self.delta2)

    def as_tuple(self):
        return (self.delta1, self.delta2)


@dataclass(frozen=True)
class RsSimParams:
    """``eta2``: shared lattice power fraction of P2; ``eta1``: fraction of user 1's
    leftover power spent on the Gaussian codeword."""

    eta1: float = 1.0
    eta2: float = 1.0

    def __post_init__(self):
        _unit_interval(eta1=self.eta1, eta2=self.eta2)

    def as_tuple(self):
        return (self.eta1, self.eta2)


@dataclass(frozen=True)
class TdmParams:
    """Fraction of channel uses given to the lattice phase."""

    alpha: float = 0.5

    def __post_init__(self):
        _unit_interval(alpha=self.alpha)

    def as_tuple(self):
        return (self.alpha,)


SchemeParams = Union[NestedParams, RsSimParams, TdmParams, None]

_PARAM_TYPES = {
    Scheme.FDF_NESTED: NestedParams,
    Scheme.FDF_RS_SIM: RsSimParams,
    Scheme.FDF_RS_TDM: TdmParams,
}


def make_params(scheme: Scheme, values) -> SchemeParams:
    """Scheme-parameter record from a flat sequence (empty for CDF/outer)."""
    cls = _PARAM_TYPES.get(scheme)
    if cls is None:
        if len(values):
            raise ValidationError(f"{scheme.value} takes no parameters")
        return None
    return cls(*(float(v) for v in values))


# ---------------------------------------------------------------------------
# Vectorised bound formulas.  Each takes arrays of scheme parameters and
# returns arrays of (already clamped) right-hand sides.


def _check_oriented(params: ChannelParams):
    if params.p1 < params.p2:
        raise OrientationError(
            f"rate-splitting schemes need p1 >= p2 (got p1={params.p1}, p2={params.p2}); "
            "swap the user roles"
        )


def nested_bounds(params: ChannelParams, delta1, delta2):
    """Uplink ``(R1 max, R2 max)`` of FDF with nested lattice codes."""
    x1 = np.asarray(delta1, dtype=float) * params.p1
    x2 = np.asarray(delta2, dtype=float) * params.p2
    total = x1 + x2
    with np.errstate(divide="ignore", invalid="ignore"):
        r1 = 0.5 * np.log2(x1 / total + x1 / params.n0)
        r2 = 0.5 * np.log2(x2 / total + x2 / params.n0)
    # fmax drops the NaN of zero total power (0/0) and the -inf of log(0)
    return np.fmax(r1, 0.0), np.fmax(r2, 0.0)


def rs_sim_bounds(params: ChannelParams, eta1, eta2):
    """``(R2 max, R1-R2 max)`` of rate splitting with simultaneous transmission.

    The lattice rate uses the ``1/2 + SNR`` form; negative values clamp to 0.
    """
    _check_oriented(params)
    eta1 = np.asarray(eta1, dtype=float)
    eta2 = np.asarray(eta2, dtype=float)
    lattice_power = eta2 * params.p2
    gaussian_power = eta1 * (params.p1 - lattice_power)
    sinr = lattice_power / (params.n0 + gaussian_power)
    r2 = np.maximum(half_log2(0.5 + sinr), 0.0)
    diff = 0.5 * np.log2(1.0 + gaussian_power / params.n0)
    return r2, diff


def rs_tdm_bounds(params: ChannelParams, alpha):
    """``(R2 max, R1-R2 max)`` of rate splitting with time-division multiplexing.

    The endpoints take their limits: ``alpha = 0`` gives no lattice rate and
    ``alpha = 1`` leaves no time for the Gaussian phase.
    """
    _check_oriented(params)
    alpha = np.asarray(alpha, dtype=float)
    a = np.where(alpha > 0, alpha, 1.0)
    r2 = np.where(alpha > 0, a * half_log2(0.5 + params.p2 / (a * params.n0)), 0.0)
    r2 = np.maximum(r2, 0.0)
    rest = 1.0 - alpha
    b = np.where(rest > 0, rest, 1.0)
    diff = np.where(
        rest > 0, b * 0.5 * np.log2(1.0 + (params.p1 - params.p2) / (b * params.n0)), 0.0
    )
    return r2, diff


# ---------------------------------------------------------------------------
# Constraint tables.


def constraint_table(scheme: Scheme, params: ChannelParams, theta=None):
    """Coefficients ``A`` (k x 2) and bounds ``C`` (N x k) for a batch of parameters.

    ``theta`` has shape ``(N, n_params)``; parameter-free schemes ignore it and
    return ``N = 1``.  Downlink rows are present only when the downlink is active.
    """
    if scheme.n_params:
        theta = np.atleast_2d(np.asarray(theta, dtype=float))
        if theta.shape[1] != scheme.n_params:
            raise ValueError(f"{scheme.value} expects {scheme.n_params} parameters per row")
        n = theta.shape[0]
    else:
        n = 1
    dl1, dl2 = params.downlink_bounds()
    c1, c2 = capacity_c(params.snr1), capacity_c(params.snr2)

    if scheme is Scheme.OUTER_BOUND:
        rows = [((1, 0), min(c1, dl1)), ((0, 1), min(c2, dl2))]
        dl_rows = []
    elif scheme is Scheme.CDF:
        csum = capacity_c((params.p1 + params.p2) / params.n0)
        rows = [((1, 0), c1), ((0, 1), c2), ((1, 1), csum)]
        dl_rows = [((1, 0), dl1), ((0, 1), dl2)]
    elif scheme is Scheme.FDF_NESTED:
        r1, r2 = nested_bounds(params, theta[:, 0], theta[:, 1])
        rows = [((1, 0), r1), ((0, 1), r2)]
        dl_rows = [((1, 0), dl1), ((0, 1), dl2)]
    else:
        if scheme is Scheme.FDF_RS_SIM:
            r2, diff = rs_sim_bounds(params, theta[:, 0], theta[:, 1])
        else:
            r2, diff = rs_tdm_bounds(params, theta[:, 0])
        rows = [((0, 1), r2), ((1, -1), diff), ((-1, 1), 0.0)]
        dl_rows = [((1, 0), dl1), ((0, 1), dl2)]

    if params.downlink is not None:
        rows += dl_rows
    A = np.array([coef for coef, _ in rows], dtype=float)
    C = np.column_stack([np.broadcast_to(np.asarray(c, dtype=float), (n,)) for _, c in rows])
    return A, C


def region(scheme: Scheme, params: ChannelParams, scheme_params: SchemeParams = None) -> RateRegion:
    """Rate region of ``scheme`` at fixed scheme parameters."""
    if scheme.n_params:
        if scheme_params is None:
            raise ValidationError(f"{scheme.value} needs scheme parameters")
        if not isinstance(scheme_params, _PARAM_TYPES[scheme]):
            raise ValidationError(
                f"{scheme.value} expects {_PARAM_TYPES[scheme].__name__}, "
                f"got {type(scheme_params).__name__}"
            )
        theta = [scheme_params.as_tuple()]
    else:
        theta = None
    A, C = constraint_table(scheme, params, theta)
    return RateRegion.from_bounds(
        (int(a), int(b), float(c)) for (a, b), c in zip(A, C[0])
    )


def outer_bound_region(params: ChannelParams) -> RateRegion:
    return region(Scheme.OUTER_BOUND, params)


def cdf_region(params: ChannelParams) -> RateRegion:
    return region(Scheme.CDF, params)


def fdf_nested_region(params: ChannelParams, np_: NestedParams) -> RateRegion:
    return region(Scheme.FDF_NESTED, params, np_)


def fdf_rs_sim_region(params: ChannelParams, rp: RsSimParams) -> RateRegion:
    return region(Scheme.FDF_RS_SIM, params, rp)


def fdf_rs_tdm_region(params: ChannelParams, tp: TdmParams) -> RateRegion:
    return region(Scheme.FDF_RS_TDM, params, tp)


def max_sum_rate(reg: RateRegion) -> Tuple[float, RatePair]:
    """Largest ``R1 + R2`` over ``reg`` and a vertex achieving it."""
    return reg.max_sum_rate()


def sum_rate_closed_form(scheme: Scheme, params: ChannelParams, theta=None) -> np.ndarray:
    """Maximum sum rate for a batch of parameters, from each region's shape.

    Rectangles (nested, outer) give ``min(u1, d1) + min(u2, d2)``; the
    CDF pentagon gives ``min(u1 + u2, sum cap)``; the rate-splitting regions
    are maximised at ``R2 = b`` with ``b`` the tightest R2 limit.
    """
    dl1, dl2 = params.downlink_bounds()
    if scheme is Scheme.OUTER_BOUND:
        A, C = constraint_table(scheme, params)
        return C[:, 0] + C[:, 1]
    if scheme is Scheme.CDF:
        u1 = min(capacity_c(params.snr1), dl1)
        u2 = min(capacity_c(params.snr2), dl2)
        csum = capacity_c((params.p1 + params.p2) / params.n0)
        return np.array([min(u1 + u2, csum)])
    theta = np.atleast_2d(np.asarray(theta, dtype=float))
    if scheme is Scheme.FDF_NESTED:
        r1, r2 = nested_bounds(params, theta[:, 0], theta[:, 1])
        return np.minimum(r1, dl1) + np.minimum(r2, dl2)
    if scheme is Scheme.FDF_RS_SIM:
        r2, diff = rs_sim_bounds(params, theta[:, 0], theta[:, 1])
    else:
        r2, diff = rs_tdm_bounds(params, theta[:, 0])
    b = np.minimum(np.minimum(r2, dl2), dl1)
    return b + np.minimum(b + diff, dl1)


def oriented(params: ChannelParams) -> Tuple[ChannelParams, bool]:
    """``params`` with user 1 holding the larger power, and whether roles swapped."""
    if params.swap_needed:
        return params.swapped(), True
    return params, False


def scheme_params_dict(scheme: Scheme, values) -> dict:
    return {name: float(v) for name, v in zip(scheme.param_names, values)}


__all__ = [
    "ACHIEVABLE",
    "NestedParams",
    "RsSimParams",
    "Scheme",
    "SchemeParams",
    "TdmParams",
    "cdf_region",
    "constraint_table",
    "fdf_nested_region",
    "fdf_rs_sim_region",
    "fdf_rs_tdm_region",
    "make_params",
    "max_sum_rate",
    "nested_bounds",
    "oriented",
    "outer_bound_region",
    "region",
    "rs_sim_bounds",
    "rs_tdm_bounds",
    "sum_rate_closed_form",
]
