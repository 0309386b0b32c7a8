"""Achievable rate regions and sum-rate comparisons for the AWGN two-way relay channel."""

from .channel import (
    ChannelParams,
    Downlink,
    LinearConstraint,
    OrientationError,
    RatePair,
    RateRegion,
    UnboundedRegionError,
    ValidationError,
    capacity_c,
    clamp_plus,
    validate,
)
from .experiments import (
    MapSpec,
    Range,
    SweepSpec,
    emit_csv,
    emit_json,
    load_json,
    sum_rate_sweep,
    winner_map,
)
from .optimizer import (
    SchemeResult,
    SearchConfig,
    WinnerCell,
    optimize_sum_rate,
    pareto_frontier,
    winner_at,
)
from .oracle import OracleConfig, contains, grid_max_sum
from .schemes import (
    ACHIEVABLE,
    NestedParams,
    RsSimParams,
    Scheme,
    TdmParams,
    cdf_region,
    fdf_nested_region,
    fdf_rs_sim_region,
    fdf_rs_tdm_region,
    max_sum_rate,
    outer_bound_region,
)

__version__ = "0.1.0"
