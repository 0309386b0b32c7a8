import math

import numpy as np
import pytest

from conftest import random_params
from twrc import ChannelParams, OracleConfig, Scheme, contains, grid_max_sum, max_sum_rate
from twrc.channel import polygon_lp
from twrc.oracle import frontier_r2, param_grid, unit_grid
from twrc.schemes import constraint_table, make_params, oriented, region

COARSE = OracleConfig(step=1e-2, rate_step=1e-2)


def test_config_bounds():
    with pytest.raises(ValueError):
        OracleConfig(step=0.0)
    with pytest.raises(ValueError):
        OracleConfig(rate_step=0.5)


def test_unit_grid_nests():
    a = unit_grid(0.01)
    b = unit_grid(0.005)
    assert set(a.tolist()) <= set(b.tolist())
    assert a[0] == 0.0 and a[-1] == 1.0


def test_param_grid_shapes():
    assert param_grid(Scheme.CDF, 0.1).shape == (1, 0)
    assert param_grid(Scheme.FDF_RS_TDM, 0.1).shape == (11, 1)
    assert param_grid(Scheme.FDF_NESTED, 0.1).shape == (121, 2)


def test_grid_max_nested_corner():
    assert grid_max_sum(Scheme.FDF_NESTED, ChannelParams(10, 10, 2), COARSE) == pytest.approx(
        math.log2(5.5), abs=1e-12
    )


def test_grid_max_cdf_matches_region():
    p = ChannelParams(7, 3, 1.5)
    assert grid_max_sum(Scheme.CDF, p, COARSE) == max_sum_rate(region(Scheme.CDF, p))[0]


@pytest.mark.slow
def test_grid_max_tdm_fine():
    # scipy bounded search on the explicit 1-D sum: 1.5437523187
    value = grid_max_sum(Scheme.FDF_RS_TDM, ChannelParams(10, 2, 2), OracleConfig(step=1e-4))
    assert value == pytest.approx(1.5438, abs=5e-4)
    assert value <= 1.5437523187423476 + 1e-12


def test_contains_examples():
    p = ChannelParams(2, 2, 2)
    assert contains(Scheme.FDF_NESTED, p, (0.29, 0.29), COARSE)
    assert not contains(Scheme.FDF_NESTED, p, (0.5, 0.5), COARSE)
    for scheme in Scheme:
        assert contains(scheme, ChannelParams(10, 2, 2), (0.0, 0.0), COARSE)


def test_contains_is_down_closed_for_rate_splitting():
    p = ChannelParams(10, 2, 2)
    # (0.3, 0.29) lies in the alpha = 1 region; the weaker corner (0, 0.29) is dominated by it
    assert contains(Scheme.FDF_RS_TDM, p, (0.29, 0.29), COARSE)
    assert contains(Scheme.FDF_RS_TDM, p, (0.0, 0.29), COARSE)
    assert not contains(Scheme.FDF_RS_TDM, p, (0.0, 0.4), COARSE)


def test_contains_monotone(rng):
    for _ in range(30):
        params, _ = oriented(random_params(rng))
        scheme = rng.choice(list(Scheme))
        point = rng.uniform(0, 1.5, size=2)
        if contains(scheme, params, point, COARSE):
            lower = point * rng.uniform(size=2)
            assert contains(scheme, params, lower, COARSE)


def test_grid_max_monotone_in_refinement(rng):
    for _ in range(10):
        params, _ = oriented(random_params(rng))
        for scheme in (Scheme.FDF_NESTED, Scheme.FDF_RS_SIM, Scheme.FDF_RS_TDM):
            coarse = grid_max_sum(scheme, params, OracleConfig(step=0.02))
            fine = grid_max_sum(scheme, params, OracleConfig(step=0.01))
            assert fine >= coarse


def test_polygon_lp_matches_scalar_vertices(rng):
    for _ in range(40):
        params, _ = oriented(random_params(rng))
        for scheme in Scheme:
            theta = rng.uniform(size=scheme.n_params)
            A, C = constraint_table(scheme, params, [theta] if scheme.n_params else None)
            reg = region(scheme, params, make_params(scheme, theta))
            for w in ((1.0, 1.0), (1.0, 0.0), (0.0, 1.0)):
                brute = max(w[0] * x + w[1] * y for x, y in reg.vertices())
                assert polygon_lp(A, C, w)[0] == pytest.approx(brute, abs=1e-12)


def test_polygon_lp_empty_is_minus_inf():
    A = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0]])
    C = np.array([[0.2, -0.5, 1.0]])  # needs R1 >= 0.5 and R1 <= 0.2
    assert polygon_lp(A, C, (1.0, 1.0))[0] == -np.inf


def test_lifting_membership_agrees_with_lp(rng):
    # dominated iff the polygon meets {R1 >= r1, R2 >= r2}: checked by LP feasibility
    for _ in range(200):
        params, _ = oriented(random_params(rng))
        scheme = rng.choice(list(Scheme))
        theta = rng.uniform(size=scheme.n_params)
        A, C = constraint_table(scheme, params, [theta] if scheme.n_params else None)
        r = rng.uniform(0, 1.2, size=2)
        A2 = np.vstack([A, [[-1.0, 0.0], [0.0, -1.0]]])
        C2 = np.hstack([C, [[-r[0], -r[1]]]])
        lp_says = np.isfinite(polygon_lp(A2, C2, (0.0, 0.0))[0])
        from twrc.oracle import _dominated

        assert bool(_dominated(A, C, r[0], r[1], 1e-9)[0]) == lp_says


def test_frontier_r2_cdf_corners():
    p = ChannelParams(2, 2, 2)
    assert frontier_r2(Scheme.CDF, p, 0.0, COARSE) == pytest.approx(0.5)
    assert frontier_r2(Scheme.CDF, p, 0.5, COARSE) == pytest.approx(0.29)
    assert frontier_r2(Scheme.CDF, p, 0.6, COARSE) == -math.inf
