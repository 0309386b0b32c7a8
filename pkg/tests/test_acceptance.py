"""Acceptance criteria, one test each, with a PASS/FAIL line per criterion.

Run alone with ``pytest tests/test_acceptance.py -v`` (or execute this file).
The summary lines are written straight to the terminal, bypassing capture.
"""

import io
import math
import sys
import time

import numpy as np
import pytest

from conftest import random_params
from twrc import ChannelParams, OracleConfig, Scheme, capacity_c, grid_max_sum
from twrc.cli import run
from twrc.experiments import MapSpec, Range, winner_map
from twrc.optimizer import optimize_sum_rate, winner_at
from twrc.schemes import (
    NestedParams,
    fdf_nested_region,
    oriented,
    outer_bound_region,
    region,
    make_params,
    rs_sim_bounds,
)

FDF = (Scheme.FDF_NESTED, Scheme.FDF_RS_SIM, Scheme.FDF_RS_TDM)
TIE = 1e-4


@pytest.fixture
def report(pytestconfig):
    capman = pytestconfig.pluginmanager.getplugin("capturemanager")

    def _report(label, failures, detail=""):
        status = "PASS" if not failures else "FAIL"
        line = f"[{status}] {label}"
        if detail:
            line += f" :: {detail}"
        with capman.global_and_fixture_disabled():
            sys.stdout.write("\n" + line + "\n")
            for f in failures:
                sys.stdout.write(f"         - {f}\n")
        assert not failures, line

    return _report


def check(failures, ok, message):
    if not ok:
        failures.append(message)


def test_ac1_closed_form_spot_checks(report):
    fails = []
    t0 = time.perf_counter()
    p = ChannelParams(10, 2, 2)
    cdf = optimize_sum_rate(Scheme.CDF, p).sum_rate
    check(fails, abs(cdf - 0.5 * math.log2(7)) <= 1e-9, f"CDF sum {cdf!r} != 1/2 log2 7")

    reg = fdf_nested_region(p, NestedParams(1.0, 1.0))
    b1 = max(x for x, _ in reg.vertices())
    b2 = max(y for _, y in reg.vertices())
    e1 = 0.5 * math.log2(10 / 12 + 5)
    e2 = 0.5 * math.log2(2 / 12 + 1)
    check(fails, abs(b1 - e1) <= 1e-9 and abs(b2 - e2) <= 1e-9, f"nested bounds {(b1, b2)} != {(e1, e2)}")

    ub = outer_bound_region(ChannelParams(20, 2, 2)).max_sum_rate()[0]
    check(fails, abs(ub - (0.5 * math.log2(11) + 0.5)) <= 1e-9, f"outer bound {ub!r}")
    elapsed = time.perf_counter() - t0
    check(fails, elapsed < 1.0, f"took {elapsed:.2f}s")
    report(
        "AC1 closed-form spot checks",
        fails,
        f"cdf={cdf:.9f} nested=({b1:.9f}, {b2:.9f}) ub={ub:.9f} in {elapsed:.3f}s",
    )


def test_ac2_optimizer_matches_oracle(report):
    rng = np.random.default_rng(7)
    cfg = OracleConfig(step=1e-3)
    fails = []
    worst = 0.0
    t0 = time.perf_counter()
    for i in range(20):
        p1, p2 = rng.uniform(0.1, 40.0, size=2)
        n0 = rng.uniform(0.5, 4.0)
        params, _ = oriented(ChannelParams(float(p1), float(p2), float(n0)))
        for scheme in FDF:
            opt = optimize_sum_rate(scheme, params).sum_rate
            ref = grid_max_sum(scheme, params, cfg)
            gap = abs(opt - ref)
            worst = max(worst, gap)
            check(fails, gap <= 1e-3, f"config {i} {scheme.slug}: optimizer {opt} oracle {ref}")
            check(fails, opt >= ref - 1e-9, f"config {i} {scheme.slug}: optimizer below oracle")
    elapsed = time.perf_counter() - t0
    check(fails, elapsed < 120.0, f"took {elapsed:.1f}s")
    report("AC2 optimizer vs grid oracle (20 configs, step 1e-3)", fails,
           f"max |gap|={worst:.2e} in {elapsed:.1f}s")


def test_ac3_winner_map_structure(report):
    fails = []
    low = winner_at(ChannelParams(1, 1, 2), tie_tol=TIE)
    check(fails, low.winners == (Scheme.CDF,), f"(0.5,0.5) winners {low.winners}")

    tie = winner_at(ChannelParams(10, 10, 2), tie_tol=TIE)
    check(fails, tie.winners == FDF, f"(5,5) winners {tie.winners}")
    for s in FDF:
        check(fails, abs(tie.sums[s] - math.log2(5.5)) <= TIE, f"(5,5) {s.slug} = {tie.sums[s]}")
    cdf55 = tie.sums[Scheme.CDF]
    check(fails, abs(cdf55 - 0.5 * math.log2(11)) <= TIE, f"(5,5) CDF = {cdf55}")
    check(fails, cdf55 < min(tie.sums[s] for s in FDF) - TIE, "(5,5) CDF not strictly below FDF tie")

    asym = winner_at(ChannelParams(10, 2, 2), tie_tol=TIE)
    tdm = asym.sums[Scheme.FDF_RS_TDM]
    check(fails, asym.winners == (Scheme.FDF_RS_TDM,), f"(5,1) winners {asym.winners}")
    check(fails, abs(tdm - 1.5438) <= 1e-3, f"(5,1) TDM = {tdm}")

    t0 = time.perf_counter()
    full = winner_map(MapSpec())
    elapsed = time.perf_counter() - t0
    check(fails, len(full.cells) == 101 * 101, "map size")
    at = {(round(c.snr1, 9), round(c.snr2, 9)): c for c in full.cells}
    check(fails, at[(0.5, 0.5)].winners == (Scheme.CDF,), "map (0.5,0.5)")
    check(fails, at[(5.0, 5.0)].winners == FDF, "map (5,5)")
    check(fails, at[(5.0, 1.0)].winners == (Scheme.FDF_RS_TDM,), "map (5,1)")
    check(fails, elapsed < 60.0, f"full map took {elapsed:.1f}s")
    report("AC3 winner-map anchors and full 101x101 map", fails,
           f"tie={tie.sums[Scheme.FDF_NESTED]:.6f} cdf={cdf55:.6f} tdm(5,1)={tdm:.6f} map {elapsed:.1f}s")


def _diagonal_gap(s):
    p = ChannelParams(2 * s, 2 * s, 2.0)
    cdf = optimize_sum_rate(Scheme.CDF, p).sum_rate
    return cdf - max(optimize_sum_rate(x, p).sum_rate for x in FDF)


def test_ac4_equal_snr_crossover(report):
    fails = []
    pair = (Scheme.CDF, Scheme.FDF_NESTED)
    below = winner_at(ChannelParams(2.98, 2.98, 2.0), tie_tol=TIE, schemes=pair)
    above = winner_at(ChannelParams(3.02, 3.02, 2.0), tie_tol=TIE, schemes=pair)
    check(fails, below.winners == (Scheme.CDF,), f"s=1.49 winners {below.winners}")
    check(fails, above.winners == (Scheme.FDF_NESTED,), f"s=1.51 winners {above.winners}")
    # the algebraic root: (1/2 + s)^2 = 1 + 2s
    check(fails, abs(0.5 * math.log2(1 + 3.0) - math.log2(2.0)) < 1e-15, "root at 1.5")

    lo, hi = 1.0, 2.0
    check(fails, _diagonal_gap(lo) > 0 > _diagonal_gap(hi), "no sign change on [1, 2]")
    while hi - lo > 1e-6:
        mid = 0.5 * (lo + hi)
        if _diagonal_gap(mid) > 0:
            lo = mid
        else:
            hi = mid
    s_star = 0.5 * (lo + hi)
    check(fails, 1.45 <= s_star <= 1.50, f"s* = {s_star}")
    report("AC4 equal-SNR crossover", fails, f"CDF/nested flips across 1.5; CDF/best-FDF s*={s_star:.6f}")


def test_ac5_rs_sim_never_strictly_best(report):
    fails = []
    spec = MapSpec(Range(0.0, 5.0, 21), Range(0.0, 5.0, 21), tie_tol=TIE)
    result = winner_map(spec)
    worst = -math.inf
    for c in result.cells:
        others = max(c.sums[s] for s in (Scheme.CDF, Scheme.FDF_NESTED, Scheme.FDF_RS_TDM))
        excess = c.sums[Scheme.FDF_RS_SIM] - others
        worst = max(worst, excess)
        check(fails, excess <= TIE, f"({c.snr1}, {c.snr2}) RS-sim ahead by {excess}")
    report("AC5 RS-sim never strictly best (21x21)", fails, f"max excess={worst:.2e}")


def test_ac6_equal_snr_collapse(report):
    fails = []
    for snr in (2.0, 3.0, 5.0):
        p = ChannelParams(2 * snr, 2 * snr, 2.0)
        res = {s: optimize_sum_rate(s, p) for s in FDF}
        sums = [r.sum_rate for r in res.values()]
        check(fails, max(sums) - min(sums) <= 1e-6, f"snr {snr}: sums {sums}")
        alpha = res[Scheme.FDF_RS_TDM].best_params.alpha
        eta1, eta2 = res[Scheme.FDF_RS_SIM].best_params.as_tuple()
        delta = res[Scheme.FDF_NESTED].best_params.as_tuple()
        check(fails, alpha == 1.0, f"snr {snr}: alpha* = {alpha}")
        check(fails, eta2 == 1.0, f"snr {snr}: eta2* = {eta2}")
        check(fails, eta1 * (p.p1 - eta2 * p.p2) == 0.0, f"snr {snr}: eta1*(P1-eta2 P2) != 0")
        check(fails, delta == (1.0, 1.0), f"snr {snr}: delta* = {delta}")
    report("AC6 equal-SNR FDF collapse at SNR 2, 3, 5", fails)


def test_ac7_containment(report):
    rng = np.random.default_rng(20240607)
    fails = []
    n_vertices = 0
    for i in range(200):
        params, _ = oriented(random_params(rng))
        outer = outer_bound_region(params)
        for scheme in Scheme:
            for _ in range(5):
                sp = make_params(scheme, rng.uniform(size=scheme.n_params)) if scheme.n_params else None
                for v in region(scheme, params, sp).vertices():
                    n_vertices += 1
                    if not outer.contains(v, slack=1e-9):
                        fails.append(f"config {i} {scheme.slug} vertex {v} outside outer bound")
    report("AC7 containment in the outer bound", fails[:10], f"{n_vertices} vertices checked")


def test_ac8_rs_sim_constant(report):
    fails = []
    r2, _ = rs_sim_bounds(ChannelParams(10, 2, 2), 0.0, 1.0)
    r2 = float(np.asarray(r2).reshape(-1)[0])
    check(fails, abs(r2 - 0.5 * math.log2(1.5)) <= 1e-9, f"R2 bound {r2}")
    check(fails, abs(r2 - 0.292481) <= 1e-6, f"R2 bound {r2} != 0.292481")
    check(fails, abs(r2 - 0.5) > 0.1, "R2 bound uses 1 + SNR")
    report("AC8 RS-sim R2 bound uses 1/2 + SNR", fails, f"R2={r2:.9f}")


def test_ac9_sweep_determinism(report):
    fails = []
    argv = ["sweep", "--n0", "2", "--p2", "2", "--p1-start", "2", "--p1-stop", "20", "--p1-count", "10"]
    outs = []
    for _ in range(2):
        buf, err = io.StringIO(), io.StringIO()
        code = run(argv, buf, err)
        check(fails, code == 0, f"exit {code}: {err.getvalue().strip()}")
        outs.append(buf.getvalue())
    check(fails, outs[0] == outs[1], "CSV differs between runs")
    header, *rows = outs[0].splitlines()
    cols = header.split(",")
    last = dict(zip(cols, rows[-1].split(",")))
    check(fails, len(rows) == 10, f"{len(rows)} rows")
    tdm, cdf = float(last["fdf_rs_tdm"]), float(last["cdf"])
    check(fails, float(last["p1"]) == 20.0, "last row is not p1=20")
    check(fails, tdm > cdf, f"TDM {tdm} not above CDF {cdf}")
    check(fails, abs(cdf - 0.5 * math.log2(12)) <= 1e-8 and abs(tdm - 1.938) <= 1e-3, f"values {tdm} {cdf}")
    report("AC9 sweep CSV determinism and TDM > CDF at p1=20", fails, f"tdm={tdm} cdf={cdf}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
