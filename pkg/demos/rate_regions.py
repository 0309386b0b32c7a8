"""Rate regions of the relaying schemes at one asymmetric channel.

Run with ``python3 demos/rate_regions.py [--plot regions.png]``.
"""

# %%
# Setup: user 1 is five times stronger than user 2 at the relay.
import argparse

import twrc
from twrc import ChannelParams, Scheme

parser = argparse.ArgumentParser()
parser.add_argument("--plot", metavar="PNG", help="save a figure (needs matplotlib)")
args = parser.parse_args()

params = ChannelParams(p1=10.0, p2=2.0, n0=2.0)
print(f"SNR1 = {params.snr1:g}, SNR2 = {params.snr2:g}")

# %%
# Fixed-parameter regions are small polygons.  Their corners are exact.
fixed = {
    "outer bound": twrc.outer_bound_region(params),
    "CDF": twrc.cdf_region(params),
    "nested, delta=(1,1)": twrc.fdf_nested_region(params, twrc.NestedParams(1.0, 1.0)),
    "RS-TDM, alpha=0.28": twrc.fdf_rs_tdm_region(params, twrc.TdmParams(0.28)),
}
for name, reg in fixed.items():
    corners = ", ".join(f"({x:.3f}, {y:.3f})" for x, y in reg.vertices())
    best, at = reg.max_sum_rate()
    print(f"{name:>22}: sum {best:.4f} at ({at.r1:.3f}, {at.r2:.3f}); corners {corners}")

# %%
# Letting the parameters float traces the union over the parameter box.
# The rate-splitting schemes only cover R2 <= R1 here because user 2 is weaker.
cfg = twrc.SearchConfig(coarse_grid=101)
frontiers = {s: twrc.pareto_frontier(s, params, cfg, n_points=15) for s in Scheme}
for s, pts in frontiers.items():
    print(f"\n{s.value}")
    for p in pts[::2]:
        print(f"  R1 >= {p.r1:.3f}  ->  R2 <= {p.r2:.3f}")

# %%
if args.plot:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 4))
    for s, pts in frontiers.items():
        ax.step([p.r1 for p in pts], [p.r2 for p in pts], where="pre", label=s.value)
    ax.set_xlabel("R1 [bits/use]")
    ax.set_ylabel("R2 [bits/use]")
    ax.legend()
    fig.tight_layout()
    fig.savefig(args.plot, dpi=120)
    print(f"\nwrote {args.plot}")
