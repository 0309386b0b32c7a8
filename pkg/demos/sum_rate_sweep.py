"""Sum rate of every scheme as user 1's power grows, for two fixed P2.

Run with ``python3 demos/sum_rate_sweep.py [--plot sweep.png]``.
"""

# %%
import argparse

from twrc.experiments import Range, SweepSpec, emit_csv, sum_rate_sweep

parser = argparse.ArgumentParser()
parser.add_argument("--plot", metavar="PNG", help="save a figure (needs matplotlib)")
args = parser.parse_args()

# %%
# Uplink only, N0 = 2.  With P2 = 2 time sharing carries the asymmetric end;
# with P2 = 10 the nested lattice scheme catches up as P1 approaches P2.
results = {}
for p2 in (2.0, 10.0):
    spec = SweepSpec(n0=2.0, p2=p2, p1_range=Range(p2, 10 * p2, 10))
    results[p2] = sum_rate_sweep(spec)
    print(f"P2 = {p2:g}")
    print(emit_csv(results[p2]))

# %%
# The gap to the cut-set bound at the far end of each sweep.
for p2, res in results.items():
    last = res.rows[-1]
    print(f"P2 = {p2:g}, P1 = {last.p1:g}: best {last.best_scheme.value} "
          f"{last.best_sum:.4f}, bound {last.ub:.4f}, gap {last.ub - last.best_sum:.4f}")

# %%
if args.plot:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(1, 2, figsize=(9, 3.5))
    for ax, (p2, res) in zip(axes, results.items()):
        p1 = [r.p1 for r in res.rows]
        for col in ("ub", "cdf", "fdf_nested", "fdf_rs_sim", "fdf_rs_tdm"):
            ax.plot(p1, [getattr(r, col) for r in res.rows], label=col)
        ax.set_title(f"N0 = 2, P2 = {p2:g}")
        ax.set_xlabel("P1")
    axes[0].set_ylabel("sum rate [bits/use]")
    axes[0].legend()
    fig.tight_layout()
    fig.savefig(args.plot, dpi=120)
    print(f"wrote {args.plot}")
