"""Which scheme has the highest sum rate over a grid of uplink SNRs.

Run with ``python3 demos/winner_map.py [--count 51] [--plot map.png]``.
The full 101 x 101 grid takes well under a minute on one core.
"""

# %%
import argparse
from collections import Counter

import numpy as np

from twrc import Scheme
from twrc.experiments import MapSpec, Range, winner_map

parser = argparse.ArgumentParser()
parser.add_argument("--count", type=int, default=51, help="points per SNR axis")
parser.add_argument("--plot", metavar="PNG", help="save a figure (needs matplotlib)")
args = parser.parse_args()

axis = Range(0.0, 5.0, args.count)
result = winner_map(MapSpec(axis, axis))

# %%
# One character per cell, SNR2 growing upward.  Ties show the first winner
# in the fixed display order; '=' marks the three-way lattice tie.
glyph = {Scheme.CDF: "c", Scheme.FDF_NESTED: "n", Scheme.FDF_RS_SIM: "s", Scheme.FDF_RS_TDM: "t"}
lattice = (Scheme.FDF_NESTED, Scheme.FDF_RS_SIM, Scheme.FDF_RS_TDM)
grid = result.grid()
for row in reversed(grid[::2]):
    print("".join("=" if c.winners == lattice else glyph[c.label] for c in row[::2]))
print("c = CDF, n = nested, s = RS-sim, t = RS-TDM\n")

# %%
# RS-sim never wins alone, and ties are common only where both SNRs agree.
print(Counter("|".join(s.value for s in c.winners) for c in result.cells).most_common())

# %%
if args.plot:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    codes = np.array([[list(Scheme).index(c.label) for c in row] for row in grid])
    fig, ax = plt.subplots(figsize=(4.5, 4))
    ax.imshow(codes, origin="lower", extent=(0, 5, 0, 5), cmap="tab10", vmin=0, vmax=9)
    ax.set_xlabel("P1/N0")
    ax.set_ylabel("P2/N0")
    fig.tight_layout()
    fig.savefig(args.plot, dpi=120)
    print(f"wrote {args.plot}")
