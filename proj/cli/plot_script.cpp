#include "commands.hpp"

namespace cylbem::cli {

std::string error_sweep_plot_script() {
  return R"PY(#!/usr/bin/env python3
"""Relative current error against ka, one panel per polarization.

Usage: python3 plot_error_sweep.py [error_sweep.csv] [output.png]
Predicted errors are drawn as circles joined by lines, BEM-measured ones as
crosses; points flagged as resonant are shown hollow.
"""
import csv
import os
import sys
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

here = os.path.dirname(os.path.abspath(__file__))
src = sys.argv[1] if len(sys.argv) > 1 else os.path.join(here, "error_sweep.csv")
dst = sys.argv[2] if len(sys.argv) > 2 else os.path.splitext(src)[0] + ".png"

series = defaultdict(lambda: defaultdict(list))
measures = {}
with open(src, newline="") as fh:
    for row in csv.DictReader(fh):
        pol, name = row["polarization"], row["formulation"]
        s = series[pol][name]
        s.append((float(row["ka"]), float(row["r_predicted"]), float(row["r_measured"]),
                  row["resonance_flag"] == "1"))
        measures[pol] = row["measure"]

pols = sorted(series)
fig, axes = plt.subplots(1, len(pols), figsize=(6.5 * len(pols), 4.8), squeeze=False)
for ax, pol in zip(axes[0], pols):
    for i, (name, pts) in enumerate(sorted(series[pol].items())):
        pts.sort()
        color = "C%d" % i
        ka = [p[0] for p in pts]
        ax.plot(ka, [p[1] for p in pts], "-o", color=color, ms=4, mfc="none", lw=0.8,
                label="%s-%s predicted" % (pol, name))
        ax.plot(ka, [p[2] for p in pts], "x", color=color, ms=6,
                label="%s-%s measured" % (pol, name))
        flagged = [p for p in pts if p[3]]
        if flagged:
            ax.plot([p[0] for p in flagged], [p[2] for p in flagged], "s", color=color,
                    mfc="none", ms=8)
    s = "-1/2" if pol == "TM" else "+1/2"
    measure = measures[pol]
    label = {"L2": "L2 norm", "Hs": "H^{%s} norm" % s, "Hks": "H_k^{%s} norm" % s}.get(measure, measure)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("ka")
    ax.set_ylabel("relative current error, " + label)
    ax.set_title(pol)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
fig.tight_layout()
fig.savefig(dst, dpi=150)
print(dst)
)PY";
}

}  // namespace cylbem::cli
