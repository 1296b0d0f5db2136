#!/usr/bin/env python3
"""Run the canonical region-transition scenario and summarize the trace.

Usage: python scripts/run_region_transition.py [--trace out.csv] [--plot out.png]
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from wastive.config import load_config
from wastive.simulator import export_trace, load_scenario, run_scenario


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trace", help="write the full trace CSV here")
    ap.add_argument("--plot", help="write a base-height plot here (needs matplotlib)")
    args = ap.parse_args()

    root = Path(__file__).resolve().parents[1]
    scenario = load_scenario((root / "scenarios" / "region_transition.json").read_text())
    config = load_config("")
    rows = run_scenario(scenario, config)

    n = len(rows[0].base)
    for label, idx in (("t=5s (end of region-1 dwell)", 150), ("t=11s (end of region-2 dwell)", 330)):
        r = rows[idx]
        bars = "  ".join(f"b{i}={r.base[i]:.4f}" for i in range(n))
        print(f"{label}: region={r.region} dwell={r.dwell_ms:6.0f}ms  {bars}")

    at5, at11 = rows[150], rows[330]
    print("region 1 peaks while occupied:", all(at5.base[1] > at5.base[i] for i in (0, 2, 3)))
    print("region 2 peaks after the move:", all(at11.base[2] > at11.base[i] for i in (0, 1, 3)))
    print("region 1 lowered vs its peak: ", at11.base[1] < at5.base[1])

    if args.trace:
        Path(args.trace).write_text(export_trace(rows))
        print(f"trace -> {args.trace}")
    if args.plot:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        t = [r.t_s for r in rows]
        fig, ax = plt.subplots(figsize=(9, 4))
        for i in range(n):
            ax.plot(t, [r.base[i] for r in rows], label=f"region {i}")
        ax.set_xlabel("time [s]")
        ax.set_ylabel("base height")
        ax.legend()
        ax.set_title("visitor dwells in region 1, then moves to region 2")
        fig.tight_layout()
        fig.savefig(args.plot, dpi=120)
        print(f"plot -> {args.plot}")


if __name__ == "__main__":
    main()
