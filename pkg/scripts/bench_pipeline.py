#!/usr/bin/env python3
"""Measure sustained pipeline throughput on 160x120 synthetic frames."""

import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from wastive.config import load_config
from wastive.simulator import Scenario, run_scenario


def main():
    config = load_config("")
    scenario = Scenario(
        duration_s=30.0,
        events=tuple((float(t), (t % 12) / 12.0) for t in range(0, 30, 2)),
    )
    # warm-up pass, then the measured one
    run_scenario(Scenario(duration_s=2.0), config)
    t0 = time.perf_counter()
    rows = run_scenario(scenario, config)
    elapsed = time.perf_counter() - t0
    rate = len(rows) / elapsed
    print(f"{len(rows)} ticks in {elapsed:.3f}s -> {rate:.0f} ticks/s "
          f"({rate / config.tick_hz:.1f}x the {config.tick_hz:.0f} Hz live rate)")


if __name__ == "__main__":
    main()
