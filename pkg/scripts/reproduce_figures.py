"""Run every standard scenario and write CSV, metadata and SVG files.

Usage: python3 scripts/reproduce_figures.py [--out results] [--points 101] [--workers 1]
"""

import argparse
import sys
import time
from pathlib import Path

from oemsim.harness.output import emit_csv, emit_metadata, emit_svg_plot
from oemsim.harness.scenarios import scenario_fig2, scenario_fig3, scenario_fig4, scenario_fig5
from oemsim.harness.sweep import run_sweep


def scenarios(points):
    yield "fig2_2pairs", scenario_fig2(2, points)
    yield "fig2_5pairs", scenario_fig2(5, points)
    yield "fig2_10pairs", scenario_fig2(10, points)
    yield "fig3_multifreq", scenario_fig3(points)
    yield "fig4_temperature", scenario_fig4("fig3", points=points)
    yield "fig4_temperature_10pairs", scenario_fig4("fig2", 10, points=points)
    yield "fig5_detuning_coefficient", scenario_fig5(points)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, default=Path("results"))
    parser.add_argument("--points", type=int, default=101)
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args(argv)

    args.out.mkdir(parents=True, exist_ok=True)
    for name, sc in scenarios(args.points):
        t0 = time.perf_counter()
        result = run_sweep(sc, workers=args.workers)
        csv_path = emit_csv(result, args.out / f"{name}.csv")
        emit_metadata(result, Path(str(csv_path) + ".meta.json"))
        emit_svg_plot(result, args.out / f"{name}.svg")
        unstable = sum(1 for r in result.rows if not r.stable)
        print(f"{name:28s} {len(result.rows):4d} points  {unstable:3d} unstable  "
              f"{time.perf_counter() - t0:6.1f} s  -> {csv_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
