"""Command-line interface.

Subcommands:

* ``mcsim run --scenario s.json --controller basic --out DIR``
* ``mcsim compare --scenario s.json --modes soft,hard,basic,extended --out DIR``
* ``mcsim maps --config c.json --out maps.csv``

Exit codes: 0 on success, 2 on configuration/scenario errors, 1 on plant
divergence.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import harness
from .airspring import export_elastic_map, write_map_csv
from .config import load_config
from .controller import CONTROLLER_MODES
from .errors import McsimError, SimulationDivergedError
from .scenarios import load_scenario


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mcsim",
        description="Multichamber air-suspension simulation and switching control",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate one scenario under one controller")
    p_run.add_argument("--scenario", required=True, help="scenario JSON file")
    p_run.add_argument("--controller", required=True, choices=CONTROLLER_MODES)
    p_run.add_argument("--out", required=True, help="output directory")
    p_run.add_argument("--config", default=None, help="config JSON file")
    p_run.add_argument("--plots", action="store_true", help="also write SVG plots")

    p_cmp = sub.add_parser("compare", help="run several controllers on one scenario")
    p_cmp.add_argument("--scenario", required=True)
    p_cmp.add_argument("--modes", required=True,
                       help="comma-separated subset of soft,hard,basic,extended")
    p_cmp.add_argument("--out", required=True)
    p_cmp.add_argument("--config", default=None)
    p_cmp.add_argument("--plots", action="store_true")

    p_maps = sub.add_parser("maps", help="export static stroke-force maps as CSV")
    p_maps.add_argument("--config", default=None)
    p_maps.add_argument("--out", required=True, help="output CSV path")
    p_maps.add_argument("--valve", choices=("soft", "hard"), default="soft")
    p_maps.add_argument("--close-at", type=float, default=None, metavar="STROKE_M",
                        help="emit the map after a closing event at this stroke")
    p_maps.add_argument("--grid", nargs=3, type=float, default=(-0.04, 0.04, 161),
                        metavar=("MIN", "MAX", "N"))
    return parser


def _cmd_run(args) -> int:
    cfg = load_config(args.config)
    scenario = load_scenario(args.scenario)
    result = harness.run(scenario, args.controller, cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    harness.write_timeseries_csv(result, out / f"timeseries_{result.mode}.csv")
    harness.write_events_csv(result, out / f"events_{result.mode}.csv")
    if args.plots:
        from . import plots
        plots.plot_timeseries(result, out / f"timeseries_{result.mode}.svg")
    for phase, value in sorted(result.metrics.j_phi.items()):
        print(f"J_phi[{phase}] = {value:.6g} rad")
    for phase, value in sorted(result.metrics.j_theta.items()):
        print(f"J_theta[{phase}] = {value:.6g} rad")
    print(f"J_z = {result.metrics.j_z_overall:.6g} m/s^2 "
          f"({len(result.open_events())} opening events)")
    print(f"wrote {out}/timeseries_{result.mode}.csv")
    return 0


def _cmd_compare(args) -> int:
    cfg = load_config(args.config)
    scenario = load_scenario(args.scenario)
    modes = [m.strip() for m in args.modes.split(",") if m.strip()]
    report = harness.compare(scenario, modes, cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for mode, result in report.runs.items():
        harness.write_timeseries_csv(result, out / f"timeseries_{mode}.csv")
        harness.write_events_csv(result, out / f"events_{mode}.csv")
    harness.write_metrics_csv(report, out / "metrics.csv")
    if args.plots:
        from . import plots
        plots.plot_compare_bars(report, out / "compare.svg")
        for mode, result in report.runs.items():
            plots.plot_timeseries(result, out / f"timeseries_{mode}.svg")
    for row in report.rows:
        print(f"{row['mode']:>9s}  {row['metric']}/{row['key']}: "
              f"{row['value']:.6g}  (x{row['ratio_vs_hard']:.4g} vs hard)")
    print(f"wrote {out}/metrics.csv")
    return 0


def _cmd_maps(args) -> int:
    cfg = load_config(args.config)
    lo, hi, count = args.grid
    import numpy as np
    grid = np.linspace(lo, hi, int(count))
    events = [("close", args.close_at)] if args.close_at is not None else []
    static_load = cfg.vehicle.static_corner_loads()[0]
    table = export_elastic_map(
        cfg.vehicle.springs[0], args.valve, grid, events, static_load=static_load
    )
    write_map_csv(args.out, table)
    print(f"wrote {args.out} ({len(table)} rows, valve={args.valve}"
          + (f", closed at {args.close_at} m" if args.close_at is not None else "") + ")")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "compare":
            return _cmd_compare(args)
        return _cmd_maps(args)
    except SimulationDivergedError as exc:
        print(f"error: simulation diverged: {exc}", file=sys.stderr)
        return 1
    except (McsimError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
