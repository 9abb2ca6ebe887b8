"""``simulate`` command: run a configured sweep and write CSV, summary and figure data."""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

from .config import EE_DEMAND_FRACTIONS, dump_config, load_config
from .errors import VHetNetError
from .experiment import FIGURES, emit_csv, emit_figure_data, emit_summary, figure_series, run_experiment

logger = logging.getLogger("vhetnet")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="simulate", description=__doc__)
    parser.add_argument("--config", required=True, type=Path, help="flat key = value configuration file")
    parser.add_argument("--out-dir", required=True, type=Path, help="directory for results.csv, summary.json and figure data")
    parser.add_argument("--policies", help="comma-separated subset of no_offloading,mbs_only,haps_mbs,exhaustive")
    parser.add_argument("--seed", type=int, help="override the config seed")
    parser.add_argument("--figure", choices=FIGURES, help="emit only this figure's data (error if its sweep axis is missing)")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def _declares_demand(path: Path) -> bool:
    keys = {line.split("=", 1)[0].strip().lower() for line in path.read_text().splitlines() if "=" in line}
    return bool(keys & {"total_demand_points", "demand_fractions"})


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        config = load_config(args.config)
        updates = {}
        if args.policies:
            updates["policies"] = tuple(p.strip() for p in args.policies.split(",") if p.strip())
        if args.seed is not None:
            updates["seed"] = args.seed
        if args.figure == "ee_vs_traffic" and not _declares_demand(args.config):
            updates["demand_fractions"] = EE_DEMAND_FRACTIONS
        config = replace(config, **updates).validate()

        args.out_dir.mkdir(parents=True, exist_ok=True)
        result = run_experiment(config)
        emit_csv(result.rows, args.out_dir / "results.csv")
        emit_summary(result, config, args.out_dir / "summary.json")
        (args.out_dir / "config.cfg").write_text(dump_config(config))

        if args.figure:
            emit_figure_data(result.summaries, args.figure, args.out_dir / f"{args.figure}.csv")
        else:
            for figure in FIGURES:
                try:
                    figure_series(result.summaries, figure)
                except VHetNetError as exc:
                    logger.info("not emitting %s: %s", figure, exc)
                    continue
                emit_figure_data(result.summaries, figure, args.out_dir / f"{figure}.csv")
    except (VHetNetError, OSError) as exc:
        print(f"simulate: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
