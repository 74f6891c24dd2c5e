"""Script entry point: render charts from experiment CSVs."""

from __future__ import annotations

import argparse
import sys

from .plots import EXPERIMENT_AXES, SchemaError, plot_experiment, plot_summary_table


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="figplots",
        description="Render mean-incentive charts from experiment result CSVs.",
    )
    parser.add_argument("csv", nargs="+", help="result CSV path(s)")
    parser.add_argument(
        "--experiment",
        required=True,
        choices=tuple(EXPERIMENT_AXES) + ("table1",),
        help="which chart to draw; table1 renders a summary table image",
    )
    parser.add_argument("--out", required=True, help="output path base")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.experiment == "table1":
            plot_summary_table(args.csv, args.out)
        else:
            if len(args.csv) != 1:
                raise SchemaError("exactly one CSV expected for a single chart")
            plot_experiment(args.csv[0], args.experiment, args.out)
    except (SchemaError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
