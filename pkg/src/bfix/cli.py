"""Command-line entry point.

Subcommands:
  run               execute one experiment from a JSON config
  list-experiments  show the experiment names, descriptions, CSV columns
  list-functions    show the registered function/map/multimap templates

Exit status: 0 when all boolean verdicts pass, 1 on assertion failure
(reports are still written), 2 on configuration errors.
"""
from __future__ import annotations

import argparse
import dataclasses
import sys
import textwrap
from typing import Optional, Sequence

from .comparison import list_function_templates
from .errors import BfixError, ConfigError
from .experiments import (
    list_experiments,
    list_map_templates,
    list_potential_templates,
    load_config,
    run_experiment,
)
from .multivalued import list_multimap_templates


def _seed_type(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer: {text!r}")
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must lie in [0, 2**64)")
    return value


def _columns_epilog() -> str:
    lines = ["rows.csv columns per experiment:"]
    for defn in list_experiments():
        lines.append(f"  {defn.name}: {', '.join(defn.columns)}")
    return "\n".join(lines)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bfix",
        description="Fixed-point experiments in b-metric spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser(
        "run",
        help="run one experiment from a JSON config",
        description=("Run the experiment named in the config and write "
                     "rows.csv plus verdicts.json.  Boolean verdicts are "
                     "assertions; the run passes iff all are true."),
        epilog=_columns_epilog(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    run_p.add_argument("--config", required=True, metavar="PATH",
                       help="JSON experiment configuration")
    run_p.add_argument("--out", default=None, metavar="DIR",
                       help="output directory (overrides config output_path)")
    run_p.add_argument("--seed", type=_seed_type, default=None, metavar="U64",
                       help="override the config seed")

    sub.add_parser("list-experiments",
                   help="list experiment names and their CSV columns")
    sub.add_parser("list-functions",
                   help="list registered function and map templates")
    return parser


def _cmd_run(args) -> int:
    try:
        config = load_config(args.config)
        if args.seed is not None:
            config = dataclasses.replace(config, seed=args.seed)
        report = run_experiment(config, out_dir=args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except BfixError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    print(f"experiment: {config.experiment} (seed {config.seed})")
    print(f"rows: {len(report.rows)}")
    for name in sorted(report.verdicts):
        print(f"  {name}: {report.verdicts[name]}")
    target = args.out if args.out is not None else config.output_path
    if target is not None:
        print(f"wrote {target}/rows.csv and {target}/verdicts.json")
    print(f"passed: {report.passed}")
    return 0 if report.passed else 1


def _cmd_list_experiments() -> int:
    for defn in list_experiments():
        print(defn.name)
        print(textwrap.fill(defn.description, width=74,
                            initial_indent="    ", subsequent_indent="    "))
        print(f"    columns: {', '.join(defn.columns)}")
    return 0


def _cmd_list_functions() -> int:
    print("comparison functions:")
    for name in list_function_templates():
        print(f"  {name}")
    print("self-maps:")
    for name in list_map_templates():
        print(f"  {name}")
    print("potentials:")
    for name in list_potential_templates():
        print(f"  {name}")
    print("multimaps:")
    for name in list_multimap_templates():
        print(f"  {name}")
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    if args.command == "list-experiments":
        return _cmd_list_experiments()
    return _cmd_list_functions()


if __name__ == "__main__":
    sys.exit(main())
