"""Run every registered experiment with its defaults and collect reports.

Usage:
    python3 scripts/run_all.py [--out DIR] [--seed U64] [--only NAME ...]

Each experiment writes rows.csv and verdicts.json under DIR/<name>/ and
prints a one-line summary.  Exits nonzero if any boolean verdict failed.
"""
import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from bfix.experiments import (  # noqa: E402
    list_experiments,
    run_experiment,
    validate_config,
)

# solver choice is a required parameter, so "solve" runs once per solver
SOLVE_VARIANTS = {
    "solve": [
        ("solve-caristi", {"solver": "caristi"}),
        ("solve-boyd-wong", {"solver": "boyd-wong", "gamma": 2.0}),
    ],
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="results", metavar="DIR")
    parser.add_argument("--seed", type=int, default=0, metavar="U64")
    parser.add_argument("--only", nargs="*", default=None, metavar="NAME",
                        help="run only the named experiments")
    args = parser.parse_args(argv)

    runs = []
    for defn in list_experiments():
        if args.only and defn.name not in args.only:
            continue
        for label, params in SOLVE_VARIANTS.get(defn.name,
                                                [(defn.name, {})]):
            runs.append((label, defn.name, params))

    failures = 0
    for label, name, params in runs:
        config = validate_config({"experiment": name, "parameters": params,
                                  "seed": args.seed})
        out_dir = Path(args.out) / label
        report = run_experiment(config, out_dir=out_dir)
        status = "ok" if report.passed else "FAILED"
        print(f"{label:18s} {status:6s} {len(report.rows):6d} rows "
              f"{report.runtime_seconds:8.3f}s -> {out_dir}")
        if not report.passed:
            failures += 1
            for key, value in sorted(report.verdicts.items()):
                if value is False:
                    print(f"  failed verdict: {key}")
    print(f"{len(runs) - failures}/{len(runs)} experiment runs passed")
    return 0 if failures == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
