"""Command line entry point: score the sklearn baselines on one dataset."""
from __future__ import annotations

import argparse
import json
import sys

from .runner import BaselineJob, JobError, run_baselines


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ml-baselines",
        description="Tune and score sklearn regressors on a scheduling dataset.",
    )
    parser.add_argument("--data", required=True, help="dataset CSV")
    parser.add_argument("--splits", required=True, help="split CSV (run_id,role)")
    parser.add_argument("--out", required=True, help="results CSV to write")
    parser.add_argument("--seed", type=int, default=0)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    job = BaselineJob(data=args.data, splits=args.splits, out=args.out, seed=args.seed)
    try:
        report = run_baselines(job)
    except (JobError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(json.dumps(report, indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
