"""Command-line surface: batch experiment runners with static outputs.

Subcommands: thm11 (lower-bound suite on an interval), oracle (perturbation
sweep), dr (forward asymptotics), aktable (extremal constants), omega
(shift-window clustering), eval (ad-hoc evaluation).  Exit codes: 0 pass,
1 assertion failure, 2 config error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import sys
import traceback

from .errors import ConfigError, NumericError
from .experiments import (ExperimentConfig, ExperimentFailure,
                          run_extremal_table, run_eval,
                          run_forward_asymptotics, run_lower_bound_suite,
                          run_perturbation_sweep, run_shift_clusters,
                          write_report)

_RUNNERS = {
    "thm11": run_lower_bound_suite,
    "oracle": run_perturbation_sweep,
    "dr": run_forward_asymptotics,
    "aktable": run_extremal_table,
    "omega": run_shift_clusters,
    "eval": run_eval,
}

_HELP = {
    "thm11": "random admissible inputs over an interval; checks the a0 lower bound",
    "oracle": "perturbation families; checks deviations shrink with the perturbation",
    "dr": "semicircle plus off-band atoms; checks the coefficient tail trend",
    "aktable": "extremal-constant table with grid cross-checks",
    "omega": "greedy clustering of shifted coefficient windows",
    "eval": "ad-hoc evaluation of H / boundary values / Hilbert transform",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reflectionless",
        description="batch experiments for reflectionless Jacobi spectral theory")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in _HELP.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", default=None, help="JSON config file")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--format", choices=("csv", "json"), default=None)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    name = args.command
    try:
        cfg = ExperimentConfig.from_json(
            name, args.config, seed=args.seed,
            out_dir=args.out or f"out/{name}", fmt=args.format)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        report = _RUNNERS[name](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    except ExperimentFailure as exc:
        print(f"assertion failure: {exc}", file=sys.stderr)
        return 1
    except Exception:
        traceback.print_exc()
        return 3
    paths = write_report(report, cfg.out_dir, cfg.fmt)
    for a in report["assertions"]:
        status = "PASS" if a["passed"] else "FAIL"
        print(f"[{status}] {a['name']}: {a['detail']}")
    print(f"wrote {len(paths)} files to {cfg.out_dir}")
    if not report["passed"]:
        failing = [a["name"] for a in report["assertions"] if not a["passed"]]
        print(f"assertion failure in {name} (seed {cfg.seed}): {failing}",
              file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
