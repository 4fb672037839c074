#!/usr/bin/env python3
"""Run every batch experiment with its default config and collect the
reports under out/ (same entry points as the CLI subcommands)."""

import sys

from reflectionless.cli import main

EXPERIMENTS = ["thm11", "oracle", "dr", "aktable", "omega"]

if __name__ == "__main__":
    seed = sys.argv[1] if len(sys.argv) > 1 else "7"
    worst = 0
    for name in EXPERIMENTS:
        print(f"=== {name} ===")
        code = main([name, "--seed", seed, "--out", f"out/{name}"])
        worst = max(worst, code)
    sys.exit(worst)
