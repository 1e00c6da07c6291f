#!/usr/bin/env python3
"""Benchmark the bundled mini-strings suite with a chosen synthesizer.

Usage:
    python scripts/bench_mini_strings.py [--synthesizer probe|bfs|dfs|mlfs]
                                         [--timeout SECONDS] [--report PATH]
"""

import argparse
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from synthkit.bench import SynthesizerSpec, get_all_problem_grammar_pairs, run_suite


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--synthesizer", default="probe", choices=["probe", "bfs", "dfs", "mlfs"])
    parser.add_argument("--timeout", type=float, default=10.0)
    parser.add_argument("--max-depth", type=int, default=5)
    parser.add_argument("--max-enumerations", type=int, default=5000)
    parser.add_argument("--cycles", type=int, default=3)
    parser.add_argument("--parallelism", type=int, default=1)
    parser.add_argument("--report", type=Path, default=None)
    args = parser.parse_args()

    pairs = get_all_problem_grammar_pairs(ROOT / "suites" / "mini-strings")
    spec = SynthesizerSpec(
        kind=args.synthesizer,
        max_depth=args.max_depth,
        max_enumerations=args.max_enumerations,
        probe_cycles=args.cycles,
        allow_evaluation_errors=True,
    )
    report = run_suite(pairs, spec, timeout_seconds=args.timeout, parallelism=args.parallelism)
    width = max(len(r.name) for r in report.problems)
    for record in report.problems:
        mark = "ok " if record.solved else "-- "
        print(
            f"{mark}{record.name:<{width}}  {record.wall_time_seconds:7.3f}s  "
            f"{record.enumerated:6d} programs  {record.program or ''}"
        )
    print(f"\nsolved {report.solved_problems}/{report.total} with {args.synthesizer}")
    if args.report:
        args.report.write_text(report.to_json())
        print(f"report written to {args.report}")


if __name__ == "__main__":
    main()
