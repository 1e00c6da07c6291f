#!/usr/bin/env python3
"""Walk through the arithmetic example: define a problem, search, evaluate.

Builds the five-rule integer grammar, runs breadth-first search against the
examples {(0,1), (1,3), (2,5), (3,7)}, prints the found program, and then
solves the same problem with probe for comparison.
"""

import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from synthkit import (
    IOExample,
    IteratorConfig,
    ProbeConfig,
    Problem,
    execute_on_input,
    parse_grammar,
    probe_with_stats,
    serialize_node,
    synth,
    to_expression,
)


def main():
    grammar = parse_grammar("Int = 1 | 2 | x\nInt = Int + Int\nInt = Int * Int")
    problem = Problem(
        "linear",
        tuple(IOExample({"x": x}, 2 * x + 1) for x in (0, 1, 2, 3)),
    )

    config = IteratorConfig("bfs", grammar, "Int", max_depth=5)
    result = synth(problem, config)
    program = result.program
    print(f"bfs flag:        {result.flag.value}")
    print(f"bfs program:     {serialize_node(program)}")
    print(f"bfs expression:  {to_expression(grammar, program)}")
    print(f"bfs enumerated:  {result.stats.enumerated}")
    print(f"value at x=5:    {execute_on_input(grammar, program, {'x': 5})}")

    started = time.monotonic()
    run = probe_with_stats(
        grammar,
        "Int",
        problem,
        ProbeConfig(probe_cycles=3, max_depth=5, max_enumerations=5000),
    )
    elapsed = time.monotonic() - started
    print(f"probe program:   {serialize_node(run.program)}")
    print(f"probe expression: {to_expression(grammar, run.program)}")
    print(f"probe budget:    {run.enumerated} programs over {run.cycles_completed} cycle(s), {elapsed:.3f}s")


if __name__ == "__main__":
    main()
