"""Acceptance suite: the eight exit criteria, one test each.

Each test prints a PASS line on success (visible with ``pytest -s`` or in
the captured output); tolerances are pinned inline.
"""

import json
import math
import random
import time

from synthkit import (
    IteratorConfig,
    ProbeConfig,
    PromisingProgram,
    SynthFlag,
    check_program,
    decompose,
    execute_on_input,
    make_iterator,
    max_rulenode_log_probability,
    modify_grammar_probe,
    parse_constraint,
    parse_node,
    probe,
    run_examples,
    serialize_node,
    set_uniform_probabilities,
    synth,
)
from synthkit.bench import SynthesizerSpec, get_all_problem_grammar_pairs, run_suite
from synthkit.cli import main

from conftest import SUITES_DIR
from oracles import enumerate_programs, expand_completions, random_partial_tree


def report(line):
    print(f"ACCEPTANCE {line}: PASS")


def test_criterion_1_end_to_end_arithmetic(g0, arith_problem):
    started = time.monotonic()
    result = synth(arith_problem, IteratorConfig("bfs", g0, "Int", max_depth=5))
    elapsed = time.monotonic() - started
    assert result.flag == SynthFlag.optimal_program
    for x in range(21):
        assert execute_on_input(g0, result.program, {"x": x}) == 2 * x + 1
    assert elapsed < 5.0
    # The published solution AST itself must evaluate and solve the problem,
    # even though the returned AST may be a different equivalent program.
    printed = parse_node("4{3,4{1,3}}")
    assert execute_on_input(g0, printed, {"x": 5}) == 11
    assert run_examples(g0, printed, arith_problem) == (4, 4)
    report(f"1 end-to-end bfs ({elapsed:.2f}s)")


def test_criterion_2_enumeration_oracle_equivalence(g0):
    pinned_counts = {1: 3, 2: 21, 3: 885}
    size_for_depth = {1: 1, 2: 3, 3: 7}
    for bound in (1, 2, 3):
        oracle = {serialize_node(p) for p in enumerate_programs(g0, "Int", bound)}
        assert len(oracle) == pinned_counts[bound]
        for kind in ("bfs", "dfs"):
            emitted = [
                serialize_node(p)
                for p in make_iterator(IteratorConfig(kind, g0, "Int", max_depth=bound))
            ]
            assert len(emitted) == len(set(emitted))
            assert set(emitted) == oracle
        bottom_up = [
            serialize_node(p)
            for p in make_iterator(
                IteratorConfig(
                    "bottom_up",
                    g0,
                    "Int",
                    max_size=size_for_depth[bound],
                    max_depth=bound,
                )
            )
        ]
        assert len(bottom_up) == len(set(bottom_up))
        assert set(bottom_up) == oracle
    report("2 enumeration oracle equivalence (counts 3/21/885)")


def test_criterion_3_mlfs_ordering(g0):
    grammar = g0.with_probabilities([0.4, 0.1, 0.3, 0.15, 0.05])
    config = IteratorConfig("mlfs", grammar, "Int", max_depth=8, max_enumerations=200)
    likelihoods = [
        math.exp(max_rulenode_log_probability(p, grammar))
        for p in make_iterator(config)
    ]
    assert len(likelihoods) == 200
    for earlier, later in zip(likelihoods, likelihoods[1:]):
        assert later <= earlier + 1e-12
    report("3 mlfs ordering over 200 programs")


def test_criterion_4_constraint_soundness_and_completeness(g0):
    forbid = parse_constraint("(forbidden (rule 4 (var a) (var a)))")
    emitted = {
        serialize_node(p)
        for p in make_iterator(
            IteratorConfig("bfs", g0, "Int", max_depth=3, constraints=(forbid,))
        )
    }
    universe = {serialize_node(p) for p in enumerate_programs(g0, "Int", 3)}
    expected = {s for s in universe if check_program([forbid], parse_node(s))}
    leaks = emitted - expected
    false_prunes = expected - emitted
    assert not leaks and not false_prunes
    report(f"4 constraint soundness/completeness ({len(emitted)} of {len(universe)} kept)")


def test_criterion_5_decomposition_partitions(g0):
    rng = random.Random(2024)
    for _ in range(500):
        tree = random_partial_tree(g0, "Int", rng, rng.randint(1, 3))
        whole = {serialize_node(p) for p in expand_completions(g0, tree, 3)}
        union = set()
        for piece in decompose(g0, tree):
            part = {serialize_node(p) for p in expand_completions(g0, piece, 3)}
            assert union.isdisjoint(part)
            union |= part
        assert union == whole
    report("5 uniform decomposition partitions (500 random trees)")


def test_criterion_6_probe_update_arithmetic(g0):
    uniform = set_uniform_probabilities(g0)
    updated = modify_grammar_probe({PromisingProgram(parse_node("4{3,1}"), 0.5)}, uniform)
    expected = (0.256778, 0.114835, 0.256778, 0.256778, 0.114835)
    for index, value in zip(updated.indices, expected):
        assert abs(updated.probability(index) - value) <= 1e-6
    total = sum(updated.probability(i) for i in updated.indices)
    assert abs(total - 1.0) <= 1e-9
    report("6 probe update arithmetic")


def test_criterion_7_probe_end_to_end(g0, arith_problem):
    started = time.monotonic()
    program = probe(
        g0,
        "Int",
        arith_problem,
        ProbeConfig(probe_cycles=3, max_depth=5, max_enumerations=5000),
    )
    elapsed = time.monotonic() - started
    assert program is not None
    assert run_examples(g0, program, arith_problem) == (4, 4)
    assert elapsed < 10.0

    pairs = get_all_problem_grammar_pairs(SUITES_DIR / "mini-strings")
    assert len(pairs) == 10
    spec = SynthesizerSpec(kind="probe", max_depth=5, max_enumerations=5000, probe_cycles=3)
    suite_report = run_suite(pairs, spec, timeout_seconds=10.0)
    assert suite_report.solved_problems >= 7
    report(
        f"7 probe end-to-end (arith {elapsed:.2f}s, "
        f"mini-strings {suite_report.solved_problems}/10)"
    )


def test_criterion_8_determinism_and_report_integrity(tmp_path):
    payloads = []
    for i in range(2):
        path = tmp_path / f"report{i}.json"
        code = main(
            [
                "bench",
                "--suite",
                str(SUITES_DIR / "mini-strings"),
                "--synthesizer",
                "bfs",
                "--max-depth",
                "3",
                "--max-enumerations",
                "500",
                "--timeout",
                "60",
                "--report",
                str(path),
            ]
        )
        assert code == 0
        payload = json.loads(path.read_text())
        optimal = sum(1 for r in payload["problems"] if r["flag"] == "optimal_program")
        assert payload["solved_problems"] == optimal
        for record in payload["problems"]:
            record["wall_time_seconds"] = None
        payloads.append(json.dumps(payload, sort_keys=True))
    assert payloads[0] == payloads[1]
    report("8 determinism and report integrity")
