from pathlib import Path

import pytest

from synthkit import IOExample, Problem, parse_grammar, set_uniform_probabilities

ARITH_TEXT = "Int = 1 | 2 | x\nInt = Int + Int\nInt = Int * Int"

SUITES_DIR = Path(__file__).resolve().parent.parent / "suites"


@pytest.fixture
def g0():
    """The five-rule arithmetic grammar: 1:1, 2:2, 3:x, 4:+, 5:*."""
    return parse_grammar(ARITH_TEXT)


@pytest.fixture
def g0_uniform(g0):
    return set_uniform_probabilities(g0)


@pytest.fixture
def arith_problem():
    return Problem(
        "linear",
        tuple(IOExample({"x": x}, 2 * x + 1) for x in (0, 1, 2, 3)),
    )


@pytest.fixture
def strings_grammar():
    return parse_grammar(
        'S = x\n'
        'S = "!"\n'
        'S = concat ( S , S )\n'
        'S = substring ( S , I , I )\n'
        'I = 1 | 2\n'
        'I = length ( S )'
    )
