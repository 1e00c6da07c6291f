import pytest
from hypothesis import given
from hypothesis import strategies as st

from synthkit import (
    Hole,
    IncompleteTreeError,
    NodeParseError,
    RuleNode,
    UniformHole,
    depth,
    is_complete,
    is_uniform,
    node_count,
    parse_node,
    serialize_node,
)


def rule_trees():
    leaves = st.integers(min_value=1, max_value=9).map(RuleNode)
    return st.recursive(
        leaves,
        lambda children: st.builds(
            RuleNode,
            st.integers(min_value=1, max_value=9),
            st.lists(children, min_size=1, max_size=3).map(tuple),
        ),
        max_leaves=32,
    )


def uniform_example_tree():
    # Root *, left a uniform {+,*} node over children (1, uniform {1,x}), right 1+1.
    return RuleNode(
        5,
        (
            UniformHole(frozenset({4, 5}), (RuleNode(1), UniformHole(frozenset({1, 3})))),
            RuleNode(4, (RuleNode(1), RuleNode(1))),
        ),
    )


def test_depth_single_node():
    assert depth(RuleNode(3)) == 1


def test_depth_nested():
    assert depth(parse_node("4{3,4{1,3}}")) == 3


def test_depth_hole_counts_as_leaf():
    assert depth(Hole(frozenset({1, 2, 3}))) == 1
    assert depth(UniformHole(frozenset({4, 5}), (Hole(frozenset({1})), Hole(frozenset({1}))))) == 2


def test_node_count():
    assert node_count(RuleNode(1)) == 1
    assert node_count(parse_node("4{3,4{1,3}}")) == 5
    assert node_count(Hole(frozenset({1, 2}))) == 1


def test_serialize_leaf():
    assert serialize_node(RuleNode(3)) == "3"


def test_serialize_solution_tree():
    tree = RuleNode(4, (RuleNode(3), RuleNode(4, (RuleNode(1), RuleNode(3)))))
    assert serialize_node(tree) == "4{3,4{1,3}}"


def test_serialize_direct_children():
    assert serialize_node(RuleNode(5, (RuleNode(1), RuleNode(2)))) == "5{1,2}"


def test_serialize_rejects_holes():
    with pytest.raises(IncompleteTreeError):
        serialize_node(Hole(frozenset({1})))
    with pytest.raises(IncompleteTreeError):
        serialize_node(RuleNode(4, (RuleNode(1), UniformHole(frozenset({1, 2})))))


def test_parse_solution_tree():
    assert parse_node("4{3,4{1,3}}") == RuleNode(
        4, (RuleNode(3), RuleNode(4, (RuleNode(1), RuleNode(3))))
    )


def test_parse_leaf():
    assert parse_node("3") == RuleNode(3)


@pytest.mark.parametrize("bad", ["4{3,", "", "4{}", "4{3,}", "{1}", "4{1}junk", "1,2"])
def test_parse_errors_carry_position(bad):
    with pytest.raises(NodeParseError) as excinfo:
        parse_node(bad)
    assert excinfo.value.position >= 0


@given(rule_trees())
def test_serialize_parse_round_trip(tree):
    assert parse_node(serialize_node(tree)) == tree


def test_is_complete_solution():
    assert is_complete(parse_node("4{3,4{1,3}}"))


def test_is_complete_uniform_tree_is_not():
    assert not is_complete(uniform_example_tree())


def test_is_complete_single_hole():
    assert not is_complete(Hole(frozenset({1, 2, 3})))


def test_is_uniform():
    assert is_uniform(uniform_example_tree())
    assert is_uniform(parse_node("4{1,2}"))
    assert not is_uniform(Hole(frozenset({1})))
    assert not is_uniform(UniformHole(frozenset({4, 5}), (Hole(frozenset({1})), RuleNode(1))))


def test_holes_reject_empty_domain():
    with pytest.raises(ValueError):
        Hole(frozenset())
    with pytest.raises(ValueError):
        UniformHole(frozenset())


def test_rule_indices_one_based():
    with pytest.raises(ValueError):
        RuleNode(0)


def test_structural_equality_is_exact():
    assert RuleNode(4, (RuleNode(1), RuleNode(3))) != RuleNode(4, (RuleNode(3), RuleNode(1)))
    assert Hole(frozenset({1, 2})) != Hole(frozenset({1, 3}))
    assert UniformHole(frozenset({4, 5})) != Hole(frozenset({4, 5}))
