"""Program ASTs: decided rule nodes plus holes whose rule is still open.

A program is a tree of :class:`RuleNode` values, each carrying the 1-based
index of the grammar rule it applies.  Undecided positions are either a
:class:`Hole` (any rule of one nonterminal may still be chosen, subtree
structure unknown) or a :class:`UniformHole` (the candidate rules all share
one shape, so the children already exist).

The canonical text form of a complete program is the rule index of the root
followed, for non-leaves, by the child serializations in braces, e.g.
``4{3,4{1,3}}``.  No whitespace, ASCII digits only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

from .errors import IncompleteTreeError, NodeParseError

Node = Union["RuleNode", "UniformHole", "Hole"]


@dataclass(frozen=True)
class RuleNode:
    """AST node fixed to one grammar rule, with one subtree per child slot."""

    rule: int
    children: tuple[Node, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if self.rule < 1:
            raise ValueError(f"rule indices are 1-based, got {self.rule}")


@dataclass(frozen=True)
class UniformHole:
    """Undecided node whose candidate rules all share one shape.

    Because every rule in the domain has the same child nonterminals, the
    children can be materialized before the rule itself is decided.
    """

    domain: frozenset[int]
    children: tuple[Node, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "domain", frozenset(self.domain))
        object.__setattr__(self, "children", tuple(self.children))
        if not self.domain:
            raise ValueError("hole domain must be non-empty")


@dataclass(frozen=True)
class Hole:
    """Undecided node with no children yet; candidate rules share a nonterminal."""

    domain: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "domain", frozenset(self.domain))
        if not self.domain:
            raise ValueError("hole domain must be non-empty")


def depth(node: Node) -> int:
    """Depth of the tree; a single node (hole or leaf) has depth 1."""
    if isinstance(node, Hole):
        return 1
    if not node.children:
        return 1
    return 1 + max(depth(child) for child in node.children)


def node_count(node: Node) -> int:
    """Number of nodes in the tree, counting each hole as one node."""
    if isinstance(node, Hole):
        return 1
    return 1 + sum(node_count(child) for child in node.children)


def is_complete(node: Node) -> bool:
    """True iff the tree contains no hole of either kind."""
    if isinstance(node, (Hole, UniformHole)):
        return False
    return all(is_complete(child) for child in node.children)


def is_uniform(node: Node) -> bool:
    """True iff the tree is made of rule nodes and uniform holes only.

    A uniform tree has a fixed shape: the programs it denotes are exactly
    the assignments of one domain rule to each uniform hole.
    """
    if isinstance(node, Hole):
        return False
    if isinstance(node, RuleNode) or isinstance(node, UniformHole):
        return all(is_uniform(child) for child in node.children)
    return False


def subtrees(node: Node) -> Iterator[Node]:
    """All subtrees of ``node`` in preorder, including ``node`` itself."""
    yield node
    if not isinstance(node, Hole):
        for child in node.children:
            yield from subtrees(child)


def serialize_node(node: Node) -> str:
    """Canonical text form of a complete program.

    Raises :class:`IncompleteTreeError` if the tree contains a hole.
    """
    if not isinstance(node, RuleNode):
        raise IncompleteTreeError("cannot serialize a tree that still contains holes")
    if not node.children:
        return str(node.rule)
    return f"{node.rule}{{{','.join(serialize_node(c) for c in node.children)}}}"


def parse_node(text: str) -> RuleNode:
    """Inverse of :func:`serialize_node`.

    Raises :class:`NodeParseError` with the offending position on malformed
    input; round-trips structurally: ``parse_node(serialize_node(n)) == n``.
    """
    pos = 0

    def parse_index() -> int:
        nonlocal pos
        start = pos
        while pos < len(text) and text[pos].isdigit():
            pos += 1
        if pos == start:
            raise NodeParseError("expected a rule index", pos)
        return int(text[start:pos])

    def parse_tree() -> RuleNode:
        nonlocal pos
        index = parse_index()
        if pos < len(text) and text[pos] == "{":
            pos += 1
            children = [parse_tree()]
            while pos < len(text) and text[pos] == ",":
                pos += 1
                children.append(parse_tree())
            if pos >= len(text) or text[pos] != "}":
                raise NodeParseError("expected ',' or '}'", pos)
            pos += 1
            return RuleNode(index, tuple(children))
        return RuleNode(index)

    tree = parse_tree()
    if pos != len(text):
        raise NodeParseError("trailing input after program", pos)
    return tree
