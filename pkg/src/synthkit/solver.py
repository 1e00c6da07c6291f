"""Shape decomposition and constraint propagation over uniform trees.

:func:`decompose` splits a partial program with plain holes into uniform
trees, one per combination of same-shape rule classes.  A
:class:`SolverState` then owns the mutable hole domains of one uniform tree:
:meth:`~SolverState.propagate` filters domains to a fixed point under the
active constraints, and a trail of removals supports cheap LIFO
save/restore during enumeration.

Propagation strength is singleton lookahead per hole: a rule is dropped when
fixing the hole to it makes some constraint violated in every completion.
Completeness of the emitted program set is guaranteed by the final
:func:`~synthkit.constraints.check_program` filter, not by propagation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional

from .constraints import Constraint, Forbidden, Ordered, Pattern, PatternVar, ConcreteRule
from .errors import SolverStateError
from .grammar import Grammar
from .nodes import Hole, Node, RuleNode, UniformHole, is_complete, node_count, serialize_node

Path = tuple[int, ...]


def _shape_classes(grammar: Grammar, domain: Iterable[int]) -> list[tuple[frozenset[int], tuple[str, ...]]]:
    """Partition a hole domain into maximal equal-childtypes classes.

    Classes are ordered by their smallest rule index, members ascending.
    """
    groups: dict[tuple[str, ...], list[int]] = {}
    for rule in sorted(domain):
        groups.setdefault(grammar.childtypes(rule), []).append(rule)
    classes = [(frozenset(rules), shape) for shape, rules in groups.items()]
    classes.sort(key=lambda item: min(item[0]))
    return classes


def decompose(
    grammar: Grammar,
    tree: Node,
    max_depth: int | None = None,
    max_size: int | None = None,
) -> list[Node]:
    """Split every plain hole of a tree into its shape classes.

    Returns one tree per combination of per-hole classes; each plain hole
    becomes a uniform hole over one class, with fresh full-domain holes for
    its children.  The returned trees denote pairwise disjoint program sets
    whose union is the input's set.  A tree without plain holes is returned
    unchanged as a singleton list.

    Optional bounds prune per-hole class options whose trees could only
    exceed them, keeping the cartesian product from blowing up near a depth
    or size limit; without bounds the full partition is returned.
    """
    hole_classes: list[list[UniformHole]] = []
    hole_depths: list[int] = []

    def collect(node: Node, level: int) -> None:
        if isinstance(node, Hole):
            replacements = []
            for rules, shape in _shape_classes(grammar, node.domain):
                if shape and max_depth is not None and level + 1 > max_depth:
                    continue
                children = tuple(grammar.hole(symbol) for symbol in shape)
                replacements.append(UniformHole(rules, children))
            hole_classes.append(replacements)
            hole_depths.append(level)
        elif isinstance(node, (RuleNode, UniformHole)):
            for child in node.children:
                collect(child, level + 1)

    collect(tree, 1)
    if not hole_classes:
        return [tree]
    if any(not options for options in hole_classes):
        return []
    if max_size is not None:
        base = node_count(tree)
        cheapest = [min(len(opt.children) for opt in options) for options in hole_classes]
        slack = max_size - base - sum(cheapest)
        if slack < 0:
            return []
        hole_classes = [
            [
                option
                for option in options
                if len(option.children) - cheap <= slack
            ]
            for options, cheap in zip(hole_classes, cheapest)
        ]

    def rebuild(node: Node, replacements: Iterator[UniformHole]) -> Node:
        if isinstance(node, Hole):
            return next(replacements)
        if not node.children:
            return node
        children = tuple(rebuild(child, replacements) for child in node.children)
        if isinstance(node, RuleNode):
            return RuleNode(node.rule, children)
        return UniformHole(node.domain, children)

    return [rebuild(tree, iter(combo)) for combo in itertools.product(*hole_classes)]


def split_first_hole(
    grammar: Grammar, tree: Node, max_depth: int | None = None
) -> list[Node] | None:
    """Replace the leftmost plain hole with one uniform hole per shape class.

    Applies the :func:`decompose` partition one hole at a time, so a dequeued
    tree never fans out by more than its class count; repeated splitting
    converges to the same uniform trees.  Returns ``None`` when the tree has
    no plain hole, and drops classes whose fresh children would already
    exceed ``max_depth``.
    """

    def find(node: Node, level: int):
        if isinstance(node, Hole):
            return (), level
        for i, child in enumerate(node.children):
            found = find(child, level + 1)
            if found is not None:
                path, hole_level = found
                return (i,) + path, hole_level
        return None

    found = find(tree, 1)
    if found is None:
        return None
    path, level = found

    def replace(node: Node, remaining: Path, replacement: Node) -> Node:
        if not remaining:
            return replacement
        index = remaining[0]
        children = tuple(
            replace(child, remaining[1:], replacement) if i == index else child
            for i, child in enumerate(node.children)
        )
        if isinstance(node, RuleNode):
            return RuleNode(node.rule, children)
        return UniformHole(node.domain, children)

    hole = tree
    for index in path:
        hole = hole.children[index]
    out = []
    for rules, shape in _shape_classes(grammar, hole.domain):
        if shape and max_depth is not None and level + 1 > max_depth:
            continue
        replacement = UniformHole(rules, tuple(grammar.hole(s) for s in shape))
        out.append(replace(tree, path, replacement))
    return out


@dataclass(frozen=True)
class Checkpoint:
    """Opaque marker for a solver trail position."""

    trail_length: int


class SolverState:
    """Backtrackable hole domains for one uniform tree.

    The tree's shape is fixed; the only mutable state is which rules remain
    in each uniform hole's domain.  Holes whose domain shrinks to one rule
    count as decided and materialize as rule nodes.
    """

    def __init__(self, grammar: Grammar, tree: Node, constraints: Iterable[Constraint] = ()):
        self.grammar = grammar
        self.root = tree
        self.constraints = tuple(constraints)
        self._domains: dict[Path, set[int]] = {}
        self._collect_holes(tree, ())
        self._trail: list[tuple[Path, int]] = []

    def _collect_holes(self, node: Node, path: Path) -> None:
        if isinstance(node, Hole):
            raise ValueError("solver state requires a uniform tree (no plain holes)")
        if isinstance(node, UniformHole):
            self._domains[path] = set(node.domain)
        for i, child in enumerate(node.children):
            self._collect_holes(child, path + (i,))

    # -- domains and the trail -------------------------------------------

    def hole_paths(self) -> list[Path]:
        return list(self._domains)

    def domain(self, path: Path) -> tuple[int, ...]:
        return tuple(sorted(self._domains[path]))

    def remove(self, path: Path, rule: int) -> None:
        self._domains[path].remove(rule)
        self._trail.append((path, rule))

    def assign(self, path: Path, rule: int) -> None:
        """Shrink a hole's domain to a single rule, recording the removals."""
        for other in sorted(self._domains[path] - {rule}):
            self.remove(path, other)

    def save_state(self) -> Checkpoint:
        return Checkpoint(len(self._trail))

    def restore_state(self, checkpoint: Checkpoint) -> None:
        if checkpoint.trail_length > len(self._trail):
            raise SolverStateError(
                "stale checkpoint: an earlier save_state was already restored past it"
            )
        while len(self._trail) > checkpoint.trail_length:
            path, rule = self._trail.pop()
            self._domains[path].add(rule)

    # -- materialization ----------------------------------------------------

    def current_tree(self, overrides: Mapping[Path, int] | None = None) -> Node:
        """The tree under current domains; singleton domains become rule nodes."""
        return self._materialize(self.root, (), overrides)

    def _materialize(self, node: Node, path: Path, overrides) -> Node:
        children = tuple(
            self._materialize(child, path + (i,), overrides)
            for i, child in enumerate(node.children)
        )
        if isinstance(node, RuleNode):
            return RuleNode(node.rule, children)
        if overrides is not None and path in overrides:
            return RuleNode(overrides[path], children)
        domain = self._domains[path]
        if len(domain) == 1:
            return RuleNode(next(iter(domain)), children)
        return UniformHole(frozenset(domain), children)

    # -- propagation ---------------------------------------------------------

    def propagate(self) -> bool:
        """Filter hole domains to a fixed point; False means wiped out.

        A rule is removed from a hole when fixing the hole to it yields a
        definite constraint violation, i.e. one present in every completion
        of the remaining holes.
        """
        if not self.constraints:
            return all(self._domains.values()) if self._domains else True
        changed = True
        while changed:
            changed = False
            if self._violated(self.current_tree()):
                return False
            for path in self._domains:
                for rule in sorted(self._domains[path]):
                    if self._violated(self.current_tree({path: rule})):
                        self.remove(path, rule)
                        changed = True
                if not self._domains[path]:
                    return False
        return True

    def _violated(self, tree: Node) -> bool:
        for constraint in self.constraints:
            if _definitely_violated(constraint, tree):
                return True
        return False


def _definitely_violated(constraint: Constraint, tree: Node) -> bool:
    for sub in _partial_subtrees(tree):
        bindings = _match_definite(constraint.pattern, sub)
        if bindings is None:
            continue
        if isinstance(constraint, Forbidden):
            return True
        if _definitely_misordered(constraint, bindings):
            return True
    return False


def _partial_subtrees(node: Node) -> Iterator[Node]:
    yield node
    if not isinstance(node, Hole):
        for child in node.children:
            yield from _partial_subtrees(child)


def _match_definite(pattern: Pattern, node: Node) -> Optional[dict[str, Node]]:
    """Match that holds in *every* completion of the partial tree.

    Undecided nodes only match ``domain`` patterns that cover their whole
    domain; repeated variables require fully decided, equal subtrees.
    """
    bindings: dict[str, Node] = {}

    def walk(p: Pattern, n: Node) -> bool:
        if isinstance(p, PatternVar):
            if p.name in bindings:
                previous = bindings[p.name]
                return is_complete(previous) and is_complete(n) and previous == n
            bindings[p.name] = n
            return True
        if isinstance(n, Hole):
            return False
        if isinstance(p, ConcreteRule):
            if not (isinstance(n, RuleNode) and n.rule == p.rule):
                return False
        else:
            if isinstance(n, RuleNode):
                if n.rule not in p.domain:
                    return False
            elif not n.domain <= p.domain:
                return False
        if p.children is None:
            return True
        if len(p.children) != len(n.children):
            return False
        return all(walk(pc, nc) for pc, nc in zip(p.children, n.children))

    return bindings if walk(pattern, node) else None


def _definitely_misordered(constraint: Ordered, bindings: dict[str, Node]) -> bool:
    bound = [bindings[v] for v in constraint.variables]
    if not all(is_complete(n) for n in bound):
        return False
    texts = [serialize_node(n) for n in bound]
    return any(a > b for a, b in zip(texts, texts[1:]))
