"""Problem specifications: named sets of input-output examples."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Union

Value = Union[int, str, bool]


@dataclass(frozen=True)
class IOExample:
    """One observation: a variable environment and the output it must produce."""

    input: Mapping[str, Value]
    output: Value


@dataclass(frozen=True)
class Problem:
    """A named programming-by-example task."""

    name: str
    examples: tuple[IOExample, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "examples", tuple(self.examples))
