"""Geometry of finite Cayley trees.

Nodes of a height-``n``, arity-``d`` tree are numbered 1..node_count in
breadth-first order: the root is 1 and the children of node ``i`` are
``(i - 1) * d + k + 1`` for ``k = 1..d``.  Words over ``{1..d}`` address nodes
from the root.  Indices are 1-based everywhere in the public API; 0-based
positions only appear inside array storage.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import InvalidShape, InvalidWord, LeafHasNoChildren, RootHasNoParent, TooLarge

DEFAULT_NODE_CAP = 2**24
NODE_CAP_ENV = "TREECA_NODE_CAP"


def geometric_sum(d: int, k: int) -> int:
    """Return ``d + d**2 + ... + d**k`` (zero for ``k <= 0``)."""
    if k <= 0:
        return 0
    return d * (d**k - 1) // (d - 1)


@dataclass(frozen=True)
class TreeShape:
    """Arity ``d`` and height ``n`` (levels 0..n-1) of a finite Cayley tree."""

    d: int
    n: int

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 2:
            raise InvalidShape(f"arity must be an integer >= 2, got {self.d!r}")
        if int(self.n) != self.n or self.n < 2:
            raise InvalidShape(f"height must be an integer >= 2, got {self.n!r}")

    @property
    def node_count(self) -> int:
        return 1 + geometric_sum(self.d, self.n - 1)

    @property
    def first_leaf(self) -> int:
        """Index of the first node on the bottom level."""
        return self.level_offset(self.n - 1) + 1

    @property
    def internal_count(self) -> int:
        return self.level_offset(self.n - 1)

    def level_offset(self, level: int) -> int:
        """Number of nodes on levels strictly above ``level``."""
        if not 0 <= level <= self.n:
            raise ValueError(f"level {level} outside 0..{self.n}")
        return 1 + geometric_sum(self.d, level - 1) if level > 0 else 0

    def level_size(self, level: int) -> int:
        return self.d**level

    def is_leaf(self, i: int) -> bool:
        _check_node(i, self)
        return i >= self.first_leaf

    def level(self, i: int) -> int:
        _check_node(i, self)
        level = 0
        while self.level_offset(level + 1) < i:
            level += 1
        return level

    def position(self, i: int) -> tuple[int, int]:
        """Return ``(level, q)`` with ``q`` the 0-based place of ``i`` within its level."""
        level = self.level(i)
        return level, i - 1 - self.level_offset(level)


def node_count(shape: TreeShape) -> int:
    return shape.node_count


def node_cap() -> int:
    raw = os.environ.get(NODE_CAP_ENV)
    if raw is None or not raw.strip():
        return DEFAULT_NODE_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"{NODE_CAP_ENV} must be an integer, got {raw!r}") from None
    if cap < 1:
        raise ValueError(f"{NODE_CAP_ENV} must be positive, got {cap}")
    return cap


def check_cap(shape: TreeShape, cap: int | None = None) -> int:
    """Raise :class:`TooLarge` unless the tree fits under ``cap``; return its node count."""
    if cap is None:
        cap = node_cap()
    count = shape.node_count
    if count > cap:
        raise TooLarge(count, cap)
    return count


def _check_node(i: int, shape: TreeShape) -> None:
    if not 1 <= i <= shape.node_count:
        raise ValueError(f"node {i} outside 1..{shape.node_count}")


def node_index(word: Sequence[int], shape: TreeShape) -> int:
    """Breadth-first index of the node addressed by ``word``.

    >>> node_index((2, 1), TreeShape(2, 3))
    6
    """
    if len(word) >= shape.n:
        raise InvalidWord(f"word of length {len(word)} does not fit a tree of height {shape.n}")
    index = 1
    for label in word:
        if not 1 <= label <= shape.d:
            raise InvalidWord(f"label {label} outside 1..{shape.d}")
        index = (index - 1) * shape.d + label + 1
    return index


def node_word(i: int, shape: TreeShape) -> tuple[int, ...]:
    """Inverse of :func:`node_index`."""
    _check_node(i, shape)
    labels = []
    while i > 1:
        q, r = divmod(i - 2, shape.d)
        labels.append(r + 1)
        i = q + 1
    return tuple(reversed(labels))


def children(i: int, shape: TreeShape) -> list[int]:
    _check_node(i, shape)
    if i >= shape.first_leaf:
        raise LeafHasNoChildren(f"node {i} is a leaf")
    base = (i - 1) * shape.d + 1
    return [base + k for k in range(1, shape.d + 1)]


def parent(i: int, shape: TreeShape) -> int:
    _check_node(i, shape)
    if i == 1:
        raise RootHasNoParent("the root has no parent")
    return -(-(i - 1) // shape.d)


def words(shape: TreeShape) -> Iterator[tuple[int, ...]]:
    """All node addresses in breadth-first order (shortlex over 1..d)."""
    frontier: list[tuple[int, ...]] = [()]
    for _ in range(shape.n):
        yield from frontier
        frontier = [w + (k,) for w in frontier for k in range(1, shape.d + 1)]
