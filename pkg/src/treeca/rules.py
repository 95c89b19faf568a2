"""Linear local rules and the periodic-boundary global map.

A rule ``f(x0, x1..xd) = b*x0 + c1*x1 + ... + cd*xd (mod m)`` acts on every
node of a finite tree; the children of a leaf are taken to be the root, so a
leaf updates to ``b*t_leaf + K*t_root`` with ``K = c1 + ... + cd``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import ArityMismatch, ConfigurationFormatError, ShapeMismatch
from .tree import TreeShape, check_cap


def symbol_dtype(m: int) -> np.dtype:
    """Smallest unsigned integer type that holds ``m - 1``."""
    for dt in (np.uint8, np.uint16, np.uint32):
        if m - 1 <= np.iinfo(dt).max:
            return np.dtype(dt)
    return np.dtype(np.uint64)


@dataclass(frozen=True)
class LinearRule:
    m: int
    b: int
    c: tuple[int, ...]

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 2:
            raise ValueError(f"modulus must be an integer >= 2, got {self.m!r}")
        c = tuple(int(x) % self.m for x in self.c)
        if len(c) < 2:
            raise ArityMismatch(f"need at least two child coefficients, got {len(c)}")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "b", int(self.b) % self.m)

    @property
    def d(self) -> int:
        return len(self.c)

    def coefficient_sum(self) -> int:
        """``K = (c1 + ... + cd) mod m``."""
        return sum(self.c) % self.m

    def __str__(self):
        coeffs = ",".join(map(str, self.c))
        return f"b={self.b} c=({coeffs}) mod {self.m}"


@dataclass(frozen=True, eq=False)
class Configuration:
    """Symbols of an n-block in breadth-first order (position i-1 holds node i)."""

    shape: TreeShape
    m: int
    symbols: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.asarray(self.symbols)
        if arr.ndim != 1 or arr.shape[0] != self.shape.node_count:
            raise ShapeMismatch(
                f"expected {self.shape.node_count} symbols, got shape {arr.shape}"
            )
        if arr.size and (arr.min() < 0 or arr.max() >= self.m):
            raise ValueError(f"symbols must lie in [0, {self.m})")
        arr = arr.astype(symbol_dtype(self.m), copy=True)
        arr.setflags(write=False)
        object.__setattr__(self, "symbols", arr)

    @classmethod
    def zeros(cls, shape: TreeShape, m: int) -> Configuration:
        check_cap(shape)
        return cls(shape, m, np.zeros(shape.node_count, dtype=np.int64))

    @classmethod
    def from_values(cls, shape: TreeShape, m: int, values: Iterable[int]) -> Configuration:
        return cls(shape, m, np.fromiter((int(v) for v in values), dtype=np.int64))

    @classmethod
    def random(cls, shape: TreeShape, m: int, rng: np.random.Generator) -> Configuration:
        check_cap(shape)
        return cls(shape, m, rng.integers(0, m, shape.node_count))

    @classmethod
    def from_levels(cls, shape: TreeShape, m: int, levels: Sequence[int]) -> Configuration:
        """Configuration constant on each level (hence sibling-symmetric)."""
        if len(levels) != shape.n:
            raise ShapeMismatch(f"need {shape.n} level values, got {len(levels)}")
        check_cap(shape)
        counts = [shape.level_size(k) for k in range(shape.n)]
        return cls(shape, m, np.repeat(np.asarray(levels, dtype=np.int64), counts))

    def key(self) -> bytes:
        """Canonical byte serialization used for hashing orbits."""
        return self.symbols.tobytes()

    def __eq__(self, other):
        if not isinstance(other, Configuration):
            return NotImplemented
        return (
            self.shape == other.shape
            and self.m == other.m
            and np.array_equal(self.symbols, other.symbols)
        )

    def __hash__(self):
        return hash((self.shape, self.m, self.key()))

    def __len__(self):
        return len(self.symbols)

    def tolist(self) -> list[int]:
        return [int(v) for v in self.symbols]


def local_apply(rule: LinearRule, x0: int, neighbors: Sequence[int]) -> int:
    if len(neighbors) != rule.d:
        raise ArityMismatch(f"rule has arity {rule.d}, got {len(neighbors)} neighbors")
    return (rule.b * x0 + sum(ck * xk for ck, xk in zip(rule.c, neighbors))) % rule.m


def check_compatible(t: Configuration, rule: LinearRule) -> None:
    if t.m != rule.m:
        raise ShapeMismatch(f"configuration is mod {t.m}, rule is mod {rule.m}")
    if t.shape.d != rule.d:
        raise ShapeMismatch(f"tree arity {t.shape.d} does not match rule arity {rule.d}")


def evolve_array(x: np.ndarray, rule: LinearRule, shape: TreeShape) -> np.ndarray:
    """One step of the global map on a raw symbol vector (int64 out, reduced)."""
    m, d = rule.m, rule.d
    x = x.astype(np.int64) if m <= 2**20 else x.astype(object)
    internal = shape.internal_count
    coeffs = np.array(rule.c, dtype=x.dtype)
    out = rule.b * x
    # children of nodes 1..internal occupy positions 2..node_count contiguously
    out[:internal] += x[1:].reshape(internal, d) @ coeffs
    out[internal:] += rule.coefficient_sum() * x[0]
    return out % m


def evolve(t: Configuration, rule: LinearRule) -> Configuration:
    check_compatible(t, rule)
    return Configuration(t.shape, t.m, evolve_array(t.symbols, rule, t.shape))


def iterate(t: Configuration, rule: LinearRule, steps: int) -> Configuration:
    if steps < 0:
        raise ValueError("steps must be non-negative")
    for _ in range(steps):
        t = evolve(t, rule)
    return t


def is_sibling_symmetric(t: Configuration) -> bool:
    """True iff every internal node's child subtrees carry identical patterns.

    Equivalently, the symbol at a node depends only on its level.
    """
    shape = t.shape
    for level in range(1, shape.n):
        lo = shape.level_offset(level)
        row = t.symbols[lo : lo + shape.level_size(level)]
        if np.any(row != row[0]):
            return False
    return True


def format_configuration(t: Configuration) -> str:
    header = f"{t.m} {t.shape.d} {t.shape.n}"
    return header + "\n" + " ".join(map(str, t.tolist())) + "\n"


def parse_configuration(text: str) -> Configuration:
    """Parse the two-line text format: ``m d n`` then node_count symbols."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ConfigurationFormatError("empty configuration")
    try:
        m, d, n = (int(tok) for tok in lines[0].split())
    except ValueError:
        raise ConfigurationFormatError(f"bad header {lines[0]!r}; expected 'm d n'") from None
    shape = TreeShape(d, n)
    check_cap(shape)
    try:
        values = [int(tok) for ln in lines[1:] for tok in ln.split()]
    except ValueError as exc:
        raise ConfigurationFormatError(f"non-integer symbol: {exc}") from None
    if len(values) != shape.node_count:
        raise ConfigurationFormatError(
            f"expected {shape.node_count} symbols for d={d}, n={n}, got {len(values)}"
        )
    bad = [v for v in values if not 0 <= v < m]
    if bad:
        raise ConfigurationFormatError(f"symbol {bad[0]} outside [0, {m})")
    return Configuration.from_values(shape, m, values)
