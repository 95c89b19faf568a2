"""Orbits of the global map: forward, backward, and eventual periods."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np

from .errors import Exceeded, NotReversible
from .modmatrix import ModMatrix, build_matrix, invert_mod, matrix_order, matvec
from .reversibility import is_reversible
from .rules import Configuration, LinearRule, check_compatible, evolve
from .tree import TreeShape, check_cap


@dataclass(frozen=True)
class OrbitSummary:
    transient: int
    period: int
    steps_taken: int


def orbit(t: Configuration, rule: LinearRule, max_steps: int = 1_000_000) -> OrbitSummary:
    """Iterate until a configuration repeats.

    Every visited configuration is kept (as bytes) so the transient is exact;
    dict lookup compares keys in full after the hash matches.
    """
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    check_compatible(t, rule)
    first_seen: dict[bytes, int] = {}
    for step in range(max_steps + 1):
        key = t.key()
        if key in first_seen:
            i = first_seen[key]
            return OrbitSummary(transient=i, period=step - i, steps_taken=step)
        first_seen[key] = step
        if step < max_steps:
            t = evolve(t, rule)
    raise Exceeded(max_steps)


def trajectory(t: Configuration, rule: LinearRule, steps: int) -> Iterator[Configuration]:
    """Yield ``t`` and its first ``steps`` images."""
    yield t
    for _ in range(steps):
        t = evolve(t, rule)
        yield t


@lru_cache(maxsize=64)
def _inverse(rule: LinearRule, shape: TreeShape) -> ModMatrix:
    return invert_mod(build_matrix(rule, shape))


def preimage(t: Configuration, rule: LinearRule) -> Configuration:
    """The unique configuration that evolves into ``t`` under a reversible rule."""
    check_compatible(t, rule)
    report = is_reversible(rule, t.shape, mode="formula")
    if not report.reversible:
        raise NotReversible(
            f"{rule} is not reversible on d={t.shape.d}, n={t.shape.n} (det = {report.det})"
        )
    inv = _inverse(rule, t.shape)
    return Configuration(t.shape, t.m, matvec(inv, t.symbols.astype(np.int64)))


def backward(t: Configuration, rule: LinearRule, steps: int) -> Configuration:
    if steps < 0:
        raise ValueError("steps must be non-negative")
    for _ in range(steps):
        t = preimage(t, rule)
    return t


def global_period(
    rule: LinearRule, shape: TreeShape, max_steps: int = 100_000
) -> tuple[int, int]:
    """``(r, s)``: every orbit has transient <= r and a period dividing s."""
    check_cap(shape)
    return matrix_order(build_matrix(rule, shape), max_steps)


def basis_configurations(shape: TreeShape, m: int) -> Iterator[Configuration]:
    for i in range(shape.node_count):
        e = np.zeros(shape.node_count, dtype=np.int64)
        e[i] = 1
        yield Configuration(shape, m, e)


def find_period_witness(
    rule: LinearRule,
    shape: TreeShape,
    period: int,
    *,
    seed: int = 0,
    random_tries: int = 200,
    max_steps: int = 1_000_000,
) -> Configuration | None:
    """A configuration whose orbit has exactly ``period``, or ``None``.

    Basis vectors are tried first, then seeded random configurations.
    """
    rng = np.random.default_rng(seed)
    candidates = basis_configurations(shape, rule.m)
    for t in candidates:
        if orbit(t, rule, max_steps).period == period:
            return t
    for _ in range(random_tries):
        t = Configuration.random(shape, rule.m, rng)
        if orbit(t, rule, max_steps).period == period:
            return t
    return None
