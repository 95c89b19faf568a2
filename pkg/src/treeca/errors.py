"""Exception hierarchy for treeca."""

from __future__ import annotations


class TreeCAError(Exception):
    """Base class for every error raised by this package."""


class InvalidWord(TreeCAError, ValueError):
    pass


class LeafHasNoChildren(TreeCAError, ValueError):
    pass


class RootHasNoParent(TreeCAError, ValueError):
    pass


class InvalidShape(TreeCAError, ValueError):
    pass


class TooLarge(TreeCAError):
    """Node count exceeds the configured cap."""

    def __init__(self, node_count: int, cap: int):
        super().__init__(f"node count {node_count} exceeds cap {cap}")
        self.node_count = node_count
        self.cap = cap


class ArityMismatch(TreeCAError, ValueError):
    pass


class ShapeMismatch(TreeCAError, ValueError):
    pass


class ConfigurationFormatError(TreeCAError, ValueError):
    pass


class DimensionMismatch(TreeCAError, ValueError):
    pass


class NotInvertible(TreeCAError, ArithmeticError):
    """Matrix determinant is not a unit; ``witness`` is gcd(det, m)."""

    def __init__(self, witness: int, m: int):
        super().__init__(f"matrix is not invertible mod {m} (gcd(det, m) = {witness})")
        self.witness = witness
        self.m = m


class Exceeded(TreeCAError):
    """No repetition was found within the step budget."""

    def __init__(self, max_steps: int):
        super().__init__(f"no cycle found within {max_steps} steps")
        self.max_steps = max_steps


class CriterionDomain(TreeCAError, ValueError):
    pass


class NotReversible(TreeCAError):
    pass


class OracleMismatch(TreeCAError, AssertionError):
    """Closed-form and brute-force determinants disagree."""


class PaletteMismatch(TreeCAError, ValueError):
    pass
