"""Matrix presentation of the global map and exact linear algebra over Z_m.

``build_matrix`` produces the matrix ``T`` with ``T @ t == evolve(t)`` in the
breadth-first basis.  The determinant oracle runs fraction-free (Bareiss)
elimination on exact Python integers so it never divides by a zero divisor of
Z_m; inverses and solves work prime power by prime power and are recombined
with the Chinese remainder theorem.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, Exceeded, NotInvertible
from .rules import LinearRule
from .tree import TreeShape, check_cap

_INT64_LIMIT = 2**62


def _work_dtype(m: int, dim: int):
    # int64 is safe while a full dot product of reduced entries stays below 2**62
    return np.int64 if (m - 1) ** 2 * max(dim, 1) < _INT64_LIMIT else object


@dataclass(frozen=True, eq=False)
class ModMatrix:
    """Square matrix of residues mod ``m`` (dense storage)."""

    m: int
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.asarray(self.entries)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DimensionMismatch(f"matrix must be square, got shape {arr.shape}")
        dt = _work_dtype(self.m, arr.shape[0])
        if arr.dtype == object or dt is object:
            arr = np.array([[int(v) % self.m for v in row] for row in arr], dtype=dt)
        else:
            arr = arr.astype(np.int64) % self.m
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def identity(cls, dim: int, m: int) -> ModMatrix:
        return cls(m, np.eye(dim, dtype=np.int64))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], m: int) -> ModMatrix:
        return cls(m, np.array([[int(v) for v in row] for row in rows], dtype=object))

    def tolist(self) -> list[list[int]]:
        return [[int(v) for v in row] for row in self.entries]

    def key(self) -> bytes:
        """Row-major serialization of the reduced entries."""
        if self.entries.dtype == object:
            return repr(self.tolist()).encode()
        return self.entries.tobytes()

    def __eq__(self, other):
        if not isinstance(other, ModMatrix):
            return NotImplemented
        return self.m == other.m and np.array_equal(self.entries, other.entries)

    __hash__ = None

    def __matmul__(self, other: ModMatrix) -> ModMatrix:
        return matmul(self, other)


@dataclass(frozen=True)
class PrimePowerFactorization:
    factors: tuple[tuple[int, int], ...]

    @property
    def value(self) -> int:
        return math.prod(p**k for p, k in self.factors)

    def prime_powers(self) -> list[int]:
        return [p**k for p, k in self.factors]


def factorize(m: int) -> PrimePowerFactorization:
    from sympy import factorint

    if m < 2:
        raise ValueError(f"modulus must be >= 2, got {m}")
    return PrimePowerFactorization(tuple(sorted(factorint(m).items())))


# -- construction ---------------------------------------------------------------


def build_matrix(rule: LinearRule, shape: TreeShape, cap: int | None = None) -> ModMatrix:
    """Matrix of one evolution step in the breadth-first basis."""
    if rule.d != shape.d:
        raise DimensionMismatch(f"rule arity {rule.d} does not match tree arity {shape.d}")
    dim = check_cap(shape, cap)
    d, internal = shape.d, shape.internal_count
    dt = _work_dtype(rule.m, dim)
    a = np.zeros((dim, dim), dtype=dt)
    a[np.arange(dim), np.arange(dim)] = rule.b
    rows = np.repeat(np.arange(internal), d)
    a[rows, np.arange(1, dim)] = np.tile(np.array(rule.c, dtype=dt), internal)
    a[internal:, 0] = (a[internal:, 0] + rule.coefficient_sum()) % rule.m
    return ModMatrix(rule.m, a)


def dump_matrix(mat: ModMatrix) -> str:
    lines = [f"{mat.m} {mat.dim}"]
    lines += [" ".join(map(str, row)) for row in mat.tolist()]
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> ModMatrix:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    m, dim = (int(tok) for tok in lines[0].split())
    rows = [[int(tok) for tok in ln.split()] for ln in lines[1:]]
    if len(rows) != dim or any(len(r) != dim for r in rows):
        raise DimensionMismatch(f"expected {dim} rows of {dim} integers")
    return ModMatrix.from_rows(rows, m)


# -- exact determinant ----------------------------------------------------------


def bareiss_det(rows: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant by fraction-free elimination.

    Rows are held as ``{column: value}`` dicts so that zero entries cost
    nothing; every intermediate quotient is exact.
    """
    n = len(rows)
    if n == 0:
        return 1
    if any(len(r) != n for r in rows):
        raise DimensionMismatch("determinant needs a square matrix")
    work = [{j: int(v) for j, v in enumerate(r) if v} for r in rows]
    sign, prev = 1, 1
    for k in range(n):
        if not work[k].get(k):
            for i in range(k + 1, n):
                if work[i].get(k):
                    work[k], work[i] = work[i], work[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot_row = work[k]
        pivot = pivot_row[k]
        if k == n - 1:
            return sign * pivot
        tail = [(j, v) for j, v in pivot_row.items() if j > k]
        for i in range(k + 1, n):
            row = work[i]
            a = row.pop(k, 0)
            if not a and pivot == prev:
                continue  # (v * pivot) // prev == v
            new = {j: v * pivot for j, v in row.items()}
            for j, v in tail if a else ():
                w = new.get(j, 0) - a * v
                if w:
                    new[j] = w
                else:
                    new.pop(j, None)
            if prev != 1:
                new = {j: v // prev for j, v in new.items()}
            work[i] = new
        prev = pivot
    raise AssertionError("unreachable")


def det_exact(mat: ModMatrix) -> int:
    """Determinant of the integer lift with entries in ``[0, m)``.

    The node order is reversed first (a similarity, so the determinant is
    unchanged); for tree matrices this leaves a lower-triangular matrix plus
    one dense column and elimination produces almost no fill-in.
    """
    rows = mat.tolist()
    rows = [r[::-1] for r in rows[::-1]]
    return bareiss_det(rows)


def det_exact_mod(mat: ModMatrix) -> int:
    return det_exact(mat) % mat.m


# -- products -------------------------------------------------------------------


def _mul(a: np.ndarray, b: np.ndarray, m: int) -> np.ndarray:
    dt = _work_dtype(m, a.shape[-1])
    return (a.astype(dt) @ b.astype(dt)) % m


def matvec(mat: ModMatrix, v: Sequence[int]) -> np.ndarray:
    vec = np.asarray(v)
    if vec.ndim != 1 or vec.shape[0] != mat.dim:
        raise DimensionMismatch(f"vector length {vec.shape} does not match dimension {mat.dim}")
    return _mul(mat.entries, vec % mat.m, mat.m)


def matmul(a: ModMatrix, b: ModMatrix) -> ModMatrix:
    if a.m != b.m:
        raise ValueError(f"moduli differ: {a.m} vs {b.m}")
    if a.dim != b.dim:
        raise DimensionMismatch(f"dimensions differ: {a.dim} vs {b.dim}")
    return ModMatrix(a.m, _mul(a.entries, b.entries, a.m))


def matpow(mat: ModMatrix, e: int) -> ModMatrix:
    if e < 0:
        raise ValueError("negative exponent; use invert_mod")
    result = ModMatrix.identity(mat.dim, mat.m)
    base = mat
    while e:
        if e & 1:
            result = result @ base
        e >>= 1
        if e:
            base = base @ base
    return result


# -- inverse and solve ----------------------------------------------------------


def _not_invertible(mat: ModMatrix) -> NotInvertible:
    return NotInvertible(math.gcd(det_exact(mat), mat.m), mat.m)


def _unit_pivot_reduce(a: np.ndarray, rhs: np.ndarray, p: int, q: int) -> np.ndarray | None:
    """Gauss-Jordan over Z_q (q a power of p) using pivots that are units.

    Reduces ``[a | rhs]`` in place and returns the solution block, or ``None``
    when some column has no unit below the diagonal (then det is divisible by p).
    """
    n = a.shape[0]
    for k in range(n):
        col = a[k:, k] % p
        hits = np.flatnonzero(col)
        if hits.size == 0:
            return None
        r = k + int(hits[0])
        if r != k:
            a[[k, r]] = a[[r, k]]
            rhs[[k, r]] = rhs[[r, k]]
        inv = pow(int(a[k, k]), -1, q)
        a[k] = (a[k] * inv) % q
        rhs[k] = (rhs[k] * inv) % q
        factors = a[:, k].copy()
        factors[k] = 0
        nz = np.flatnonzero(factors)
        if nz.size:
            f = factors[nz][:, None]
            a[nz] = (a[nz] - f * a[k]) % q
            rhs[nz] = (rhs[nz] - f * rhs[k]) % q
    return rhs


def _inverse_prime_power(mat: ModMatrix, p: int, k: int) -> np.ndarray | None:
    n = mat.dim
    dt = _work_dtype(p**k, n)
    a = mat.entries.astype(dt) % p
    x = _unit_pivot_reduce(a.copy(), np.eye(n, dtype=dt), p, p)
    if x is None:
        return None
    # Newton iteration X <- X (2I - A X) doubles the p-adic precision each round
    target = p**k
    q = p
    lifted = mat.entries.astype(dt)
    two_i = 2 * np.eye(n, dtype=dt)
    while q < target:
        q = min(q * q, target)
        ax = _mul(lifted % q, x, q)
        x = _mul(x, (two_i - ax) % q, q)
    return x


def _crt_combine(parts: list[tuple[int, np.ndarray]], m: int) -> np.ndarray:
    dt = _work_dtype(m, 1)
    total = np.zeros(parts[0][1].shape, dtype=dt)
    for q, x in parts:
        rest = m // q
        coef = (rest * pow(rest, -1, q)) % m
        total = (total + (x.astype(dt) % m) * coef) % m
    return total


def invert_mod(mat: ModMatrix) -> ModMatrix:
    """Inverse of ``mat`` over Z_m.

    Each prime power ``p**k`` of ``m`` is handled by inverting mod ``p`` and
    lifting with Newton iteration; the pieces are recombined by CRT.
    """
    parts = []
    for p, k in factorize(mat.m).factors:
        x = _inverse_prime_power(mat, p, k)
        if x is None:
            raise _not_invertible(mat)
        parts.append((p**k, x))
    return ModMatrix(mat.m, _crt_combine(parts, mat.m))


def solve_mod(mat: ModMatrix, y: Sequence[int]) -> np.ndarray:
    """Unique ``x`` with ``mat @ x == y (mod m)``, by unit-pivot elimination per prime power."""
    vec = np.asarray(y)
    if vec.ndim != 1 or vec.shape[0] != mat.dim:
        raise DimensionMismatch(f"vector length {vec.shape} does not match dimension {mat.dim}")
    parts = []
    for p, k in factorize(mat.m).factors:
        q = p**k
        dt = _work_dtype(q, mat.dim)
        x = _unit_pivot_reduce(
            mat.entries.astype(dt) % q, (vec.astype(dt) % q)[:, None], p, q
        )
        if x is None:
            raise _not_invertible(mat)
        parts.append((q, x[:, 0]))
    return _crt_combine(parts, mat.m)


# -- eventual period of powers --------------------------------------------------


def matrix_order(mat: ModMatrix, max_steps: int = 100_000) -> tuple[int, int]:
    """Minimal ``(r, s)`` with ``mat**(r+s) == mat**r``.

    Powers are hashed by digest; a digest hit is confirmed by recomputing the
    earlier power and comparing entrywise.
    """
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    seen: dict[bytes, list[int]] = {}
    power = ModMatrix.identity(mat.dim, mat.m)
    for j in range(max_steps + 1):
        digest = hashlib.blake2b(power.key(), digest_size=16).digest()
        for i in seen.get(digest, ()):
            if matpow(mat, i) == power:
                return i, j - i
        seen.setdefault(digest, []).append(j)
        if j < max_steps:
            power = power @ mat
    raise Exceeded(max_steps)
