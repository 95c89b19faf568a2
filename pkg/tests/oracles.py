"""Reference computations that share no code with the package under test."""

from __future__ import annotations

import itertools
from fractions import Fraction


def permutation_sign(perm) -> int:
    sign, seen = 1, [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def leibniz_det(rows) -> int:
    """Permutation expansion; only for dimensions up to about 8."""
    n = len(rows)
    total = 0
    for perm in itertools.permutations(range(n)):
        prod = 1
        for i, j in enumerate(perm):
            prod *= rows[i][j]
            if not prod:
                break
        if prod:
            total += permutation_sign(perm) * prod
    return total


def fraction_det(rows) -> int:
    """Gaussian elimination over the rationals."""
    a = [[Fraction(v) for v in row] for row in rows]
    n = len(a)
    det = Fraction(1)
    for k in range(n):
        pivot = next((i for i in range(k, n) if a[i][k] != 0), None)
        if pivot is None:
            return 0
        if pivot != k:
            a[k], a[pivot] = a[pivot], a[k]
            det = -det
        det *= a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    assert det.denominator == 1
    return int(det)


def tree_matrix_rows(b, c, m, d, n):
    """Entry-by-entry transcription of the matrix definition (1-based loops)."""
    size = sum(d**k for k in range(n))
    internal_last = sum(d**k for k in range(n - 1))
    K = sum(c) % m
    rows = [[0] * size for _ in range(size)]
    for i in range(1, size + 1):
        for j in range(1, size + 1):
            v = 0
            if i == j:
                v += b
            if i <= internal_last:
                for k in range(1, d + 1):
                    if j == (i - 1) * d + k + 1:
                        v += c[k - 1]
            elif j == 1:
                v += K
            rows[i - 1][j - 1] = v % m
    return rows


def g_naive(b, x, n, m) -> int:
    return sum((-1) ** k * b**k * x ** (n - 1 - k) for k in range(n)) % m


def bfs_words(d, n):
    """Words of length < n, ordered by length then lexicographically."""
    out = []
    for length in range(n):
        out.extend(itertools.product(range(1, d + 1), repeat=length))
    return out


def naive_evolve(symbols, b, c, m, d, n):
    """Apply the local rule node by node through the word addressing."""
    words = bfs_words(d, n)
    index = {w: i for i, w in enumerate(words)}
    out = []
    for w in words:
        if len(w) < n - 1:
            nbrs = [symbols[index[w + (k,)]] for k in range(1, d + 1)]
        else:
            nbrs = [symbols[index[()]]] * d
        out.append((b * symbols[index[w]] + sum(ck * x for ck, x in zip(c, nbrs))) % m)
    return out


def brute_orbit(step, x0, limit=100_000):
    seen = {}
    x = tuple(x0)
    for k in range(limit):
        if x in seen:
            return seen[x], k - seen[x]
        seen[x] = k
        x = tuple(step(list(x)))
    raise RuntimeError("no repeat")
