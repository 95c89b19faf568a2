"""Closed-form determinant of the tree matrix and the reversibility criteria.

For a rule ``b*x0 + c1*x1 + ... + cd*xd`` on a height-``n`` tree with
``K = c1 + ... + cd`` and ``E = (d + d**2 + ... + d**(n-1)) - n + 1``::

    det T = (-1)**(n-1) * (b + K) * b**E * g(K)   (mod m)

where ``g(x) = sum_{k<n} (-1)**k * b**k * x**(n-1-k)``.  For even ``d`` the
sign equals ``(-1)**E``; for odd ``d`` and even ``n`` it does not, and the
brute-force oracle confirms ``(-1)**(n-1)`` is the right one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Literal

from .errors import CriterionDomain, OracleMismatch
from .modmatrix import build_matrix, det_exact_mod, factorize
from .rules import LinearRule
from .tree import TreeShape, geometric_sum

DecidedBy = Literal["formula", "criterion-p2", "criterion-p3", "criterion-pow2", "oracle"]
Mode = Literal["formula", "oracle", "auto"]

AUTO_ORACLE_LIMIT = 2**10
HORNER_LIMIT = 2**16
_EXACT_EXPONENT_BITS = 4096


@dataclass(frozen=True)
class ReversibilityReport:
    m: int
    reversible: bool
    det: int
    gcd: int
    factor_sign: int
    factor_bc: int
    factor_bpow: int
    factor_g: int
    exponent_sign: int
    exponent: int | None
    decided_by: DecidedBy
    det_formula: int
    det_oracle: int | None = None

    @property
    def det_nonzero(self) -> bool:
        """``det != 0 (mod m)``; weaker than ``reversible`` for composite m."""
        return self.det != 0

    def as_dict(self) -> dict:
        return {
            "reversible": self.reversible,
            "det": self.det,
            "m": self.m,
            "gcd": self.gcd,
            "factor_sign": self.factor_sign,
            "factor_bc": self.factor_bc,
            "factor_bpow": self.factor_bpow,
            "factor_g": self.factor_g,
            "exponent_sign": self.exponent_sign,
            "exponent": self.exponent,
            "decided_by": self.decided_by,
            "det_formula": self.det_formula,
            "det_oracle": self.det_oracle,
        }


@dataclass(frozen=True)
class CriterionVerdict:
    criterion: DecidedBy
    reversible: bool
    formula_reversible: bool
    conditions: tuple[str, ...] = ()

    @property
    def agrees(self) -> bool:
        return self.reversible == self.formula_reversible


@dataclass(frozen=True)
class ExponentCycle:
    """Exponents ``e`` with ``x**(2**k) == x**e (mod p)`` for every unit x, k >= 1."""

    p: int
    A: tuple[int, ...]
    gamma: int
    preperiod: int
    period: int

    def exponent(self, k: int) -> int:
        if k < 1:
            raise ValueError("k must be >= 1")
        if k <= self.preperiod:
            return self.A[k - 1]
        return self.A[self.preperiod + (k - 1 - self.preperiod) % self.period]


# -- the polynomial g -----------------------------------------------------------


def g_eval(b: int, x: int, n: int, m: int) -> int:
    """``sum_{k=0}^{n-1} (-b)**k * x**(n-1-k) mod m`` by Horner's rule."""
    if n < 1:
        raise ValueError("n must be >= 1")
    neg_b = -b % m
    x %= m
    acc, power = 0, 1
    for _ in range(n):
        acc = (acc * x + power) % m
        power = power * neg_b % m
    return acc


def g_eval_fast(b: int, x: int, n: int, m: int) -> int:
    """Same value as :func:`g_eval` in O(log n) steps.

    ``(g_k, (-b)**k)`` advances by the matrix ``[[x, 1], [0, -b]]``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    x, nb = x % m, -b % m
    # power of [[x, 1], [0, nb]] kept as upper-triangular (p, q, r)
    p, q, r = 1, 0, 1
    bp, bq, br = x, 1, nb
    e = n
    while e:
        if e & 1:
            p, q, r = p * bp % m, (p * bq + q * br) % m, r * br % m
        bp, bq, br = bp * bp % m, (bp * bq + bq * br) % m, br * br % m
        e >>= 1
    return q


def _g(b: int, x: int, n: int, m: int) -> int:
    return g_eval(b, x, n, m) if n <= HORNER_LIMIT else g_eval_fast(b, x, n, m)


# -- exponent E and b**E --------------------------------------------------------


def det_exponent(shape: TreeShape) -> int:
    """``E = d_{n-1} - n + 1`` as an exact integer (can be enormous)."""
    return geometric_sum(shape.d, shape.n - 1) - shape.n + 1


def det_exponent_mod(shape: TreeShape, modulus: int) -> int:
    """``E mod modulus`` without forming E."""
    d, n = shape.d, shape.n
    # d_{n-1} = (d**n - d) / (d - 1); reduce mod modulus*(d-1) so the division stays exact
    big = modulus * (d - 1)
    dn1 = ((pow(d, n, big) - d) % big) // (d - 1)
    return (dn1 - n + 1) % modulus


def _small_exponent(shape: TreeShape) -> int | None:
    if (shape.n - 1) * shape.d.bit_length() > _EXACT_EXPONENT_BITS:
        return None
    return det_exponent(shape)


def b_power(b: int, shape: TreeShape, m: int) -> int:
    """``b**E mod m`` for the tree exponent E, prime power by prime power."""
    exact = _small_exponent(shape)
    if exact is not None:
        return pow(b, exact, m)
    # here E >= n - 1 far exceeds every prime exponent of m
    result, acc_mod = 0, 1
    for p, k in factorize(m).factors:
        q = p**k
        if b % p == 0:
            val = 0
        else:
            phi = q - q // p
            val = pow(b, det_exponent_mod(shape, phi), q)
        # CRT merge
        t = ((val - result) * pow(acc_mod, -1, q)) % q
        result += acc_mod * t
        acc_mod *= q
    return result % m


def det_formula(rule: LinearRule, shape: TreeShape) -> ReversibilityReport:
    if rule.d != shape.d:
        raise ValueError(f"rule arity {rule.d} does not match tree arity {shape.d}")
    m, b, n = rule.m, rule.b, shape.n
    K = rule.coefficient_sum()
    sign = -1 if (n - 1) % 2 else 1
    exponent_sign = -1 if det_exponent_mod(shape, 2) else 1
    factor_bc = (b + K) % m
    factor_bpow = b_power(b, shape, m)
    factor_g = _g(b, K, n, m)
    det = sign * factor_bc * factor_bpow * factor_g % m
    g = math.gcd(det, m)
    return ReversibilityReport(
        m=m,
        reversible=g == 1,
        det=det,
        gcd=g,
        factor_sign=sign,
        factor_bc=factor_bc,
        factor_bpow=factor_bpow,
        factor_g=factor_g,
        exponent_sign=exponent_sign,
        exponent=_small_exponent(shape),
        decided_by="formula",
        det_formula=det,
    )


# -- alpha numerators -----------------------------------------------------------


def alpha_numerator(b: int, c: int, n: int) -> int:
    """Numerator ``N_n`` of ``alpha_n = N_n / b**(n-3)`` via its recurrence.

    ``N_3 = c - b`` and ``N_n = -(c * N_{n-1} + b**(n-2))``; exact integers.
    """
    if n < 3:
        raise ValueError("n must be >= 3")
    num = c - b
    for k in range(4, n + 1):
        num = -(c * num + b ** (k - 2))
    return num


def alpha_numerator_closed(b: int, c: int, n: int) -> int:
    if n < 3:
        raise ValueError("n must be >= 3")
    s = sum((-1) ** j * c ** (n - 2 - j) * b**j for j in range(n - 1))
    return (-1) ** (n - 3) * s


# -- criteria for the binary tree -----------------------------------------------


def _require_binary(rule: LinearRule, m: int | None = None):
    if rule.d != 2:
        raise CriterionDomain(f"criterion is stated for the binary tree, got arity {rule.d}")
    if m is not None and rule.m != m:
        raise CriterionDomain(f"criterion needs modulus {m}, got {rule.m}")


def criterion_mod2(rule: LinearRule, n: int) -> CriterionVerdict:
    """Over Z_2: reversible iff b = 1 and c1 + c2 = 0, whatever the height."""
    _require_binary(rule, 2)
    reversible = rule.b == 1 and rule.coefficient_sum() == 0
    formula = det_formula(rule, TreeShape(2, n)).reversible
    return CriterionVerdict("criterion-p2", reversible, formula)


def criterion_mod3(rule: LinearRule, n: int) -> CriterionVerdict:
    """Over Z_3: irreversible iff b = 0 or one of three disjuncts holds.

    The disjuncts are applied as stated; ``formula_reversible`` carries the
    determinant's verdict so callers can see where the two part ways (they
    do exactly when K = b, b != 0 and n is odd, where g(b) = b**(n-1) != 0).
    """
    _require_binary(rule, 3)
    b, K = rule.b, rule.coefficient_sum()
    fired = []
    if b == 0:
        fired.append("b = 0")
    if K == b:
        fired.append("c1 + c2 = b")
    if K != 0 and n % 6 == 0:
        fired.append("c1 + c2 != 0 and 6 | n")
    if (b + K) % 3 == 0:
        fired.append("b + c1 + c2 = 0")
    formula = det_formula(rule, TreeShape(2, n)).reversible
    return CriterionVerdict("criterion-p3", not fired, formula, tuple(fired))


def exponent_cycle(p: int) -> ExponentCycle:
    from sympy import isprime

    if p < 3 or not isprime(p):
        raise CriterionDomain(f"exponent cycle needs an odd prime, got {p}")
    seen: dict[int, int] = {}
    order: list[int] = []
    e, k = 2, 1
    while e not in seen:
        seen[e] = k
        order.append(e)
        # x**(2**(k+1)) = (x**e)**2
        e = (2 * e - 1) % (p - 1) + 1
        k += 1
    start = seen[e] - 1
    return ExponentCycle(p, tuple(order), len(order), start, len(order) - start)


def _power_of_two_exponent(v: int) -> int | None:
    if v >= 1 and v & (v - 1) == 0:
        return v.bit_length() - 1
    return None


def pow2_exponents(p: int, l: int) -> tuple[int, ...]:
    """Exponents ``2**q`` whose vanishing ``K**(2**q) + b**(2**q)`` makes the rule irreversible.

    Fermat primes ``p = 2**r + 1`` with ``r < l`` use ``q = 1..r-1``; otherwise
    ``q = 1..min(gamma, l-1)``.  Values of q past ``l - 1`` are excluded since
    ``g`` only carries factors ``x**(2**q) + b**(2**q)`` for ``q < l``.
    """
    r = _power_of_two_exponent(p - 1)
    if r is not None and r < l:
        top = r - 1
    else:
        top = min(exponent_cycle(p).gamma, l - 1)
    return tuple(2**q for q in range(1, top + 1))


def pow2_conditions(p: int, l: int) -> tuple[str, ...]:
    """The conditions that together are equivalent to reversibility for height 2**l."""
    conds = ["b + c1 + c2 != 0", "c1 + c2 != b and b != 0"]
    conds += [f"(c1 + c2)^{e} + b^{e} != 0" for e in pow2_exponents(p, l)]
    return tuple(conds)


def criterion_pow2(rule: LinearRule, l: int) -> CriterionVerdict:
    """Height ``n = 2**l`` over a prime field Z_p (``p = rule.m``)."""
    from sympy import isprime

    _require_binary(rule)
    p = rule.m
    if not isprime(p):
        raise CriterionDomain(f"criterion needs a prime modulus, got {p}")
    if l < 1:
        raise CriterionDomain(f"height must be 2**l with l >= 1, got l={l}")
    b, K = rule.b, rule.coefficient_sum()
    fired = []
    if b == 0:
        fired.append("b = 0")
    if (b + K) % p == 0:
        fired.append("b + c1 + c2 = 0")
    if K == b:
        fired.append("c1 + c2 = b")
    for e in pow2_exponents(p, l):
        if (pow(K, e, p) + pow(b, e, p)) % p == 0:
            fired.append(f"(c1 + c2)^{e} + b^{e} = 0")
    reversible = not fired
    n = 2**l
    if n <= 2**20:
        direct = b != 0 and (b + K) % p != 0 and g_eval(b, K, n, p) != 0
    else:
        direct = det_formula(rule, TreeShape(2, n)).reversible
    return CriterionVerdict("criterion-pow2", reversible, direct, tuple(fired))


def is_pow2_height(n: int) -> int | None:
    return _power_of_two_exponent(n)


# -- entry point ----------------------------------------------------------------


def is_reversible(
    rule: LinearRule, shape: TreeShape, mode: Mode = "auto", cap: int | None = None
) -> ReversibilityReport:
    """Decide reversibility by closed form, brute-force determinant, or both.

    ``auto`` uses the closed form and, for trees of at most 1024 nodes, also
    builds the matrix and raises :class:`OracleMismatch` if the two disagree.
    """
    if mode not in ("formula", "oracle", "auto"):
        raise ValueError(f"unknown mode {mode!r}")
    report = det_formula(rule, shape)
    if mode == "formula":
        return report
    if mode == "auto" and shape.node_count > AUTO_ORACLE_LIMIT:
        return report
    oracle = det_exact_mod(build_matrix(rule, shape, cap))
    if mode == "auto":
        if oracle != report.det:
            raise OracleMismatch(
                f"{rule} on d={shape.d}, n={shape.n}: formula {report.det} != oracle {oracle}"
            )
        return replace(report, det_oracle=oracle)
    g = math.gcd(oracle, rule.m)
    return replace(report, det=oracle, det_oracle=oracle, gcd=g, reversible=g == 1, decided_by="oracle")
