import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import naive_evolve
from treeca.errors import ArityMismatch, ConfigurationFormatError, ShapeMismatch
from treeca.modmatrix import build_matrix, matvec
from treeca.rules import (
    Configuration,
    LinearRule,
    evolve,
    format_configuration,
    is_sibling_symmetric,
    local_apply,
    parse_configuration,
    symbol_dtype,
)
from treeca.tree import TreeShape


def test_local_apply_examples():
    assert local_apply(LinearRule(3, 1, (1, 1)), 1, (1, 1)) == 0
    assert local_apply(LinearRule(7, 4, (2, 5)), 0, (0, 0)) == 0
    assert local_apply(LinearRule(5, 2, (1, 0)), 3, (4, 1)) == 0
    with pytest.raises(ArityMismatch):
        local_apply(LinearRule(5, 2, (1, 0)), 3, (4,))


def test_coefficient_sum():
    assert LinearRule(5, 1, (3, 4)).coefficient_sum() == 2
    assert LinearRule(7, 9, (8, 1, 2)).b == 2


def test_zero_is_fixed():
    shape = TreeShape(3, 3)
    z = Configuration.zeros(shape, 5)
    assert evolve(z, LinearRule(5, 3, (1, 2, 4))) == z


def test_small_fixed_point():
    t = Configuration.from_values(TreeShape(2, 2), 2, [1, 0, 0])
    assert evolve(t, LinearRule(2, 1, (1, 1))).tolist() == [1, 0, 0]


def test_matches_matrix_t3_mod2():
    rule, shape = LinearRule(2, 1, (1, 1)), TreeShape(2, 3)
    mat = build_matrix(rule, shape)
    rng = np.random.default_rng(3)
    for _ in range(20):
        t = Configuration.random(shape, 2, rng)
        assert evolve(t, rule).tolist() == matvec(mat, t.symbols).tolist()


@pytest.mark.parametrize("d, n, m", [(2, 4, 5), (3, 3, 6), (4, 3, 3), (2, 2, 7)])
def test_matches_wordwise_evolution(d, n, m):
    rng = np.random.default_rng(d * 100 + n)
    shape = TreeShape(d, n)
    for _ in range(10):
        rule = LinearRule(m, int(rng.integers(m)), tuple(int(v) for v in rng.integers(0, m, d)))
        t = Configuration.random(shape, m, rng)
        assert evolve(t, rule).tolist() == naive_evolve(t.tolist(), rule.b, rule.c, m, d, n)


def test_mismatch_errors():
    t = Configuration.zeros(TreeShape(2, 3), 3)
    with pytest.raises(ShapeMismatch):
        evolve(t, LinearRule(5, 1, (1, 1)))
    with pytest.raises(ShapeMismatch):
        evolve(t, LinearRule(3, 1, (1, 1, 1)))


def test_sibling_symmetry_examples():
    shape = TreeShape(2, 2)
    assert is_sibling_symmetric(Configuration.zeros(shape, 3))
    assert is_sibling_symmetric(Configuration.from_values(shape, 3, [1, 1, 1]))
    assert not is_sibling_symmetric(Configuration.from_values(shape, 3, [1, 1, 0]))
    assert is_sibling_symmetric(Configuration.from_levels(TreeShape(3, 3), 4, [3, 1, 2]))


def test_symbol_storage():
    assert symbol_dtype(2) == np.uint8
    assert symbol_dtype(256) == np.uint8
    assert symbol_dtype(257) == np.uint16
    assert symbol_dtype(2**16) == np.uint16
    t = Configuration.from_values(TreeShape(2, 2), 300, [299, 1, 2])
    assert not t.symbols.flags.writeable


def test_large_modulus_no_overflow():
    m = 2**16
    rule = LinearRule(m, m - 1, tuple([m - 1] * 200))
    shape = TreeShape(200, 2)
    t = Configuration.from_values(shape, m, [m - 1] * shape.node_count)
    out = evolve(t, rule).tolist()
    assert out[0] == ((m - 1) ** 2 * 201) % m
    assert out[1] == ((m - 1) ** 2 + 200 * (m - 1) ** 2) % m


# -- properties -------------------------------------------------------------------

shapes = st.sampled_from([TreeShape(2, 2), TreeShape(2, 4), TreeShape(3, 3), TreeShape(4, 2)])


@st.composite
def rule_and_configs(draw):
    shape = draw(shapes)
    m = draw(st.integers(2, 12))
    b = draw(st.integers(0, m - 1))
    c = tuple(draw(st.lists(st.integers(0, m - 1), min_size=shape.d, max_size=shape.d)))
    vec = st.lists(st.integers(0, m - 1), min_size=shape.node_count, max_size=shape.node_count)
    return shape, LinearRule(m, b, c), draw(vec), draw(vec), draw(st.integers(0, m - 1))


@settings(max_examples=60, deadline=None)
@given(rule_and_configs())
def test_linearity(args):
    shape, rule, x, y, a = args
    m = rule.m
    tx, ty = Configuration.from_values(shape, m, x), Configuration.from_values(shape, m, y)
    combo = Configuration.from_values(shape, m, [(a * u + v) % m for u, v in zip(x, y)])
    lhs = evolve(combo, rule).tolist()
    rhs = [(a * u + v) % m for u, v in zip(evolve(tx, rule).tolist(), evolve(ty, rule).tolist())]
    assert lhs == rhs


@settings(max_examples=60, deadline=None)
@given(shapes, st.integers(2, 9), st.data())
def test_equal_child_coefficients_preserve_symmetry(shape, m, data):
    b = data.draw(st.integers(0, m - 1))
    c = data.draw(st.integers(0, m - 1))
    levels = data.draw(st.lists(st.integers(0, m - 1), min_size=shape.n, max_size=shape.n))
    t = Configuration.from_levels(shape, m, levels)
    rule = LinearRule(m, b, (c,) * shape.d)
    for _ in range(5):
        t = evolve(t, rule)
        assert is_sibling_symmetric(t)


# -- text format ------------------------------------------------------------------


def test_roundtrip_text():
    t = Configuration.from_values(TreeShape(2, 3), 3, [0, 1, 2, 2, 1, 0, 1])
    text = format_configuration(t)
    assert text == "3 2 3\n0 1 2 2 1 0 1\n"
    assert parse_configuration(text) == t


@pytest.mark.parametrize(
    "text",
    ["", "3 2\n0 0 0", "3 2 2\n0 0", "3 2 2\n0 0 3", "3 2 2\n0 x 1", "2 2 2\n0 0 0 0"],
)
def test_parse_rejects(text):
    with pytest.raises((ConfigurationFormatError, ValueError)):
        parse_configuration(text)
