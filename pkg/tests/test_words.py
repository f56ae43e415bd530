import pytest
from hypothesis import given, strategies as st

from mcgsplit.words import (
    compose,
    conjugate,
    commutator,
    cyclic_reduce,
    evaluate,
    format_word,
    free_reduce,
    invert,
    parse_word,
    power,
)

letters = st.integers(min_value=-7, max_value=7).filter(lambda x: x != 0)
words = st.lists(letters, max_size=40).map(tuple)


def test_basic_reduction():
    assert free_reduce((1, 2, -2, 3)) == (1, 3)
    assert free_reduce((1, -1)) == ()
    assert free_reduce(()) == ()
    # nested cancellation collapses fully
    assert free_reduce((1, 2, 3, -3, -2, -1)) == ()


def test_compose_invert():
    assert compose((1,), (-1,)) == ()
    assert invert((1, 2)) == (-2, -1)
    assert compose((1, 2), (-2, 3)) == (1, 3)


@given(words)
def test_free_reduce_idempotent_and_nonincreasing(w):
    r = free_reduce(w)
    assert free_reduce(r) == r
    assert len(r) <= len(w)


@given(words, words)
def test_group_axioms(u, v):
    assert compose(free_reduce(u), invert(free_reduce(u))) == ()
    assert free_reduce(compose(u, v)) == free_reduce(tuple(u) + tuple(v))


@given(words)
def test_cyclic_reduce_core_has_no_cancelling_ends(w):
    c = cyclic_reduce(w)
    if c:
        assert c[0] != -c[-1]
    assert cyclic_reduce(c) == c
    assert len(c) <= len(free_reduce(w))


def test_power_and_commutator():
    assert power((1, 2), 0) == ()
    assert power((1,), 3) == (1, 1, 1)
    assert power((1,), -2) == (-1, -1)
    assert commutator((1,), (2,)) == (1, 2, -1, -2)


def test_parse_format_roundtrip():
    w = parse_word("b1 b2^-1 b3^2", 5)
    assert w == (1, -2, 3, 3)
    assert parse_word(format_word(w), 5) == w
    assert parse_word("", 5) == ()
    with pytest.raises(ValueError):
        parse_word("x7", 5)
    with pytest.raises(ValueError):
        parse_word("b6", 5)
    with pytest.raises(ValueError):
        parse_word("b1^x", 5)


def test_evaluate_left_to_right_in_permutations():
    # images as 0-indexed permutation tuples composed left to right
    def mul(p, q):
        return tuple(q[p[i]] for i in range(len(p)))

    def inv(p):
        out = [0] * len(p)
        for i, j in enumerate(p):
            out[j] = i
        return tuple(out)

    ident = (0, 1, 2)
    images = [(1, 0, 2), (0, 2, 1)]
    got = evaluate((1, 2), images, ident, mul, inv)
    assert got == mul(images[0], images[1])
    assert evaluate((), images, ident, mul, inv) == ident
    assert evaluate((1, -1), images, ident, mul, inv) == ident
    assert evaluate((2, 2), images, ident, mul, inv) == ident
