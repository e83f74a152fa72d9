import random

import pytest
from hypothesis import given, settings, strategies as st

from arclapcs.arcseq import Level, SizeGuardError, delete_positions
from arclapcs.occurrence import (
    brute_force_occurs,
    compose,
    format_embedding,
    occurs,
    parse_embedding,
    verify_embedding,
)

from conftest import aas, random_sequence, sequences


@pytest.mark.parametrize(
    "pattern, text, e, expected",
    [
        (aas("a c"), aas("a b c"), (1, 3), True),
        (aas("a b"), aas("a b", [(1, 2)]), (1, 2), False),
        (aas("a b", [(1, 2)]), aas("a x b", [(1, 3)]), (1, 3), True),
        (aas("a b", [(1, 2)]), aas("a b"), (1, 2), False),
        (aas("a c"), aas("a b c"), (1, 2), False),
        (aas("a c"), aas("a b c"), (3, 1), False),
        (aas("a c"), aas("a b c"), (1,), False),
    ],
)
def test_verify_embedding(pattern, text, e, expected):
    assert verify_embedding(pattern, text, e) is expected


@pytest.mark.parametrize("finder", [occurs, brute_force_occurs])
def test_occurrence_examples(finder):
    s = aas("a b c d", [(1, 4), (2, 3)])
    assert finder(s, s) == (1, 2, 3, 4)
    assert finder(aas("a b", [(1, 2)]), aas("a b")) is None
    # exhaustive enumeration of the C(3, 2) increasing maps: only [1, 3] keeps the arc
    assert finder(aas("a a", [(1, 2)]), aas("a a a", [(1, 3)])) == (1, 3)
    assert finder(aas(""), aas("a b")) == ()
    assert finder(aas("a b c"), aas("a b")) is None


def test_brute_force_size_guard():
    with pytest.raises(SizeGuardError):
        brute_force_occurs(aas("a"), aas(" ".join("a" * 19)))


def test_occurs_prefers_lexicographically_smallest():
    assert occurs(aas("a"), aas("b a a")) == (2,)
    assert occurs(aas("a b"), aas("a a b b")) == (1, 3)


def test_unlimited_inputs_use_same_semantics():
    text = aas("a b c", [(1, 2), (1, 3)])
    assert occurs(aas("a b", [(1, 2)]), text) == (1, 2)
    assert occurs(aas("b c"), text) == (2, 3)
    assert occurs(aas("a c"), text) is None


@settings(max_examples=300, deadline=None)
@given(sequences(max_len=6), sequences(max_len=10, max_level=Level.CROSSING))
def test_occurs_agrees_with_brute_force(pattern, text):
    fast = occurs(pattern, text)
    slow = brute_force_occurs(pattern, text)
    assert (fast is None) == (slow is None)
    if fast is not None:
        assert verify_embedding(pattern, text, fast)
        assert verify_embedding(pattern, text, slow)


@settings(max_examples=200, deadline=None)
@given(sequences(max_len=10), st.data())
def test_deletion_result_occurs(s, data):
    d = data.draw(st.sets(st.integers(1, len(s)))) if len(s) else set()
    kept = tuple(p for p in range(1, len(s) + 1) if p not in d)
    sub = delete_positions(s, d)
    assert verify_embedding(sub, s, kept)
    assert occurs(sub, s) is not None


def test_occurrence_is_transitive():
    rng = random.Random(11)
    for _ in range(200):
        c = random_sequence(rng, 10, "ab", Level.NESTED)
        d_bc = {p for p in range(1, len(c) + 1) if rng.random() < 0.3}
        b = delete_positions(c, d_bc)
        d_ab = {p for p in range(1, len(b) + 1) if rng.random() < 0.3}
        a = delete_positions(b, d_ab)
        e_ab, e_bc = occurs(a, b), occurs(b, c)
        assert e_ab is not None and e_bc is not None
        assert verify_embedding(a, c, compose(e_ab, e_bc))


def test_embedding_text_format():
    assert format_embedding((1, 4, 7)) == "map: 1 4 7"
    assert parse_embedding("map: 1 4 7") == (1, 4, 7)
    assert parse_embedding("map:") == ()
