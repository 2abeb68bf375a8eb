import random

from hypothesis import given
from hypothesis import strategies as st
import pytest

from conftest import naive_occurrences
from sublcs import Corpus
from sublcs.matcher import (count_containing_documents, count_span_documents, find_occurrences,
                            shortest_period_capped)
from sublcs.oracle import brute_force_period


def test_overlapping_occurrences():
    assert list(find_occurrences("ana", "banana")) == [2, 4]
    assert list(find_occurrences("x", "aaa")) == []
    assert list(find_occurrences("aa", "aaaa")) == [1, 2, 3]


@given(st.lists(st.integers(0, 2), min_size=1, max_size=8), st.lists(st.integers(0, 2), max_size=60))
def test_matches_naive_scan(p, t):
    assert list(find_occurrences(p, t)) == naive_occurrences(p, t)


def test_document_counts():
    c = Corpus.from_docs([list(b"banana"), list(b"ananas")], 2)
    assert count_containing_documents(c, b"an") == 2
    assert count_containing_documents(c, b"ban") == 1
    assert count_containing_documents(c, [c.sentinel(1)]) == 0
    # span "nana" of doc 1 in the joined corpus
    assert count_span_documents(c, 2, 4) == 2
    assert count_span_documents(c, 5, 3) == 0  # contains the first sentinel


def test_capped_period_examples():
    assert shortest_period_capped("abababab", 4) == 2
    assert shortest_period_capped("abcdefgh", 4) is None
    with pytest.raises(ValueError):
        shortest_period_capped("abc", 2)


@given(st.lists(st.integers(0, 1), min_size=2, max_size=64), st.data())
def test_capped_period_property(q, data):
    cap = data.draw(st.integers(1, len(q) // 2))
    p = brute_force_period(q)
    assert shortest_period_capped(q, cap) == (p if p <= cap else None)


def test_capped_period_random_long():
    rng = random.Random(3)
    for _ in range(30):
        unit = [rng.randrange(3) for _ in range(rng.randint(1, 40))]
        q = (unit * 300)[:rng.randint(100, 3000)]
        if rng.random() < 0.3:
            q[rng.randrange(len(q))] = 3
        cap = rng.randint(1, len(q) // 2)
        p = brute_force_period(q)
        assert shortest_period_capped(q, cap) == (p if p <= cap else None)
