import itertools

import pytest
from hypothesis import strategies as st

from optsync.digraph import make_digraph


def all_pairs(n):
    return [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]


@st.composite
def digraphs(draw, min_n=1, max_n=6):
    n = draw(st.integers(min_n, max_n))
    pairs = all_pairs(n)
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    return make_digraph(n, chosen)


def every_digraph(n):
    pairs = all_pairs(n)
    for bits in itertools.product((0, 1), repeat=len(pairs)):
        yield make_digraph(n, [p for p, b in zip(pairs, bits) if b])


@pytest.fixture
def three_cycle():
    return make_digraph(3, [(1, 2), (2, 3), (3, 1)])


@pytest.fixture
def path3():
    return make_digraph(3, [(1, 2), (2, 3)])
