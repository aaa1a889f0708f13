import json

import pytest
from hypothesis import given, settings

from optsync.construct import TreeSpec, build, make_tree
from optsync.digraph import (
    almost_regular_sequence,
    complement,
    complete_graph,
    empty_graph,
    format_edge_list,
    from_json,
    in_degree_sequence,
    induced_subgraph,
    is_acyclic,
    is_almost_regular,
    is_rooted,
    make_digraph,
    parse_edge_list,
    parse_graph,
    reachable_from,
    source_components,
    to_dot,
    to_json,
    transpose,
)
from optsync.errors import (
    DuplicateArc,
    EmptyKeepSet,
    EndpointOutOfRange,
    GraphError,
    SelfArc,
    WeightedUnsupported,
    ZeroWeight,
)
from optsync.spectral import laplacian, laplacian_out

from conftest import digraphs, every_digraph


def test_make_digraph_single_arc():
    g = make_digraph(2, [(1, 2)])
    assert g.m == 1 and g.arcs == ((1, 2),)


@pytest.mark.parametrize(
    "n, arcs, weights, exc",
    [
        (3, [(1, 1)], None, SelfArc),
        (3, [(1, 2), (1, 2)], None, DuplicateArc),
        (3, [(1, 4)], None, EndpointOutOfRange),
        (3, [(0, 2)], None, EndpointOutOfRange),
        (3, [(1, 2)], [0], ZeroWeight),
    ],
)
def test_make_digraph_rejects(n, arcs, weights, exc):
    with pytest.raises(exc):
        make_digraph(n, arcs, weights)


def test_arcs_are_sorted():
    g = make_digraph(3, [(3, 1), (1, 3), (2, 1)])
    assert g.arcs == ((1, 3), (2, 1), (3, 1))


def test_complement_examples():
    assert complement(complete_graph(4)) == empty_graph(4)
    g = make_digraph(3, [(1, 2), (1, 3)])
    assert set(complement(g).arcs) == {(2, 1), (3, 1), (2, 3), (3, 2)}


def test_complement_rejects_weighted():
    with pytest.raises(WeightedUnsupported):
        complement(make_digraph(2, [(1, 2)], [3]))


@settings(max_examples=200, deadline=None)
@given(digraphs())
def test_complement_properties(g):
    c = complement(g)
    assert complement(c) == g
    assert c.m + g.m == g.n * (g.n - 1)
    assert not set(c.arcs) & set(g.arcs)


@settings(max_examples=200, deadline=None)
@given(digraphs())
def test_transpose_properties(g):
    t = transpose(g)
    assert transpose(t) == g
    assert sorted(t.in_degrees()) == sorted(g.out_degrees())
    assert all(t.has_arc(j, i) for i, j in g.arcs)
    if is_acyclic(g):
        assert is_acyclic(t)


def test_transpose_single_arc_and_weights():
    assert transpose(make_digraph(2, [(1, 2)])).arcs == ((2, 1),)
    w = transpose(make_digraph(3, [(1, 2), (2, 3)], [5, -2]))
    assert w.weight(2, 1) == 5 and w.weight(3, 2) == -2


def test_in_laplacian_is_out_laplacian_of_transpose():
    star = make_tree(TreeSpec("star", 3))
    assert (laplacian(star) == laplacian_out(transpose(star))).all()


def test_induced_subgraph_examples(path3):
    assert induced_subgraph(path3, {1, 2}).arcs == ((1, 2),)
    sub = induced_subgraph(path3, {1, 3})
    assert sub.n == 2 and sub.m == 0
    with pytest.raises(EmptyKeepSet):
        induced_subgraph(path3, set())


def test_induced_subgraph_of_constructed_graph():
    g, _ = build(5, 7, TreeSpec("star", 5))
    d5 = g.in_degrees()[4]
    assert d5 == 2
    want, _ = build(4, 7 - d5, TreeSpec("star", 4))
    assert induced_subgraph(g, {1, 2, 3, 4}) == want


def test_is_rooted_examples(path3, three_cycle):
    assert is_rooted(path3) == (True, {1})
    assert is_rooted(empty_graph(2)) == (False, set())
    assert is_rooted(three_cycle) == (True, {1, 2, 3})


@settings(max_examples=200, deadline=None)
@given(digraphs())
def test_is_rooted_matches_reachability(g):
    ok, roots = is_rooted(g)
    assert roots == {r for r in range(1, g.n + 1) if len(reachable_from(g, r)) == g.n}
    assert ok == bool(roots)
    # a graph is rooted iff exactly one component receives no arcs from outside
    assert ok == (len(source_components(g)) == 1)


def test_is_acyclic_examples():
    assert is_acyclic(make_tree(TreeSpec("random", 7, seed=5)))
    assert not is_acyclic(make_digraph(2, [(1, 2), (2, 1)]))
    assert is_acyclic(make_digraph(3, [(1, 2), (1, 3), (2, 3)]))


def test_in_degree_sequence_examples():
    g, _ = build(5, 7)
    assert in_degree_sequence(g) == (1, 1, 1, 2, 2)
    assert in_degree_sequence(make_tree(TreeSpec("path", 5))) == (0, 1, 1, 1, 1)
    assert in_degree_sequence(complete_graph(4)) == (3, 3, 3, 3)


def test_weighted_in_degrees():
    g = make_digraph(3, [(1, 2), (3, 2), (2, 1)], [2, -5, 1])
    assert g.in_degrees() == [1, -3, 0]
    assert in_degree_sequence(g) == (-3, 0, 1)
    assert g.net_weight == -2


def test_almost_regular_iff_sequence_law():
    for n in range(1, 5):
        for g in every_digraph(n):
            law = in_degree_sequence(g) == almost_regular_sequence(n, g.m)
            assert law == is_almost_regular(g)
    # n = 5 on a deterministic sample of every arc count
    import itertools
    pairs = [(i, j) for i in range(1, 6) for j in range(1, 6) if i != j]
    for m in range(0, 21):
        for combo in itertools.islice(itertools.combinations(pairs, m), 0, 3000, 7):
            g = make_digraph(5, combo)
            assert (in_degree_sequence(g) == almost_regular_sequence(5, m)) == is_almost_regular(g)


def test_edge_list_round_trip():
    g = make_digraph(4, [(1, 2), (3, 4), (4, 1)])
    text = format_edge_list(g)
    assert text == "4 3\n1 2\n3 4\n4 1\n"
    assert parse_edge_list(text) == g
    w = make_digraph(3, [(1, 2), (2, 3)], [4, -1])
    assert format_edge_list(w) == "3 2\n1 2 4\n2 3 -1\n"
    assert parse_graph(format_edge_list(w)) == w


@pytest.mark.parametrize(
    "text",
    ["", "3\n", "3 2\n1 2\n", "2 1\n1 x\n", "3 2\n1 2\n2 3 4\n", "2 1\n1 1\n"],
)
def test_edge_list_malformed(text):
    with pytest.raises(GraphError):
        parse_edge_list(text)


def test_json_round_trip():
    g = make_digraph(3, [(2, 1), (1, 3)], [7, 2])
    obj = json.loads(to_json(g))
    assert obj == {"n": 3, "arcs": [[1, 3], [2, 1]], "weights": [2, 7]}
    assert from_json(to_json(g)) == g
    assert parse_graph('{"n": 2, "arcs": [[1, 2]]}') == make_digraph(2, [(1, 2)])


@pytest.mark.parametrize("text", ["{", '{"n": 2}', '{"n": "2", "arcs": []}', '{"n": 2, "arcs": [[1]]}', "[1,2]"])
def test_json_malformed(text):
    with pytest.raises(GraphError):
        from_json(text)


def test_dot_bidirectional_pairs():
    g = make_digraph(3, [(1, 2), (2, 1), (2, 3)])
    dot = to_dot(g)
    assert "1 -> 2 [dir=both];" in dot
    assert "2 -> 1" not in dot
    assert "2 -> 3;" in dot
    assert dot.count("dir=both") == 1
