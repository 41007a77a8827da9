import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from perfectgen.errors import Graph6ParseError, ValidationError
from perfectgen.graphcore import (
    Graph,
    bit_list,
    bits_of,
    complement,
    component_of,
    components,
    degrees,
    from_json,
    graph6_decode,
    graph6_encode,
    induced_subgraph,
    is_clique,
    is_stable,
    to_json,
)

import oracles


def random_graph(rng: np.random.Generator, n: int, p: float = 0.5) -> Graph:
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph.from_edges(n, edges)


graphs = st.integers(0, 9).flatmap(
    lambda n: st.builds(
        lambda bits: Graph.from_edges(
            n, [e for e, b in zip([(u, v) for u in range(n) for v in range(u + 1, n)], bits) if b]
        ),
        st.tuples(*[st.booleans()] * (n * (n - 1) // 2)),
    )
)


def test_construction_rejects_asymmetry_and_loops():
    adj = np.zeros((3, 3), dtype=np.int8)
    adj[0, 1] = 1
    with pytest.raises(ValidationError):
        Graph.from_numpy(adj)
    adj[1, 0] = 1
    adj[2, 2] = 1
    with pytest.raises(ValidationError):
        Graph.from_numpy(adj)
    adj[2, 2] = 0
    g = Graph.from_numpy(adj)
    assert g.has_edge(0, 1) and g.has_edge(1, 0)
    assert not g.has_edge(0, 2)


def test_from_edges_rejects_out_of_range():
    with pytest.raises(ValidationError):
        Graph.from_edges(3, [(0, 3)])
    with pytest.raises(ValidationError):
        Graph.from_edges(3, [(1, 1)])


def test_basic_accessors():
    g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)])  # C4
    assert g.edge_count() == 4
    assert sorted(g.edges()) == [(0, 1), (0, 3), (1, 2), (2, 3)]
    assert degrees(g) == [2, 2, 2, 2]
    assert g.degree(0) == 2
    assert bit_list(g.neighbours(0)) == [1, 3]


def test_complete_and_empty():
    k4 = Graph.complete(4)
    e4 = Graph.empty(4)
    assert k4.edge_count() == 6
    assert e4.edge_count() == 0
    assert complement(k4) == e4
    assert complement(e4) == k4


@settings(max_examples=60)
@given(graphs)
def test_complement_involution_and_edge_count(g):
    gc = complement(g)
    assert complement(gc) == g
    assert g.edge_count() + gc.edge_count() == g.n * (g.n - 1) // 2


def test_induced_subgraph_keeps_order():
    g = Graph.from_edges(5, [(0, 2), (2, 4), (1, 3)])
    sub = induced_subgraph(g, bits_of([0, 2, 4]))
    # vertices are renumbered by increasing original label
    assert sub.n == 3
    assert sorted(sub.edges()) == [(0, 1), (1, 2)]


def test_clique_and_stable_predicates():
    g = Graph.from_edges(4, [(0, 1), (0, 2), (1, 2)])
    assert is_clique(g, bits_of([0, 1, 2]))
    assert not is_clique(g, bits_of([0, 1, 3]))
    assert is_stable(g, bits_of([3]))
    assert is_stable(g, bits_of([]))
    assert not is_stable(g, bits_of([0, 1]))


def test_components_on_disjoint_union():
    g = Graph.from_edges(6, [(0, 1), (1, 2), (3, 4)])
    comps = components(g)
    assert sorted(bit_list(c) for c in comps) == [[0, 1, 2], [3, 4], [5]]
    assert bit_list(component_of(g, 4, g.vertex_mask())) == [3, 4]
    # restricted to a sub-mask the component cannot escape it
    assert bit_list(component_of(g, 1, bits_of([1, 2]))) == [1, 2]


# graph6 values checked against the format definition by hand:
# "?" is the empty graph on 0 vertices, "A_" is a single edge.
def test_graph6_known_values():
    assert graph6_encode(Graph.empty(0)) == b"?"
    assert graph6_encode(Graph.from_edges(2, [(0, 1)])) == b"A_"
    assert graph6_decode(b"A_").edge_count() == 1
    assert graph6_decode(b"?").n == 0
    # n = 68 exercises the multi-byte size prefix
    g = Graph.empty(68)
    assert graph6_decode(graph6_encode(g)) == g


@settings(max_examples=60)
@given(graphs)
def test_graph6_round_trip(g):
    assert graph6_decode(graph6_encode(g)) == g


def test_graph6_decode_rejects_garbage():
    with pytest.raises(Graph6ParseError):
        graph6_decode(b"")
    with pytest.raises(Graph6ParseError):
        graph6_decode(b"B")  # truncated body
    with pytest.raises(Graph6ParseError):
        graph6_decode(b"A" + bytes([30]))  # byte below the printable range
    # nonzero padding bits after the last used bit
    with pytest.raises(Graph6ParseError):
        graph6_decode(b"A" + bytes([63 + 16]))


def test_graph6_parse_error_is_validation_error():
    assert issubclass(Graph6ParseError, ValidationError)


@settings(max_examples=40)
@given(graphs)
def test_json_round_trip(g):
    text = to_json(g)
    obj = json.loads(text)
    assert obj["n"] == g.n
    assert from_json(text) == g


def test_json_rejects_bad_payload():
    with pytest.raises(ValidationError):
        from_json(json.dumps({"n": 2, "edges": [[0, 2]]}))
    with pytest.raises(ValidationError):
        from_json(json.dumps({"edges": []}))


def test_degrees_match_oracle():
    rng = np.random.default_rng(1905)
    for _ in range(20):
        g = random_graph(rng, int(rng.integers(1, 12)))
        naive = [sum(1 for v in range(g.n) if g.has_edge(u, v)) for u in range(g.n)]
        assert degrees(g) == naive


def test_maximal_clique_oracle_selfcheck():
    # sanity for the test oracle itself on a hand example
    g = Graph.from_edges(4, [(0, 1), (1, 2), (0, 2), (2, 3)])
    cliques = oracles.brute_maximal_cliques(g)
    assert cliques == {frozenset({0, 1, 2}), frozenset({2, 3})}
