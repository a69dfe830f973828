import random
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from graphgen import random_connected_subgraph, random_flat_graph
from portmatch.circuits import Circuit, Gate, circuit_to_portgraph
from portmatch.portgraph import (
    OPEN,
    Embedding,
    GraphError,
    PortGraph,
    Vertex,
    build_graph,
    is_convex,
    linear_paths,
    metrics,
    normalize_two_paths,
    verify_embedding,
)

seeds = st.integers(0, 2**32 - 1)


def chain(n, weight="a"):
    """n two-port vertices wired 1 -> 0 in a line."""
    verts = [Vertex((0, 1), weight) for _ in range(n)]
    edges = [((i, 1), (i + 1, 0)) for i in range(n - 1)]
    return build_graph(verts, edges)


def test_build_graph_basics():
    g = build_graph([[0, 1], [0]], [((0, 1), (1, 0))])
    assert g.num_vertices == 2 and g.num_edges == 1
    assert g.port(0, 0) == OPEN
    assert g.port(0, 1) == 0
    assert g.port(0, 7) is None
    assert g.neighbour(0, 1) == (1, 0)
    assert g.neighbour(0, 0) is None
    assert g.pairing(0) == ((0, 1),)
    assert g.partner(0, 0) == 1
    assert g.partner(1, 0) is None
    assert g.open_ports() == [(0, 0)]


def test_ports_named_by_edges_are_declared_implicitly():
    g = build_graph([[], []], [((0, 3), (1, 5))])
    assert g.ports(0) == (3,) and g.ports(1) == (5,)


@pytest.mark.parametrize(
    "verts, edges, msg",
    [
        ([[0, 0]], [], "declared twice"),
        ([[0], [0]], [((0, 0), (1, 0)), ((0, 0), (1, 1))], "already occupied"),
        ([[0]], [((0, 0), (0, 0))], "both ends"),
        ([[0]], [((0, 0), (4, 0))], "unknown vertex"),
        ([[-1]], [], "non-negative"),
        ([[2**20]], [], "reserved"),
        ([Vertex((0, 1, 2), pairing=((0, 1, 2),))], [], "one or two ports"),
        ([Vertex((0, 1), pairing=((0,),))], [], "unpaired"),
        ([Vertex((0, 1), pairing=((0,), (1,)))], [], "more than one lone port"),
        ([Vertex((0,), pairing=((5,),))], [], "absent port"),
        ([[0]], [((0, 0),)], "not a pair"),
    ],
)
def test_build_graph_rejects(verts, edges, msg):
    with pytest.raises(GraphError, match=msg):
        build_graph(verts, edges)


def test_reserved_ports_allowed_on_request():
    g = build_graph([[2**20]], allow_reserved=True)
    assert g.ports(0) == (2**20,)


def test_linear_paths_of_a_small_circuit():
    c = Circuit(2, (Gate("H", (0,)), Gate("CX", (0, 1)), Gate("T", (1,))))
    g = circuit_to_portgraph(c)
    paths = linear_paths(g)
    assert [p.vertices for p in paths] == [(0, 1), (1, 2)]
    assert [p.edges for p in paths] == [(0,), (1,)]
    m = metrics(g)
    assert (m.width, m.depth, m.is_flat) == (2, 2, True)


def test_open_class_is_a_path_of_one_vertex():
    g = build_graph([[0, 1]])
    assert metrics(g).width == 1
    assert linear_paths(g)[0].vertices == (0,)


def test_portless_vertex_lies_on_no_path():
    g = build_graph([[]])
    assert metrics(g).width == 0
    assert metrics(g).depth == 0


def test_cycle_is_not_flat():
    g = build_graph([[0, 1], [0, 1]], [((0, 1), (1, 0)), ((1, 1), (0, 0))])
    m = metrics(g)
    assert not m.is_flat
    assert linear_paths(g)[0].cyclic
    with pytest.raises(GraphError):
        normalize_two_paths(g)


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_width_and_depth_match_oracle(seed):
    rng = random.Random(seed)
    g = random_flat_graph(rng, rng.randint(0, 12), max_classes=4)
    m = metrics(g)
    assert m.is_flat
    assert m.width == oracles.width(g)
    assert m.depth == oracles.depth(g)
    # flat graphs: every path has one edge fewer than vertices
    assert m.width == sum(len(g.pairing(v)) for v in g.vertices()) - g.num_edges
    assert m.width <= (m.n_odd + m.n_open) // 2


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_every_class_on_exactly_one_path(seed):
    rng = random.Random(seed)
    g = random_flat_graph(rng, rng.randint(1, 10), max_classes=3)
    seen = {}
    for p in linear_paths(g):
        for v, (a, b) in zip(p.vertices, p.ports):
            port = a if a is not None else b
            key = (v, oracles.class_of(g, v, port))
            assert key not in seen
            seen[key] = p.path_id
        assert len(p.edges) == len(p.vertices) - 1
    assert len(seen) == sum(len(g.pairing(v)) for v in g.vertices())


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_normalize_two_paths(seed):
    rng = random.Random(seed)
    g = random_flat_graph(rng, rng.randint(1, 10), max_classes=4)
    h, back = normalize_two_paths(g)
    assert all(len(h.pairing(v)) <= 2 for v in h.vertices())
    assert metrics(h).width == metrics(g).width
    assert metrics(h).is_flat
    assert sorted(set(back)) == list(g.vertices())
    # original edges come first and keep their ports
    for e in range(g.num_edges):
        (a, p), (b, q) = g.edges[e]
        (x, p2), (y, q2) = h.edges[e]
        assert (back[x], p2, back[y], q2) == (a, p, b, q)
    if all(len(g.pairing(v)) <= 2 for v in g.vertices()):
        assert h is g


def test_normalize_splits_three_class_vertex():
    g = build_graph([[0, 1, 2, 3, 4, 5]])
    h, back = normalize_two_paths(g)
    assert h.num_vertices == 2 and back == (0, 0)
    assert metrics(h).width == 3
    assert h.weight(0) == (None, 0) and h.weight(1) == (None, 1)


def test_subgraph_keeps_ports_open():
    g = chain(4)
    sub, back = g.subgraph([1, 2], [1])
    assert back == (1, 2)
    assert sub.num_edges == 1
    assert sub.port(0, 0) == OPEN and sub.port(1, 1) == OPEN


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_bytes_round_trip(seed):
    rng = random.Random(seed)
    g = random_flat_graph(rng, rng.randint(0, 10))
    data = g.to_bytes()
    h = PortGraph.from_bytes(data)
    assert h == g and h.to_bytes() == data
    assert hash(h) == hash(g)


def test_relabel():
    g = chain(3)
    h = g.relabel([2, 0, 1])
    assert oracles.isomorphic(g, h)
    assert h.neighbour(2, 1) == (0, 0)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_verify_embedding_matches_brute_force(seed):
    rng = random.Random(seed)
    g = random_flat_graph(rng, rng.randint(2, 6), max_classes=2, n_labels=4)
    p = random_connected_subgraph(rng, g, rng.randint(1, 3))
    if p is None:
        return
    expected = oracles.brute_embeddings(p, g)
    for phi in permutations(range(g.num_vertices), p.num_vertices):
        assert verify_embedding(p, g, Embedding(phi)) == (phi in expected)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_is_convex_matches_oracle(seed):
    rng = random.Random(seed)
    g = random_flat_graph(rng, rng.randint(2, 8), max_classes=3)
    p = random_connected_subgraph(rng, g, rng.randint(1, 4))
    if p is None:
        return
    for phi in oracles.brute_embeddings(p, g):
        assert is_convex(p, g, Embedding(phi)) == oracles.is_convex(p, g, phi)


def test_is_convex_on_a_circuit():
    # CX H CX with the H on qubit 0: the two CX gates joined along qubit 1
    # embed, but both of the pattern's qubit-0 wires land on subject qubit 0
    c = Circuit(2, (Gate("CX", (0, 1)), Gate("H", (0,)), Gate("CX", (0, 1))))
    g = circuit_to_portgraph(c)
    two = build_graph(
        [Vertex((0, 1, 2, 3), "CX", ((0, 1), (2, 3))), Vertex((0, 1, 2, 3), "CX", ((0, 1), (2, 3)))],
        [((0, 3), (1, 2))],
    )
    e = Embedding((0, 2))
    assert verify_embedding(two, g, e)
    assert not is_convex(two, g, e)
    # the full circuit as a pattern is trivially convex in itself
    assert is_convex(g, g, Embedding((0, 1, 2)))


def test_embedding_handle_errors():
    g = chain(2)
    p = chain(1)
    with pytest.raises(GraphError):
        verify_embedding(p, g, Embedding((5,)))
    with pytest.raises(GraphError):
        verify_embedding(p, g, Embedding((0, 1)))
    with pytest.raises(GraphError):
        is_convex(chain(2, "b"), g, Embedding((0, 1)))


def test_weights_and_port_sets_must_agree():
    g = chain(2)
    assert not verify_embedding(chain(1, "b"), g, Embedding((0,)))
    assert not verify_embedding(build_graph([[0]]), g, Embedding((0,)))
    assert verify_embedding(chain(1), g, Embedding((1,)))
