import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from graphgen import random_connected_subgraph, random_flat_graph
from portmatch.canonical_tree import (
    ROOT_ADDRESS,
    CanonicalTree,
    StringTuple,
    as_strings,
    canonical_anchors,
    ct_representation,
    reconstruct,
    split_graph,
)
from portmatch.circuits import Circuit, Gate, circuit_to_portgraph
from portmatch.portgraph import GraphError, build_graph, metrics, normalize_two_paths

seeds = st.integers(0, 2**32 - 1)


def connected_graph(rng, max_classes=2, n=10, edges=8):
    g = random_flat_graph(rng, n, max_classes=max_classes)
    return random_connected_subgraph(rng, g, rng.randint(1, edges))


def cx_chain():
    # CX(0,1) CX(1,2) H(2): width 3
    c = Circuit(3, (Gate("CX", (0, 1)), Gate("CX", (1, 2)), Gate("H", (2,))))
    return circuit_to_portgraph(c)


def test_canonical_anchors_of_a_circuit():
    g = cx_chain()
    assert canonical_anchors(g, 2) == [2, 1, 0]
    assert canonical_anchors(g, 0) == [0, 1]


def test_split_graph_over_canonical_anchors_is_a_tree():
    g = cx_chain()
    split = split_graph(g, canonical_anchors(g, 2))
    assert split.is_tree()
    assert split.graph.num_vertices == 3
    # without the first CX as an anchor, its qubit-0 copy floats free
    partial = split_graph(g, [2, 1])
    assert partial.graph.num_vertices == 4
    assert not partial.is_connected()
    assert sorted(partial.origin) == [0, 0, 1, 2]


def test_split_graph_rejects_unknown_anchor():
    with pytest.raises(GraphError):
        split_graph(cx_chain(), [9])


def test_ct_addresses_and_merge_labels():
    g = cx_chain()
    ct = ct_representation(g, 2)
    assert isinstance(ct, CanonicalTree)
    assert ct.address[ct.root] == ROOT_ADDRESS
    assert ct.anchors == (2, 1, 0)
    assert ct.strings.width == 3
    reps = [s for s, lab in enumerate(ct.merge_label) if lab is None]
    assert len(reps) == g.num_vertices
    for s, lab in enumerate(ct.merge_label):
        if lab is not None:
            assert lab < ct.address[s]


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_ct_round_trip_is_isomorphic(seed):
    rng = random.Random(seed)
    g = connected_graph(rng)
    if g is None:
        return
    root = rng.randrange(g.num_vertices)
    ct = ct_representation(g, root)
    assert ct.split.is_tree()
    h = reconstruct(ct)
    assert oracles.isomorphic(g, h)
    assert h.weight(0) == g.weight(root)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_ct_after_normalizing_wide_vertices(seed):
    rng = random.Random(seed)
    g = connected_graph(rng, max_classes=4)
    if g is None:
        return
    h, _ = normalize_two_paths(g)
    ct = ct_representation(h, rng.randrange(h.num_vertices))
    assert oracles.isomorphic(h, reconstruct(ct))


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_strings_do_not_depend_on_vertex_handles(seed):
    rng = random.Random(seed)
    g = connected_graph(rng)
    if g is None:
        return
    perm = list(range(g.num_vertices))
    rng.shuffle(perm)
    h = g.relabel(perm)
    root = rng.randrange(g.num_vertices)
    a = ct_representation(g, root)
    b = ct_representation(h, perm[root])
    assert a.strings == b.strings
    assert [perm[x] for x in a.anchors] == list(b.anchors)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_string_tuple_shape(seed):
    rng = random.Random(seed)
    g = connected_graph(rng)
    if g is None:
        return
    ct = ct_representation(g, 0)
    st_ = ct.strings
    w = metrics(g).width
    assert st_.arity == 2 * w
    # a root on two paths owns both, every other anchor owns one
    assert len(st_.anchors) == w - (len(g.pairing(0)) - 1)
    # every split vertex except the root sits in exactly one slot
    assert sum(len(s) for s in st_.strings) == ct.tree.num_vertices - 1
    assert StringTuple.from_bytes(st_.to_bytes()) == st_


def test_as_strings_matches_ct_and_truncates():
    g = cx_chain()
    ct = ct_representation(g, 2)
    assert as_strings(g, list(ct.anchors), 2) == ct.strings
    short = as_strings(g, list(ct.anchors), 2, depth_limit=0)
    assert all(len(s) == 0 for s in short.strings)
    one = as_strings(g, list(ct.anchors), 2, depth_limit=1)
    assert all(len(s) <= 1 for s in one.strings)


@pytest.mark.parametrize(
    "anchors, root, msg",
    [
        ([2, 1], 2, "not an anchor set"),
        ([1, 2], 2, "start with the root"),
        ([], 2, "start with the root"),
        ([2, 1, 0, 9], 2, "own no linear path"),
    ],
)
def test_as_strings_rejects(anchors, root, msg):
    with pytest.raises(GraphError, match=msg):
        as_strings(cx_chain(), anchors, root)


def test_requires_connected_flat_graph():
    two = build_graph([[0, 1], [0, 1]])
    with pytest.raises(GraphError, match="not connected"):
        canonical_anchors(two, 0)
    cyc = build_graph([[0, 1], [0, 1]], [((0, 1), (1, 0)), ((1, 1), (0, 0))])
    with pytest.raises(GraphError, match="not flat"):
        ct_representation(cyc, 0)
    with pytest.raises(GraphError, match="not a vertex"):
        canonical_anchors(cx_chain(), 7)


def test_reconstruct_rejects_bad_labels():
    # CX(0,1) H(1) CX(0,1) rooted at the H: the first CX is split in two
    c = Circuit(2, (Gate("CX", (0, 1)), Gate("H", (1,)), Gate("CX", (0, 1))))
    ct = ct_representation(circuit_to_portgraph(c), 1)
    labels = list(ct.merge_label)
    s = next(i for i, lab in enumerate(labels) if lab is not None)
    labels[s] = (99, 0)
    bad = CanonicalTree(ct.split, ct.root, ct.anchors, ct.strings, ct.address, tuple(labels))
    with pytest.raises(GraphError, match="points at no split vertex"):
        reconstruct(bad)
    # merging a copy into the wrong vertex assigns a port twice
    labels[s] = ROOT_ADDRESS
    bad = CanonicalTree(ct.split, ct.root, ct.anchors, ct.strings, ct.address, tuple(labels))
    with pytest.raises(GraphError):
        reconstruct(bad)
