import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from portmatch._codec import CodecError
from portmatch.prefix_tree import PrefixTree, PrefixTreeError

ALPHABET = [bytes([c]) for c in b"abc"]


def random_tuple(rng, dim, max_len):
    return [[rng.choice(ALPHABET) for _ in range(rng.randint(0, max_len))] for _ in range(dim)]


def test_empty_tuple_matches_everything():
    t = PrefixTree(2)
    t.insert([[], []], 7)
    assert t.query([[b"a"], []]) == {7}
    assert t.query([[], []]) == {7}


def test_componentwise_prefix():
    t = PrefixTree(2)
    t.insert([[b"a"], [b"b", b"c"]], 0)
    t.insert([[b"a", b"a"], []], 1)
    t.insert([[], [b"c"]], 2)
    assert t.query([[b"a", b"a"], [b"b", b"c", b"a"]]) == {0, 1}
    assert t.query([[b"a"], [b"c"]]) == {2}
    assert t.query([[b"b"], [b"b"]]) == set()


def test_insert_errors():
    t = PrefixTree(1)
    t.insert([[b"a"]], 0)
    with pytest.raises(PrefixTreeError, match="already inserted"):
        t.insert([[b"b"]], 0)
    with pytest.raises(PrefixTreeError, match="arity"):
        t.insert([[b"a"], []], 1)
    with pytest.raises(PrefixTreeError, match="arity"):
        t.query([])
    with pytest.raises(PrefixTreeError):
        PrefixTree(-1)


def test_stats_and_len():
    t = PrefixTree(2)
    t.insert([[b"a", b"b"], [b"c"]], 0)
    t.insert([[b"a"], [b"c"]], 1)
    nodes, depth, ids = t.stats()
    # root, a, ab, abc, ac
    assert (nodes, depth, ids) == (5, 3, 2)
    assert len(t) == 2


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 4))
def test_query_matches_brute_force(seed, dim):
    rng = random.Random(seed)
    t = PrefixTree(dim)
    stored = {}
    for pid in range(rng.randint(0, 60)):
        s = random_tuple(rng, dim, 3)
        t.insert(s, pid)
        stored[pid] = s
    for _ in range(20):
        q = random_tuple(rng, dim, 5)
        assert t.query(q) == oracles.prefix_matches(stored, q)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_advance_agrees_with_full_query(seed):
    # feeding dimensions two at a time finds the same ids as one full query
    rng = random.Random(seed)
    dim = 2 * rng.randint(1, 3)
    t = PrefixTree(dim)
    for pid in range(rng.randint(0, 40)):
        t.insert(random_tuple(rng, dim, 2), pid)
    q = random_tuple(rng, dim, 4)
    frontier, found = t.start()
    for a in range(0, dim, 2):
        frontier = t.advance(frontier, a, q[a], q[a + 1], found)
    assert sorted(found) == sorted(t.query(q))
    assert len(found) == len(set(found))


def test_serialization_round_trip_is_canonical():
    rng = random.Random(1)
    a = PrefixTree(3)
    entries = [(random_tuple(rng, 3, 3), pid) for pid in range(50)]
    for s, pid in entries:
        a.insert(s, pid)
    b = PrefixTree(3)
    for s, pid in reversed(entries):
        b.insert(s, pid)
    # same content inserted in another order: children are sorted, so bytes
    # differ only by the id order at shared nodes
    data = a.to_bytes()
    c = PrefixTree.from_bytes(data)
    assert c.to_bytes() == data
    assert c.stats() == a.stats()
    q = random_tuple(rng, 3, 5)
    assert c.query(q) == a.query(q) == b.query(q)


def test_from_bytes_rejects_garbage():
    t = PrefixTree(1)
    t.insert([[b"a"]], 3)
    data = t.to_bytes()
    with pytest.raises(CodecError):
        PrefixTree.from_bytes(data + b"\0")
    with pytest.raises(CodecError):
        PrefixTree.from_bytes(data[:-2])
