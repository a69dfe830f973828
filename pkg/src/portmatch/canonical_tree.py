"""Split graphs, canonical anchors, canonical trees and their string encoding.

Marking a set of anchor vertices and splitting every other vertex into one
copy per pairing class turns a connected flat graph into a tree when the
anchors are chosen canonically from a root. Each linear path of that tree
is cut at the anchor that owns it into two strings, giving a tuple of 2w
strings for a graph of width w.

Characters are canonical byte records ``(entry port, port set, weight)`` of
the vertices met along a half path. A slot address ``(string, position)``
identifies one split vertex; the root has address :data:`ROOT_ADDRESS`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from . import _codec
from ._paths import PathIndex
from .portgraph import GraphError, PortGraph, Vertex, build_graph

__all__ = [
    "ROOT_ADDRESS",
    "SplitGraph",
    "CanonicalTree",
    "StringTuple",
    "split_graph",
    "canonical_anchors",
    "ct_representation",
    "reconstruct",
    "as_strings",
]

ROOT_ADDRESS = (-1, -1)

Queue = tuple[int, int, int, int]


class Anchor(NamedTuple):
    """One anchor found by the traversal and the paths it owns.

    ``vertex`` is ``None`` for a virtual root spliced into an edge. Each
    entry of ``halves`` is ``(path id, first half, second half)``.
    """

    vertex: int | None
    halves: tuple[tuple[int, Queue, Queue], ...]


def require_matchable(g: PortGraph, what: str = "graph") -> PathIndex:
    idx = g.path_index
    if not idx.flat:
        raise GraphError(f"{what} is not flat: a linear path closes into a cycle")
    if not idx.simple:
        raise GraphError(f"{what} has a linear path that visits one vertex twice")
    return idx


def traverse(
    idx: PathIndex,
    root: int | None,
    root_halves: tuple[int, Queue, Queue] | None = None,
    anchor_set: set[int] | None = None,
) -> tuple[list[Anchor], set[int]]:
    """Depth-first anchor discovery from ``root`` (or a virtual edge root).

    Each queue is scanned for the first vertex on a linear path not seen
    yet; that vertex becomes an anchor, and the rest of the queue followed
    by both halves of every new path are processed in that order. With
    ``anchor_set`` only its members may become anchors.
    """
    seen: set[int] = set()
    records: list[Anchor] = []
    frames: list[Queue] = []
    if root_halves is not None:
        pid, q1, q2 = root_halves
        seen.add(pid)
        records.append(Anchor(None, (root_halves,)))
        frames = [q1, q2]
    else:
        halves = []
        for pid, pos in idx.where[root]:
            if pid in seen:
                continue
            seen.add(pid)
            q1, q2 = idx.half_queues(pid, pos, None)
            halves.append((pid, q1, q2))
            frames += [q1, q2]
        records.append(Anchor(root, tuple(halves)))
    stack = frames[::-1]
    paths = idx.paths
    where = idx.where
    while stack:
        pid, start, step, stop = stack.pop()
        occ = paths[pid]
        for i in range(start, stop, step):
            v = occ[i][0]
            if anchor_set is not None and v not in anchor_set:
                continue
            unseen = [(p, pos) for p, pos in where[v] if p not in seen]
            if not unseen:
                continue
            frames = [(pid, i + step, step, stop)]
            halves = []
            for p, pos in unseen:
                seen.add(p)
                q1, q2 = idx.half_queues(p, pos, None)
                halves.append((p, q1, q2))
                frames += [q1, q2]
            records.append(Anchor(v, tuple(halves)))
            stack.extend(reversed(frames))
            break
    return records, seen


def slot_occurrences(
    idx: PathIndex, records: Sequence[Anchor], d: int | None = None
) -> list[list[tuple[int, int]]]:
    """``(vertex, class index)`` at every slot of the encoded strings."""
    ci_of = idx.graph._class_index
    out = []
    for rec in records:
        for pid, q1, q2 in rec.halves:
            for q in (q1, q2):
                _, start, step, stop = idx.limit(q, d)
                occ = idx.paths[pid]
                row = []
                for i in range(start, stop, step):
                    v, a, b = occ[i]
                    row.append((v, ci_of[v][a if a is not None else b]))
                out.append(row)
    return out


@dataclass(frozen=True)
class StringTuple:
    """2w strings encoding a rooted tree; two halves per linear path.

    Equality and serialization only look at ``strings``; ``anchors`` and
    ``vertices`` keep the handles behind them for reconstruction.
    """

    strings: tuple[tuple[bytes, ...], ...]
    anchors: tuple[int | None, ...] = field(default=(), compare=False)
    vertices: tuple[tuple[int, ...], ...] = field(default=(), compare=False, repr=False)

    @property
    def width(self) -> int:
        return len(self.strings) // 2

    @property
    def arity(self) -> int:
        return len(self.strings)

    def __len__(self) -> int:
        return len(self.strings)

    def to_bytes(self) -> bytes:
        w = _codec.Writer()
        w.u32(len(self.strings))
        for s in self.strings:
            w.u32(len(s))
            for c in s:
                w.blob(c)
        return w.getvalue()

    @classmethod
    def from_bytes(cls, data: bytes) -> StringTuple:
        r = _codec.Reader(data)
        strings = []
        for _ in range(r.u32()):
            strings.append(tuple(r.blob() for _ in range(r.u32())))
        if r.pos != len(data):
            raise _codec.CodecError("trailing bytes after string tuple")
        return cls(tuple(strings))


def encode_records(idx: PathIndex, records: Sequence[Anchor], d: int | None) -> StringTuple:
    strings = []
    verts = []
    for rec in records:
        for _, q1, q2 in rec.halves:
            for q in (q1, q2):
                vs, cs = idx.encode_queue(idx.limit(q, d))
                strings.append(cs)
                verts.append(vs)
    return StringTuple(tuple(strings), tuple(r.vertex for r in records), tuple(verts))


# -- split graphs ------------------------------------------------------------


@dataclass(frozen=True)
class SplitGraph:
    """The graph obtained by keeping ``anchors`` whole and splitting every
    other vertex into one copy per pairing class.

    ``graph`` is the split graph itself; ``origin[s]`` is the vertex split
    vertex ``s`` came from and ``split_of[(v, class index)]`` the reverse.
    """

    graph: PortGraph
    origin: tuple[int, ...]
    anchors: frozenset[int]
    split_of: dict[tuple[int, int], int] = field(compare=False, repr=False)

    @property
    def split_vertices(self) -> range:
        return self.graph.vertices()

    def is_connected(self) -> bool:
        return self.graph.is_connected()

    def is_tree(self) -> bool:
        return self.is_connected() and self.graph.num_edges == self.graph.num_vertices - 1


def split_graph(g: PortGraph, x: Iterable[int]) -> SplitGraph:
    xs = frozenset(x)
    for v in xs:
        if not (isinstance(v, int) and 0 <= v < g.num_vertices):
            raise GraphError(f"anchor {v!r} is not a vertex of the graph")
    ports: list[dict[int, int]] = []
    classes: list[tuple[tuple[int, ...], ...]] = []
    weights = []
    origin = []
    split_of: dict[tuple[int, int], int] = {}
    where: dict[tuple[int, int], int] = {}
    for v in g.vertices():
        cs = g.pairing(v)
        groups = [tuple(range(len(cs)))] if v in xs or not cs else [(ci,) for ci in range(len(cs))]
        for grp in groups:
            s = len(ports)
            m = {}
            for ci in grp:
                split_of[(v, ci)] = s
                for p in cs[ci]:
                    m[p] = g.port(v, p)
                    where[(v, p)] = s
            ports.append(m)
            classes.append(tuple(cs[ci] for ci in grp))
            weights.append(g.weight(v))
            origin.append(v)
    edges = [((where[a], a[1]), (where[b], b[1])) for a, b in g.edges]
    sg = PortGraph(ports, edges, classes, weights)
    return SplitGraph(sg, tuple(origin), xs, split_of)


# -- canonical anchors and trees ------------------------------------------------


def _check_root(g: PortGraph, root: int) -> None:
    if not (isinstance(root, int) and 0 <= root < g.num_vertices):
        raise GraphError(f"root {root!r} is not a vertex of the graph")


def _require_connected(g: PortGraph) -> None:
    if not g.is_connected():
        raise GraphError("graph is not connected")


def canonical_anchors(g: PortGraph, root: int) -> list[int]:
    """Canonical anchor list of a connected flat graph, root first.

    >>> g = build_graph([[0], [0, 1], [1]], [((0, 0), (1, 0)), ((1, 1), (2, 1))])
    >>> canonical_anchors(g, 1)
    [1]
    """
    _check_root(g, root)
    idx = require_matchable(g)
    _require_connected(g)
    records, _ = traverse(idx, root)
    return [r.vertex for r in records]  # type: ignore[misc]


@dataclass(frozen=True)
class CanonicalTree:
    """Split graph over the canonical anchors, rooted, with merge labels.

    ``address[s]`` is the string slot of split vertex ``s``. ``merge_label[s]``
    is ``None`` when ``s`` represents its original vertex (it has the
    smallest address among the copies) and the representative's address
    otherwise.
    """

    split: SplitGraph
    root: int
    anchors: tuple[int, ...]
    strings: StringTuple
    address: tuple[tuple[int, int], ...]
    merge_label: tuple[tuple[int, int] | None, ...]

    @property
    def tree(self) -> PortGraph:
        return self.split.graph


def ct_representation(g: PortGraph, root: int) -> CanonicalTree:
    _check_root(g, root)
    idx = require_matchable(g)
    _require_connected(g)
    records, _ = traverse(idx, root)
    anchors = tuple(r.vertex for r in records)
    split = split_graph(g, anchors)  # type: ignore[arg-type]
    if not split.is_tree():
        raise GraphError(
            "split graph over the canonical anchors has a cycle; "
            "vertices on more than two linear paths must be normalized first"
        )
    strings = encode_records(idx, records, None)
    address: list[tuple[int, int] | None] = [None] * split.graph.num_vertices
    root_sv = split.split_of[(root, 0)] if g.pairing(root) else _lone_split(split, root)
    address[root_sv] = ROOT_ADDRESS
    for si, row in enumerate(slot_occurrences(idx, records)):
        for k, occ in enumerate(row):
            s = split.split_of[occ]
            if address[s] is not None:
                raise AssertionError("split vertex occupies two string slots")
            address[s] = (si, k)
    if any(a is None for a in address):
        raise AssertionError("split vertex missing from the string encoding")
    best: dict[int, tuple[int, int]] = {}
    for s, a in enumerate(address):
        v = split.origin[s]
        if v not in best or a < best[v]:  # type: ignore[operator]
            best[v] = a  # type: ignore[assignment]
    labels = tuple(
        None if address[s] == best[split.origin[s]] else best[split.origin[s]]
        for s in split.split_vertices
    )
    return CanonicalTree(split, root_sv, anchors, strings, tuple(address), labels)  # type: ignore[arg-type]


def _lone_split(split: SplitGraph, v: int) -> int:
    return split.origin.index(v)


def reconstruct(ct: CanonicalTree) -> PortGraph:
    """Merge split copies back together following the merge labels.

    Vertices of the result are ordered by representative address, so the
    root comes first.
    """
    t = ct.tree
    groups: dict[tuple[int, int], list[int]] = {}
    for s in t.vertices():
        rep = ct.merge_label[s] or ct.address[s]
        groups.setdefault(rep, []).append(s)
    known = set(ct.address)
    for rep in groups:
        if rep not in known:
            raise GraphError(f"merge label {rep} points at no split vertex")
    order = sorted(groups)
    new_of: dict[int, int] = {}
    specs = []
    for nv, rep in enumerate(order):
        members = groups[rep]
        seen_ports: set[int] = set()
        pairing = []
        weights = {t.weight(s) for s in members}
        if len(weights) > 1:
            raise GraphError(f"merged split vertices at {rep} carry different weights")
        for s in members:
            new_of[s] = nv
            for p in t.ports(s):
                if p in seen_ports:
                    raise GraphError(f"merging split vertices at {rep} assigns port {p} twice")
                seen_ports.add(p)
            pairing.extend(t.pairing(s))
        specs.append(Vertex(tuple(sorted(seen_ports)), t.weight(members[0]), tuple(pairing)))
    edges = [((new_of[a], p), (new_of[b], q)) for (a, p), (b, q) in t.edges]
    return build_graph(specs, edges, allow_reserved=True)


def as_strings(
    g: PortGraph, x: Sequence[int], root: int, depth_limit: int | None = None
) -> StringTuple:
    """Encode the tree over anchors ``x`` rooted at ``root`` as 2w strings.

    Strings are ordered by anchor discovery; each is cut to ``depth_limit``
    characters when given.
    """
    _check_root(g, root)
    if not x or x[0] != root:
        raise GraphError("anchor list must start with the root")
    idx = require_matchable(g)
    records, seen = traverse(idx, root, anchor_set=set(x))
    if len(seen) != idx.width:
        raise GraphError("not an anchor set: the split graph is disconnected")
    used = {r.vertex for r in records}
    if used != set(x):
        raise GraphError(f"anchors {sorted(set(x) - used)} own no linear path")
    return encode_records(idx, records, depth_limit)
