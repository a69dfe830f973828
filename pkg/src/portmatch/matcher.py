"""Compile pattern sets into prefix-tree matchers and query subject graphs.

Compilation normalizes each pattern so every vertex sits on at most two
linear paths, roots it in the middle of its lowest edge, computes its
canonical anchors and inserts its string tuple into the prefix tree of its
width. A query enumerates every subject edge as a root and every anchor
list from it, reads off the subject strings, and asks each width's tree
which patterns are prefixes. Every hit is rebuilt into a vertex map and
verified before it is reported, so the output is sound by construction.

Patterns without edges (a single vertex) bypass the trees and are matched
by vertex signature.
"""
from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from . import _codec
from ._paths import OPEN, PathIndex
from .anchor_enum import AnchorCandidate, AnchorEnumerator, EdgeRoot
from .canonical_tree import StringTuple, encode_records, require_matchable, traverse
from .portgraph import (
    Embedding,
    GraphError,
    PortGraph,
    _paths_injective,
    normalize_two_paths,
)
from .prefix_tree import PrefixTree

__all__ = [
    "MAGIC",
    "FORMAT_VERSION",
    "REJECT",
    "PatternError",
    "MatcherFormatError",
    "BadMagicError",
    "UnsupportedVersionError",
    "TruncatedError",
    "ChecksumError",
    "CompiledPattern",
    "Match",
    "Matcher",
    "Subject",
    "compile_patterns",
    "find_matches",
    "reconstruct_candidate",
    "naive_match",
    "save",
    "load",
]

MAGIC = b"PGPM"
FORMAT_VERSION = 1

#: returned by :func:`reconstruct_candidate` when a prefix hit is not an embedding
REJECT = None


class PatternError(GraphError):
    """A pattern cannot be compiled; ``index`` is its position in the input."""

    def __init__(self, index: int, reason: str) -> None:
        super().__init__(f"pattern {index}: {reason}")
        self.index = index
        self.reason = reason


class MatcherFormatError(ValueError):
    pass


class BadMagicError(MatcherFormatError):
    pass


class UnsupportedVersionError(MatcherFormatError):
    pass


class TruncatedError(MatcherFormatError):
    pass


class ChecksumError(MatcherFormatError):
    pass


@dataclass(frozen=True)
class CompiledPattern:
    """Everything the query side needs about one distinct pattern.

    ``slots[v]`` is the string slot ``(string, position)`` where normalized
    vertex ``v`` first appears. ``root_edge`` is ``None`` for a pattern
    without edges.
    """

    id: int
    pattern: PortGraph
    normalized: PortGraph = field(repr=False)
    back_map: tuple[int, ...] = field(repr=False)
    root_edge: int | None
    anchors: tuple[int | None, ...]
    strings: StringTuple | None = field(repr=False)
    width: int
    depth: int
    normalized_depth: int
    slots: tuple[tuple[int, int], ...] = field(repr=False, default=())
    first_fragment: tuple[int, ...] = field(repr=False, default=())


@dataclass(frozen=True, order=True)
class Match:
    pattern_id: int
    embedding: Embedding
    anchors: tuple = field(compare=False, default=())
    convex: bool = field(compare=False, default=True)

    @property
    def vertex_map(self) -> tuple[int, ...]:
        return self.embedding.vertex_map


def _signature_key(g: PortGraph, v: int) -> bytes:
    return _codec.encode((g.ports(v), g.weight(v), g.pairing(v)))


def _compile_one(index: int, p: PortGraph) -> CompiledPattern:
    if not isinstance(p, PortGraph):
        raise PatternError(index, f"expected a PortGraph, got {type(p).__name__}")
    if p.num_vertices == 0:
        raise PatternError(index, "pattern is empty")
    if not p.is_connected():
        raise PatternError(index, "pattern is not connected")
    pidx = p.path_index
    if not pidx.flat:
        raise PatternError(index, "pattern is not flat")
    pn, back = normalize_two_paths(p)
    try:
        idx = require_matchable(pn, "pattern")
    except GraphError as exc:
        raise PatternError(index, str(exc)) from None
    first = [0] * p.num_vertices
    for nv in range(len(back) - 1, -1, -1):
        first[back[nv]] = nv
    if p.num_edges == 0:
        return CompiledPattern(
            index, p, pn, back, None, (), None, pidx.width, pidx.depth, idx.depth, (), tuple(first)
        )
    e0 = 0
    pid, _ = idx.edge_pos[e0]
    h1, h2 = idx.edge_half_queues(e0, None)[0]
    records, _ = traverse(idx, None, (pid, h1, h2))
    st = encode_records(idx, records, None)
    slot: list[tuple[int, int] | None] = [None] * pn.num_vertices
    for s, row in enumerate(st.vertices):
        for k, v in enumerate(row):
            if slot[v] is None:
                slot[v] = (s, k)
    if any(x is None for x in slot):
        raise AssertionError("pattern vertex missing from its string encoding")
    return CompiledPattern(
        index,
        p,
        pn,
        back,
        e0,
        st.anchors,
        st,
        pidx.width,
        pidx.depth,
        idx.depth,
        tuple(slot),  # type: ignore[arg-type]
        tuple(first),
    )


class Matcher:
    """Compiled, immutable pattern matcher.

    ``patterns[i]`` is the compiled form of input pattern ``i``. Exact
    duplicates share one entry: ``aliases[u]`` lists all ids of entry ``u``.
    """

    def __init__(
        self,
        patterns: Sequence[CompiledPattern],
        aliases: Sequence[Sequence[int]],
        trees: dict[int, PrefixTree],
        depth_limit: dict[int, int],
        singles: dict[bytes, int],
        convex_only: bool = True,
    ) -> None:
        self.convex_only = convex_only
        self.patterns = tuple(patterns)
        self.aliases = tuple(tuple(a) for a in aliases)
        self.trees = dict(sorted(trees.items()))
        self.depth_limit = dict(sorted(depth_limit.items()))
        self.singles = dict(singles)
        self.entries = tuple(self.patterns[a[0]] for a in self.aliases)

    @property
    def d_max(self) -> int:
        return max((cp.depth for cp in self.patterns), default=0)

    @property
    def widths(self) -> tuple[int, ...]:
        return tuple(self.trees)

    def __len__(self) -> int:
        return len(self.patterns)

    def bucket_sizes(self) -> dict[int, int]:
        return {w: len(t) for w, t in self.trees.items()}

    def find_matches(self, g: PortGraph, convex_only: bool | None = None) -> list[Match]:
        return find_matches(self, g, convex_only=convex_only)

    def to_bytes(self) -> bytes:
        return save(self)

    @classmethod
    def from_bytes(cls, data: bytes) -> Matcher:
        return load(data)


def compile_patterns(patterns: Iterable[PortGraph], convex_only: bool = True) -> Matcher:
    """Compile patterns into a matcher; pattern ids are input positions.

    ``convex_only`` is the default query mode stored with the matcher.
    """
    compiled: list[CompiledPattern] = []
    aliases: list[list[int]] = []
    entry_of: dict[bytes, int] = {}
    for i, p in enumerate(patterns):
        if isinstance(p, PortGraph):
            key = p.to_bytes()
            u = entry_of.get(key)
            if u is not None:
                aliases[u].append(i)
                compiled.append(_relabel_id(compiled[aliases[u][0]], i))
                continue
        cp = _compile_one(i, p)
        entry_of[key] = len(aliases)
        aliases.append([i])
        compiled.append(cp)
    return _assemble(compiled, aliases, convex_only=convex_only)


def _relabel_id(cp: CompiledPattern, i: int) -> CompiledPattern:
    return replace(cp, id=i)


def _assemble(
    compiled: Sequence[CompiledPattern],
    aliases: Sequence[Sequence[int]],
    trees: dict[int, PrefixTree] | None = None,
    convex_only: bool = True,
) -> Matcher:
    build = trees is None
    trees = {} if trees is None else trees
    depth_limit: dict[int, int] = {}
    singles: dict[bytes, int] = {}
    for u, ids in enumerate(aliases):
        cp = compiled[ids[0]]
        if cp.root_edge is None:
            singles[_signature_key(cp.pattern, 0)] = u
            continue
        w = cp.width
        depth_limit[w] = max(depth_limit.get(w, 0), cp.normalized_depth)
        if build:
            if w not in trees:
                trees[w] = PrefixTree(2 * w)
            trees[w].insert(cp.strings.strings, u)  # type: ignore[union-attr]
    if set(trees) != set(depth_limit):
        raise MatcherFormatError("prefix trees do not match the pattern widths")
    return Matcher(compiled, aliases, trees, depth_limit, singles, convex_only)


# -- querying ------------------------------------------------------------------


class Subject:
    """A subject graph prepared for queries: normalized copy, path index and
    per-depth anchor enumerators."""

    def __init__(self, g: PortGraph) -> None:
        if not g.path_index.flat:
            raise GraphError("subject graph is not flat")
        self.graph = g
        self.normalized, self.back_map = normalize_two_paths(g)
        self.index: PathIndex = require_matchable(self.normalized, "subject")
        self._enumerators: dict[int | None, AnchorEnumerator] = {}

    def enumerator(self, d: int | None) -> AnchorEnumerator:
        en = self._enumerators.get(d)
        if en is None:
            en = self._enumerators[d] = AnchorEnumerator(self.index, d)
        return en


def _as_subject(g: PortGraph | Subject) -> Subject:
    return g if isinstance(g, Subject) else Subject(g)


def _embeds(p: PortGraph, g: PortGraph, phi: Sequence[int]) -> bool:
    """Embedding check without handle validation, for the hot path."""
    gp = g._ports
    gw = g._weights
    for v, m in enumerate(p._ports):
        x = phi[v]
        if m.keys() != gp[x].keys() or p._weights[v] != gw[x]:
            return False
    images = set()
    for (a, pa), (b, pb) in p._edges:
        f = gp[phi[a]][pa]
        if f == OPEN or gp[phi[b]][pb] != f or f in images:
            return False
        images.add(f)
    return True


def _rebuild(cp: CompiledPattern, verts: Sequence[Sequence[int]], subj: Subject) -> tuple[int, ...] | None:
    phi = []
    for s, k in cp.slots:
        row = verts[s]
        if k >= len(row):
            raise AssertionError(f"slot ({s}, {k}) outside the subject strings")
        phi.append(row[k])
    if len(set(phi)) != len(phi):
        return REJECT
    if not _embeds(cp.normalized, subj.normalized, phi):
        return REJECT
    back = subj.back_map
    orig = tuple(back[phi[nv]] for nv in cp.first_fragment)
    if len(set(orig)) != len(orig) or not _embeds(cp.pattern, subj.graph, orig):
        return REJECT
    return orig


def reconstruct_candidate(
    m: Matcher, pattern_id: int, cand: AnchorCandidate, g: PortGraph | Subject
) -> Embedding | None:
    """Rebuild and check the embedding behind a prefix-tree hit.

    ``cand`` must come from anchor enumeration on the normalized subject
    (``Subject(g).normalized``). Returns the embedding of the original
    pattern into the original subject, or :data:`REJECT`.
    """
    subj = _as_subject(g)
    cp = m.patterns[pattern_id]
    if cp.root_edge is None:
        raise GraphError("patterns without edges are matched by signature, not by anchors")
    st = encode_records(subj.index, cand.records, None)
    if len(st.strings) != 2 * cp.width:
        raise GraphError(f"candidate has width {st.width}, pattern has width {cp.width}")
    phi = _rebuild(cp, st.vertices, subj)
    return REJECT if phi is None else Embedding(phi, pattern_id)


def find_matches(
    m: Matcher, g: PortGraph | Subject, convex_only: bool | None = None, pruned: bool = False
) -> list[Match]:
    """All convex embeddings of the compiled patterns into ``g``.

    By default every anchor candidate of the enumeration is looked up in
    the prefix trees, so the work done does not grow with the number of
    patterns once the trees are saturated. ``pruned=True`` interleaves the
    enumeration with the tree walk instead and abandons an anchor prefix
    as soon as no stored tuple can extend it. That is faster, but how much
    gets pruned depends on how many patterns are stored. Both give the
    same convex matches; without the convexity filter the pruned walk may
    reach a few more (verified) embeddings because it checks ids on
    incomplete anchor lists too.

    With ``convex_only=False`` every verified embedding that the anchor
    enumeration reaches is reported, convex or not (a superset, not a
    completeness guarantee). ``None`` uses the matcher's stored default,
    which is ``True`` unless compiled otherwise. Sorted by pattern id, then
    vertex map.
    """
    if convex_only is None:
        convex_only = m.convex_only
    subj = _as_subject(g)
    sg = subj.graph
    gidx = sg.path_index
    # per distinct pattern: vertex map -> (anchors, convex); aliases are
    # expanded once at the end
    found: dict[int, dict[tuple[int, ...], tuple[tuple, bool]]] = {}

    def report(u: int, phi: tuple[int, ...], anchors: tuple) -> None:
        seen = found.get(u)
        if seen is None:
            seen = found[u] = {}
        elif phi in seen:
            return
        convex = _paths_injective(m.entries[u].pattern.path_index, gidx, phi)
        if convex_only and not convex:
            return
        seen[phi] = (anchors, convex)

    if m.singles:
        for x in sg.vertices():
            u = m.singles.get(_signature_key(sg, x))
            if u is not None:
                report(u, (x,), (x,))

    idx = subj.index
    entries = m.entries
    back = subj.back_map
    n_root_edges = sg.num_edges  # the normalized graph lists the original edges first
    for w, tree in m.trees.items():
        if idx.width < w:
            continue
        d = m.depth_limit[w]
        if pruned:
            for e, recs, verts, hits in _guided_hits(idx, tree, w, d, n_root_edges):
                anchors = (EdgeRoot(e),) + tuple(back[v] for v in recs)
                for u in hits:
                    phi = _rebuild(entries[u], verts, subj)
                    if phi is not None:
                        report(u, phi, anchors)
            continue
        for e, recs, verts, hits in _listed_hits(subj, tree, w, d, n_root_edges):
            anchors = (EdgeRoot(e),) + tuple(back[r.vertex] for r in recs[1:])  # type: ignore[index]
            for u in hits:
                    phi = _rebuild(entries[u], verts, subj)
                    if phi is not None:
                        report(u, phi, anchors)
    out = []
    for pid, u in sorted((pid, u) for u in found for pid in m.aliases[u]):
        seen = found[u]
        for phi in sorted(seen):
            anchors, convex = seen[phi]
            out.append(Match(pid, Embedding(phi, pid), anchors, convex))
    return out


def _listed_hits(subj: Subject, tree: PrefixTree, w: int, d: int | None, n_edges: int):
    """Yield ``(edge, records, strings' vertices, sorted pattern ids)`` hits.

    Walks every candidate of the anchor enumeration. Candidates come out
    of a memo and share record prefixes, so the prefix-tree walk is shared
    too: each record prefix advances the tree by its two strings once, and
    a candidate's hits are the ids met along its chain, the same set a full
    query on its tuple returns.
    """
    idx = subj.index
    encode = idx.encode_queue
    en = subj.enumerator(d)
    frontier0, ids0 = tree.start()
    # record-prefix trie: id(record) -> [frontier, hit ids, children,
    # strings' vertices, record]; holding the record keeps its id from
    # being reused
    top: dict[int, list] = {}
    for e in range(n_edges):
        for recs in en.edge_records(w, e):
            level = top
            frontier, hits, verts = frontier0, ids0, ()
            for i, rec in enumerate(recs):
                step = level.get(id(rec))
                if step is None:
                    _, q1, q2 = rec.halves[0]
                    v1, c1 = encode(q1)
                    v2, c2 = encode(q2)
                    if frontier:
                        found: list[int] = []
                        frontier = tree.advance(frontier, 2 * i, c1, c2, found)
                        if found:
                            hits = hits + found
                    step = level[id(rec)] = [frontier, hits, {}, verts + (v1, v2), rec]
                frontier, hits, level, verts, _ = step
            if hits:
                yield e, recs, verts, sorted(set(hits))


def _guided_hits(idx: PathIndex, tree: PrefixTree, w: int, d: int | None, n_edges: int):
    """Yield ``(edge, anchor vertices, strings' vertices, pattern ids)`` hits.

    Anchor lists are grown one anchor at a time. Each pending queue is
    either skipped (it contributes no anchor) or yields its first vertex
    on an unseen path, whose two half-paths become the next two strings.
    Those decisions, taken in traversal order, produce exactly the lists
    of the recursive split enumeration. Ids are yielded as soon as their
    stored tuple is complete, since later strings of that tuple are empty.
    """
    encode = idx.encode_queue
    half_queues = idx.half_queues
    paths = idx.paths
    where = idx.where
    advance = tree.advance
    verts: list[tuple[int, ...]] = []
    anchors: list[int] = []
    out: list = []

    def grow(stack: tuple, seen: int, count: int, frontier: list) -> None:
        # stack top is the last element
        while stack:
            q = stack[-1]
            stack = stack[:-1]
            pid, start, step, stop = q
            occ = paths[pid]
            for i in range(start, stop, step):
                v = occ[i][0]
                unseen = [pp for pp in where[v] if not (seen >> pp[0]) & 1]
                if unseen:
                    break
            else:
                continue
            # take v as the next anchor, then fall through to skipping q
            p, pos = unseen[0]
            h1, h2 = half_queues(p, pos, d)
            v1, c1 = encode(h1)
            v2, c2 = encode(h2)
            found: list[int] = []
            nxt = advance(frontier, 2 * count, c1, c2, found)
            verts.append(v1)
            verts.append(v2)
            anchors.append(v)
            if found:
                out.append((tuple(anchors), list(verts), sorted(found)))
            if nxt and count + 1 < w:
                grow(stack + (h2, h1, (pid, i + step, step, stop)), seen | (1 << p), count + 1, nxt)
            del verts[-2:]
            anchors.pop()

    # every pattern with an edge has non-empty root strings, so nothing
    # is stored at the tree root
    start, _ = tree.start()
    for e in range(n_edges):
        pid, _ = idx.edge_pos[e]
        for h1, h2 in idx.edge_half_queues(e, d):
            v1, c1 = encode(h1)
            v2, c2 = encode(h2)
            found = []
            frontier = advance(start, 0, c1, c2, found)
            verts[:] = [v1, v2]
            if found:
                yield e, (), list(verts), sorted(found)
            if frontier and w > 1:
                grow((h2, h1), 1 << pid, 1, frontier)
                for recs, vs, hits in out:
                    yield e, recs, vs, hits
                out.clear()


# -- naive baseline ------------------------------------------------------------


def _plan(p: PortGraph) -> list[tuple[int, int, int, int]]:
    """Edge steps ``(known vertex, port, vertex, port)`` from vertex 0 outward."""
    steps = []
    seen = {0}
    used: set[int] = set()
    queue = [0]
    for v in queue:
        for port, e in p._ports[v].items():
            if e == OPEN or e in used:
                continue
            used.add(e)
            u, q = p.neighbour(v, port)  # type: ignore[misc]
            steps.append((v, port, u, q))
            if u not in seen:
                seen.add(u)
                queue.append(u)
    return steps


def naive_match(p: PortGraph, g: PortGraph) -> list[Match]:
    """All embeddings of ``p`` into ``g`` by following ports from each start.

    Pattern vertex 0 is tried on every subject vertex with the same port
    set and weight; the rest of the map is then forced edge by edge.
    """
    if p.num_vertices == 0:
        return []
    steps = _plan(p)
    ports0 = p._ports[0].keys()
    w0 = p._weights[0]
    gp = g._ports
    flat = g.path_index.flat
    pidx = p.path_index
    out = []
    n = p.num_vertices
    for x in g.vertices():
        if gp[x].keys() != ports0 or g._weights[x] != w0:
            continue
        phi: dict[int, int] = {0: x}
        ok = True
        for v, port, u, q in steps:
            e = gp[phi[v]].get(port)
            if e is None or e == OPEN:
                ok = False
                break
            a, b = g._edges[e]
            y = b if a == (phi[v], port) else a
            if y[1] != q:
                ok = False
                break
            if u in phi:
                if phi[u] != y[0]:
                    ok = False
                    break
            else:
                phi[u] = y[0]
        if not ok or len(phi) != n:
            continue
        vm = tuple(phi[v] for v in range(n))
        if len(set(vm)) != n or not _embeds(p, g, vm):
            continue
        convex = _paths_injective(pidx, g.path_index, vm) if flat else False
        out.append(Match(-1, Embedding(vm), (x,), convex))
    out.sort()
    return out


# -- file format ---------------------------------------------------------------
#
#   magic "PGPM" | u32 version | u32 flags (bit 0: convex-only default)
#   u32 n_patterns, then per pattern a length-prefixed canonical graph record
#   u32 n_entries, then per entry u32 count and that many u32 pattern ids
#   u32 d_max
#   u32 n_trees, then per tree u32 width, u32 depth limit, length-prefixed payload
#   u32 n_singles, then per single a length-prefixed signature and u32 entry
#   8-byte BLAKE2b digest of everything above
#
# All integers are little-endian.

_DIGEST = 8


def _digest(data: bytes) -> bytes:
    return hashlib.blake2b(data, digest_size=_DIGEST).digest()


def save(m: Matcher, destination=None) -> bytes:
    """Serialize ``m``; also write to ``destination`` (path or binary file) if given."""
    w = _codec.Writer()
    w.buf += MAGIC
    w.u32(FORMAT_VERSION)
    w.u32(1 if m.convex_only else 0)
    w.u32(len(m.patterns))
    for cp in m.patterns:
        w.blob(cp.pattern.to_bytes())
    w.u32(len(m.aliases))
    for ids in m.aliases:
        w.u32(len(ids))
        for i in ids:
            w.u32(i)
    w.u32(m.d_max)
    w.u32(len(m.trees))
    for width, tree in m.trees.items():
        w.u32(width)
        w.u32(m.depth_limit[width])
        w.blob(tree.to_bytes())
    w.u32(len(m.singles))
    for sig, u in sorted(m.singles.items()):
        w.blob(sig)
        w.u32(u)
    body = w.getvalue()
    data = body + _digest(body)
    if destination is not None:
        if hasattr(destination, "write"):
            destination.write(data)
        else:
            with open(destination, "wb") as fh:
                fh.write(data)
    return data


def load(data: bytes) -> Matcher:
    """Inverse of :func:`save`, with a distinct error for each failure mode."""
    if len(data) < len(MAGIC) or data[: len(MAGIC)] != MAGIC:
        raise BadMagicError("not a matcher file (bad magic bytes)")
    if len(data) < len(MAGIC) + 4:
        raise TruncatedError("matcher file ends inside the header")
    (version,) = struct.unpack_from("<I", data, len(MAGIC))
    if version != FORMAT_VERSION:
        raise UnsupportedVersionError(
            f"matcher format version {version} is not supported (expected {FORMAT_VERSION})"
        )
    if len(data) < len(MAGIC) + 4 + _DIGEST:
        raise TruncatedError("matcher file has no checksum")
    body, digest = data[:-_DIGEST], data[-_DIGEST:]
    r = _codec.Reader(body, len(MAGIC) + 4)
    try:
        flags = r.u32()
        graphs = [r.blob() for _ in range(r.u32())]
        aliases = [[r.u32() for _ in range(r.u32())] for _ in range(r.u32())]
        r.u32()  # d_max, recomputed from the patterns
        tree_blobs = []
        for _ in range(r.u32()):
            width = r.u32()
            r.u32()  # depth limit, recomputed
            tree_blobs.append((width, r.blob()))
        singles = [(r.blob(), r.u32()) for _ in range(r.u32())]
    except _codec.CodecError:
        if _digest(body) != digest:
            raise ChecksumError("matcher file is truncated or corrupted") from None
        raise TruncatedError("matcher file ends early") from None
    if _digest(body) != digest:
        raise ChecksumError("matcher file checksum mismatch")
    if r.pos != len(body):
        raise MatcherFormatError("trailing bytes before the checksum")
    try:
        trees = {width: PrefixTree.from_bytes(blob) for width, blob in tree_blobs}
        patterns = [PortGraph.from_bytes(b) for b in graphs]
    except (_codec.CodecError, GraphError) as exc:
        raise MatcherFormatError(f"malformed matcher payload: {exc}") from None
    compiled: list[CompiledPattern | None] = [None] * len(patterns)
    for ids in aliases:
        if not ids or any(i >= len(patterns) for i in ids):
            raise MatcherFormatError("alias table references unknown patterns")
        try:
            cp = _compile_one(ids[0], patterns[ids[0]])
        except PatternError as exc:
            raise MatcherFormatError(f"stored {exc}") from None
        for i in ids:
            compiled[i] = _relabel_id(cp, i)
    if any(c is None for c in compiled):
        raise MatcherFormatError("pattern table and alias table disagree")
    if flags & ~1:
        raise MatcherFormatError(f"unknown flags {flags:#x}")
    m = _assemble(compiled, aliases, trees, bool(flags & 1))  # type: ignore[arg-type]
    if sorted(m.singles.items()) != sorted((s, u) for s, u in singles):
        raise MatcherFormatError("signature table disagrees with the patterns")
    return m
