"""Enumerate every anchor list a width-w subgraph could have from a root.

The enumeration mirrors the canonical traversal but, instead of taking the
outcome dictated by one subgraph, it tries every way of spreading the
remaining anchors over the three queues left after each new anchor (the
rest of the current queue and the two halves of the new path). The number
of lists is bounded by the ternary-tree count ``binom(3w, w) / (2w + 1)``.

Graphs must be flat with every vertex on at most two linear paths (see
:func:`portmatch.portgraph.normalize_two_paths`).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import NamedTuple

from ._paths import PathIndex
from .canonical_tree import Anchor, Queue, StringTuple, encode_records, require_matchable
from .portgraph import GraphError, PortGraph

__all__ = [
    "EdgeRoot",
    "AnchorCandidate",
    "AnchorEnumerator",
    "all_anchors",
    "g_max",
    "subject_strings",
    "anchor_bound",
]


class EdgeRoot(NamedTuple):
    """A virtual root spliced into the middle of an edge."""

    edge: int


@dataclass(frozen=True)
class AnchorCandidate:
    """One anchor list: ``anchors[0]`` is the root, the rest are vertices.

    ``records`` keeps, per anchor, the linear path it owns and the two
    halves of that path, which is what string extraction needs.
    """

    anchors: tuple[int | EdgeRoot, ...]
    seen_paths: frozenset[int]
    records: tuple[Anchor, ...] = field(compare=False, repr=False, default=())

    @property
    def width(self) -> int:
        return len(self.anchors)


def anchor_bound(w: int) -> int:
    """``binom(3w, w) / (2w + 1)``: 1, 1, 3, 12, 55, ... for w = 0, 1, 2, ..."""
    return comb(3 * w, w) // (2 * w + 1)


Partial = tuple[tuple[Anchor, ...], int]


class AnchorEnumerator:
    """Memoized enumeration over one graph and one depth limit.

    Results of the recursive step only depend on ``(w, queue, seen)``, so
    the memo is shared across all roots of the graph.
    """

    def __init__(self, idx: PathIndex, d: int | None) -> None:
        self.idx = idx
        self.d = d
        self._memo: dict[tuple[int, Queue, int], list[Partial]] = {}

    def consume(self, w: int, q: Queue, seen: int) -> list[Partial]:
        if w == 0:
            return [((), seen)]
        key = (w, q, seen)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        idx = self.idx
        pid, start, step, stop = q
        occ = idx.paths[pid]
        where = idx.where
        out: list[Partial] = []
        for i in range(start, stop, step):
            v = occ[i][0]
            unseen = [(p, pos) for p, pos in where[v] if not (seen >> p) & 1]
            if not unseen:
                continue
            if len(unseen) != 1:
                raise GraphError(
                    f"vertex {v} has {len(unseen)} unseen linear paths; "
                    "normalize vertices on more than two paths first"
                )
            p, pos = unseen[0]
            h1, h2 = idx.half_queues(p, pos, self.d)
            head = (Anchor(v, ((p, h1, h2),)),)
            rest = (pid, i + step, step, stop)
            seen0 = seen | (1 << p)
            for w1 in range(w):
                for a1, s1 in self.consume(w1, rest, seen0):
                    for w2 in range(w - w1):
                        for a2, s2 in self.consume(w2, h1, s1):
                            for a3, s3 in self.consume(w - 1 - w1 - w2, h2, s2):
                                out.append((head + a1 + a2 + a3, s3))
            break
        self._memo[key] = out
        return out

    def root_records(self, w: int, root: Anchor) -> list[tuple[Anchor, ...]]:
        """Deduplicated anchor record lists of ``w`` anchors from ``root``."""
        if w <= 0:
            raise GraphError(f"width must be at least 1, got {w}")
        ((pid, h1, h2),) = root.halves
        seen0 = 1 << pid
        out = []
        keys = set()
        for w2 in range(w):
            for a2, s2 in self.consume(w2, h1, seen0):
                for a3, _ in self.consume(w - 1 - w2, h2, s2):
                    recs = (root,) + a2 + a3
                    key = tuple(r.vertex for r in recs)
                    if key not in keys:
                        keys.add(key)
                        out.append(recs)
        return out

    def from_root(self, w: int, root: Anchor) -> list[AnchorCandidate]:
        """All anchor lists of ``w`` anchors starting at an anchored root."""
        return [
            AnchorCandidate(
                tuple(r.vertex for r in recs),  # type: ignore[misc]
                frozenset(r.halves[0][0] for r in recs),
                recs,
            )
            for recs in self.root_records(w, root)
        ]

    def edge_records(self, w: int, e: int) -> list[tuple[Anchor, ...]]:
        pid, _ = self.idx.edge_pos[e]
        out = []
        for h1, h2 in self.idx.edge_half_queues(e, self.d):
            out.extend(self.root_records(w, Anchor(None, ((pid, h1, h2),))))
        return out

    def at_edge(self, w: int, e: int) -> list[AnchorCandidate]:
        """Candidates for a virtual root in edge ``e``, all orientations."""
        pid, _ = self.idx.edge_pos[e]
        out = []
        for h1, h2 in self.idx.edge_half_queues(e, self.d):
            root = Anchor(None, ((pid, h1, h2),))
            for c in self.from_root(w, root):
                out.append(AnchorCandidate((EdgeRoot(e),) + c.anchors[1:], c.seen_paths, c.records))
        return out


def _prepare(g: PortGraph) -> PathIndex:
    idx = require_matchable(g)
    for v in g.vertices():
        if len(g.pairing(v)) > 2:
            raise GraphError(f"vertex {v} lies on more than two linear paths; normalize first")
    return idx


def all_anchors(g: PortGraph, root: int, w: int, d: int | None = None) -> list[AnchorCandidate]:
    """Every anchor list of ``w`` anchors rooted at ``root``, deduplicated.

    ``root`` must lie on exactly one linear path. Paths are followed at most
    ``d`` vertices away from each anchor.
    """
    if w <= 0:
        raise GraphError(f"width must be at least 1, got {w}")
    if not (isinstance(root, int) and 0 <= root < g.num_vertices):
        raise GraphError(f"root {root!r} is not a vertex of the graph")
    idx = _prepare(g)
    where = idx.where[root]
    if len(where) != 1:
        raise GraphError(f"root lies on {len(where)} linear paths, expected exactly one")
    pid, pos = where[0]
    h1, h2 = idx.half_queues(pid, pos, d)
    return AnchorEnumerator(idx, d).from_root(w, Anchor(root, ((pid, h1, h2),)))


def _windows(g: PortGraph, cand: AnchorCandidate, d: int | None) -> dict[int, set[int]]:
    """Per linear path, the occurrence positions within ``d`` of an anchor."""
    idx = g.path_index
    keep: dict[int, set[int]] = {}

    def window(pid: int, lo: int, hi: int) -> None:
        n = len(idx.paths[pid])
        lo, hi = max(lo, 0), min(hi, n - 1)
        keep.setdefault(pid, set()).update(range(lo, hi + 1))

    big = max((len(p) for p in idx.paths), default=0) if d is None else d
    for a in cand.anchors:
        if isinstance(a, EdgeRoot):
            pid, i = idx.edge_pos[a.edge]
            window(pid, i - big + 1, i + big)
        else:
            for pid, pos in idx.where[a]:
                window(pid, pos - big, pos + big)
    return keep


def g_max(g: PortGraph, cand: AnchorCandidate, d: int | None = None) -> tuple[PortGraph, tuple[int, ...]]:
    """The largest subgraph a pattern with these anchors can occupy.

    Keeps every linear path through an anchor, cut ``d`` vertices past the
    nearest anchor in each direction. Returns the subgraph and its vertex
    back-map.
    """
    idx = g.path_index
    verts: set[int] = {a for a in cand.anchors if not isinstance(a, EdgeRoot)}
    edges: set[int] = set()
    for pid, positions in _windows(g, cand, d).items():
        occ = idx.paths[pid]
        pe = idx.path_edges[pid]
        for i in positions:
            verts.add(occ[i][0])
            if i + 1 in positions and i < len(pe):
                edges.add(pe[i])
    return g.subgraph(verts, edges)


def subject_strings(g: PortGraph, cand: AnchorCandidate, d: int | None = None) -> StringTuple:
    """The 2w strings of the subject around an anchor candidate."""
    if not cand.records:
        raise GraphError("anchor candidate carries no path records")
    return encode_records(g.path_index, cand.records, d)
