"""Port graphs: construction, linear paths, metrics, embeddings and convexity.

Vertices and edges are dense integer handles assigned in insertion order.
Every port of a vertex is either attached to an edge or :data:`OPEN`; ports
that were never declared are absent. Ports are grouped into pairing classes
(pairs plus at most one lone port) which route linear paths through the
vertex.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Any, Hashable, Iterable, Mapping, Sequence

from . import _codec
from ._paths import OPEN, PathIndex

__all__ = [
    "OPEN",
    "RESERVED_PORT_BASE",
    "GraphError",
    "Vertex",
    "PortGraph",
    "LinearPath",
    "GraphMetrics",
    "Embedding",
    "build_graph",
    "linear_paths",
    "metrics",
    "normalize_two_paths",
    "verify_embedding",
    "is_convex",
]

#: Port labels at or above this value are reserved for internal rewiring.
RESERVED_PORT_BASE = 1 << 20
_LINK_OUT = RESERVED_PORT_BASE
_LINK_IN = RESERVED_PORT_BASE + 1

Endpoint = tuple[int, int]


class GraphError(ValueError):
    """Raised for malformed graphs, invalid handles and unmet preconditions."""


@dataclass(frozen=True)
class Vertex:
    """Vertex spec for :func:`build_graph`.

    ``pairing`` is a list of port pairs (and at most one lone port). When it
    is omitted, ports are paired consecutively in ascending label order.
    """

    ports: tuple[int, ...] = ()
    weight: Hashable = None
    pairing: tuple[tuple[int, ...], ...] | None = None


def default_pairing(ports: Iterable[int]) -> tuple[tuple[int, ...], ...]:
    ps = sorted(ports)
    return tuple(tuple(ps[i : i + 2]) for i in range(0, len(ps), 2))


class PortGraph:
    """An immutable open port graph."""

    __slots__ = ("_ports", "_edges", "_classes", "_class_index", "_weights", "__dict__")

    def __init__(
        self,
        ports: Sequence[Mapping[int, int]],
        edges: Sequence[tuple[Endpoint, Endpoint]],
        classes: Sequence[Sequence[Sequence[int]]],
        weights: Sequence[Hashable] | None = None,
    ) -> None:
        # trusted constructor; use build_graph for validated input
        self._ports = tuple(dict(sorted(m.items())) for m in ports)
        self._edges = tuple((tuple(a), tuple(b)) for a, b in edges)
        self._classes = tuple(
            tuple(sorted((tuple(sorted(c)) for c in cs), key=lambda c: c[0])) for cs in classes
        )
        self._class_index = tuple(
            {p: ci for ci, c in enumerate(cs) for p in c} for cs in self._classes
        )
        n = len(self._ports)
        if weights is None:
            self._weights: tuple[Hashable, ...] = (None,) * n
        else:
            self._weights = tuple(_codec.freeze(w) for w in weights)

    # -- basic accessors -------------------------------------------------
    @property
    def num_vertices(self) -> int:
        return len(self._ports)

    @property
    def num_edges(self) -> int:
        return len(self._edges)

    def vertices(self) -> range:
        return range(len(self._ports))

    @property
    def edges(self) -> tuple[tuple[Endpoint, Endpoint], ...]:
        return self._edges

    def ports(self, v: int) -> tuple[int, ...]:
        return tuple(self._ports[v])

    def port(self, v: int, p: int) -> int | None:
        """Edge handle at ``(v, p)``, :data:`OPEN`, or ``None`` if the port is absent."""
        return self._ports[v].get(p)

    def degree(self, v: int) -> int:
        return len(self._ports[v])

    def weight(self, v: int) -> Hashable:
        return self._weights[v]

    @property
    def weights(self) -> tuple[Hashable, ...]:
        return self._weights

    def pairing(self, v: int) -> tuple[tuple[int, ...], ...]:
        return self._classes[v]

    def partner(self, v: int, p: int) -> int | None:
        c = self._classes[v][self._class_index[v][p]]
        if len(c) == 1:
            return None
        return c[1] if c[0] == p else c[0]

    def neighbour(self, v: int, p: int) -> Endpoint | None:
        e = self._ports[v].get(p)
        if e is None or e == OPEN:
            return None
        a, b = self._edges[e]
        return b if a == (v, p) else a

    def open_ports(self) -> list[Endpoint]:
        return [(v, p) for v, m in enumerate(self._ports) for p, e in m.items() if e == OPEN]

    def signature(self, v: int) -> tuple:
        return (self.ports(v), self._weights[v], self._classes[v])

    @cached_property
    def path_index(self) -> PathIndex:
        return PathIndex(self)

    def is_connected(self) -> bool:
        n = self.num_vertices
        if n == 0:
            return True
        adj: list[list[int]] = [[] for _ in range(n)]
        for (a, _), (b, _) in self._edges:
            adj[a].append(b)
            adj[b].append(a)
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for u in adj[v]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return len(seen) == n

    def subgraph(
        self, vertices: Iterable[int], edges: Iterable[int]
    ) -> tuple[PortGraph, tuple[int, ...]]:
        """Subgraph on the given vertex and edge handles.

        Every port of a kept vertex stays present; ports whose edge is dropped
        become open. Returns the new graph and the handle back-map.
        """
        keep_e = sorted(set(edges))
        vs = set(vertices)
        for e in keep_e:
            (a, _), (b, _) = self._edges[e]
            vs.add(a)
            vs.add(b)
        order = sorted(vs)
        new_of = {v: i for i, v in enumerate(order)}
        ports = [{p: OPEN for p in self._ports[v]} for v in order]
        new_edges = []
        for i, e in enumerate(keep_e):
            (a, p), (b, q) = self._edges[e]
            ports[new_of[a]][p] = i
            ports[new_of[b]][q] = i
            new_edges.append(((new_of[a], p), (new_of[b], q)))
        sub = PortGraph(
            ports,
            new_edges,
            [self._classes[v] for v in order],
            [self._weights[v] for v in order],
        )
        return sub, tuple(order)

    def relabel(self, perm: Sequence[int]) -> PortGraph:
        """Copy with vertex ``v`` renamed to ``perm[v]``."""
        n = self.num_vertices
        inv = [0] * n
        for v, pv in enumerate(perm):
            inv[pv] = v
        ports = [{} for _ in range(n)]
        for v in range(n):
            ports[perm[v]] = dict(self._ports[v])
        edges = [((perm[a], p), (perm[b], q)) for (a, p), (b, q) in self._edges]
        return PortGraph(
            ports,
            edges,
            [self._classes[inv[i]] for i in range(n)],
            [self._weights[inv[i]] for i in range(n)],
        )

    # -- serialization -----------------------------------------------------
    def to_bytes(self) -> bytes:
        record = (
            tuple(
                (tuple(self._ports[v]), self._weights[v], self._classes[v])
                for v in self.vertices()
            ),
            self._edges,
        )
        return _codec.encode(record)

    @classmethod
    def from_bytes(cls, data: bytes) -> PortGraph:
        verts, edges = _codec.decode(data)
        return build_graph(
            [Vertex(tuple(ps), w, tuple(cs)) for ps, w, cs in verts],
            [tuple(e) for e in edges],
            allow_reserved=True,
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PortGraph):
            return NotImplemented
        return (
            self._ports == other._ports
            and self._edges == other._edges
            and self._classes == other._classes
            and self._weights == other._weights
        )

    def __hash__(self) -> int:
        return hash(self.to_bytes())

    def __repr__(self) -> str:
        return f"PortGraph(vertices={self.num_vertices}, edges={self.num_edges})"


def build_graph(
    vertices: Sequence[Vertex | Iterable[int]],
    edges: Sequence[tuple[Endpoint, Endpoint]] = (),
    *,
    allow_reserved: bool = False,
) -> PortGraph:
    """Build and validate a port graph.

    ``vertices`` holds :class:`Vertex` specs or plain port iterables. Ports
    named by an edge but not declared on the vertex are declared implicitly.
    Declared ports left without an edge are open.

    >>> g = build_graph([[0], [0]], [((0, 0), (1, 0))])
    >>> g.degree(0), g.degree(1)
    (1, 1)
    """
    specs = [v if isinstance(v, Vertex) else Vertex(tuple(v)) for v in vertices]
    n = len(specs)
    ports: list[dict[int, int]] = []
    for v, s in enumerate(specs):
        m: dict[int, int] = {}
        for p in s.ports:
            _check_port(p, allow_reserved)
            if p in m:
                raise GraphError(f"port {p} declared twice on vertex {v}")
            m[p] = OPEN
        ports.append(m)

    norm_edges = []
    for i, e in enumerate(edges):
        try:
            (a, p), (b, q) = e
        except (TypeError, ValueError):
            raise GraphError(f"edge {i} is not a pair of (vertex, port) endpoints") from None
        for v, port in ((a, p), (b, q)):
            if not (isinstance(v, int) and 0 <= v < n):
                raise GraphError(f"edge {i} references unknown vertex {v!r}")
            _check_port(port, allow_reserved)
        if (a, p) == (b, q):
            raise GraphError(f"edge {i} attaches both ends to port {p} of vertex {a}")
        for v, port in ((a, p), (b, q)):
            cur = ports[v].get(port, OPEN)
            if cur != OPEN:
                raise GraphError(f"port {port} of vertex {v} is already occupied by edge {cur}")
            ports[v][port] = i
        norm_edges.append(((a, p), (b, q)))

    classes = []
    for v, s in enumerate(specs):
        if s.pairing is None:
            classes.append(default_pairing(ports[v]))
            continue
        seen: set[int] = set()
        singles = 0
        for c in s.pairing:
            c = tuple(c)
            if len(c) not in (1, 2):
                raise GraphError(f"pairing class {c} of vertex {v} must have one or two ports")
            singles += len(c) == 1
            for p in c:
                if p not in ports[v]:
                    raise GraphError(f"pairing of vertex {v} references absent port {p}")
                if p in seen:
                    raise GraphError(f"port {p} appears twice in the pairing of vertex {v}")
                seen.add(p)
        if seen != set(ports[v]):
            missing = sorted(set(ports[v]) - seen)
            raise GraphError(f"pairing of vertex {v} leaves ports {missing} unpaired")
        if singles > 1:
            raise GraphError(f"pairing of vertex {v} has more than one lone port")
        classes.append(tuple(tuple(c) for c in s.pairing))

    return PortGraph(ports, norm_edges, classes, [s.weight for s in specs])


def _check_port(p: Any, allow_reserved: bool) -> None:
    if not isinstance(p, int) or isinstance(p, bool) or p < 0:
        raise GraphError(f"port labels must be non-negative integers, got {p!r}")
    if p >= RESERVED_PORT_BASE and not allow_reserved:
        raise GraphError(f"port label {p} is in the reserved range")


# -- linear paths and metrics ---------------------------------------------


@dataclass(frozen=True)
class LinearPath:
    """One linear path: its vertices in order, the edges between them and
    the ``(entry, exit)`` ports used at each vertex."""

    path_id: int
    vertices: tuple[int, ...]
    edges: tuple[int, ...]
    ports: tuple[tuple[int | None, int | None], ...]
    cyclic: bool = False

    def __len__(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True)
class GraphMetrics:
    width: int
    depth: int
    is_flat: bool
    n_odd: int
    n_open: int


def linear_paths(g: PortGraph) -> list[LinearPath]:
    idx = g.path_index
    return [
        LinearPath(
            pid,
            tuple(o[0] for o in occ),
            tuple(idx.path_edges[pid]),
            tuple((o[1], o[2]) for o in occ),
            idx.cyclic[pid],
        )
        for pid, occ in enumerate(idx.paths)
    ]


def metrics(g: PortGraph) -> GraphMetrics:
    idx = g.path_index
    return GraphMetrics(
        width=idx.width,
        depth=idx.depth,
        is_flat=idx.flat,
        n_odd=sum(1 for v in g.vertices() if g.degree(v) % 2),
        n_open=len(g.open_ports()),
    )


def normalize_two_paths(g: PortGraph) -> tuple[PortGraph, tuple[int, ...]]:
    """Split every vertex on ``k > 2`` pairing classes into ``k - 1`` fragments.

    The fragments are chained by internal edges that extend one of the
    vertex's linear paths (the one through its last paired class), so every
    fragment sits on exactly two paths and the width is unchanged. Fragment
    ``j`` of a vertex with weight ``w`` gets weight ``(w, j)``.

    Returns the new graph and the back-map from new to original handles.
    """
    if not g.path_index.flat:
        raise GraphError("normalize_two_paths requires a flat graph")
    if all(len(cs) <= 2 for cs in g._classes):
        return g, tuple(g.vertices())

    ports: list[dict[int, int]] = []
    classes: list[list[tuple[int, ...]]] = []
    weights: list[Hashable] = []
    back: list[int] = []
    holder: list[dict[int, int]] = []  # per original vertex: port -> new handle
    links: list[tuple[Endpoint, Endpoint]] = []

    for v in g.vertices():
        cs = g._classes[v]
        k = len(cs)
        if k <= 2:
            nv = len(ports)
            ports.append({p: OPEN for p in g._ports[v]})
            classes.append(list(cs))
            weights.append(g._weights[v])
            back.append(v)
            holder.append({p: nv for p in g._ports[v]})
            continue
        through = max(ci for ci, c in enumerate(cs) if len(c) == 2)
        t0, t1 = cs[through]
        rest = [c for ci, c in enumerate(cs) if ci != through]
        first = len(ports)
        own: dict[int, int] = {}
        for j, c in enumerate(rest):
            nv = first + j
            left = t0 if j == 0 else _LINK_IN
            right = t1 if j == len(rest) - 1 else _LINK_OUT
            ports.append({p: OPEN for p in (*c, left, right)})
            classes.append([c, (left, right)])
            weights.append((g._weights[v], j))
            back.append(v)
            for p in c:
                own[p] = nv
            if j > 0:
                links.append(((nv - 1, _LINK_OUT), (nv, _LINK_IN)))
        own[t0] = first
        own[t1] = first + len(rest) - 1
        holder.append(own)

    edges: list[tuple[Endpoint, Endpoint]] = []
    for (a, p), (b, q) in g._edges:
        edges.append(((holder[a][p], p), (holder[b][q], q)))
    edges.extend(links)
    for i, ((a, p), (b, q)) in enumerate(edges):
        ports[a][p] = i
        ports[b][q] = i
    return PortGraph(ports, edges, classes, weights), tuple(back)


# -- embeddings ------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Embedding:
    """Injective vertex map from a pattern into a subject graph.

    ``vertex_map[v]`` is the image of pattern vertex ``v``.
    """

    vertex_map: tuple[int, ...]
    pattern_id: int | None = None


def _check_handles(p: PortGraph, g: PortGraph, e: Embedding) -> None:
    if len(e.vertex_map) != p.num_vertices:
        raise GraphError(
            f"vertex map has {len(e.vertex_map)} entries for a pattern with {p.num_vertices} vertices"
        )
    n = g.num_vertices
    for v, x in enumerate(e.vertex_map):
        if not isinstance(x, int) or not 0 <= x < n:
            raise GraphError(f"pattern vertex {v} maps to unknown subject vertex {x!r}")


def verify_embedding(p: PortGraph, g: PortGraph, e: Embedding) -> bool:
    """Check that ``e`` is a pattern embedding of ``p`` into ``g``.

    Port sets and weights must agree vertex by vertex, and every pattern
    edge must land on a subject edge joining the same ports of the images.
    Pattern open ports may face anything.
    """
    _check_handles(p, g, e)
    phi = e.vertex_map
    if len(set(phi)) != len(phi):
        return False
    for v in p.vertices():
        x = phi[v]
        if p._ports[v].keys() != g._ports[x].keys():
            return False
        if p._weights[v] != g._weights[x]:
            return False
    images = set()
    for (a, pa), (b, pb) in p._edges:
        f = g._ports[phi[a]][pa]
        if f == OPEN or g._ports[phi[b]][pb] != f:
            return False
        if f in images:
            return False
        images.add(f)
    return True


def is_convex(p: PortGraph, g: PortGraph, e: Embedding) -> bool:
    """Whether the embedding is convex.

    An embedding is convex exactly when no two linear paths of the pattern
    land on the same linear path of the subject: any subgraph containing
    the image can at best join the image's pieces along subject paths.
    """
    if not verify_embedding(p, g, e):
        raise GraphError("is_convex requires a valid embedding")
    gidx = g.path_index
    if not gidx.flat:
        raise GraphError("is_convex requires a flat subject graph")
    return _paths_injective(p.path_index, gidx, e.vertex_map)


def _paths_injective(pidx: PathIndex, gidx: PathIndex, phi: Sequence[int]) -> bool:
    hit = set()
    for occ in pidx.paths:
        v, a, b = occ[0]
        port = a if a is not None else b
        target = gidx.path_of_port(phi[v], port)
        if target in hit:
            return False
        hit.add(target)
    return True
