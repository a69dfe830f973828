"""Linear-path index over a port graph.

A pairing class of a vertex (a pair of ports, or a lone port) is one
"occurrence" on a linear path. Consecutive occurrences are joined by the
edge attached to the exit port of one and the entry port of the next. A
class whose ports are all open still forms a path of one occurrence, so
every class of every vertex lies on exactly one path.

Occurrences are stored as ``(vertex, a, b)`` where ``a`` is the port facing
the previous occurrence and ``b`` the port facing the next one; either may
be ``None`` for a lone port.
"""
from __future__ import annotations

from typing import TYPE_CHECKING

from . import _codec

if TYPE_CHECKING:
    from .portgraph import PortGraph

OPEN = -1

Occurrence = tuple[int, "int | None", "int | None"]


class PathIndex:
    def __init__(self, g: PortGraph) -> None:
        self.graph = g
        ports = g._ports
        classes = g._classes
        class_index = g._class_index
        edges = g._edges

        where: list[list[tuple[int, int] | None]] = [[None] * len(cs) for cs in classes]
        paths: list[list[Occurrence]] = []
        path_edges: list[list[int]] = []
        cyclic: list[bool] = []

        def partner(v: int, p: int) -> int | None:
            c = classes[v][class_index[v][p]]
            if len(c) == 1:
                return None
            return c[1] if c[0] == p else c[0]

        def other_end(e: int, v: int, p: int) -> tuple[int, int]:
            x, y = edges[e]
            return y if x == (v, p) else x

        def walk(v: int, ci: int, a: int | None, b: int | None, closing: bool) -> None:
            pid = len(paths)
            occ: list[Occurrence] = [(v, a, b)]
            elist: list[int] = []
            where[v][ci] = (pid, 0)
            while b is not None and ports[v][b] != OPEN:
                e = ports[v][b]
                u, q = other_end(e, v, b)
                uci = class_index[u][q]
                elist.append(e)
                if closing and (u, uci) == (occ[0][0], ci):
                    break
                if where[u][uci] is not None:
                    raise AssertionError("linear path walk revisited an occurrence")
                nb = partner(u, q)
                where[u][uci] = (pid, len(occ))
                occ.append((u, q, nb))
                v, b = u, nb
            paths.append(occ)
            path_edges.append(elist)
            cyclic.append(closing)

        for v, cs in enumerate(classes):
            for ci, c in enumerate(cs):
                if where[v][ci] is not None:
                    continue
                if len(c) == 1:
                    walk(v, ci, None, c[0], False)
                elif ports[v][c[0]] == OPEN:
                    walk(v, ci, c[0], c[1], False)
                elif ports[v][c[1]] == OPEN:
                    walk(v, ci, c[1], c[0], False)

        # whatever is left lies on cycles
        for v, cs in enumerate(classes):
            for ci, c in enumerate(cs):
                if where[v][ci] is None:
                    walk(v, ci, c[0], c[1], True)

        self.paths = paths
        self.path_edges = path_edges
        self.cyclic = cyclic
        self.where = where
        self.flat = not any(cyclic)
        self.simple = all(len({o[0] for o in occ}) == len(occ) for occ in paths)
        self.edge_pos: dict[int, tuple[int, int]] = {}
        for pid, elist in enumerate(path_edges):
            for i, e in enumerate(elist):
                self.edge_pos[e] = (pid, i)
        self._chars: dict[tuple[int, int | None], bytes] = {}
        self._encoded: dict[tuple[int, int, int, int], tuple] = {}

    @property
    def width(self) -> int:
        return len(self.paths)

    @property
    def depth(self) -> int:
        return max((len(p) for p in self.paths), default=0)

    def paths_of(self, v: int) -> list[tuple[int, int]]:
        """(path id, position) for every pairing class of ``v``."""
        return self.where[v]  # type: ignore[return-value]

    def path_of_port(self, v: int, p: int) -> int:
        ci = self.graph._class_index[v][p]
        return self.where[v][ci][0]  # type: ignore[index]

    def char(self, v: int, entry: int | None) -> bytes:
        key = (v, entry)
        c = self._chars.get(key)
        if c is None:
            g = self.graph
            c = _codec.encode((entry, g.ports(v), g._weights[v]))
            self._chars[key] = c
        return c

    # A queue is ``(pid, start, step, stop)``: positions ``range(start, stop, step)``
    # of path ``pid``, the vertices met walking away from some anchor.

    def queue(self, pid: int, start: int, step: int, d: int | None) -> tuple[int, int, int, int]:
        n = len(self.paths[pid])
        stop = n if step > 0 else -1
        if d is not None:
            stop = min(stop, start + d) if step > 0 else max(stop, start - d)
        return (pid, start, step, stop)

    def limit(self, q: tuple[int, int, int, int], d: int | None) -> tuple[int, int, int, int]:
        pid, start, step, stop = q
        if d is None:
            return q
        stop = min(stop, start + d) if step > 0 else max(stop, start - d)
        return (pid, start, step, stop)

    def encode_queue(self, q: tuple[int, int, int, int]) -> tuple[tuple[int, ...], tuple[bytes, ...]]:
        """Vertices and characters along a queue."""
        hit = self._encoded.get(q)
        if hit is not None:
            return hit
        pid, start, step, stop = q
        occ = self.paths[pid]
        side = 1 if step > 0 else 2
        verts = []
        chars = []
        for i in range(start, stop, step):
            o = occ[i]
            verts.append(o[0])
            chars.append(self.char(o[0], o[side]))
        hit = self._encoded[q] = (tuple(verts), tuple(chars))
        return hit

    def half_queues(self, pid: int, pos: int, d: int | None) -> tuple:
        """The two halves of path ``pid`` leaving the occurrence at ``pos``.

        Ordered by the anchor-side port label, a missing (lone-port) side last.
        """
        _, a, b = self.paths[pid][pos]
        back = self.queue(pid, pos - 1, -1, d)
        fwd = self.queue(pid, pos + 1, 1, d)
        if b is None or (a is not None and a < b):
            return (back, fwd)
        return (fwd, back)

    def edge_half_queues(self, e: int, d: int | None) -> list[tuple]:
        """Halves seen from a virtual root spliced into edge ``e``.

        Returns one ordered pair of halves per admissible orientation: the
        first half leaves through the endpoint with the smaller port label.
        Equal labels admit both orientations.
        """
        pid, i = self.edge_pos[e]
        occ = self.paths[pid]
        back = self.queue(pid, i, -1, d)
        fwd = self.queue(pid, i + 1, 1, d)
        p_back = occ[i][2]
        p_fwd = occ[i + 1][1]
        if p_back < p_fwd:
            return [(back, fwd)]
        if p_fwd < p_back:
            return [(fwd, back)]
        return [(back, fwd), (fwd, back)]
