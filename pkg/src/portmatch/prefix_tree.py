"""Multi-dimensional prefix tree over tuples of strings.

A tuple ``(s_0, ..., s_{n-1})`` is stored along one chain of nodes: the
characters of ``s_0`` tagged with dimension 0, then those of ``s_1`` tagged
with dimension 1, and so on (empty strings contribute nothing). A query
``(t_0, ..., t_{n-1})`` walks every chain whose tuple is a componentwise
prefix of it: from a node last entered in dimension ``k`` it may continue
in ``k`` with the next character of ``t_k`` or start any later dimension
``j > k`` with ``t_j[0]``. Each chain is reached by exactly one walk.
"""
from __future__ import annotations

from typing import Iterator, Sequence

from . import _codec

__all__ = ["PrefixTree", "PrefixTreeError"]


class PrefixTreeError(ValueError):
    pass


class _Node:
    __slots__ = ("children", "ids", "max_dim")

    def __init__(self) -> None:
        # dim -> char -> node
        self.children: dict[int, dict[bytes, _Node]] = {}
        self.ids: list[int] = []
        # largest dimension with a child, -1 for a leaf
        self.max_dim = -1


Strings = Sequence[Sequence[bytes]]


class PrefixTree:
    def __init__(self, dimension: int) -> None:
        if dimension < 0:
            raise PrefixTreeError("dimension must be non-negative")
        self.dimension = dimension
        self.root = _Node()
        self._ids: set[int] = set()
        self._nodes = 1
        #: characters compared during the last query, per dimension chain
        self.last_visits = 0

    def _check(self, strings: Strings) -> None:
        if len(strings) != self.dimension:
            raise PrefixTreeError(
                f"tuple has arity {len(strings)}, tree has dimension {self.dimension}"
            )

    def insert(self, strings: Strings, pid: int) -> None:
        self._check(strings)
        if pid in self._ids:
            raise PrefixTreeError(f"pattern id {pid} already inserted")
        node = self.root
        for dim, s in enumerate(strings):
            for c in s:
                by_char = node.children.get(dim)
                if by_char is None:
                    by_char = node.children[dim] = {}
                    node.max_dim = max(node.max_dim, dim)
                nxt = by_char.get(c)
                if nxt is None:
                    nxt = by_char[c] = _Node()
                    self._nodes += 1
                node = nxt
        node.ids.append(pid)
        self._ids.add(pid)

    def iter_query(self, strings: Strings) -> Iterator[int]:
        """Yield ids of stored tuples that are componentwise prefixes of ``strings``."""
        self._check(strings)
        lens = [len(s) for s in strings]
        visits = 0
        stack = [(self.root, -1, 0)]
        while stack:
            node, k, pos = stack.pop()
            yield from node.ids
            kids = node.children
            if not kids:
                continue
            for dim, by_char in kids.items():
                if dim == k:
                    if pos < lens[k]:
                        visits += 1
                        nxt = by_char.get(strings[k][pos])
                        if nxt is not None:
                            stack.append((nxt, k, pos + 1))
                elif dim > k and lens[dim]:
                    visits += 1
                    nxt = by_char.get(strings[dim][0])
                    if nxt is not None:
                        stack.append((nxt, dim, 1))
        self.last_visits = visits

    def start(self) -> tuple[list[tuple[_Node, int]], list[int]]:
        """Initial state for :meth:`advance` and the ids of all-empty tuples."""
        return [(self.root, -1)], list(self.root.ids)

    def advance(
        self,
        frontier: list[tuple[_Node, int]],
        a: int,
        sa: Sequence[bytes],
        sb: Sequence[bytes],
        found: list[int],
    ) -> list[tuple[_Node, int]]:
        """Extend a partial query by the strings of dimensions ``a`` and ``a + 1``.

        ``frontier`` holds ``(node, last dimension)`` states that explored
        every dimension below ``a``, as returned by :meth:`start` or an
        earlier call. Ids met at newly reached nodes are
        appended to ``found``. Returns the states that can still grow in a
        dimension above ``a + 1``; an empty list means no stored tuple
        extends this prefix.
        """
        b = a + 1
        nxt = a + 2
        out = []
        stack = []
        la, lb = len(sa), len(sb)
        for state in frontier:
            node = state[0]
            kids = node.children
            if la:
                by_char = kids.get(a)
                if by_char is not None:
                    child = by_char.get(sa[0])
                    if child is not None:
                        stack.append((child, a, 1))
            if lb:
                by_char = kids.get(b)
                if by_char is not None:
                    child = by_char.get(sb[0])
                    if child is not None:
                        stack.append((child, b, 1))
            if node.max_dim >= nxt:
                out.append(state)
        while stack:
            node, k, pos = stack.pop()
            if node.ids:
                found.extend(node.ids)
            kids = node.children
            if k == a:
                if pos < la:
                    by_char = kids.get(a)
                    if by_char is not None:
                        child = by_char.get(sa[pos])
                        if child is not None:
                            stack.append((child, a, pos + 1))
                if lb:
                    by_char = kids.get(b)
                    if by_char is not None:
                        child = by_char.get(sb[0])
                        if child is not None:
                            stack.append((child, b, 1))
            elif pos < lb:
                by_char = kids.get(b)
                if by_char is not None:
                    child = by_char.get(sb[pos])
                    if child is not None:
                        stack.append((child, b, pos + 1))
            if node.max_dim >= nxt:
                out.append((node, k))
        return out

    def query(self, strings: Strings) -> set[int]:
        return set(self.iter_query(strings))

    def stats(self) -> tuple[int, int, int]:
        """(node count, longest chain length, stored id count)."""
        depth = 0
        stack = [(self.root, 0)]
        while stack:
            node, dpt = stack.pop()
            depth = max(depth, dpt)
            for by_char in node.children.values():
                for child in by_char.values():
                    stack.append((child, dpt + 1))
        return self._nodes, depth, len(self._ids)

    def __len__(self) -> int:
        return len(self._ids)

    # -- serialization: preorder, children sorted by (dimension, character) --
    def to_bytes(self) -> bytes:
        w = _codec.Writer()
        w.u32(self.dimension)
        stack = [self.root]
        while stack:
            node = stack.pop()
            w.u32(len(node.ids))
            for i in node.ids:
                w.u32(i)
            edges = [
                (dim, c, child)
                for dim, by_char in sorted(node.children.items())
                for c, child in sorted(by_char.items())
            ]
            w.u32(len(edges))
            for dim, c, _ in edges:
                w.u32(dim)
                w.blob(c)
            stack.extend(child for _, _, child in reversed(edges))
        return w.getvalue()

    @classmethod
    def from_bytes(cls, data: bytes) -> PrefixTree:
        r = _codec.Reader(data)
        t = cls(r.u32())
        # each stack entry is a node still waiting for its payload
        pending = [t.root]
        while pending:
            node = pending.pop()
            for _ in range(r.u32()):
                pid = r.u32()
                if pid in t._ids:
                    raise _codec.CodecError(f"pattern id {pid} stored twice")
                node.ids.append(pid)
                t._ids.add(pid)
            kids = []
            for _ in range(r.u32()):
                dim = r.u32()
                if dim >= t.dimension:
                    raise _codec.CodecError(f"child dimension {dim} out of range")
                c = r.blob()
                child = _Node()
                node.children.setdefault(dim, {})[c] = child
                node.max_dim = max(node.max_dim, dim)
                kids.append(child)
                t._nodes += 1
            pending.extend(reversed(kids))
        if r.pos != len(data):
            raise _codec.CodecError("trailing bytes after prefix tree")
        return t
