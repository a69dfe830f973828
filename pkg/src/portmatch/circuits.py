"""Quantum circuits as port graphs.

A gate acting on ``n`` qubits becomes a vertex with input ports
``i_k = 2k`` and output ports ``o_k = 2k + 1`` for ``k = 0 .. n-1``, paired
``i_k ~ o_k``, so each qubit wire is one linear path. The output port of a
qubit's previous gate is wired to the input port of its next gate; circuit
inputs and outputs stay open. Gate parameters are folded into the weight
as a fixed-precision decimal fingerprint, e.g. ``"RZ(0.500000000)"``.

Circuits are exchanged as JSON::

    {"num_qubits": 2, "gates": [{"op": "CX", "qubits": [0, 1]}]}

Pattern sets use one such object per line.
"""
from __future__ import annotations

import heapq
import json
import math
import random
import re
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple

from .portgraph import PortGraph, Vertex, build_graph

__all__ = [
    "GateSpec",
    "GateSet",
    "Gate",
    "Circuit",
    "CircuitError",
    "CircuitFormatError",
    "TH_CX",
    "DEFAULT_GATES",
    "circuit_to_portgraph",
    "portgraph_to_circuit",
    "parse_circuit",
    "emit_circuit",
    "parse_circuit_lines",
    "emit_circuit_lines",
    "random_circuit",
    "expand_symmetries",
    "relabel_by_first_use",
    "toffoli_ladder",
]

PARAM_DIGITS = 9


class CircuitError(ValueError):
    pass


class CircuitFormatError(CircuitError):
    """Schema violation in circuit JSON; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None) -> None:
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class GateSpec(NamedTuple):
    arity: int
    n_params: int = 0
    symmetric: bool = False


class GateSet(dict):
    """Gate name to :class:`GateSpec`."""

    def __init__(self, specs: Mapping[str, GateSpec | tuple] = ()) -> None:
        super().__init__()
        for name, spec in dict(specs).items():
            spec = GateSpec(*spec)
            if spec.arity < 1:
                raise CircuitError(f"gate {name} must act on at least one qubit")
            if spec.symmetric and spec.arity != 2:
                raise CircuitError(f"only two-qubit gates can be symmetric ({name})")
            self[name] = spec

    @property
    def max_arity(self) -> int:
        return max((s.arity for s in self.values()), default=0)


TH_CX = GateSet({"T": (1,), "H": (1,), "CX": (2,)})

DEFAULT_GATES = GateSet(
    {
        "H": (1,),
        "X": (1,),
        "Y": (1,),
        "Z": (1,),
        "S": (1,),
        "Sdg": (1,),
        "T": (1,),
        "Tdg": (1,),
        "RX": (1, 1),
        "RY": (1, 1),
        "RZ": (1, 1),
        "CX": (2,),
        "CZ": (2, 0, True),
        "SWAP": (2, 0, True),
        "CCX": (3,),
    }
)


@dataclass(frozen=True)
class Gate:
    op: str
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self) -> None:
        if not isinstance(self.num_qubits, int) or self.num_qubits < 0:
            raise CircuitError(f"num_qubits must be a non-negative integer, got {self.num_qubits!r}")
        for i, g in enumerate(self.gates):
            if len(set(g.qubits)) != len(g.qubits):
                raise CircuitError(f"gate {i} ({g.op}) repeats a qubit")
            for q in g.qubits:
                if not 0 <= q < self.num_qubits:
                    raise CircuitError(f"gate {i} ({g.op}) uses qubit {q} outside 0..{self.num_qubits - 1}")

    def __len__(self) -> int:
        return len(self.gates)

    def gate_counts(self) -> list[int]:
        counts = [0] * self.num_qubits
        for g in self.gates:
            for q in g.qubits:
                counts[q] += 1
        return counts


def _fmt_param(x: float) -> str:
    s = f"{x:.{PARAM_DIGITS}f}"
    return "0." + "0" * PARAM_DIGITS if float(s) == 0 else s


def gate_weight(g: Gate) -> str:
    if not g.params:
        return g.op
    return f"{g.op}({','.join(_fmt_param(p) for p in g.params)})"


_WEIGHT = re.compile(r"^([^()]+)(?:\((.*)\))?$")


def _parse_weight(w: object) -> tuple[str, tuple[float, ...]]:
    if not isinstance(w, str):
        raise CircuitError(f"vertex weight {w!r} is not a gate label")
    m = _WEIGHT.match(w)
    if m is None:
        raise CircuitError(f"vertex weight {w!r} is not a gate label")
    params = tuple(float(x) for x in m.group(2).split(",")) if m.group(2) else ()
    return m.group(1), params


def _check_gate(g: Gate, gs: GateSet, i: int) -> GateSpec:
    spec = gs.get(g.op)
    if spec is None:
        raise CircuitError(f"gate {i}: unknown gate {g.op!r}")
    if len(g.qubits) != spec.arity:
        raise CircuitError(f"gate {i}: {g.op} acts on {spec.arity} qubits, got {len(g.qubits)}")
    if len(g.params) != spec.n_params:
        raise CircuitError(f"gate {i}: {g.op} takes {spec.n_params} parameters, got {len(g.params)}")
    return spec


def circuit_to_portgraph(c: Circuit, gs: GateSet = DEFAULT_GATES) -> PortGraph:
    """One vertex per gate; qubit wires become linear paths.

    >>> c = Circuit(2, (Gate("H", (0,)), Gate("CX", (0, 1))))
    >>> g = circuit_to_portgraph(c)
    >>> g.num_vertices, g.num_edges
    (2, 1)
    """
    specs = []
    edges = []
    last: list[tuple[int, int] | None] = [None] * c.num_qubits
    for v, g in enumerate(c.gates):
        _check_gate(g, gs, v)
        n = len(g.qubits)
        specs.append(
            Vertex(tuple(range(2 * n)), gate_weight(g), tuple((2 * k, 2 * k + 1) for k in range(n)))
        )
        for k, q in enumerate(g.qubits):
            if last[q] is not None:
                edges.append((last[q], (v, 2 * k)))
            last[q] = (v, 2 * k + 1)
    return build_graph(specs, edges)


def portgraph_to_circuit(g: PortGraph, gs: GateSet = DEFAULT_GATES) -> Circuit:
    """Read a circuit back from a port graph built with the circuit conventions.

    Gates come out in a topological order that prefers lower vertex handles;
    qubits are numbered by first use in that order.
    """
    n = g.num_vertices
    gates_meta = []
    for v in g.vertices():
        op, params = _parse_weight(g.weight(v))
        spec = gs.get(op)
        if spec is None:
            raise CircuitError(f"vertex {v}: unknown gate {op!r}")
        k = spec.arity
        if g.ports(v) != tuple(range(2 * k)):
            raise CircuitError(f"vertex {v}: ports {g.ports(v)} do not fit a {k}-qubit gate")
        if g.pairing(v) != tuple((2 * i, 2 * i + 1) for i in range(k)):
            raise CircuitError(f"vertex {v}: pairing does not join each input with its output")
        gates_meta.append((op, params, k))
    succ: list[list[int]] = [[] for _ in range(n)]
    indeg = [0] * n
    for (a, p), (b, q) in g.edges:
        if p % 2 == 1 and q % 2 == 0:
            src, dst = a, b
        elif p % 2 == 0 and q % 2 == 1:
            src, dst = b, a
        else:
            raise CircuitError(f"edge between ports {p} and {q} does not join an output to an input")
        succ[src].append(dst)
        indeg[dst] += 1
    heap = [v for v in range(n) if indeg[v] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        v = heapq.heappop(heap)
        order.append(v)
        for u in succ[v]:
            indeg[u] -= 1
            if indeg[u] == 0:
                heapq.heappush(heap, u)
    if len(order) != n:
        raise CircuitError("port graph has a cycle when edges are oriented from outputs to inputs")
    idx = g.path_index
    qubit_of_path: dict[int, int] = {}
    gates = []
    for v in order:
        op, params, k = gates_meta[v]
        qs = []
        for i in range(k):
            pid = idx.path_of_port(v, 2 * i)
            if pid not in qubit_of_path:
                qubit_of_path[pid] = len(qubit_of_path)
            qs.append(qubit_of_path[pid])
        gates.append(Gate(op, tuple(qs), params))
    return Circuit(len(qubit_of_path), tuple(gates))


def relabel_by_first_use(c: Circuit) -> Circuit:
    """Renumber qubits by first use and drop qubits no gate touches."""
    new: dict[int, int] = {}
    gates = []
    for g in c.gates:
        for q in g.qubits:
            if q not in new:
                new[q] = len(new)
        gates.append(Gate(g.op, tuple(new[q] for q in g.qubits), g.params))
    return Circuit(len(new), tuple(gates))


# -- JSON --------------------------------------------------------------------


def _circuit_from_obj(obj: object, line: int | None = None) -> Circuit:
    def fail(msg: str) -> CircuitFormatError:
        return CircuitFormatError(msg, line)

    if not isinstance(obj, dict):
        raise fail("circuit must be a JSON object")
    if "num_qubits" not in obj:
        raise fail('missing field "num_qubits"')
    nq = obj["num_qubits"]
    if not isinstance(nq, int) or isinstance(nq, bool) or nq < 0:
        raise fail('"num_qubits" must be a non-negative integer')
    if "gates" not in obj:
        raise fail('missing field "gates"')
    raw = obj["gates"]
    if not isinstance(raw, list):
        raise fail('"gates" must be an array')
    extra = set(obj) - {"num_qubits", "gates"}
    if extra:
        raise fail(f"unknown fields {sorted(extra)}")
    gates = []
    for i, gobj in enumerate(raw):
        where = f"gates[{i}]"
        if not isinstance(gobj, dict):
            raise fail(f"{where} must be an object")
        op = gobj.get("op")
        if not isinstance(op, str) or not op:
            raise fail(f'{where}.op must be a non-empty string')
        qs = gobj.get("qubits")
        if not isinstance(qs, list) or not all(isinstance(q, int) and not isinstance(q, bool) for q in qs):
            raise fail(f"{where}.qubits must be an array of integers")
        ps = gobj.get("params", [])
        if not isinstance(ps, list) or not all(
            isinstance(p, (int, float)) and not isinstance(p, bool) for p in ps
        ):
            raise fail(f"{where}.params must be an array of numbers")
        extra = set(gobj) - {"op", "qubits", "params"}
        if extra:
            raise fail(f"{where} has unknown fields {sorted(extra)}")
        gates.append(Gate(op, tuple(qs), tuple(float(p) for p in ps)))
    try:
        return Circuit(nq, tuple(gates))
    except CircuitError as exc:
        raise fail(str(exc)) from None


def _circuit_to_obj(c: Circuit) -> dict:
    gates = []
    for g in c.gates:
        d: dict = {"op": g.op, "qubits": list(g.qubits)}
        if g.params:
            d["params"] = list(g.params)
        gates.append(d)
    return {"num_qubits": c.num_qubits, "gates": gates}


def parse_circuit(text: str) -> Circuit:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CircuitFormatError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    return _circuit_from_obj(obj)


def emit_circuit(c: Circuit) -> str:
    return json.dumps(_circuit_to_obj(c), separators=(",", ":"))


def parse_circuit_lines(text: str) -> list[Circuit]:
    """One circuit per non-blank line; errors carry the line number."""
    out = []
    for n, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CircuitFormatError(f"invalid JSON: {exc.msg}", n) from None
        out.append(_circuit_from_obj(obj, n))
    return out


def emit_circuit_lines(circuits: Iterable[Circuit]) -> str:
    return "".join(emit_circuit(c) + "\n" for c in circuits)


# -- generation ----------------------------------------------------------------


def random_circuit(q: int, n_gates: int, gs: GateSet = TH_CX, seed: int = 0) -> Circuit:
    """Seeded random circuit.

    Uses only ``random.Random(seed).random()``: each gate name is
    ``names[int(u * len(names))]`` over the sorted names, its qubits come
    from a partial Fisher-Yates shuffle of ``0..q-1`` with index
    ``j + int(u * (q - j))``, and each parameter is ``u * 2 * pi``.
    """
    if n_gates < 0:
        raise CircuitError("n_gates must be non-negative")
    if q < gs.max_arity:
        raise CircuitError(f"{q} qubits cannot host a {gs.max_arity}-qubit gate")
    rng = random.Random(seed)
    names = sorted(gs)
    gates = []
    for _ in range(n_gates):
        name = names[int(rng.random() * len(names))]
        spec = gs[name]
        pool = list(range(q))
        for j in range(spec.arity):
            k = j + int(rng.random() * (q - j))
            pool[j], pool[k] = pool[k], pool[j]
        params = tuple(rng.random() * 2 * math.pi for _ in range(spec.n_params))
        gates.append(Gate(name, tuple(pool[: spec.arity]), params))
    return Circuit(q, tuple(gates))


def expand_symmetries(c: Circuit, gs: GateSet = DEFAULT_GATES) -> list[Circuit]:
    """All variants with the operands of symmetric gates swapped, deduplicated."""
    sym = [i for i, g in enumerate(c.gates) if g.op in gs and gs[g.op].symmetric]
    out = []
    seen = set()
    for mask in range(1 << len(sym)):
        gates = list(c.gates)
        for bit, i in enumerate(sym):
            if mask >> bit & 1:
                g = gates[i]
                gates[i] = Gate(g.op, g.qubits[::-1], g.params)
        key = tuple(gates)
        if key not in seen:
            seen.add(key)
            out.append(Circuit(c.num_qubits, key))
    return out


def _toffoli(a: int, b: int, t: int) -> list[Gate]:
    # standard seven-T decomposition
    return [
        Gate("H", (t,)),
        Gate("CX", (b, t)),
        Gate("Tdg", (t,)),
        Gate("CX", (a, t)),
        Gate("T", (t,)),
        Gate("CX", (b, t)),
        Gate("Tdg", (t,)),
        Gate("CX", (a, t)),
        Gate("T", (b,)),
        Gate("T", (t,)),
        Gate("H", (t,)),
        Gate("CX", (a, b)),
        Gate("T", (a,)),
        Gate("Tdg", (b,)),
        Gate("CX", (a, b)),
    ]


def toffoli_ladder(n_controls: int) -> Circuit:
    """Multi-controlled X built from a ladder of Toffolis with clean ancillas,
    each Toffoli expanded into H, T, Tdg and CX.

    Uses ``n_controls`` controls, ``n_controls - 2`` ancillas and one target.
    Ten controls give a 19-qubit circuit.
    """
    if n_controls < 2:
        raise CircuitError("need at least two controls")
    m = n_controls
    controls = list(range(m))
    anc = list(range(m, 2 * m - 2))
    target = 2 * m - 2
    chain = []
    chain.append((controls[0], controls[1], anc[0] if anc else target))
    for i in range(2, m):
        dst = anc[i - 1] if i - 1 < len(anc) else target
        chain.append((controls[i], anc[i - 2], dst))
    # compute, then uncompute everything below the last Toffoli
    seq = chain + chain[-2::-1]
    gates: list[Gate] = []
    for a, b, t in seq:
        gates.extend(_toffoli(a, b, t))
    return Circuit(2 * m - 1, tuple(gates))
