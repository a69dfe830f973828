import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from portmatch.circuits import (
    DEFAULT_GATES,
    TH_CX,
    Circuit,
    CircuitError,
    CircuitFormatError,
    Gate,
    circuit_to_portgraph,
    emit_circuit,
    emit_circuit_lines,
    expand_symmetries,
    gate_weight,
    parse_circuit,
    parse_circuit_lines,
    portgraph_to_circuit,
    random_circuit,
    relabel_by_first_use,
    toffoli_ladder,
)
from portmatch.portgraph import build_graph, metrics

seeds = st.integers(0, 2**32 - 1)


def test_ports_and_pairing_convention():
    g = circuit_to_portgraph(Circuit(2, (Gate("CX", (1, 0)),)))
    assert g.ports(0) == (0, 1, 2, 3)
    assert g.pairing(0) == ((0, 1), (2, 3))
    assert g.weight(0) == "CX"


def test_wires_become_linear_paths():
    c = Circuit(3, (Gate("H", (0,)), Gate("CX", (0, 2)), Gate("T", (2,)), Gate("CX", (2, 0))))
    g = circuit_to_portgraph(c)
    m = metrics(g)
    assert (m.width, m.depth, m.is_flat) == (2, 3, True)


def test_parametrized_weights():
    assert gate_weight(Gate("RZ", (0,), (math.pi,))) == "RZ(3.141592654)"
    assert gate_weight(Gate("RZ", (0,), (-1e-12,))) == "RZ(0.000000000)"
    g = circuit_to_portgraph(Circuit(1, (Gate("RZ", (0,), (0.5,)),)))
    back = portgraph_to_circuit(g)
    assert back.gates[0].params == (0.5,)


@pytest.mark.parametrize(
    "gate, msg",
    [
        (Gate("FOO", (0,)), "unknown gate"),
        (Gate("CX", (0,)), "acts on 2"),
        (Gate("RZ", (0,)), "parameters"),
    ],
)
def test_bad_gates(gate, msg):
    with pytest.raises(CircuitError, match=msg):
        circuit_to_portgraph(Circuit(2, (gate,)))


def test_circuit_validation():
    with pytest.raises(CircuitError, match="repeats"):
        Circuit(2, (Gate("CX", (0, 0)),))
    with pytest.raises(CircuitError, match="outside"):
        Circuit(1, (Gate("H", (3,)),))
    with pytest.raises(CircuitError):
        Circuit(-1)


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_graph_round_trip(seed):
    rng = random.Random(seed)
    c = random_circuit(rng.randint(3, 5), rng.randint(0, 25), DEFAULT_GATES, seed)
    g = circuit_to_portgraph(c)
    back = portgraph_to_circuit(g)
    assert circuit_to_portgraph(back) == g
    want = relabel_by_first_use(c)
    assert back.num_qubits == want.num_qubits
    assert [(x.op, x.qubits) for x in back.gates] == [(x.op, x.qubits) for x in want.gates]
    for x, y in zip(back.gates, want.gates):
        assert x.params == pytest.approx(y.params, abs=1e-9)
    # parameter-free circuits come back exactly
    plain = random_circuit(4, 20, TH_CX, seed)
    assert portgraph_to_circuit(circuit_to_portgraph(plain, TH_CX), TH_CX) == relabel_by_first_use(plain)


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_json_round_trip(seed):
    rng = random.Random(seed)
    c = random_circuit(rng.randint(3, 5), rng.randint(0, 20), DEFAULT_GATES, seed)
    text = emit_circuit(c)
    assert parse_circuit(text) == c
    assert emit_circuit(parse_circuit(text)) == text


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_width_is_qubit_count(seed):
    rng = random.Random(seed)
    q = rng.randint(2, 6)
    c = random_circuit(q, rng.randint(q, 30), TH_CX, seed)
    if min(c.gate_counts()) == 0:
        return
    m = metrics(circuit_to_portgraph(c, TH_CX))
    assert m.width == q
    assert m.depth == max(c.gate_counts())


def test_random_circuit_is_seeded():
    assert random_circuit(4, 15, TH_CX, 3) == random_circuit(4, 15, TH_CX, 3)
    assert random_circuit(4, 15, TH_CX, 3) != random_circuit(4, 15, TH_CX, 4)
    assert len(random_circuit(4, 0)) == 0
    with pytest.raises(CircuitError):
        random_circuit(1, 3, TH_CX)
    with pytest.raises(CircuitError):
        random_circuit(2, -1)


def test_random_circuit_follows_its_recipe():
    # replay the documented draws with a bare generator
    rng = random.Random(7)
    names = sorted(DEFAULT_GATES)
    want = []
    for _ in range(12):
        name = names[int(rng.random() * len(names))]
        spec = DEFAULT_GATES[name]
        pool = list(range(4))
        for j in range(spec.arity):
            k = j + int(rng.random() * (4 - j))
            pool[j], pool[k] = pool[k], pool[j]
        params = tuple(rng.random() * 2 * math.pi for _ in range(spec.n_params))
        want.append(Gate(name, tuple(pool[: spec.arity]), params))
    assert random_circuit(4, 12, DEFAULT_GATES, 7) == Circuit(4, tuple(want))


@pytest.mark.parametrize(
    "text, line",
    [
        ('{"num_qubits": 1, "gates": []}\n{"num_qubits": 1}\n', 2),
        ('{"num_qubits": 1, "gates": []}\n\nnot json\n', 3),
        ('{"num_qubits": 1, "gates": [{"op": "H", "qubits": [4]}]}\n', 1),
        ('{"num_qubits": 1, "gates": [{"op": "H", "qubits": [0], "x": 1}]}\n', 1),
        ('[1, 2]\n', 1),
    ],
)
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(CircuitFormatError) as info:
        parse_circuit_lines(text)
    assert info.value.line == line


def test_lines_round_trip():
    cs = [random_circuit(3, 5, TH_CX, s) for s in range(5)]
    assert parse_circuit_lines(emit_circuit_lines(cs)) == cs
    assert parse_circuit_lines("") == []


def test_expand_symmetries():
    c = Circuit(3, (Gate("CZ", (0, 1)), Gate("SWAP", (1, 2)), Gate("CX", (0, 2))))
    out = expand_symmetries(c)
    assert len(out) == 4
    assert out[0] == c
    assert len({x.gates for x in out}) == 4
    assert expand_symmetries(Circuit(2, (Gate("CX", (0, 1)),))) == [Circuit(2, (Gate("CX", (0, 1)),))]


def test_toffoli_ladder():
    c = toffoli_ladder(10)
    assert c.num_qubits == 19
    assert min(c.gate_counts()) > 0
    g = circuit_to_portgraph(c)
    assert metrics(g).width == 19
    assert set(op for op in (x.op for x in c.gates)) <= {"H", "T", "Tdg", "CX"}
    with pytest.raises(CircuitError):
        toffoli_ladder(1)


def test_portgraph_to_circuit_rejects_foreign_graphs():
    with pytest.raises(CircuitError):
        portgraph_to_circuit(build_graph([[0, 1]]))
