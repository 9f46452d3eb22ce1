import numpy as np
import pytest

from lopsim.circuit import (
    CNOT,
    Circuit,
    CircuitError,
    Hadamard,
    QubitRole,
    SingleQubit,
    Toffoli,
    append_gate,
    new_circuit,
    random_circuit,
    teleportation_circuit,
    validate_circuit,
)


def test_new_circuit_single_location_qubit():
    c = new_circuit(1)
    assert c.n == 1
    assert c.roles == (QubitRole.LOCATION,)
    assert c.gates == ()


def test_new_circuit_teleportation_register():
    c = new_circuit(3, polarization_qubit=1)
    assert c.roles == (QubitRole.LOCATION, QubitRole.POLARIZATION, QubitRole.LOCATION)
    assert c.polarization_qubit == 1
    assert c.location_qubits == (0, 2)


@pytest.mark.parametrize("n, pol", [(2, 5), (2, -1), (0, None)])
def test_new_circuit_rejects_bad_arguments(n, pol):
    with pytest.raises(CircuitError):
        new_circuit(n, pol)


def test_append_gate():
    c = append_gate(new_circuit(1), Hadamard(0))
    assert c.gates == (Hadamard(0),)


def test_append_rejects_duplicate_indices():
    with pytest.raises(CircuitError, match="duplicate"):
        append_gate(new_circuit(2), CNOT(0, 0))


def test_append_rejects_out_of_range():
    with pytest.raises(CircuitError, match="out of range"):
        append_gate(new_circuit(2), Toffoli(0, 1, 2))


def test_append_rejects_non_unitary():
    with pytest.raises(CircuitError, match="not unitary"):
        append_gate(new_circuit(1), SingleQubit(0, [[1, 0], [0, 2]]))


def test_append_does_not_mutate():
    c0 = new_circuit(2).append(Hadamard(0))
    c1 = c0.append(CNOT(0, 1))
    assert c0.gates == (Hadamard(0),)
    assert c1.gates[:1] == c0.gates


def test_teleportation_circuit():
    c = teleportation_circuit()
    assert c.n == 3
    assert len(c.gates) == 8
    assert c.roles[1] is QubitRole.POLARIZATION
    assert c.gates == (
        Hadamard(0),
        Hadamard(2),
        CNOT(0, 1),
        CNOT(2, 1),
        Hadamard(0),
        CNOT(1, 2),
        Hadamard(2),
        CNOT(0, 2),
    )
    assert c.gates[5] == CNOT(1, 2)
    assert validate_circuit(c) == []


def test_validate_reports_two_polarization_qubits():
    c = Circuit(2, (QubitRole.POLARIZATION, QubitRole.POLARIZATION), ())
    problems = validate_circuit(c)
    assert any("multiple polarization" in p for p in problems)


def test_validate_reports_out_of_range_gate():
    c = Circuit(2, (QubitRole.LOCATION, QubitRole.LOCATION), (Hadamard(2),))
    problems = validate_circuit(c)
    assert len(problems) == 1
    assert "out of range" in problems[0]


def test_single_qubit_matrix_is_frozen():
    g = SingleQubit(0, np.eye(2))
    assert g == SingleQubit(0, [[1, 0], [0, 1]])
    hash(g)


def test_random_circuits_validate():
    rng = np.random.default_rng(7)
    for _ in range(50):
        n = int(rng.integers(1, 5))
        pol = int(rng.integers(n)) if rng.random() < 0.5 else None
        c = random_circuit(n, 8, rng, pol)
        assert validate_circuit(c) == []
        assert len(c) == 8
