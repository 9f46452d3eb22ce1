"""Independent reference computations used by the tests.

Nothing here imports the simulators under test: gate unitaries are built by
enumerating basis states and products are plain matrix multiplications.
"""

import itertools

import numpy as np

from lopsim.circuit import (
    CNOT,
    ControlledPhase,
    Fredkin,
    Hadamard,
    PauliX,
    Phase,
    SingleQubit,
    Toffoli,
)

S = 1 / np.sqrt(2)


def _local(g):
    """(qubits, function mapping local input bits -> list of (output bits, amplitude))."""
    if isinstance(g, (Hadamard, PauliX, Phase, SingleQubit)):
        if isinstance(g, Hadamard):
            m = [[S, S], [S, -S]]
        elif isinstance(g, PauliX):
            m = [[0, 1], [1, 0]]
        elif isinstance(g, Phase):
            m = [[1, 0], [0, np.exp(1j * g.angle)]]
        else:
            m = g.u
        return (g.target,), lambda b: [((o,), m[o][b[0]]) for o in (0, 1)]
    if isinstance(g, CNOT):
        return (g.control, g.target), lambda b: [((b[0], b[1] ^ b[0]), 1)]
    if isinstance(g, ControlledPhase):
        return (g.control, g.target), lambda b: [(b, np.exp(1j * g.angle) if b == (1, 1) else 1)]
    if isinstance(g, Toffoli):
        return (g.control1, g.control2, g.target), lambda b: [((b[0], b[1], b[2] ^ (b[0] & b[1])), 1)]
    if isinstance(g, Fredkin):
        return (g.control, g.swap1, g.swap2), lambda b: [((b[0], b[2], b[1]) if b[0] else b, 1)]
    raise TypeError(g)


def gate_unitary(g, n):
    qubits, act = _local(g)
    dim = 2**n
    u = np.zeros((dim, dim), dtype=complex)
    for bits in itertools.product((0, 1), repeat=n):
        col = int("".join(map(str, bits)), 2)
        for out_local, amp in act(tuple(bits[q] for q in qubits)):
            out = list(bits)
            for q, v in zip(qubits, out_local):
                out[q] = v
            u[int("".join(map(str, out)), 2), col] += amp
    return u


def circuit_unitary_oracle(c):
    u = np.eye(2**c.n, dtype=complex)
    for g in c.gates:
        u = gate_unitary(g, c.n) @ u
    return u


def embed2(m2, i, j, dim):
    out = np.eye(dim, dtype=complex)
    out[np.ix_([i, j], [i, j])] = m2
    return out


def bs2(theta):
    return np.array([[np.cos(theta), 1j * np.sin(theta)], [1j * np.sin(theta), np.cos(theta)]])
