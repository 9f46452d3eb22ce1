"""Dense state-vector reference simulator.

This is the ground truth every optical network is checked against, so it
deliberately shares nothing with the optics code: gates are applied as small
dense tensors contracted into a ``(2,)*n`` amplitude array.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import (
    CNOT,
    Circuit,
    ControlledPhase,
    Fredkin,
    Gate,
    Hadamard,
    PauliX,
    Phase,
    SingleQubit,
    Toffoli,
    gate_violations,
)

MAX_QUBITS = 12
NORM_TOL = 1e-10

H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
X = np.array([[0, 1], [1, 0]], dtype=complex)


class DimensionError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class StateVector:
    n: int
    amps: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=complex).reshape(-1)
        if amps.shape[0] != 2**self.n:
            raise DimensionError(f"{amps.shape[0]} amplitudes for {self.n} qubits")
        object.__setattr__(self, "amps", amps)

    @classmethod
    def basis(cls, n: int, index: int = 0) -> "StateVector":
        amps = np.zeros(2**n, dtype=complex)
        amps[index] = 1.0
        return cls(n, amps)

    @classmethod
    def from_bits(cls, bits: str) -> "StateVector":
        return cls.basis(len(bits), int(bits, 2))

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))


def _controlled(u: np.ndarray, n_controls: int) -> np.ndarray:
    k = u.shape[0]
    dim = k * 2**n_controls
    out = np.eye(dim, dtype=complex)
    out[dim - k :, dim - k :] = u
    return out


def gate_matrix(g: Gate) -> tuple[tuple[int, ...], np.ndarray]:
    """Return the qubits a gate acts on and its dense matrix in that qubit order."""
    if isinstance(g, Hadamard):
        return (g.target,), H
    if isinstance(g, PauliX):
        return (g.target,), X
    if isinstance(g, Phase):
        return (g.target,), np.diag([1, np.exp(1j * g.angle)])
    if isinstance(g, SingleQubit):
        return (g.target,), g.matrix
    if isinstance(g, CNOT):
        return (g.control, g.target), _controlled(X, 1)
    if isinstance(g, ControlledPhase):
        return (g.control, g.target), np.diag([1, 1, 1, np.exp(1j * g.angle)])
    if isinstance(g, Toffoli):
        return (g.control1, g.control2, g.target), _controlled(X, 2)
    if isinstance(g, Fredkin):
        swap = np.eye(4, dtype=complex)[[0, 2, 1, 3]]
        return (g.control, g.swap1, g.swap2), _controlled(swap, 1)
    raise TypeError(f"unknown gate {g!r}")


def _apply(tensor: np.ndarray, n: int, g: Gate) -> np.ndarray:
    # tensor has shape (2,)*n + batch
    qubits, u = gate_matrix(g)
    k = len(qubits)
    ut = u.reshape((2,) * (2 * k))
    out = np.tensordot(ut, tensor, axes=(list(range(k, 2 * k)), list(qubits)))
    return np.moveaxis(out, list(range(k)), list(qubits))


def apply_gate(s: StateVector, g: Gate) -> StateVector:
    problems = gate_violations(g, s.n)
    if problems:
        raise DimensionError("; ".join(problems))
    out = _apply(s.amps.reshape((2,) * s.n), s.n, g)
    return StateVector(s.n, out.reshape(-1))


def run_circuit(s: StateVector, c: Circuit) -> StateVector:
    if s.n != c.n:
        raise DimensionError(f"state has {s.n} qubits, circuit has {c.n}")
    for g in c.gates:
        s = apply_gate(s, g)
    return s


def circuit_unitary(c: Circuit) -> np.ndarray:
    """Dense ``2**n x 2**n`` unitary; column k is the circuit applied to basis state k."""
    if c.n > MAX_QUBITS:
        raise DimensionError(f"{c.n} qubits exceeds the dense limit of {MAX_QUBITS}")
    dim = 2**c.n
    # all columns at once: identity carried as a trailing batch axis
    tensor = np.eye(dim, dtype=complex).reshape((2,) * c.n + (dim,))
    for g in c.gates:
        tensor = _apply(tensor, c.n, g)
    return tensor.reshape(dim, dim)
