"""Quantum-circuit intermediate representation.

A circuit is an immutable, ordered list of gates over ``n`` qubits. Each qubit
is tagged with the physical degree of freedom that will carry it once the
circuit is lowered to optics: the photon's path (``LOCATION``) or its
polarization (``POLARIZATION``). A single photon has one polarization, so at
most one qubit may be tagged ``POLARIZATION``.

Qubit indices are 0-based and qubit 0 is the most significant bit of a basis
index.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

UNITARY_TOL = 1e-10


class CircuitError(ValueError):
    """Raised when a circuit or gate is malformed."""


class QubitRole(enum.Enum):
    LOCATION = "location"
    POLARIZATION = "polarization"


Matrix2 = tuple[tuple[complex, complex], tuple[complex, complex]]


def as_matrix2(u) -> Matrix2:
    """Freeze a 2x2 array-like into a hashable tuple of complex entries."""
    arr = np.asarray(u, dtype=complex)
    if arr.shape != (2, 2):
        raise CircuitError(f"expected a 2x2 matrix, got shape {arr.shape}")
    return (
        (complex(arr[0, 0]), complex(arr[0, 1])),
        (complex(arr[1, 0]), complex(arr[1, 1])),
    )


def is_unitary(u: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])), initial=0.0)) <= tol


@dataclass(frozen=True)
class Hadamard:
    target: int

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.target,)


@dataclass(frozen=True)
class PauliX:
    target: int

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.target,)


@dataclass(frozen=True)
class Phase:
    """``diag(1, exp(i*angle))`` on one qubit."""

    target: int
    angle: float

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.target,)


@dataclass(frozen=True)
class SingleQubit:
    target: int
    u: Matrix2

    def __post_init__(self):
        object.__setattr__(self, "u", as_matrix2(self.u))

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.target,)

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.u, dtype=complex)


@dataclass(frozen=True)
class CNOT:
    control: int
    target: int

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.control, self.target)


@dataclass(frozen=True)
class ControlledPhase:
    control: int
    target: int
    angle: float

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.control, self.target)


@dataclass(frozen=True)
class Toffoli:
    control1: int
    control2: int
    target: int

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.control1, self.control2, self.target)


@dataclass(frozen=True)
class Fredkin:
    """Controlled swap of ``swap1`` and ``swap2``."""

    control: int
    swap1: int
    swap2: int

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.control, self.swap1, self.swap2)


Gate = Union[Hadamard, PauliX, Phase, SingleQubit, CNOT, ControlledPhase, Toffoli, Fredkin]
GATE_TYPES = (Hadamard, PauliX, Phase, SingleQubit, CNOT, ControlledPhase, Toffoli, Fredkin)


def gate_violations(g: Gate, n: int) -> list[str]:
    """Return the reasons ``g`` is invalid on an ``n``-qubit register."""
    if not isinstance(g, GATE_TYPES):
        return [f"unknown gate type {type(g).__name__}"]
    problems = []
    qs = g.qubits
    if len(set(qs)) != len(qs):
        problems.append(f"{type(g).__name__}: duplicate qubit indices {qs}")
    for q in qs:
        if not isinstance(q, (int, np.integer)) or q < 0 or q >= n:
            problems.append(f"{type(g).__name__}: qubit index {q} out of range for {n} qubits")
    if isinstance(g, SingleQubit) and not is_unitary(g.matrix):
        problems.append("SingleQubit: matrix is not unitary")
    return problems


@dataclass(frozen=True)
class Circuit:
    n: int
    roles: tuple[QubitRole, ...]
    gates: tuple[Gate, ...] = field(default=())

    @property
    def polarization_qubit(self) -> Optional[int]:
        for q, role in enumerate(self.roles):
            if role is QubitRole.POLARIZATION:
                return q
        return None

    @property
    def location_qubits(self) -> tuple[int, ...]:
        return tuple(q for q, role in enumerate(self.roles) if role is QubitRole.LOCATION)

    def append(self, g: Gate) -> "Circuit":
        return append_gate(self, g)

    def extend(self, gates) -> "Circuit":
        c = self
        for g in gates:
            c = append_gate(c, g)
        return c

    def __add__(self, other: "Circuit") -> "Circuit":
        if other.n != self.n or other.roles != self.roles:
            raise CircuitError("cannot concatenate circuits over different registers")
        return Circuit(self.n, self.roles, self.gates + other.gates)

    def __len__(self) -> int:
        return len(self.gates)


def new_circuit(n: int, polarization_qubit: Optional[int] = None) -> Circuit:
    if n < 1:
        raise CircuitError(f"a circuit needs at least one qubit, got {n}")
    if polarization_qubit is not None and not 0 <= polarization_qubit < n:
        raise CircuitError(f"polarization qubit {polarization_qubit} out of range for {n} qubits")
    roles = tuple(
        QubitRole.POLARIZATION if q == polarization_qubit else QubitRole.LOCATION for q in range(n)
    )
    return Circuit(n, roles, ())


def append_gate(c: Circuit, g: Gate) -> Circuit:
    problems = gate_violations(g, c.n)
    if problems:
        raise CircuitError("; ".join(problems))
    return Circuit(c.n, c.roles, c.gates + (g,))


def validate_circuit(c: Circuit) -> list[str]:
    """List every violation in ``c``; an empty list means the circuit is valid."""
    problems = []
    if c.n < 1:
        problems.append(f"qubit count must be at least 1, got {c.n}")
    if len(c.roles) != c.n:
        problems.append(f"{len(c.roles)} roles given for {c.n} qubits")
    n_pol = sum(role is QubitRole.POLARIZATION for role in c.roles)
    if n_pol > 1:
        problems.append(f"multiple polarization qubits ({n_pol})")
    for k, g in enumerate(c.gates):
        problems.extend(f"gate {k}: {p}" for p in gate_violations(g, c.n))
    return problems


def teleportation_circuit() -> Circuit:
    """Three-qubit teleportation with deferred measurement.

    Qubit 0 holds the state to send, qubit 1 is the polarization qubit and
    qubit 2 receives the state. Gates are stages A, B, C, C, D, E, F, G.
    """
    c = new_circuit(3, polarization_qubit=1)
    return c.extend(
        [
            Hadamard(0),
            Hadamard(2),
            CNOT(0, 1),
            CNOT(2, 1),
            Hadamard(0),
            CNOT(1, 2),
            Hadamard(2),
            CNOT(0, 2),
        ]
    )


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a complex Ginibre matrix."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_circuit(
    n: int,
    n_gates: int,
    rng: np.random.Generator,
    polarization_qubit: Optional[int] = None,
) -> Circuit:
    """Draw a circuit uniformly over the gate variants that fit in ``n`` qubits."""
    c = new_circuit(n, polarization_qubit)
    kinds = ["h", "x", "phase", "u"]
    if n >= 2:
        kinds += ["cnot", "cphase"]
    if n >= 3:
        kinds += ["toffoli", "fredkin"]
    for _ in range(n_gates):
        kind = kinds[rng.integers(len(kinds))]
        qs = [int(q) for q in rng.permutation(n)]
        angle = float(rng.uniform(-np.pi, np.pi))
        if kind == "h":
            g = Hadamard(qs[0])
        elif kind == "x":
            g = PauliX(qs[0])
        elif kind == "phase":
            g = Phase(qs[0], angle)
        elif kind == "u":
            g = SingleQubit(qs[0], random_unitary(2, rng))
        elif kind == "cnot":
            g = CNOT(qs[0], qs[1])
        elif kind == "cphase":
            g = ControlledPhase(qs[0], qs[1], angle)
        elif kind == "toffoli":
            g = Toffoli(qs[0], qs[1], qs[2])
        else:
            g = Fredkin(qs[0], qs[1], qs[2])
        c = append_gate(c, g)
    return c
