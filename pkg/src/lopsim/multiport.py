"""Triangular beam-splitter meshes for arbitrary unitaries.

A mesh realizes ``U = D @ T_K @ ... @ T_1`` where each stage ``T_k`` acts on
two adjacent modes ``(i, i+1)`` as a phase shift ``phi`` on mode ``i``
followed by a beam splitter of mixing angle ``theta``, and ``D`` is a
diagonal of output phases. Stages are found by nulling the strictly lower
triangle of ``U`` row by row, bottom row first, with column operations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import Circuit
from .lowering import LoweringError
from .optics import BeamSplitter, OpticalElement, OpticalNetwork, PhaseShifter
from .statevector import circuit_unitary

INPUT_UNITARY_TOL = 1e-8
DEGENERATE_TOL = 1e-14


class MeshError(ValueError):
    pass


@dataclass(frozen=True)
class Stage:
    i: int
    j: int
    theta: float
    phi: float

    def matrix(self) -> np.ndarray:
        c, s = np.cos(self.theta), np.sin(self.theta)
        return np.array([[c, 1j * s], [1j * s, c]]) @ np.diag([np.exp(1j * self.phi), 1])


@dataclass(frozen=True)
class PlanarMesh:
    n_modes: int
    stages: tuple[Stage, ...]
    output_phases: tuple[float, ...]

    @property
    def active_stages(self) -> int:
        return sum(1 for st in self.stages if st.theta != 0.0)


def _wrap(phi: float) -> float:
    # into (-pi, pi]
    w = float(np.angle(np.exp(1j * phi)))
    return np.pi if w == -np.pi else w


def reck_decompose(u) -> PlanarMesh:
    u = np.array(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise MeshError(f"expected a square matrix, got shape {u.shape}")
    n = u.shape[0]
    if n == 0:
        raise MeshError("cannot decompose a 0x0 matrix")
    err = float(np.max(np.abs(u.conj().T @ u - np.eye(n))))
    if err > INPUT_UNITARY_TOL:
        raise MeshError(f"matrix is not unitary (max deviation {err:.3g})")

    stages = []
    w = u.copy()
    for r in range(n - 1, 0, -1):
        for k in range(r):
            x, y = w[r, k], w[r, k + 1]
            if abs(x) < DEGENERATE_TOL:
                theta, phi = 0.0, 0.0
            elif abs(y) < DEGENERATE_TOL:
                theta, phi = np.pi / 2, 0.0
            else:
                theta = float(np.arctan2(abs(x), abs(y)))
                phi = _wrap(np.angle(x) - np.angle(y) - np.pi / 2)
            st = Stage(k, k + 1, theta, phi)
            # w <- w @ T^{-1}; moves w[r, k] into column k+1
            w[:, k : k + 2] = w[:, k : k + 2] @ st.matrix().conj().T
            stages.append(st)
    phases = tuple(float(np.angle(d)) for d in np.diagonal(w))
    return PlanarMesh(n, tuple(stages), phases)


def reconstruct(mesh: PlanarMesh) -> np.ndarray:
    out = np.eye(mesh.n_modes, dtype=complex)
    for st in mesh.stages:
        out[[st.i, st.j]] = st.matrix() @ out[[st.i, st.j]]
    return np.exp(1j * np.asarray(mesh.output_phases))[:, None] * out


def mesh_to_network(mesh: PlanarMesh) -> OpticalNetwork:
    elements: list[OpticalElement] = []
    for st in mesh.stages:
        elements.append(PhaseShifter(st.i, st.phi))
        elements.append(BeamSplitter(st.i, st.j, st.theta))
    elements.extend(PhaseShifter(k, phi) for k, phi in enumerate(mesh.output_phases))
    return OpticalNetwork(mesh.n_modes, tuple(elements))


def prepare_input_pair(psi, pair: tuple[int, int]) -> list[OpticalElement]:
    """Elements turning a photon in ``pair[0]`` into ``psi`` over the pair.

    The form mirrors the lowered Hadamard: a -pi/2 shifter on the second arm,
    a tunable splitter, then a tunable shifter on the second arm. The result
    holds up to a global phase.
    """
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if psi.shape != (2,):
        raise MeshError("psi must have two components")
    if abs(np.linalg.norm(psi) - 1) > 1e-10:
        raise MeshError(f"psi must be normalized, norm is {np.linalg.norm(psi):.12g}")
    a, b = pair
    if a == b:
        raise MeshError("pair paths must differ")
    if abs(psi[1]) < 1e-15:
        return []
    theta = float(np.arctan2(abs(psi[1]), abs(psi[0])))
    ref = np.angle(psi[0]) if abs(psi[0]) > 1e-15 else 0.0
    phi = _wrap(np.angle(psi[1]) - ref - np.pi / 2)
    return [PhaseShifter(b, -np.pi / 2), BeamSplitter(a, b, theta), PhaseShifter(b, phi)]


def compile_via_multiport(c: Circuit) -> OpticalNetwork:
    if c.polarization_qubit is not None:
        raise LoweringError("the multiport backend handles location-only circuits")
    return mesh_to_network(reck_decompose(circuit_unitary(c)))
