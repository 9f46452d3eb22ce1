"""Single-photon linear optics in the mode description.

The photon lives in ``P`` spatial paths, each carrying a horizontal (H) and a
vertical (V) polarization component, so the mode space has dimension
``D = 2P`` and mode ``2*path + pol`` with ``pol`` 0 for H and 1 for V.

Every element acts on a handful of modes through a small local unitary;
``element_matrix`` embeds it into the full ``D x D`` space when a dense
operator is wanted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

import numpy as np

from .circuit import Matrix2, as_matrix2

H_POL, V_POL = 0, 1
POL_NAMES = ("H", "V")
TRAJECTORY_CAP = 2**20

_FLIP = ((0j, 1 + 0j), (1 + 0j, 0j))


class OpticsError(ValueError):
    pass


class TrajectoryOverflow(RuntimeError):
    """Raised when path enumeration exceeds its configured cap."""


def mode_index(path: int, pol: int) -> int:
    return 2 * path + pol


def mode_label(mode: int) -> tuple[int, int]:
    return divmod(mode, 2)


def _bs2(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, 1j * s], [1j * s, c]], dtype=complex)


@dataclass(frozen=True)
class BeamSplitter:
    """Lossless splitter; reflection picks up a factor ``i``. theta=pi/4 is 50/50."""

    a: int
    b: int
    theta: float = np.pi / 4

    @property
    def paths(self) -> tuple[int, ...]:
        return (self.a, self.b)

    def modes(self) -> tuple[int, ...]:
        return (2 * self.a, 2 * self.a + 1, 2 * self.b, 2 * self.b + 1)

    def local_matrix(self) -> np.ndarray:
        # modes ordered (aH, aV, bH, bV): spatial 2x2 tensored with identity on polarization
        return np.kron(_bs2(self.theta), np.eye(2))


@dataclass(frozen=True)
class PhaseShifter:
    path: int
    phi: float

    @property
    def paths(self) -> tuple[int, ...]:
        return (self.path,)

    def modes(self) -> tuple[int, ...]:
        return (2 * self.path, 2 * self.path + 1)

    def local_matrix(self) -> np.ndarray:
        return np.exp(1j * self.phi) * np.eye(2, dtype=complex)


@dataclass(frozen=True)
class PolRotator:
    """Physical polarization rotation ``[[cos, -sin], [sin, cos]]``."""

    path: int
    theta: float

    @property
    def paths(self) -> tuple[int, ...]:
        return (self.path,)

    def modes(self) -> tuple[int, ...]:
        return (2 * self.path, 2 * self.path + 1)

    def local_matrix(self) -> np.ndarray:
        c, s = np.cos(self.theta), np.sin(self.theta)
        return np.array([[c, -s], [s, c]], dtype=complex)


@dataclass(frozen=True)
class Waveplate:
    """Arbitrary polarization unitary on one path."""

    path: int
    u: Matrix2

    def __post_init__(self):
        object.__setattr__(self, "u", as_matrix2(self.u))

    @classmethod
    def flip(cls, path: int) -> "Waveplate":
        return cls(path, _FLIP)

    @property
    def is_flip(self) -> bool:
        return self.u == _FLIP

    @property
    def paths(self) -> tuple[int, ...]:
        return (self.path,)

    def modes(self) -> tuple[int, ...]:
        return (2 * self.path, 2 * self.path + 1)

    def local_matrix(self) -> np.ndarray:
        return np.array(self.u, dtype=complex)


@dataclass(frozen=True)
class PolarizingBS:
    """Transmits H unchanged; exchanges the V components of paths a and b."""

    a: int
    b: int

    @property
    def paths(self) -> tuple[int, ...]:
        return (self.a, self.b)

    def modes(self) -> tuple[int, ...]:
        return (2 * self.a, 2 * self.a + 1, 2 * self.b, 2 * self.b + 1)

    def local_matrix(self) -> np.ndarray:
        return np.eye(4, dtype=complex)[[0, 3, 2, 1]]


@dataclass(frozen=True)
class Crossing:
    """Exchanges paths a and b entirely."""

    a: int
    b: int

    @property
    def paths(self) -> tuple[int, ...]:
        return (self.a, self.b)

    def modes(self) -> tuple[int, ...]:
        return (2 * self.a, 2 * self.a + 1, 2 * self.b, 2 * self.b + 1)

    def local_matrix(self) -> np.ndarray:
        return np.eye(4, dtype=complex)[[2, 3, 0, 1]]


OpticalElement = Union[BeamSplitter, PhaseShifter, PolRotator, Waveplate, PolarizingBS, Crossing]
ELEMENT_TYPES = (BeamSplitter, PhaseShifter, PolRotator, Waveplate, PolarizingBS, Crossing)


def check_element(e: OpticalElement, paths: int) -> None:
    if not isinstance(e, ELEMENT_TYPES):
        raise OpticsError(f"unknown optical element {e!r}")
    ps = e.paths
    for p in ps:
        if not 0 <= p < paths:
            raise OpticsError(f"{type(e).__name__}: path {p} out of range for {paths} paths")
    if len(set(ps)) != len(ps):
        raise OpticsError(f"{type(e).__name__}: paths must be distinct, got {ps}")


@dataclass(frozen=True)
class OpticalNetwork:
    """Ordered element list over ``paths`` spatial paths.

    ``inputs`` optionally declares the (path, pol) modes where light may enter;
    it is informational except for passes that rely on it.
    """

    paths: int
    elements: tuple[OpticalElement, ...] = ()
    inputs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.paths < 1:
            raise OpticsError(f"a network needs at least one path, got {self.paths}")
        object.__setattr__(self, "elements", tuple(self.elements))
        object.__setattr__(self, "inputs", tuple((int(p), int(s)) for p, s in self.inputs))
        for e in self.elements:
            check_element(e, self.paths)
        for p, s in self.inputs:
            if not 0 <= p < self.paths or s not in (0, 1):
                raise OpticsError(f"input mode ({p}, {s}) out of range for {self.paths} paths")

    @property
    def dim(self) -> int:
        return 2 * self.paths

    def input_modes(self) -> frozenset[int]:
        return frozenset(mode_index(p, s) for p, s in self.inputs)

    def __add__(self, other: "OpticalNetwork") -> "OpticalNetwork":
        if other.paths != self.paths:
            raise OpticsError("cannot concatenate networks with different path counts")
        return OpticalNetwork(self.paths, self.elements + other.elements, self.inputs)

    def __len__(self) -> int:
        return len(self.elements)


@dataclass(frozen=True, eq=False)
class ModeAmplitudes:
    paths: int
    amps: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=complex).reshape(-1)
        if amps.shape[0] != 2 * self.paths:
            raise OpticsError(f"{amps.shape[0]} amplitudes for {self.paths} paths")
        object.__setattr__(self, "amps", amps)

    @classmethod
    def single(cls, paths: int, path: int, pol: int = H_POL) -> "ModeAmplitudes":
        if not 0 <= path < paths or pol not in (0, 1):
            raise OpticsError(f"mode ({path}, {pol}) out of range for {paths} paths")
        amps = np.zeros(2 * paths, dtype=complex)
        amps[mode_index(path, pol)] = 1.0
        return cls(paths, amps)

    def __getitem__(self, key: tuple[int, int]) -> complex:
        path, pol = key
        return complex(self.amps[mode_index(path, pol)])

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))


def element_matrix(e: OpticalElement, paths: int) -> np.ndarray:
    check_element(e, paths)
    out = np.eye(2 * paths, dtype=complex)
    idx = np.array(e.modes())
    out[np.ix_(idx, idx)] = e.local_matrix()
    return out


def _apply_rows(net: OpticalNetwork, arr: np.ndarray) -> np.ndarray:
    # arr rows are modes; any trailing columns are propagated together
    arr = arr.copy()
    for e in net.elements:
        idx = list(e.modes())
        arr[idx] = e.local_matrix() @ arr[idx]
    return arr


def propagate(net: OpticalNetwork, state: ModeAmplitudes) -> ModeAmplitudes:
    if state.paths != net.paths:
        raise OpticsError(f"state has {state.paths} paths, network has {net.paths}")
    return ModeAmplitudes(net.paths, _apply_rows(net, state.amps))


def transfer_matrix(net: OpticalNetwork) -> np.ndarray:
    return _apply_rows(net, np.eye(net.dim, dtype=complex))


def detection_probabilities(state: ModeAmplitudes) -> list[tuple[int, int, float]]:
    probs = np.abs(state.amps) ** 2
    return [(m // 2, m % 2, float(p)) for m, p in enumerate(probs)]


def path_probabilities(state: ModeAmplitudes) -> np.ndarray:
    """Probability per path, summed over polarization."""
    return (np.abs(state.amps) ** 2).reshape(-1, 2).sum(axis=1)


def enumerate_trajectories(
    net: OpticalNetwork, input_mode: int, cap: int = TRAJECTORY_CAP
) -> list[tuple[tuple[int, ...], complex]]:
    """Expand propagation from one basis mode into individual photon histories.

    Each history records the mode after every element that touched it, starting
    from ``input_mode``; its amplitude is the product of the matrix entries
    taken along the way. Zero entries are never followed.
    """
    if not 0 <= input_mode < net.dim:
        raise OpticsError(f"input mode {input_mode} out of range for {net.paths} paths")
    live: list[tuple[tuple[int, ...], complex]] = [((input_mode,), 1 + 0j)]
    for e in net.elements:
        modes = e.modes()
        pos = {m: k for k, m in enumerate(modes)}
        local = e.local_matrix()
        nxt = []
        for seq, amp in live:
            j = pos.get(seq[-1])
            if j is None:
                nxt.append((seq, amp))
                continue
            for i, entry in enumerate(local[:, j]):
                if entry != 0:
                    nxt.append((seq + (modes[i],), amp * complex(entry)))
        if len(nxt) > cap:
            raise TrajectoryOverflow(f"more than {cap} trajectories")
        live = nxt
    return live


def trajectory_sums(trajectories: Iterable[tuple[tuple[int, ...], complex]], dim: int) -> np.ndarray:
    out = np.zeros(dim, dtype=complex)
    for seq, amp in trajectories:
        out[seq[-1]] += amp
    return out




def embed_local(e: OpticalElement, modes: tuple[int, ...]) -> np.ndarray:
    """Local matrix of ``e`` re-expressed on an ordered superset of its modes."""
    pos = {m: k for k, m in enumerate(modes)}
    out = np.eye(len(modes), dtype=complex)
    idx = [pos[m] for m in e.modes()]
    out[np.ix_(idx, idx)] = e.local_matrix()
    return out


def default_input(net: OpticalNetwork) -> Optional[int]:
    """The single declared input mode, if exactly one is declared."""
    modes = sorted(net.input_modes())
    return modes[0] if len(modes) == 1 else None
