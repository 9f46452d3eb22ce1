"""Gate-by-gate translation of circuits into optical networks.

Location qubits become bits of the path index (the first location qubit in
circuit order is the most significant bit, i.e. the first splitting level);
the optional polarization qubit becomes the H/V component. Each gate is
replaced by optical elements on every path pair or path it acts on, and two
optional passes shrink the result: reachability pruning from a declared
input support and cancellation of adjacent inverse pairs.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Iterable, Optional

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
    validate_circuit,
)
from .optics import (
    BeamSplitter,
    Crossing,
    OpticalElement,
    OpticalNetwork,
    PhaseShifter,
    PolarizingBS,
    PolRotator,
    Waveplate,
    embed_local,
    mode_index,
)
from .statevector import H as HADAMARD

MAX_PATHS = 2**12
CANCEL_TOL = 1e-14


class LoweringError(ValueError):
    pass


class UnsupportedGate(LoweringError):
    pass


class CapacityError(LoweringError):
    pass


@dataclass(frozen=True)
class EncodingMap:
    n: int
    location_order: tuple[int, ...]
    pol_qubit: Optional[int]

    @property
    def paths(self) -> int:
        return 2 ** len(self.location_order)

    def weight(self, q: int) -> int:
        """Value of qubit ``q``'s bit inside the path index."""
        k = self.location_order.index(q)
        return 1 << (len(self.location_order) - 1 - k)

    def mode_of(self, basis_index: int) -> int:
        path, pol = 0, 0
        for q in range(self.n):
            bit = (basis_index >> (self.n - 1 - q)) & 1
            if q == self.pol_qubit:
                pol = bit
            else:
                path |= bit * self.weight(q)
        return mode_index(path, pol)

    def basis_map(self) -> list[tuple[int, int]]:
        return [(k, self.mode_of(k)) for k in range(2**self.n)]


def encoding_for(c: Circuit, max_paths: int = MAX_PATHS) -> EncodingMap:
    enc = EncodingMap(c.n, c.location_qubits, c.polarization_qubit)
    if enc.paths > max_paths:
        raise CapacityError(
            f"{len(enc.location_order)} location qubits need {enc.paths} paths (cap {max_paths})"
        )
    return enc


def basis_map(enc: EncodingMap) -> list[tuple[int, int]]:
    return enc.basis_map()


def u2_factor(u: np.ndarray) -> tuple[float, float, float, float]:
    """Solve ``u = diag(e^{ia}, e^{ib}) @ BS(theta) @ diag(e^{ig}, 1)``.

    Returns ``(theta, a, b, g)`` with theta in [0, pi/2]. The factorization is
    not unique; callers should only rely on the reconstruction.
    """
    u = np.asarray(u, dtype=complex)
    c, s = abs(u[0, 0]), abs(u[0, 1])
    theta = float(np.arctan2(s, c))
    eps = 1e-14
    if s < eps:
        return 0.0, float(np.angle(u[0, 0])), float(np.angle(u[1, 1])), 0.0
    a = float(np.angle(u[0, 1]) - np.pi / 2)
    if c < eps:
        return np.pi / 2, a, float(np.angle(u[1, 0]) - np.pi / 2), 0.0
    b = float(np.angle(u[1, 1]))
    g = float(np.angle(u[0, 0]) - a)
    return theta, a, b, g


def _u2_elements(m0: int, m1: int, u: np.ndarray) -> list[OpticalElement]:
    theta, a, b, g = u2_factor(u)
    out: list[OpticalElement] = []
    if g != 0.0:
        out.append(PhaseShifter(m0, g))
    out.append(BeamSplitter(m0, m1, theta))
    if a != 0.0:
        out.append(PhaseShifter(m0, a))
    if b != 0.0:
        out.append(PhaseShifter(m1, b))
    return out


def _hadamard_elements(m0: int, m1: int) -> list[OpticalElement]:
    # -pi/2 on the bit-1 arm before and after a 50/50 splitter gives exactly H
    return [
        PhaseShifter(m1, -np.pi / 2),
        BeamSplitter(m0, m1, np.pi / 4),
        PhaseShifter(m1, -np.pi / 2),
    ]


class _Lowerer:
    def __init__(self, enc: EncodingMap):
        self.enc = enc

    def _mask(self, qubits) -> int:
        mask = 0
        for q in qubits:
            mask |= self.enc.weight(q)
        return mask

    def paths_where(self, controls) -> list[int]:
        mask = self._mask(controls)
        return [p for p in range(self.enc.paths) if p & mask == mask]

    def pairs(self, target: int, controls) -> list[tuple[int, int]]:
        w = self.enc.weight(target)
        return [(p, p | w) for p in self.paths_where(controls) if not p & w]

    def single(self, target: int, kind: str, u: np.ndarray, controls=()) -> list[OpticalElement]:
        """Emit ``u`` on ``target`` conditioned on every qubit in ``controls`` being 1."""
        pol = self.enc.pol_qubit
        loc_controls = [q for q in controls if q != pol]
        pol_control = pol in controls
        if target == pol:
            if pol_control:
                raise UnsupportedGate("control and target both on the polarization qubit")
            wp = Waveplate.flip if kind == "x" else (lambda p: Waveplate(p, u))
            return [wp(p) for p in self.paths_where(loc_controls)]
        out: list[OpticalElement] = []
        for m0, m1 in self.pairs(target, loc_controls):
            if pol_control:
                if kind == "x":
                    out.append(PolarizingBS(m0, m1))
                elif kind == "phase":
                    out.append(Waveplate(m1, np.diag([1, u[1, 1]])))
                else:
                    raise UnsupportedGate(f"polarization-controlled {kind} on a location qubit")
            elif kind == "h":
                out.extend(_hadamard_elements(m0, m1))
            elif kind == "x":
                out.append(Crossing(m0, m1))
            elif kind == "phase":
                out.append(PhaseShifter(m1, float(np.angle(u[1, 1]))))
            else:
                out.extend(_u2_elements(m0, m1, u))
        return out

    def swap(self, t1: int, t2: int, controls=()) -> list[OpticalElement]:
        pol = self.enc.pol_qubit
        if pol in (t1, t2):
            # swap touching polarization: three controlled-NOTs, each with a direct lowering
            other = t2 if t1 == pol else t1
            x = np.array([[0, 1], [1, 0]], dtype=complex)
            return (
                self.single(other, "x", x, (*controls, pol))
                + self.single(pol, "x", x, (*controls, other))
                + self.single(other, "x", x, (*controls, pol))
            )
        loc_controls = [q for q in controls if q != pol]
        w1, w2 = self.enc.weight(t1), self.enc.weight(t2)
        make = PolarizingBS if pol in controls else Crossing
        return [make(p, p ^ w1 ^ w2) for p in self.paths_where(loc_controls) if p & w1 and not p & w2]

    def gate(self, g: Gate) -> list[OpticalElement]:
        x = np.array([[0, 1], [1, 0]], dtype=complex)
        if isinstance(g, Hadamard):
            return self.single(g.target, "h", HADAMARD)
        if isinstance(g, PauliX):
            return self.single(g.target, "x", x)
        if isinstance(g, Phase):
            return self.single(g.target, "phase", np.diag([1, np.exp(1j * g.angle)]))
        if isinstance(g, SingleQubit):
            return self.single(g.target, "u", g.matrix)
        if isinstance(g, CNOT):
            return self.single(g.target, "x", x, (g.control,))
        if isinstance(g, ControlledPhase):
            # symmetric in its two qubits; put the phase on the polarization side if present
            c, t = g.control, g.target
            if c == self.enc.pol_qubit:
                c, t = t, c
            return self.single(t, "phase", np.diag([1, np.exp(1j * g.angle)]), (c,))
        if isinstance(g, Toffoli):
            return self.single(g.target, "x", x, (g.control1, g.control2))
        if isinstance(g, Fredkin):
            return self.swap(g.swap1, g.swap2, (g.control,))
        raise UnsupportedGate(f"no optical lowering for {g!r}")


def lower_gate(g: Gate, enc: EncodingMap) -> list[OpticalElement]:
    return _Lowerer(enc).gate(g)


def lower_circuit(c: Circuit, max_paths: int = MAX_PATHS) -> tuple[OpticalNetwork, EncodingMap]:
    problems = validate_circuit(c)
    if problems:
        raise LoweringError("invalid circuit: " + "; ".join(problems))
    enc = encoding_for(c, max_paths)
    lw = _Lowerer(enc)
    elements: list[OpticalElement] = []
    for g in c.gates:
        elements.extend(lw.gate(g))
    return OpticalNetwork(enc.paths, tuple(elements)), enc


def prune_unreachable(net: OpticalNetwork, input_support: Iterable[int]) -> OpticalNetwork:
    """Drop elements that can only ever see zero amplitude.

    ``input_support`` lists the modes where light may enter. The result equals
    ``net`` for every input supported there and records the support as its
    declared inputs.
    """
    support = set(input_support)
    for m in support:
        if not 0 <= m < net.dim:
            raise LoweringError(f"support mode {m} out of range for {net.paths} paths")
    inputs = tuple(divmod(m, 2) for m in sorted(support))
    kept = []
    for e in net.elements:
        modes = e.modes()
        lit = [k for k, m in enumerate(modes) if m in support]
        if not lit:
            continue
        kept.append(e)
        local = e.local_matrix()
        reached = {modes[i] for i in range(len(modes)) if any(local[i, j] != 0 for j in lit)}
        support.difference_update(modes)
        support.update(reached)
    return OpticalNetwork(net.paths, tuple(kept), inputs)


def _cancels(first: OpticalElement, second: OpticalElement) -> bool:
    modes = tuple(sorted(first.modes()))
    if modes != tuple(sorted(second.modes())):
        return False
    prod = embed_local(second, modes) @ embed_local(first, modes)
    return bool(np.max(np.abs(prod - np.eye(len(modes)))) < CANCEL_TOL)


def cancel_adjacent_inverses(net: OpticalNetwork) -> OpticalNetwork:
    """Remove pairs of elements on identical modes whose product is the identity.

    The two elements need not be neighbours in the list, provided everything
    between them touches disjoint modes. Runs until no pair is left.
    """
    elements = list(net.elements)
    while True:
        alive = [True] * len(elements)
        by_mode: dict[int, list[int]] = {}
        for k, e in enumerate(elements):
            for m in e.modes():
                by_mode.setdefault(m, []).append(k)

        def next_overlap(k: int) -> Optional[int]:
            best = None
            for m in elements[k].modes():
                idx = by_mode[m]
                pos = bisect.bisect_right(idx, k)
                while pos < len(idx) and not alive[idx[pos]]:
                    pos += 1
                if pos < len(idx) and (best is None or idx[pos] < best):
                    best = idx[pos]
            return best

        removed = 0
        for k in range(len(elements)):
            if not alive[k]:
                continue
            j = next_overlap(k)
            if j is not None and _cancels(elements[k], elements[j]):
                alive[k] = alive[j] = False
                removed += 2
        if not removed:
            break
        elements = [e for e, keep in zip(elements, alive) if keep]
    return OpticalNetwork(net.paths, tuple(elements), net.inputs)


@dataclass(frozen=True)
class LoweringReport:
    beam_splitters: int = 0
    polarizing_beam_splitters: int = 0
    phase_shifters: int = 0
    polarization_flips: int = 0
    waveplates: int = 0
    rotators: int = 0
    crossings: int = 0
    paths: int = 0
    pruned: int = 0
    cancelled: int = 0

    @property
    def beam_splitter_type(self) -> int:
        return self.beam_splitters + self.polarizing_beam_splitters

    @property
    def total(self) -> int:
        return (
            self.beam_splitter_type
            + self.phase_shifters
            + self.polarization_flips
            + self.waveplates
            + self.rotators
            + self.crossings
        )

    def lines(self) -> list[str]:
        return [
            f"paths: {self.paths}",
            f"beam-splitter-type: {self.beam_splitter_type}",
            f"beam-splitters: {self.beam_splitters}",
            f"polarizing-beam-splitters: {self.polarizing_beam_splitters}",
            f"phase-shifters: {self.phase_shifters}",
            f"polarization-flips: {self.polarization_flips}",
            f"waveplates: {self.waveplates}",
            f"rotators: {self.rotators}",
            f"crossings: {self.crossings}",
            f"elements: {self.total}",
            f"pruned: {self.pruned}",
            f"cancelled: {self.cancelled}",
        ]


def resource_report(
    net: OpticalNetwork, enc: Optional[EncodingMap] = None, pruned: int = 0, cancelled: int = 0
) -> LoweringReport:
    counts = dict.fromkeys(
        ["bs", "pbs", "ps", "flip", "wp", "rot", "cross"], 0
    )
    for e in net.elements:
        if isinstance(e, BeamSplitter):
            counts["bs"] += 1
        elif isinstance(e, PolarizingBS):
            counts["pbs"] += 1
        elif isinstance(e, PhaseShifter):
            counts["ps"] += 1
        elif isinstance(e, Waveplate):
            counts["flip" if e.is_flip else "wp"] += 1
        elif isinstance(e, PolRotator):
            counts["rot"] += 1
        elif isinstance(e, Crossing):
            counts["cross"] += 1
    return LoweringReport(
        beam_splitters=counts["bs"],
        polarizing_beam_splitters=counts["pbs"],
        phase_shifters=counts["ps"],
        polarization_flips=counts["flip"],
        waveplates=counts["wp"],
        rotators=counts["rot"],
        crossings=counts["cross"],
        paths=enc.paths if enc is not None else net.paths,
        pruned=pruned,
        cancelled=cancelled,
    )


@dataclass(frozen=True)
class Compilation:
    network: OpticalNetwork
    encoding: EncodingMap
    report: LoweringReport


def default_support(enc: EncodingMap) -> frozenset[int]:
    """The single mode holding the all-zeros register."""
    return frozenset({enc.mode_of(0)})


def compile_circuit(
    c: Circuit,
    prune: bool = False,
    optimize: bool = False,
    support: Optional[Iterable[int]] = None,
    max_paths: int = MAX_PATHS,
) -> Compilation:
    """Lower ``c`` and run the optional passes.

    ``support`` is only used when ``prune`` is set; it defaults to the mode of
    the all-zeros input state.
    """
    net, enc = lower_circuit(c, max_paths)
    n_pruned = n_cancelled = 0
    if prune:
        before = len(net)
        net = prune_unreachable(net, default_support(enc) if support is None else support)
        n_pruned = before - len(net)
    if optimize:
        before = len(net)
        net = cancel_adjacent_inverses(net)
        n_cancelled = before - len(net)
    return Compilation(net, enc, resource_report(net, enc, n_pruned, n_cancelled))
