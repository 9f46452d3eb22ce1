"""Equivalence checks between circuits and their optical realizations."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .circuit import Circuit, teleportation_circuit
from .multiport import compile_via_multiport, prepare_input_pair
from .optics import (
    ModeAmplitudes,
    OpticalNetwork,
    OpticsError,
    PhaseShifter,
    mode_index,
    propagate,
    transfer_matrix,
)
from .lowering import (
    Compilation,
    EncodingMap,
    cancel_adjacent_inverses,
    compile_circuit,
    default_support,
    encoding_for,
    prune_unreachable,
)
from .statevector import circuit_unitary

DEFAULT_TOL = 1e-10
VISIBILITY_SAMPLES = 64


@dataclass(frozen=True)
class EquivalenceReport:
    equivalent: bool
    global_phase: complex
    max_entry_error: float
    tolerance: float

    def summary(self) -> str:
        verdict = "equivalent" if self.equivalent else "NOT equivalent"
        return (
            f"{verdict}, max error {self.max_entry_error:.3e} "
            f"({'<' if self.equivalent else '>='} {self.tolerance:.0e}), "
            f"global phase {np.angle(self.global_phase):+.12f} rad"
        )


def equivalent_up_to_global_phase(a, b, tol: float = DEFAULT_TOL) -> EquivalenceReport:
    """Compare ``a`` with ``phase * b`` for the best unit ``phase``.

    The phase is read off the largest-magnitude entry of ``b`` (first in
    row-major order on ties).
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    phase = 1 + 0j
    if b.size:
        k = int(np.argmax(np.abs(b)))
        ref_a, ref_b = a.flat[k], b.flat[k]
        ratio = ref_a / ref_b if ref_b != 0 else 1 + 0j
        if ratio != 0:
            phase = ratio / abs(ratio)
    err = float(np.max(np.abs(a - phase * b), initial=0.0))
    return EquivalenceReport(err < tol, complex(phase), err, tol)


def optical_operator(net: OpticalNetwork, enc: EncodingMap) -> np.ndarray:
    """Transfer matrix pulled back to the circuit basis through the encoding."""
    t = transfer_matrix(net)
    modes = [m for _, m in enc.basis_map()]
    return t[np.ix_(modes, modes)]


def verify_lowering(
    c: Circuit,
    backend: str = "gates",
    prune: bool = False,
    optimize: bool = False,
    tol: float = DEFAULT_TOL,
    support: Optional[Iterable[int]] = None,
) -> EquivalenceReport:
    expected = circuit_unitary(c)
    if backend == "gates":
        comp = compile_circuit(c, prune=prune, optimize=optimize, support=support)
        net, enc = comp.network, comp.encoding
    elif backend == "multiport":
        net = compile_via_multiport(c)
        enc = encoding_for(c)
        if prune:
            net = prune_unreachable(net, default_support(enc) if support is None else support)
        if optimize:
            net = cancel_adjacent_inverses(net)
    else:
        raise ValueError(f"unknown backend {backend!r}")

    got = optical_operator(net, enc)
    cols = list(range(expected.shape[1]))
    if prune:
        lit = net.input_modes()
        cols = [k for k, m in enc.basis_map() if m in lit]
    report = equivalent_up_to_global_phase(got[:, cols], expected[:, cols], tol)

    if enc.pol_qubit is None and not prune:
        # the V block must carry the same operator as the H block
        t = transfer_matrix(net)
        gap = float(np.max(np.abs(t[0::2, 0::2] - t[1::2, 1::2])))
        leak = float(np.max(np.abs(t[0::2, 1::2]), initial=0.0))
        err = max(report.max_entry_error, gap, leak)
        report = EquivalenceReport(err < tol, report.global_phase, err, tol)
    return report


TELEPORT_INPUT_PAIR = (0, 2)


def teleport_compilation() -> Compilation:
    """Teleportation circuit with both passes on, lit at stage A's two input ports."""
    c = teleportation_circuit()
    enc = encoding_for(c)
    # |0 0 0> and |1 0 0>: the two input ports of the first Hadamard
    support = {enc.mode_of(0b000), enc.mode_of(0b100)}
    return compile_circuit(c, prune=True, optimize=True, support=support)


def teleport_network() -> OpticalNetwork:
    return teleport_compilation().network


@dataclass(frozen=True)
class TeleportReport:
    input_state: tuple[complex, complex]
    output_fidelity: float
    dark_probability: float
    outcome_marginals: tuple[float, float, float, float]
    output: ModeAmplitudes


def teleport_check(psi, network: Optional[OpticalNetwork] = None) -> TeleportReport:
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if psi.shape != (2,) or abs(np.linalg.norm(psi) - 1) > 1e-10:
        raise ValueError("psi must be a normalized 2-vector")
    comp = teleport_compilation()
    net = comp.network if network is None else network
    enc = comp.encoding
    prep = prepare_input_pair(psi, TELEPORT_INPUT_PAIR)
    full = OpticalNetwork(net.paths, tuple(prep) + net.elements)
    out = propagate(full, ModeAmplitudes.single(net.paths, TELEPORT_INPUT_PAIR[0]))

    # circuit-basis amplitudes indexed [Lambda, sigma, lambda]
    amps = np.array([out.amps[enc.mode_of(k)] for k in range(8)]).reshape(2, 2, 2)
    perp = np.array([-np.conj(psi[1]), np.conj(psi[0])])
    fidelities, marginals, dark = [], [], 0.0
    for big, sigma in ((0, 0), (0, 1), (1, 0), (1, 1)):
        lam = amps[big, sigma]
        p = float(np.vdot(lam, lam).real)
        marginals.append(p)
        dark += abs(np.vdot(perp, lam)) ** 2
        if p > 1e-14:
            fidelities.append(abs(np.vdot(psi, lam)) ** 2 / p)
    return TeleportReport(
        (complex(psi[0]), complex(psi[1])),
        float(min(fidelities)),
        float(dark),
        tuple(marginals),
        out,
    )


def fringe_visibility(
    net_a: OpticalNetwork,
    scan_path: int,
    net_b: OpticalNetwork,
    state: ModeAmplitudes,
    detector: tuple[int, int],
    samples: int = VISIBILITY_SAMPLES,
) -> float:
    """Contrast of a detector's probability as a phase on ``scan_path`` sweeps [0, 2pi)."""
    if samples < 8:
        raise ValueError("need at least 8 scan samples")
    path, pol = detector
    if not 0 <= path < net_a.paths or pol not in (0, 1):
        raise OpticsError(f"detector {detector} out of range")
    m = mode_index(path, pol)
    probs = []
    for phi in 2 * np.pi * np.arange(samples) / samples:
        scan = OpticalNetwork(net_a.paths, (PhaseShifter(scan_path, float(phi)),))
        out = propagate(net_a + scan + net_b, state)
        probs.append(abs(out.amps[m]) ** 2)
    hi, lo = max(probs), min(probs)
    if hi + lo == 0:
        return 0.0
    return float((hi - lo) / (hi + lo))
