from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lopsim.circuit import CNOT, Hadamard, new_circuit
from lopsim.lowering import lower_circuit
from lopsim.optics import (
    BeamSplitter,
    Crossing,
    ModeAmplitudes,
    OpticalNetwork,
    OpticsError,
    PhaseShifter,
    PolarizingBS,
    PolRotator,
    TrajectoryOverflow,
    Waveplate,
    detection_probabilities,
    element_matrix,
    enumerate_trajectories,
    mode_index,
    path_probabilities,
    propagate,
    trajectory_sums,
    transfer_matrix,
)
from lopsim.verify import teleport_network
from oracles import bs2

S = 1 / np.sqrt(2)
H, V = 0, 1


def single(paths, path, pol=H):
    return ModeAmplitudes.single(paths, path, pol)


def test_beam_splitter_on_port_zero():
    out = propagate(OpticalNetwork(2, (BeamSplitter(0, 1),)), single(2, 0))
    assert out[0, H] == pytest.approx(S)
    assert out[1, H] == pytest.approx(1j * S)
    assert out[0, V] == out[1, V] == 0


def test_zero_phase_shifter_is_identity():
    np.testing.assert_array_equal(element_matrix(PhaseShifter(0, 0.0), 2), np.eye(4))


def test_polarizing_bs_reflects_vertical():
    out = propagate(OpticalNetwork(2, (PolarizingBS(0, 1),)), single(2, 0, V))
    assert out[1, V] == 1
    assert out.norm() == 1


def test_polarizing_bs_transmits_horizontal():
    out = propagate(OpticalNetwork(2, (PolarizingBS(0, 1),)), single(2, 0, H))
    assert out[0, H] == 1


def test_two_splitters_send_photon_out_the_other_port():
    net = OpticalNetwork(2, (BeamSplitter(0, 1), BeamSplitter(0, 1)))
    out = propagate(net, single(2, 0))
    assert out[1, H] == pytest.approx(1j)
    assert abs(out[0, H]) < 1e-15


def test_lowered_double_hadamard_returns_input():
    net, _ = lower_circuit(new_circuit(1).extend([Hadamard(0), Hadamard(0)]))
    out = propagate(net, single(2, 0))
    assert out[0, H] == pytest.approx(1, abs=1e-15)
    assert abs(out[1, H]) < 1e-15


def test_entangling_half_of_tagged_interferometer():
    # location qubit 0, polarization qubit 1: H then location-controlled flip
    net, _ = lower_circuit(new_circuit(2, polarization_qubit=1).extend([Hadamard(0), CNOT(0, 1)]))
    out = propagate(net, single(2, 0))
    expected = np.zeros(4, dtype=complex)
    expected[mode_index(0, H)] = S
    expected[mode_index(1, V)] = S
    np.testing.assert_allclose(out.amps, expected, atol=1e-15)


def test_propagate_space_mismatch():
    with pytest.raises(OpticsError):
        propagate(OpticalNetwork(3), single(2, 0))


def test_element_path_out_of_range():
    with pytest.raises(OpticsError):
        element_matrix(BeamSplitter(0, 2), 2)
    with pytest.raises(OpticsError):
        OpticalNetwork(2, (Crossing(1, 1),))


def test_transfer_matrix_empty():
    np.testing.assert_array_equal(transfer_matrix(OpticalNetwork(2)), np.eye(4))


def test_transfer_matrix_symmetric_splitter_blocks():
    t = transfer_matrix(OpticalNetwork(2, (BeamSplitter(0, 1),)))
    block = S * np.array([[1, 1j], [1j, 1]])
    np.testing.assert_allclose(t[0::2, 0::2], block, atol=1e-15)
    np.testing.assert_allclose(t[1::2, 1::2], block, atol=1e-15)
    assert np.all(t[0::2, 1::2] == 0)


def test_transfer_matrix_lowered_hadamard():
    net, _ = lower_circuit(new_circuit(1).append(Hadamard(0)))
    t = transfer_matrix(net)
    np.testing.assert_allclose(t[0::2, 0::2], S * np.array([[1, 1], [1, -1]]), atol=1e-15)


def test_detection_probabilities_basis():
    probs = detection_probabilities(single(2, 0))
    assert probs == [(0, 0, 1.0), (0, 1, 0.0), (1, 0, 0.0), (1, 1, 0.0)]


def test_mach_zehnder_with_flip_splits_evenly():
    c = new_circuit(2, polarization_qubit=1).extend([Hadamard(0), CNOT(0, 1), Hadamard(0)])
    net, _ = lower_circuit(c)
    out = propagate(net, single(2, 0))
    probs = detection_probabilities(out)
    assert sum(p for _, _, p in probs) == pytest.approx(1, abs=1e-10)
    np.testing.assert_allclose(path_probabilities(out), [0.5, 0.5], atol=1e-12)


def test_teleportation_light_outcomes():
    out = propagate(teleport_network(), single(4, 0))
    probs = sorted(p for _, _, p in detection_probabilities(out))
    np.testing.assert_allclose(probs[:4], 0, atol=1e-12)
    np.testing.assert_allclose(probs[4:], 0.25, atol=1e-12)


def test_trajectories_single_splitter():
    trajs = enumerate_trajectories(OpticalNetwork(2, (BeamSplitter(0, 1),)), mode_index(0, H))
    assert len(trajs) == 2
    amps = sorted((a for _, a in trajs), key=lambda z: z.imag)
    assert amps[0] == pytest.approx(S)
    assert amps[1] == pytest.approx(1j * S)


def test_trajectories_empty_network():
    assert enumerate_trajectories(OpticalNetwork(3), 4) == [((4,), 1 + 0j)]


def test_trajectories_pair_up_in_teleportation():
    net = teleport_network()
    trajs = enumerate_trajectories(net, mode_index(0, H))
    counts = Counter(seq[-1] for seq, _ in trajs)
    assert sorted(counts) == list(range(8))
    assert set(counts.values()) == {2}
    expected = propagate(net, single(4, 0)).amps
    np.testing.assert_allclose(trajectory_sums(trajs, 8), expected, atol=1e-12)


def test_trajectory_cap():
    net = OpticalNetwork(2, (BeamSplitter(0, 1),) * 5)
    with pytest.raises(TrajectoryOverflow):
        enumerate_trajectories(net, 0, cap=16)
    assert len(enumerate_trajectories(net, 0, cap=32)) == 32


def test_splitter_twice_is_i_times_crossing():
    twice = element_matrix(BeamSplitter(0, 1), 2) @ element_matrix(BeamSplitter(0, 1), 2)
    np.testing.assert_allclose(twice, 1j * element_matrix(Crossing(0, 1), 2), atol=1e-12)
    # with a spectator path the identity holds on the pair's modes only
    idx = np.ix_([0, 1, 4, 5], [0, 1, 4, 5])
    twice = element_matrix(BeamSplitter(2, 0), 3) @ element_matrix(BeamSplitter(2, 0), 3)
    np.testing.assert_allclose(twice[idx], 1j * element_matrix(Crossing(2, 0), 3)[idx], atol=1e-12)
    np.testing.assert_array_equal(twice[2:4, 2:4], np.eye(2))


def test_pol_rotator_is_not_exact_flip():
    rot = element_matrix(PolRotator(0, np.pi / 2), 1)
    flip = element_matrix(Waveplate.flip(0), 1)
    np.testing.assert_allclose(rot, [[0, -1], [1, 0]], atol=1e-15)
    np.testing.assert_array_equal(flip, [[0, 1], [1, 0]])


def test_general_splitter_matches_oracle():
    t = transfer_matrix(OpticalNetwork(2, (BeamSplitter(0, 1, 0.3),)))
    np.testing.assert_allclose(t[0::2, 0::2], bs2(0.3), atol=1e-15)


angles = st.floats(-10, 10, allow_nan=False)


@st.composite
def elements(draw, paths=3):
    kind = draw(st.sampled_from(["bs", "ps", "rot", "wp", "pbs", "cross"]))
    a, b = draw(st.lists(st.integers(0, paths - 1), min_size=2, max_size=2, unique=True))
    if kind == "bs":
        return BeamSplitter(a, b, draw(angles))
    if kind == "ps":
        return PhaseShifter(a, draw(angles))
    if kind == "rot":
        return PolRotator(a, draw(angles))
    if kind == "wp":
        x, y, z = draw(angles), draw(angles), draw(angles)
        u = np.diag([1, np.exp(1j * x)]) @ bs2(y) @ np.diag([np.exp(1j * z), 1])
        return Waveplate(a, u)
    return PolarizingBS(a, b) if kind == "pbs" else Crossing(a, b)


@settings(max_examples=200, deadline=None)
@given(elements())
def test_element_matrices_are_unitary(e):
    m = element_matrix(e, 3)
    assert np.max(np.abs(m.conj().T @ m - np.eye(6))) < 1e-12


def _vec(draw):
    re = draw(st.lists(st.floats(-1, 1), min_size=6, max_size=6))
    im = draw(st.lists(st.floats(-1, 1), min_size=6, max_size=6))
    return np.array(re) + 1j * np.array(im)


@settings(max_examples=100, deadline=None)
@given(st.lists(elements(), max_size=8), st.data())
def test_propagate_is_linear(els, data):
    net = OpticalNetwork(3, tuple(els))
    x, y = _vec(data.draw), _vec(data.draw)
    alpha, beta = 0.3 - 1.2j, -0.7 + 0.1j
    lhs = propagate(net, ModeAmplitudes(3, alpha * x + beta * y)).amps
    rhs = alpha * propagate(net, ModeAmplitudes(3, x)).amps + beta * propagate(net, ModeAmplitudes(3, y)).amps
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.lists(elements(), max_size=6), st.lists(elements(), max_size=6))
def test_transfer_matrix_composes(first, second):
    n1, n2 = OpticalNetwork(3, tuple(first)), OpticalNetwork(3, tuple(second))
    np.testing.assert_allclose(
        transfer_matrix(n1 + n2), transfer_matrix(n2) @ transfer_matrix(n1), atol=1e-10
    )


@settings(max_examples=100, deadline=None)
@given(st.lists(elements(), max_size=7), st.integers(0, 5))
def test_trajectories_sum_to_propagation(els, mode):
    net = OpticalNetwork(3, tuple(els))
    trajs = enumerate_trajectories(net, mode)
    start = np.zeros(6, dtype=complex)
    start[mode] = 1
    expected = propagate(net, ModeAmplitudes(3, start)).amps
    np.testing.assert_allclose(trajectory_sums(trajs, 6), expected, atol=1e-12)
