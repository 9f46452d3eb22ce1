"""Compile small quantum circuits into single-photon linear-optical networks.

Qubits are carried by one photon: location qubits by which path it takes and
at most one qubit by its polarization. Networks are checked against a dense
state-vector oracle by exact amplitude propagation.
"""

from .circuit import (
    CNOT,
    Circuit,
    CircuitError,
    ControlledPhase,
    Fredkin,
    Hadamard,
    PauliX,
    Phase,
    QubitRole,
    SingleQubit,
    Toffoli,
    append_gate,
    new_circuit,
    random_circuit,
    random_unitary,
    teleportation_circuit,
    validate_circuit,
)
from .diagram import render_diagram
from .fileio import (
    ParseError,
    parse_circuit_file,
    parse_matrix_file,
    parse_network_file,
    serialize_circuit,
    serialize_matrix,
    serialize_network,
)
from .lowering import (
    Compilation,
    EncodingMap,
    LoweringReport,
    basis_map,
    cancel_adjacent_inverses,
    compile_circuit,
    lower_circuit,
    prune_unreachable,
    resource_report,
)
from .multiport import (
    PlanarMesh,
    compile_via_multiport,
    mesh_to_network,
    prepare_input_pair,
    reck_decompose,
    reconstruct,
)
from .optics import (
    BeamSplitter,
    Crossing,
    ModeAmplitudes,
    OpticalNetwork,
    PhaseShifter,
    PolarizingBS,
    PolRotator,
    Waveplate,
    detection_probabilities,
    element_matrix,
    enumerate_trajectories,
    propagate,
    transfer_matrix,
)
from .statevector import StateVector, apply_gate, circuit_unitary, run_circuit
from .verify import (
    EquivalenceReport,
    TeleportReport,
    equivalent_up_to_global_phase,
    fringe_visibility,
    teleport_check,
    teleport_network,
    verify_lowering,
)

__version__ = "0.1.0"
