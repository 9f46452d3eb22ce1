"""Line-oriented text formats for circuits, networks and matrices.

Circuit files::

    qubits 3
    polarization 1
    h 0
    cnot 0 1          # comment

Network files::

    paths 2
    input 0 H
    bs 0 1 0.78539816339744828

Matrix files: ``dim N`` then N rows of 2N numbers (real, imaginary interleaved).

Floats are written with 17 significant digits so that parsing a serialized
file and writing it again gives the same bytes.
"""

from __future__ import annotations

import numpy as np

from .circuit import (
    CNOT,
    Circuit,
    CircuitError,
    ControlledPhase,
    Fredkin,
    Gate,
    Hadamard,
    PauliX,
    Phase,
    SingleQubit,
    Toffoli,
    append_gate,
    new_circuit,
)
from .optics import (
    POL_NAMES,
    BeamSplitter,
    Crossing,
    OpticalNetwork,
    OpticsError,
    PhaseShifter,
    PolarizingBS,
    PolRotator,
    Waveplate,
    check_element,
)


class ParseError(ValueError):
    def __init__(self, lineno: int, token: str, message: str):
        self.lineno = lineno
        self.token = token
        super().__init__(f"line {lineno}: {message} (at {token!r})")


def fmt(x: float) -> str:
    return f"{x:.17g}"


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].split()
        if body:
            yield lineno, body


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(lineno, tok, "expected an integer") from None


def _float(tok: str, lineno: int) -> float:
    try:
        return float(tok)
    except ValueError:
        raise ParseError(lineno, tok, "expected a number") from None


def _matrix2(toks: list[str], lineno: int) -> np.ndarray:
    vals = [_float(t, lineno) for t in toks]
    return np.array([complex(vals[k], vals[k + 1]) for k in range(0, 8, 2)]).reshape(2, 2)


def _fmt_matrix2(u) -> str:
    return " ".join(f"{fmt(z.real)} {fmt(z.imag)}" for row in u for z in row)


# keyword -> argument count
_GATE_SYNTAX = {
    "h": 1,
    "x": 1,
    "phase": 2,
    "u": 9,
    "cnot": 2,
    "cphase": 3,
    "toffoli": 3,
    "fredkin": 3,
}


def _parse_gate(word: str, args: list[str], lineno: int) -> Gate:
    if word not in _GATE_SYNTAX:
        raise ParseError(lineno, word, "unknown gate keyword")
    if len(args) != _GATE_SYNTAX[word]:
        raise ParseError(lineno, word, f"expected {_GATE_SYNTAX[word]} arguments, got {len(args)}")
    if word == "h":
        return Hadamard(_int(args[0], lineno))
    if word == "x":
        return PauliX(_int(args[0], lineno))
    if word == "phase":
        return Phase(_int(args[0], lineno), _float(args[1], lineno))
    if word == "u":
        return SingleQubit(_int(args[0], lineno), _matrix2(args[1:], lineno))
    if word == "cnot":
        return CNOT(_int(args[0], lineno), _int(args[1], lineno))
    if word == "cphase":
        return ControlledPhase(_int(args[0], lineno), _int(args[1], lineno), _float(args[2], lineno))
    ints = [_int(a, lineno) for a in args]
    return Toffoli(*ints) if word == "toffoli" else Fredkin(*ints)


def parse_circuit_file(text: str) -> Circuit:
    n = pol = None
    pol_line = None
    gates: list[tuple[int, str, Gate]] = []
    for lineno, toks in _lines(text):
        word, args = toks[0].lower(), toks[1:]
        if n is None:
            if word != "qubits" or len(args) != 1:
                raise ParseError(lineno, toks[0], "file must start with 'qubits N'")
            n = _int(args[0], lineno)
            if n < 1:
                raise ParseError(lineno, args[0], "qubit count must be at least 1")
            continue
        if word == "qubits":
            raise ParseError(lineno, toks[0], "duplicate qubits line")
        if word == "polarization":
            if pol_line is not None:
                raise ParseError(lineno, toks[0], f"duplicate polarization line (first on line {pol_line})")
            if gates:
                raise ParseError(lineno, toks[0], "polarization must precede the gates")
            if len(args) != 1:
                raise ParseError(lineno, toks[0], "expected 'polarization Q'")
            pol, pol_line = _int(args[0], lineno), lineno
            if not 0 <= pol < n:
                raise ParseError(lineno, args[0], f"polarization qubit out of range for {n} qubits")
            continue
        gates.append((lineno, toks[0], _parse_gate(word, args, lineno)))
    if n is None:
        raise ParseError(0, "", "empty circuit file")
    c = new_circuit(n, pol)
    for lineno, tok, g in gates:
        try:
            c = append_gate(c, g)
        except CircuitError as exc:
            raise ParseError(lineno, tok, str(exc)) from None
    return c


def serialize_circuit(c: Circuit) -> str:
    out = [f"qubits {c.n}"]
    if c.polarization_qubit is not None:
        out.append(f"polarization {c.polarization_qubit}")
    for g in c.gates:
        if isinstance(g, Hadamard):
            out.append(f"h {g.target}")
        elif isinstance(g, PauliX):
            out.append(f"x {g.target}")
        elif isinstance(g, Phase):
            out.append(f"phase {g.target} {fmt(g.angle)}")
        elif isinstance(g, SingleQubit):
            out.append(f"u {g.target} {_fmt_matrix2(g.u)}")
        elif isinstance(g, CNOT):
            out.append(f"cnot {g.control} {g.target}")
        elif isinstance(g, ControlledPhase):
            out.append(f"cphase {g.control} {g.target} {fmt(g.angle)}")
        elif isinstance(g, Toffoli):
            out.append(f"toffoli {g.control1} {g.control2} {g.target}")
        elif isinstance(g, Fredkin):
            out.append(f"fredkin {g.control} {g.swap1} {g.swap2}")
        else:
            raise TypeError(f"cannot serialize {g!r}")
    return "\n".join(out) + "\n"


_ELEMENT_ARITY = {"bs": 3, "ps": 2, "flip": 1, "wp": 9, "pbs": 2, "cross": 2, "rot": 2}


def _parse_element(word: str, args: list[str], lineno: int):
    if len(args) != _ELEMENT_ARITY[word]:
        raise ParseError(lineno, word, f"expected {_ELEMENT_ARITY[word]} arguments, got {len(args)}")
    if word == "bs":
        return BeamSplitter(_int(args[0], lineno), _int(args[1], lineno), _float(args[2], lineno))
    if word == "ps":
        return PhaseShifter(_int(args[0], lineno), _float(args[1], lineno))
    if word == "rot":
        return PolRotator(_int(args[0], lineno), _float(args[1], lineno))
    if word == "flip":
        return Waveplate.flip(_int(args[0], lineno))
    if word == "wp":
        return Waveplate(_int(args[0], lineno), _matrix2(args[1:], lineno))
    a, b = _int(args[0], lineno), _int(args[1], lineno)
    return PolarizingBS(a, b) if word == "pbs" else Crossing(a, b)


def parse_pol(tok: str, lineno: int = 0) -> int:
    up = tok.upper()
    if up in POL_NAMES:
        return POL_NAMES.index(up)
    if tok in ("0", "1"):
        return int(tok)
    raise ParseError(lineno, tok, "polarization must be H or V")


def parse_network_file(text: str) -> OpticalNetwork:
    paths = None
    inputs, elements = [], []
    for lineno, toks in _lines(text):
        word, args = toks[0].lower(), toks[1:]
        if paths is None:
            if word != "paths" or len(args) != 1:
                raise ParseError(lineno, toks[0], "file must start with 'paths P'")
            paths = _int(args[0], lineno)
            if paths < 1:
                raise ParseError(lineno, args[0], "path count must be at least 1")
            continue
        if word == "input":
            if len(args) != 2:
                raise ParseError(lineno, toks[0], "expected 'input PATH POL'")
            p = _int(args[0], lineno)
            if not 0 <= p < paths:
                raise ParseError(lineno, args[0], f"path out of range for {paths} paths")
            inputs.append((p, parse_pol(args[1], lineno)))
            continue
        if word not in _ELEMENT_ARITY:
            raise ParseError(lineno, toks[0], "unknown element keyword")
        e = _parse_element(word, args, lineno)
        try:
            check_element(e, paths)
        except OpticsError as exc:
            raise ParseError(lineno, toks[0], str(exc)) from None
        elements.append(e)
    if paths is None:
        raise ParseError(0, "", "empty network file")
    return OpticalNetwork(paths, tuple(elements), tuple(inputs))


def serialize_network(net: OpticalNetwork) -> str:
    out = [f"paths {net.paths}"]
    out += [f"input {p} {POL_NAMES[s]}" for p, s in net.inputs]
    for e in net.elements:
        if isinstance(e, BeamSplitter):
            out.append(f"bs {e.a} {e.b} {fmt(e.theta)}")
        elif isinstance(e, PhaseShifter):
            out.append(f"ps {e.path} {fmt(e.phi)}")
        elif isinstance(e, PolRotator):
            out.append(f"rot {e.path} {fmt(e.theta)}")
        elif isinstance(e, Waveplate):
            out.append(f"flip {e.path}" if e.is_flip else f"wp {e.path} {_fmt_matrix2(e.u)}")
        elif isinstance(e, PolarizingBS):
            out.append(f"pbs {e.a} {e.b}")
        elif isinstance(e, Crossing):
            out.append(f"cross {e.a} {e.b}")
        else:
            raise TypeError(f"cannot serialize {e!r}")
    return "\n".join(out) + "\n"


def parse_matrix_file(text: str) -> np.ndarray:
    dim = None
    rows = []
    for lineno, toks in _lines(text):
        if dim is None:
            if toks[0].lower() != "dim" or len(toks) != 2:
                raise ParseError(lineno, toks[0], "file must start with 'dim N'")
            dim = _int(toks[1], lineno)
            if dim < 1:
                raise ParseError(lineno, toks[1], "dimension must be at least 1")
            continue
        if len(toks) != 2 * dim:
            raise ParseError(lineno, toks[0], f"expected {2 * dim} numbers, got {len(toks)}")
        vals = [_float(t, lineno) for t in toks]
        rows.append([complex(vals[k], vals[k + 1]) for k in range(0, 2 * dim, 2)])
        if len(rows) > dim:
            raise ParseError(lineno, toks[0], f"more than {dim} rows")
    if dim is None:
        raise ParseError(0, "", "empty matrix file")
    if len(rows) != dim:
        raise ParseError(0, "", f"expected {dim} rows, got {len(rows)}")
    return np.array(rows, dtype=complex)


def serialize_matrix(u) -> str:
    u = np.asarray(u, dtype=complex)
    out = [f"dim {u.shape[0]}"]
    for row in u:
        out.append(" ".join(f"{fmt(z.real)} {fmt(z.imag)}" for z in row))
    return "\n".join(out) + "\n"
