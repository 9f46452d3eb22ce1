"""Command-line entry point.

Exit codes: 0 on success or equivalence, 1 when a verification fails,
2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import sys
from collections import Counter
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .diagram import render_diagram
from .fileio import (
    parse_pol,
    parse_circuit_file,
    parse_matrix_file,
    parse_network_file,
    serialize_network,
)
from .lowering import compile_circuit, encoding_for
from .multiport import mesh_to_network, reck_decompose, reconstruct
from .optics import (
    POL_NAMES,
    ModeAmplitudes,
    TrajectoryOverflow,
    default_input,
    enumerate_trajectories,
    mode_index,
    path_probabilities,
    propagate,
    trajectory_sums,
)
from .verify import DEFAULT_TOL, fringe_visibility, teleport_check, verify_lowering

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _mode(spec: Sequence[str], paths: int) -> int:
    path = int(spec[0])
    pol = parse_pol(spec[1])
    if not 0 <= path < paths:
        raise UsageError(f"input path {path} out of range for {paths} paths")
    return mode_index(path, pol)


def _support(args, enc) -> Optional[set[int]]:
    if not args.input:
        return None
    return {_mode(spec, enc.paths) for spec in args.input}


def _f(x: float) -> str:
    # round first so tiny negatives do not print as -0.000000000000
    return f"{round(x, 12) + 0.0:.12f}"


def cmd_compile(args) -> int:
    c = parse_circuit_file(_read(args.circuit))
    support = _support(args, encoding_for(c))
    comp = compile_circuit(c, prune=args.prune, optimize=args.optimize, support=support)
    _emit(serialize_network(comp.network), args.output)
    return EXIT_OK


def cmd_resources(args) -> int:
    c = parse_circuit_file(_read(args.circuit))
    support = _support(args, encoding_for(c))
    comp = compile_circuit(c, prune=args.prune, optimize=args.optimize, support=support)
    sys.stdout.write("\n".join(comp.report.lines()) + "\n")
    return EXIT_OK


def _input_mode(args, net) -> int:
    if args.input:
        return _mode(args.input, net.paths)
    declared = default_input(net)
    return 0 if declared is None else declared


def cmd_simulate(args) -> int:
    net = parse_network_file(_read(args.network))
    m = _input_mode(args, net)
    out = propagate(net, ModeAmplitudes.single(net.paths, *divmod(m, 2)))
    lines = []
    for k, z in enumerate(out.amps):
        path, pol = divmod(k, 2)
        lines.append(f"{path} {POL_NAMES[pol]} {_f(z.real)} {_f(z.imag)} {_f(abs(z) ** 2)}")
    if args.probs:
        lines += [f"port {p} {_f(q)}" for p, q in enumerate(path_probabilities(out))]
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    c = parse_circuit_file(_read(args.circuit))
    report = verify_lowering(
        c, backend=args.backend, prune=args.prune, optimize=args.optimize, tol=args.tol
    )
    sys.stdout.write(report.summary() + "\n")
    return EXIT_OK if report.equivalent else EXIT_FAIL


def cmd_teleport(args) -> int:
    states = []
    if args.state:
        psi = np.array([complex(args.state[0], args.state[1]), complex(args.state[2], args.state[3])])
        if abs(np.linalg.norm(psi) - 1) > 1e-10:
            raise UsageError("--state must be normalized")
        states.append(psi)
    else:
        states.append(np.array([1, 0], dtype=complex))
    rng = np.random.default_rng(args.seed)
    for _ in range(args.trials):
        v = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        states.append(v / np.linalg.norm(v))

    ok = True
    worst = 1.0
    for psi in states:
        r = teleport_check(psi)
        worst = min(worst, r.output_fidelity)
        good = (
            r.output_fidelity >= 1 - args.tol
            and r.dark_probability < args.tol
            and all(abs(p - 0.25) <= args.tol for p in r.outcome_marginals)
        )
        ok &= good
        amps = " ".join(f"{_f(z.real)} {_f(z.imag)}" for z in psi)
        margs = " ".join(_f(p) for p in r.outcome_marginals)
        sys.stdout.write(
            f"state {amps} fidelity {_f(r.output_fidelity)} "
            f"dark {r.dark_probability:.3e} marginals {margs} {'ok' if good else 'FAIL'}\n"
        )
    sys.stdout.write(f"teleported {len(states)} states, worst fidelity {_f(worst)}\n")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_reck(args) -> int:
    u = parse_matrix_file(_read(args.matrix))
    mesh = reck_decompose(u)
    if args.report:
        err = float(np.max(np.abs(reconstruct(mesh) - u)))
        n = mesh.n_modes
        sys.stdout.write(
            f"modes: {n}\nstages: {len(mesh.stages)}\nactive-stages: {mesh.active_stages}\n"
            f"stage-bound: {n * (n - 1) // 2}\nreconstruction-error: {err:.3e}\n"
        )
        return EXIT_OK
    _emit(serialize_network(mesh_to_network(mesh)), args.output)
    return EXIT_OK


def cmd_diagram(args) -> int:
    sys.stdout.write(render_diagram(parse_network_file(_read(args.network))))
    return EXIT_OK


def cmd_trajectories(args) -> int:
    net = parse_network_file(_read(args.network))
    m = _input_mode(args, net)
    trajs = enumerate_trajectories(net, m, cap=args.cap)
    sums = trajectory_sums(trajs, net.dim)
    expected = propagate(net, ModeAmplitudes.single(net.paths, *divmod(m, 2))).amps
    counts = Counter(seq[-1] for seq, _ in trajs)
    for k in range(net.dim):
        path, pol = divmod(k, 2)
        z = sums[k]
        sys.stdout.write(f"{path} {POL_NAMES[pol]} {counts.get(k, 0)} {_f(z.real)} {_f(z.imag)}\n")
    gap = float(np.max(np.abs(sums - expected)))
    sys.stdout.write(f"trajectories {len(trajs)} max-deviation {gap:.3e}\n")
    return EXIT_OK if gap < 1e-12 else EXIT_FAIL


def cmd_fringe(args) -> int:
    net_a = parse_network_file(_read(args.before))
    net_b = parse_network_file(_read(args.after))
    if net_a.paths != net_b.paths:
        raise UsageError("both networks must have the same path count")
    m = _input_mode(args, net_a)
    det = _mode(args.detector, net_a.paths)
    v = fringe_visibility(
        net_a,
        args.scan,
        net_b,
        ModeAmplitudes.single(net_a.paths, *divmod(m, 2)),
        divmod(det, 2),
        samples=args.samples,
    )
    sys.stdout.write(f"visibility {_f(v)}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="lopsim", description="Translate quantum circuits into single-photon optical networks."
    )
    sub = p.add_subparsers(dest="command", required=True)

    def passes(sp):
        sp.add_argument("--prune", action="store_true", help="drop elements unreachable from the input support")
        sp.add_argument("--optimize", action="store_true", help="cancel adjacent inverse pairs")
        sp.add_argument(
            "--input", nargs=2, action="append", metavar=("PATH", "POL"),
            help="input mode for pruning (repeatable; default: the all-zeros mode)",
        )

    sp = sub.add_parser("compile", help="lower a circuit file to a network file")
    sp.add_argument("circuit")
    passes(sp)
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_compile)

    sp = sub.add_parser("resources", help="element counts of the compiled network")
    sp.add_argument("circuit")
    passes(sp)
    sp.set_defaults(func=cmd_resources)

    sp = sub.add_parser("simulate", help="propagate a photon through a network file")
    sp.add_argument("network")
    sp.add_argument("--input", nargs=2, metavar=("PATH", "POL"))
    sp.add_argument("--probs", action="store_true", help="also print per-path probabilities")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("verify", help="check a compiled circuit against the state-vector oracle")
    sp.add_argument("circuit")
    sp.add_argument("--backend", choices=["gates", "multiport"], default="gates")
    sp.add_argument("--tol", type=float, default=DEFAULT_TOL)
    sp.add_argument("--prune", action="store_true")
    sp.add_argument("--optimize", action="store_true")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("teleport", help="run the optical teleportation check")
    sp.add_argument("--state", nargs=4, type=float, metavar=("RE0", "IM0", "RE1", "IM1"))
    sp.add_argument("--trials", type=int, default=0, help="additional random input states")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--tol", type=float, default=DEFAULT_TOL)
    sp.set_defaults(func=cmd_teleport)

    sp = sub.add_parser("reck", help="triangular mesh for a unitary matrix file")
    sp.add_argument("matrix")
    sp.add_argument("-o", "--output")
    sp.add_argument("--report", action="store_true", help="print stage counts and reconstruction error")
    sp.set_defaults(func=cmd_reck)

    sp = sub.add_parser("diagram", help="ASCII layout of a network file")
    sp.add_argument("network")
    sp.set_defaults(func=cmd_diagram)

    sp = sub.add_parser("trajectories", help="count photon histories into each output mode")
    sp.add_argument("network")
    sp.add_argument("--input", nargs=2, metavar=("PATH", "POL"))
    sp.add_argument("--cap", type=int, default=2**20)
    sp.set_defaults(func=cmd_trajectories)

    sp = sub.add_parser("fringe", help="fringe visibility while scanning a phase between two networks")
    sp.add_argument("before")
    sp.add_argument("after")
    sp.add_argument("--scan", type=int, required=True, metavar="PATH")
    sp.add_argument("--detector", nargs=2, required=True, metavar=("PATH", "POL"))
    sp.add_argument("--input", nargs=2, metavar=("PATH", "POL"))
    sp.add_argument("--samples", type=int, default=64)
    sp.set_defaults(func=cmd_fringe)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    # every library error derives from ValueError
    except (UsageError, ValueError, TrajectoryOverflow) as exc:
        print(f"lopsim: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def run() -> None:
    sys.exit(main())
