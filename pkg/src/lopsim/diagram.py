"""Plain-text layout of an optical network: one row per path, one column per element."""

from __future__ import annotations

from .optics import (
    BeamSplitter,
    Crossing,
    OpticalElement,
    OpticalNetwork,
    PhaseShifter,
    PolarizingBS,
    PolRotator,
    Waveplate,
)

RAIL = "─"


def element_token(e: OpticalElement) -> str:
    if isinstance(e, BeamSplitter):
        return "BS"
    if isinstance(e, PhaseShifter):
        return f"PS({e.phi:.4g})"
    if isinstance(e, Waveplate):
        return "FLIP" if e.is_flip else "WP"
    if isinstance(e, PolRotator):
        return f"ROT({e.theta:.4g})"
    if isinstance(e, PolarizingBS):
        return "PBS"
    if isinstance(e, Crossing):
        return "X"
    raise TypeError(f"no diagram token for {e!r}")


def render_diagram(net: OpticalNetwork) -> str:
    label_w = len(str(net.paths - 1))
    rows = [[f"{p:>{label_w}} {RAIL * 2}"] for p in range(net.paths)]
    for e in net.elements:
        tok = element_token(e)
        touched = set(e.paths)
        for p, row in enumerate(rows):
            cell = tok if p in touched else RAIL * len(tok)
            row.append(cell + RAIL * 2)
    return "\n".join("".join(row) for row in rows) + "\n"
