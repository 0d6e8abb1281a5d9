"""The dual dimer: same arrows, positive faces kept, negative faces reversed.

The dual's vertices are never copied from the input; they are re-derived
from the new face structure, and each one corresponds to a single zigzag
cycle of the input (arrow heads land on zig cycles, tails on zag cycles).
Offsets are re-derived whenever the dual lives on a torus.
"""

from __future__ import annotations

from .core import (
    NEGATIVE,
    POSITIVE,
    DimerError,
    DimerModel,
    RawDimer,
    validate,
    with_derived_offsets,
)
from .zigzag import ZAG, ZIG, zigzag_cycles


def _assert_vertices_are_zigzag_cycles(D: DimerModel, M: DimerModel) -> None:
    """Internal coherence: dual vertices <-> zigzag cycles of the input.

    The head of each arrow must land on the dual vertex of its zig cycle and
    the tail on that of its zag cycle, bijectively, with matching arrow
    multisets around each vertex."""
    cycles = zigzag_cycles(D)
    errs = []
    if M.num_vertices != len(cycles):
        errs.append(
            f"dual has {M.num_vertices} vertices but the input has"
            f" {len(cycles)} zigzag cycles"
        )
    cycle_of_state = {}
    for ci, z in enumerate(cycles):
        for a, p in zip(z.arrows, z.parities):
            cycle_of_state[(a, p)] = ci
    vertex_to_cycle: dict[int, int] = {}

    def bind(v, ci, what):
        if vertex_to_cycle.setdefault(v, ci) != ci:
            errs.append(f"dual vertex {v} meets two zigzag cycles (at {what})")

    for a in range(D.num_arrows):
        bind(M.head[a], cycle_of_state[(a, ZIG)], f"head of {D.arrows[a]}")
        bind(M.tail[a], cycle_of_state[(a, ZAG)], f"tail of {D.arrows[a]}")
    if not errs and sorted(vertex_to_cycle.values()) != list(range(len(cycles))):
        errs.append("dual vertices do not biject with zigzag cycles")
    if not errs:
        for v, ci in vertex_to_cycle.items():
            around = sorted(
                [a for a in range(M.num_arrows) if M.head[a] == v]
                + [a for a in range(M.num_arrows) if M.tail[a] == v]
            )
            if around != sorted(cycles[ci].arrows):
                errs.append(
                    f"arrow multiset around dual vertex {v} differs from its"
                    f" zigzag cycle"
                )
    if errs:
        raise DimerError(errs)


def mirror(D: DimerModel) -> DimerModel:
    """The dual dimer; raises DimerError when the reversed face structure is
    not a valid dimer (possible for inconsistent inputs)."""
    raw_faces = []
    for f in D.faces:
        names = tuple(D.arrows[a] for a in f.boundary)
        if f.sign == NEGATIVE:
            names = tuple(reversed(names))
        raw_faces.append((f.sign, names))
    raw = RawDimer(
        name=f"{D.name}-dual",
        arrows=D.arrows,
        faces=tuple(raw_faces),
    )
    M = validate(raw)
    _assert_vertices_are_zigzag_cycles(D, M)
    if M.genus == 1:
        M = with_derived_offsets(M)
    return M


def mirror_genus_check(D: DimerModel) -> bool:
    """Does the dual's genus equal (2 - Z + V)/2, with Z the number of zigzag
    cycles and V the number of vertices of the input?

    The relation characterizes the torus case: in general the dual's genus
    is genus(D) + (V - Z)/2, so the check holds exactly when D itself has
    genus 1."""
    M = mirror(D)
    Z = len(zigzag_cycles(D))
    V = D.num_vertices
    return 2 * M.genus == 2 - Z + V
