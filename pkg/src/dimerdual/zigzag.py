"""Zigzag paths, their closed cycles and homology, and the consistency
decision.

A zigzag path alternates between stepping to the successor inside the
current arrow's positive face (a zig) and inside its negative face (a
zag).  On the set of states (arrow, parity) this is a permutation, so each
state lies on one closed orbit: a zigzag cycle.  Every arrow occurs in
exactly one cycle with zig parity and in exactly one with zag parity.

Consistency of a torus dimer is decided exactly: a grading R (one rational
per arrow) with every face boundary summing to 2 and every vertex
satisfying sum of (1 - R_a) over its incident arrow ends equal to 2 exists
with all values strictly inside (0,2) if and only if the dimer is
consistent.  The strictness margin is maximized by an exact-rational LP;
the verdict is the sign of the optimum.  A direct universal-cover probe
(do the zig and zag rays of an arrow meet again?) cross-checks the LP as a
bounded falsifier.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import NEGATIVE, POSITIVE, DimerModel, DimerError, derive_offsets
from .rationallp import maximize

ZIG = 1
ZAG = -1


def zig_successor(D: DimerModel, a: int) -> int:
    return D.next_in_face(D.pos_face_of[a], a)


def zag_successor(D: DimerModel, a: int) -> int:
    return D.next_in_face(D.neg_face_of[a], a)


@dataclass(frozen=True)
class ZigzagCycle:
    arrows: tuple[int, ...]
    parities: tuple[int, ...]  # ZIG or ZAG per position
    homology: tuple[int, int] | None

    def __len__(self):
        return len(self.arrows)

    @property
    def arrow_set(self) -> frozenset[int]:
        return frozenset(self.arrows)


def _canonical_rotation(arrows, parities):
    """Rotate so the least (arrow, parity-rank) state comes first, zig
    before zag."""
    k = len(arrows)
    best = min(range(k), key=lambda i: (arrows[i], 0 if parities[i] == ZIG else 1))
    return (
        tuple(arrows[best:] + arrows[:best]),
        tuple(parities[best:] + parities[:best]),
    )


def zigzag_cycles(D: DimerModel) -> list[ZigzagCycle]:
    """All zigzag cycles, canonically rotated and sorted by least arrow id.

    Homology classes are attached when the dimer carries offsets."""
    succ = {}
    for a in range(D.num_arrows):
        succ[(a, ZIG)] = (zig_successor(D, a), ZAG)
        succ[(a, ZAG)] = (zag_successor(D, a), ZIG)
    seen = set()
    cycles = []
    for start in sorted(succ):
        if start in seen:
            continue
        arrows = []
        parities = []
        state = start
        while state not in seen:
            seen.add(state)
            arrows.append(state[0])
            parities.append(state[1])
            state = succ[state]
        if state != start:
            raise DimerError(["zigzag successor structure is not a permutation"])
        arrows_t, parities_t = _canonical_rotation(tuple(arrows), tuple(parities))
        hom = None
        if D.offsets is not None:
            hom = (
                sum(D.offsets[a][0] for a in arrows_t),
                sum(D.offsets[a][1] for a in arrows_t),
            )
        cycles.append(ZigzagCycle(arrows_t, parities_t, hom))
    cycles.sort(key=lambda z: (min(z.arrows), z.arrows, z.parities))
    return cycles


def common_arrow_count(z1: ZigzagCycle, z2: ZigzagCycle) -> int:
    return len(z1.arrow_set & z2.arrow_set)


# ---------------------------------------------------------------------------
# Consistency via exact LP


@dataclass(frozen=True)
class ConsistencyVerdict:
    status: str  # "consistent" | "inconsistent" | "undecided"
    margin: Fraction | None  # optimal distance of the grading from {0, 2}
    r_charge: tuple[Fraction, ...] | None  # witness when consistent
    certificate: tuple[Fraction, ...] | None  # dual/Farkas when inconsistent

    def __bool__(self):
        return self.status == "consistent"


def grading_constraints(D: DimerModel, margin_var: bool = True):
    """Face and vertex equalities for the grading, plus interval rows
    R_a >= t and R_a <= 2 - t when a margin variable is requested.
    Variables are R_0..R_{E-1} (and t last when margin_var)."""
    n = D.num_arrows + (1 if margin_var else 0)
    cons = []
    for face in D.faces:
        row = [0] * n
        for a in face.boundary:
            row[a] += 1
        cons.append((row, "==", 2))
    incid: list[list[int]] = [[] for _ in range(D.num_vertices)]
    for a in range(D.num_arrows):
        incid[D.head[a]].append(a)
        incid[D.tail[a]].append(a)
    for v in range(D.num_vertices):
        row = [0] * n
        for a in incid[v]:
            row[a] += 1
        cons.append((row, "==", len(incid[v]) - 2))
    if margin_var:
        t = D.num_arrows
        for a in range(D.num_arrows):
            lo = [0] * n
            lo[a], lo[t] = 1, -1
            cons.append((lo, ">=", 0))
            hi = [0] * n
            hi[a], hi[t] = 1, 1
            cons.append((hi, "<=", 2))
    return cons


def is_consistent(D: DimerModel) -> ConsistencyVerdict:
    """Exact verdict for torus dimers; "undecided" otherwise.

    Maximizes the margin t subject to the grading equalities and
    t <= R_a <= 2 - t; the dimer is consistent exactly when the optimal
    margin is positive.  The witness is the optimal grading, or the LP
    certificate (dual values at optimum, or a Farkas vector) when not."""
    if D.genus != 1:
        return ConsistencyVerdict("undecided", None, None, None)
    n = D.num_arrows + 1
    objective = [0] * n
    objective[D.num_arrows] = 1
    cons = grading_constraints(D, margin_var=True)
    res = maximize(objective, cons)
    if res.status == "infeasible":
        return ConsistencyVerdict("inconsistent", None, None, res.farkas)
    if res.status != "optimal":
        raise DimerError(["grading LP cannot be unbounded"])
    t = res.objective
    if t > 0:
        return ConsistencyVerdict(
            "consistent", t, tuple(res.x[: D.num_arrows]), None
        )
    return ConsistencyVerdict("inconsistent", t, None, res.dual)


# ---------------------------------------------------------------------------
# Universal-cover probe


@dataclass(frozen=True)
class ProbeViolation:
    arrow: int
    zag_index: int  # i with (Z^-)_i equal, as a lifted arrow, to (Z^+)_j
    zig_index: int


def _ray(D, offsets, a, first_parity, depth):
    """Lifted ray [(arrow, translation)] from the base lift of a, indices
    0..depth.  The translation accumulates the offsets of traversed
    arrows."""
    out = [(a, (0, 0))]
    arrow = a
    tx, ty = 0, 0
    parity = first_parity
    for _ in range(depth):
        ox, oy = offsets[arrow]
        tx, ty = tx + ox, ty + oy
        arrow = zig_successor(D, arrow) if parity == ZIG else zag_successor(D, arrow)
        parity = -parity
        out.append((arrow, (tx, ty)))
    return out


def zigzag_probe(D: DimerModel, depth: int | None = None) -> list[ProbeViolation]:
    """Bounded falsifier: for each arrow, unroll the zig and the zag ray in
    the universal cover and report every coincidence of lifted arrows other
    than the shared base point.  An empty list never certifies consistency
    by itself; the LP does."""
    if D.offsets is not None:
        offsets = D.offsets
    else:
        if D.genus != 1:
            raise DimerError(["unsupported genus: probe needs torus offsets"])
        offsets = derive_offsets(D)
    cycle_len_zig = {}
    cycle_len_zag = {}
    for z in zigzag_cycles(D):
        for arrow, parity in zip(z.arrows, z.parities):
            if parity == ZIG:
                cycle_len_zig[arrow] = len(z)
            else:
                cycle_len_zag[arrow] = len(z)
    violations = []
    for a in range(D.num_arrows):
        d = depth if depth is not None else 2 * cycle_len_zig[a] * cycle_len_zag[a]
        zig_ray = _ray(D, offsets, a, ZIG, d)
        zag_ray = _ray(D, offsets, a, ZAG, d)
        zig_index: dict[tuple, list[int]] = {}
        for j, lifted in enumerate(zig_ray):
            zig_index.setdefault(lifted, []).append(j)
        for i, lifted in enumerate(zag_ray):
            for j in zig_index.get(lifted, ()):
                if (i, j) != (0, 0):
                    violations.append(ProbeViolation(a, i, j))
    violations.sort(key=lambda v: (v.arrow, v.zag_index, v.zig_index))
    return violations
