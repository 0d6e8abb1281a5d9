"""Synthesis of torus dimer models from cyclic strong exceptional sequences.

Each divisor class restricts to a profile on the corner rays of the
polygon; profiles modulo the lattice of principal shifts become the
vertices of a quiver, minimal strict inclusions of the associated
monomial modules become the arrows, and the cycles whose arrow degrees
sum to one in every corner coordinate become the faces.  A bounded
census enumerates all sequences on a surface up to twist and rotation
and maps them through the synthesis.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, replace
from functools import lru_cache

from .core import DimerModel, RawDimer, is_isomorphic, validate, with_derived_offsets
from .fano import exceptional_sequence, matching_polygon
from .intlinalg import integer_solve, mat_vec, smith_normal_form
from .rationallp import minimize
from .toric import ToricWeakFanoSurface, chi, h0, is_cyclic_strong_exceptional, surface_of


class SynthesisError(ValueError):
    """A sequence that does not synthesize to a torus dimer model."""


# --- corner profiles and the shift lattice -------------------------------------


def corner_indices(X: ToricWeakFanoSurface) -> tuple[int, ...]:
    """Rays with self-intersection != -2: the corners of the polygon."""
    return tuple(i for i in range(X.k) if X.a[i] != -2)


@lru_cache(maxsize=None)
def _corner_rows(X: ToricWeakFanoSurface) -> tuple[tuple[int, int, int], ...]:
    """One row (x, y, 1) per corner ray; the shift lattice is its image."""
    return tuple((X.rays[i][0], X.rays[i][1], 1) for i in corner_indices(X))


def corner_profile(X: ToricWeakFanoSurface, d) -> tuple[int, ...]:
    """Restriction of a divisor class to the corner rays."""
    return tuple(int(d[i]) for i in corner_indices(X))


def shift_image(X: ToricWeakFanoSurface, m) -> tuple[int, ...]:
    """Profile of the principal shift by the lattice functional m."""
    return tuple(r[0] * m[0] + r[1] * m[1] + r[2] * m[2] for r in _corner_rows(X))


def shift_witness(X: ToricWeakFanoSurface, w):
    """The lattice functional whose shift image is the profile w, or None."""
    rows = [list(r) for r in _corner_rows(X)]
    m = integer_solve(rows, list(w))
    return None if m is None else tuple(m)


def _box_min(rows, profile, mu, center, radius):
    """Minimum of row mu over feasible lattice points near center, or None."""
    ranges = [
        range(math.floor(c) - radius, math.ceil(c) + radius + 1) for c in center
    ]
    best = None
    for m in itertools.product(*ranges):
        vals = [r[0] * m[0] + r[1] * m[1] + r[2] * m[2] for r in rows]
        if all(v + p >= 0 for v, p in zip(vals, profile)):
            if best is None or vals[mu] < best:
                best = vals[mu]
    return best


def saturate(X: ToricWeakFanoSurface, profile) -> tuple[int, ...]:
    """The tight profile cutting out the same monomial module.

    Coordinate mu of the result is minus the minimum of the mu-th corner
    functional over the lattice points of the module; two modules with
    tight profiles compare by inclusion iff the profiles compare
    componentwise.  The minimum is located by an exact rational program
    and then refined over lattice points in a radius-2 box around its
    optimum (radius 3 as a cross-check; disagreement is an error).
    """
    rows = _corner_rows(X)
    u = len(rows)
    prof = tuple(int(c) for c in profile)
    if len(prof) != u:
        raise SynthesisError(f"profile length {len(prof)}, surface has {u} corners")
    out = []
    for mu in range(u):
        cons = [(list(rows[nu]), ">=", -prof[nu]) for nu in range(u)]
        res = minimize(list(rows[mu]), cons)
        if res.status != "optimal":
            raise SynthesisError(
                f"saturation program is {res.status} at corner {mu};"
                " the corner rays fail to span"
            )
        best2 = _box_min(rows, prof, mu, res.x, 2)
        best3 = _box_min(rows, prof, mu, res.x, 3)
        if best3 is None or (best2 is not None and best2 != best3):
            raise SynthesisError(
                f"saturation lattice search unstable at corner {mu}:"
                f" radius 2 gives {best2}, radius 3 gives {best3}"
            )
        out.append(-best3)
    return tuple(out)


# --- synthesis ------------------------------------------------------------------


def _minimal_inclusions(X, profiles, window):
    """Arrows (source, target, shift, degree) and whether any touched the
    shift window boundary.

    An arrow from class i to class j exists for every strict inclusion of
    the module of profile i into a shift of the module of profile j that
    has no strictly intermediate module among all shifted classes.
    """
    rows = _corner_rows(X)
    k = len(profiles)
    reps = []
    for t in range(k):
        p = profiles[t]
        for m in itertools.product(range(-window, window + 1), repeat=3):
            s = shift_image(X, m)
            reps.append((tuple(a + b for a, b in zip(p, s)), t, m))
    arrows = []
    touched = False
    for i in range(k):
        base = profiles[i]
        over = [
            r for r in reps
            if r[0] != base and all(c >= b for c, b in zip(r[0], base))
        ]
        # a witness strictly between base and an element of the unit box
        # lies in the unit box itself, so box elements can be minimized
        # among themselves; elements above the box are dominated by a box
        # minimum or (rarely) must be checked against everything
        box = [
            r for r in over
            if all(c <= b + 1 for c, b in zip(r[0], base))
        ]
        minimal = [
            r for r in box
            if not any(
                o[0] != r[0] and all(c <= s for c, s in zip(o[0], r[0]))
                for o in box
            )
        ]
        for r in over:
            if all(c <= b + 1 for c, b in zip(r[0], base)):
                continue
            if any(all(c <= s for c, s in zip(m[0], r[0])) for m in minimal):
                continue
            if not any(
                o[0] != r[0] and all(c <= s for c, s in zip(o[0], r[0]))
                for o in over
            ):
                minimal.append(r)
        for rep, t, m in minimal:
            deg = tuple(c - b for c, b in zip(rep, base))
            if any(c < 0 for c in deg) or all(c == 0 for c in deg):
                raise SynthesisError(f"arrow degree {deg} is not positive")
            arrows.append((i, t, m, deg))
            if any(abs(c) == window for c in m):
                touched = True
    arrows.sort(key=lambda a: (a[0], a[1], a[3], a[2]))
    return arrows, touched


def _degree_one_cycles(num_classes, arrows, width):
    """All arrow cycles whose degrees sum to one in every coordinate,
    each reported once, rotated to start at its smallest arrow id."""
    ones = (1,) * width
    out_of = [[] for _ in range(num_classes)]
    for e, (src, tgt, _m, deg) in enumerate(arrows):
        out_of[src].append((e, tgt, deg))
    cycles = []

    def extend(first, vertex, acc, path):
        if vertex == arrows[first][0] and acc == ones:
            cycles.append(tuple(path))
            return
        for e, tgt, deg in out_of[vertex]:
            if e <= first:
                continue
            new = tuple(a + d for a, d in zip(acc, deg))
            if any(c > 1 for c in new):
                continue
            path.append(e)
            extend(first, tgt, new, path)
            path.pop()

    for first, (_src, tgt, _m, deg) in enumerate(arrows):
        extend(first, tgt, deg, [first])
    return cycles


def _two_color(cycles, num_arrows):
    """Signs for the cycles so that the two through each arrow disagree."""
    through: list[list[int]] = [[] for _ in range(num_arrows)]
    for f, cyc in enumerate(cycles):
        for e in cyc:
            through[e].append(f)
    color: dict[int, int] = {}
    for start in sorted(range(len(cycles)), key=lambda f: cycles[f]):
        if start in color:
            continue
        color[start] = 1
        queue = [start]
        while queue:
            f = queue.pop()
            for e in cycles[f]:
                for g in through[e]:
                    if g == f:
                        continue
                    if g not in color:
                        color[g] = -color[f]
                        queue.append(g)
                    elif color[g] == color[f]:
                        raise SynthesisError(
                            "sign assignment not bipartite: cycles"
                            f" {cycles[f]} and {cycles[g]} share an arrow"
                            " but already carry equal signs"
                        )
    return color


def dimer_from_sequence(
    X: ToricWeakFanoSurface,
    classes,
    *,
    name: str = "synthesized",
    window: int = 3,
    check_input: bool = True,
) -> DimerModel:
    """The torus dimer model of a cyclic strong exceptional sequence.

    Vertices are the corner-profile classes of the sequence modulo
    principal shifts, arrows the minimal strict module inclusions within
    a bounded shift window (enlarged with a warning when a result
    touches its boundary), faces the cycles of total degree one in every
    corner coordinate with signs from the unique two-coloring; the
    result is validated, given torus offsets, and must have genus 1.
    """
    seq = [tuple(int(c) for c in d) for d in classes]
    k = X.k
    if len(seq) != k:
        raise SynthesisError(f"sequence has {len(seq)} classes, surface has {k} rays")
    if any(len(d) != k for d in seq):
        raise SynthesisError("divisor class length differs from ray count")
    if check_input:
        report = is_cyclic_strong_exceptional(X, seq)
        if not report:
            raise SynthesisError(
                "input is not a cyclic strong exceptional sequence;"
                f" first violations: {report.violations[:4]}"
            )

    profiles = [saturate(X, corner_profile(X, d)) for d in seq]
    for i in range(k):
        for j in range(i + 1, k):
            diff = tuple(a - b for a, b in zip(profiles[i], profiles[j]))
            if shift_witness(X, diff) is not None:
                raise SynthesisError(
                    f"class collision: classes {i} and {j} agree up to shift"
                )

    while True:
        arrows, touched = _minimal_inclusions(X, profiles, window)
        if not touched:
            break
        if window >= 9:
            raise SynthesisError("shift window grew past 9 without stabilizing")
        window += 2
        warnings.warn(
            f"synthesis shift window enlarged to {window}",
            RuntimeWarning,
            stacklevel=2,
        )

    u = len(_corner_rows(X))
    cycles = _degree_one_cycles(k, arrows, u)
    count = [0] * len(arrows)
    for cyc in cycles:
        for e in cyc:
            count[e] += 1
    if any(c != 2 for c in count):
        bad = [(e, c) for e, c in enumerate(count) if c != 2][:4]
        raise SynthesisError(
            f"face coverage != 2: arrows (id, count) {bad} do not lie in"
            " exactly two degree-one cycles"
        )
    color = _two_color(cycles, len(arrows))

    arrow_names = tuple(f"a{e}" for e in range(len(arrows)))
    endpoints = {
        arrow_names[e]: (f"w{src}", f"w{tgt}")
        for e, (src, tgt, _m, _deg) in enumerate(arrows)
    }
    order = sorted(range(len(cycles)), key=lambda f: cycles[f])
    face_entries = tuple(
        (color[f], tuple(arrow_names[e] for e in cycles[f])) for f in order
    )
    D = validate(
        RawDimer(name=name, arrows=arrow_names, faces=face_entries, endpoints=endpoints)
    )
    if D.genus != 1:
        raise SynthesisError(f"genus != 1: the synthesized surface has genus {D.genus}")
    return with_derived_offsets(D)


def round_trip(D: DimerModel, o: int = 0) -> bool:
    """Regenerate a weak Fano dimer from its own sequence and compare."""
    X = surface_of(matching_polygon(D, o))
    seq = exceptional_sequence(D, o)
    D2 = dimer_from_sequence(X, seq, name=f"{D.name}_resynth")
    return is_isomorphic(D2, D) is not None


# --- bounded census -------------------------------------------------------------


@dataclass(frozen=True)
class CensusResult:
    """Outcome of a bounded sequence census on one surface.

    sequence_count is the number of surviving sequences before the
    twist/rotation quotient; sequences holds one representative per
    dimer, aligned with dimers.  bound_touched reports whether some
    surviving class fits the coefficient box only with no slack (its
    best representative has max |coefficient| equal to the bound), in
    which case the enumeration window may be binding.
    """

    bound: int
    bound_touched: bool
    sequence_count: int
    class_set_count: int
    sequences: tuple[tuple[tuple[int, ...], ...], ...]
    dimers: tuple[DimerModel, ...]


def census(
    X: ToricWeakFanoSurface, bound: int = 3, *, name_prefix: str = "census"
) -> CensusResult:
    """All dimer models of cyclic strong exceptional sequences on X whose
    classes admit coefficients within the bound.

    Candidates fix the first class to zero; the remaining classes range
    over everything linearly equivalent to a vector with all
    |coefficients| <= bound, labeled by the representative vanishing on
    the first two rays.  Sequences are grown one class at a time with
    every pairwise condition (including the wrap against the
    once-twisted start) checked incrementally; survivors are re-verified
    by the full checker, quotiented by overall twist and cyclic
    relabeling, mapped through the synthesis, and deduplicated up to
    isomorphism.  bound_touched reports whether some surviving class
    only fits the coefficient box with no slack, in which case a larger
    bound might reveal more sequences.
    """
    k = X.k
    v0, v1 = X.rays[0], X.rays[1]

    def normal_form(d):
        mx = d[0] * v1[1] - d[1] * v0[1]
        my = v0[0] * d[1] - v1[0] * d[0]
        return tuple(
            d[r] - mx * X.rays[r][0] - my * X.rays[r][1] for r in range(k)
        )

    ones = normal_form((1,) * k)
    if all(c == 0 for c in ones):
        raise SynthesisError("the all-ones class is principal; not a weak Fano fan")

    ok_cache: dict[tuple[int, ...], bool] = {}

    def pair_ok(delta):
        """Both one-sided vanishing conditions for a helix pair at
        difference delta: only forward sections may survive."""
        delta = normal_form(delta)
        hit = ok_cache.get(delta)
        if hit is not None:
            return hit
        neg = tuple(-c for c in delta)
        if chi(X, neg) != 0:
            return False  # cheap gate; not worth caching at pool scale
        if h0(X, neg) != 0:
            res = False
        elif h0(X, tuple(-1 - c for c in delta)) != 0:
            res = False
        elif h0(X, tuple(c - 1 for c in delta)) != 0:
            res = False
        else:
            res = h0(X, delta) == chi(X, delta)
        ok_cache[delta] = res
        return res

    zero = (0,) * k
    # the coefficient box applies to classes, not to a fixed choice of
    # representative: a class is admissible when some linearly equivalent
    # vector has all coefficients within the bound.  Shifting by the 49
    # rational classes whose first two coefficients stay in the box covers
    # every admissible class exactly (the first two rays are a basis).
    box = list(
        itertools.product(range(-bound, bound + 1), repeat=k - 2)
    )
    shifts = []
    for u0 in range(-bound, bound + 1):
        for u1 in range(-bound, bound + 1):
            m = (v1[1] * u0 - v0[1] * u1, -v1[0] * u0 + v0[0] * u1)
            shifts.append(
                tuple(m[0] * vx + m[1] * vy for (vx, vy) in X.rays)
            )

    # every later class must pair with the fixed first class both ways
    found: set[tuple[int, ...]] = set()
    for t in shifts:
        tail = t[2:]
        for c in box:
            d = (0, 0) + tuple(ci - ti for ci, ti in zip(c, tail))
            if d in found:
                continue
            if pair_ok(d) and pair_ok(tuple(o - x for o, x in zip(ones, d))):
                found.add(d)
    level_one = sorted(found)

    # compat[i] = indices that may appear anywhere after class i
    compat: list[frozenset[int]] = []
    for p in level_one:
        good = set()
        for j, d in enumerate(level_one):
            fwd = tuple(a - b for a, b in zip(d, p))
            wrap = tuple(b + o - a for b, o, a in zip(p, ones, d))
            if pair_ok(fwd) and pair_ok(wrap):
                good.add(j)
        compat.append(frozenset(good))

    survivors: list[tuple[tuple[int, ...], ...]] = []
    chosen_idx: list[int] = []

    def place(candidates):
        if len(chosen_idx) == k - 1:
            survivors.append(
                (zero,) + tuple(level_one[t] for t in chosen_idx)
            )
            return
        for j in sorted(candidates):
            chosen_idx.append(j)
            place(candidates & compat[j])
            chosen_idx.pop()

    place(frozenset(range(len(level_one))))

    norm_memo: dict[tuple[int, ...], int] = {}

    def min_box_norm(d):
        """Smallest max-|coefficient| over the representatives of d."""
        hit = norm_memo.get(d)
        if hit is None:
            hit = norm_memo[d] = min(
                max(abs(x + tr) for x, tr in zip(d, t)) for t in shifts
            )
        return hit

    def orbit_norm(s):
        """Smallest, over the cyclic rebasings of the sequence, of the
        worst per-class minimal box norm: the tightest window that still
        holds some twist/rotation image of this sequence."""
        best = None
        for j in range(k):
            worst = 0
            for t in range(k):
                if j + t < k:
                    c = tuple(x - y for x, y in zip(s[j + t], s[j]))
                else:
                    c = tuple(
                        x + o - y
                        for x, o, y in zip(s[j + t - k], ones, s[j])
                    )
                worst = max(worst, min_box_norm(normal_form(c)))
            best = worst if best is None else min(best, worst)
        return best

    # a sequence only evidences a binding window when no equivalent form
    # of it fits with slack
    bound_touched = any(orbit_norm(s) >= bound for s in survivors)

    for s in survivors:
        if not is_cyclic_strong_exceptional(X, list(s)):
            raise SynthesisError(
                "incremental pruning admitted a sequence the full checker"
                f" rejects: {s}"
            )

    i0 = next(i for i in range(k) if ones[i] != 0)
    w0 = abs(ones[i0])

    def class_key(d):
        t = (d[i0] % w0 - d[i0]) // ones[i0]
        return tuple(c + t * o for c, o in zip(d, ones))

    chosen: dict[frozenset, tuple] = {}
    for s in survivors:
        key = frozenset(class_key(d) for d in s)
        if key not in chosen:
            chosen[key] = s

    # the synthesis only sees corner profiles modulo shifts, so survivors
    # with the same profile classes build the same dimer: group them by
    # an exact Smith-form residue key and synthesize once per group
    rows = [list(r) for r in _corner_rows(X)]
    u = len(rows)
    S, P, _Q = smith_normal_form(rows)
    if any(S[i][i] == 0 for i in range(3)):
        raise SynthesisError("corner rays do not span the shift lattice")

    def profile_key(d):
        y = mat_vec(P, list(corner_profile(X, d)))
        return tuple(
            y[i] % abs(S[i][i]) if i < 3 else y[i] for i in range(u)
        )

    groups: dict[frozenset, tuple] = {}
    for s in chosen.values():
        key = frozenset(profile_key(d) for d in s)
        if key not in groups:
            groups[key] = s

    dimers: list[DimerModel] = []
    seqs: list[tuple] = []
    for s in groups.values():
        D = dimer_from_sequence(X, list(s), name="candidate", check_input=False)
        if any(is_isomorphic(D, E) is not None for E in dimers):
            continue
        dimers.append(D)
        seqs.append(s)
    dimers = [
        replace(D, name=f"{name_prefix}_{i + 1}") for i, D in enumerate(dimers)
    ]

    return CensusResult(
        bound=bound,
        bound_touched=bound_touched,
        sequence_count=len(survivors),
        class_set_count=len(chosen),
        sequences=tuple(seqs),
        dimers=tuple(dimers),
    )
