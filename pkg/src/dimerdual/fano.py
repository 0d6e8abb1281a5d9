"""Weak Fano dimers and their exceptional sequences.

A consistent torus dimer whose matching polygon has exactly one interior
lattice point ("weak Fano") determines a toric surface together with a
cyclic strong exceptional sequence of line bundles.  This module builds
that data end to end:

* positive rational weights on the boundary stable matchings whose
  weighted boundary points vanish and whose total is 2,
* the induced grading on arrows and the cyclic order it puts on the
  quiver vertices,
* the divisor classes of the exceptional sequence, walked off along
  spanning-tree paths,
* the two integer sequences attached to the dimer: entries read from
  consecutive zigzag-cycle overlaps and entries read from consecutive
  arrow counts,
* and the verification that the mirror dimer is again weak Fano and
  swaps the two sequences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .core import DimerModel, spanning_tree, tree_path
from .matching import MatchingLattice, degree, matching_lattice, boundary_zigzags
from .mirror import mirror
from .toric import (
    PolygonError,
    ReflexivePolygon,
    a_sequence,
    polygon_from_sequence,
    reflexive_polygon,
    unimodular_equal,
)
from .zigzag import is_consistent, zigzag_cycles


class FanoError(ValueError):
    pass


def matching_polygon(D: DimerModel, o: int = 0) -> ReflexivePolygon:
    """The dimer's matching polygon as a reflexive polygon (weak Fano only)."""
    lattice = matching_lattice(D, o)
    if len(lattice.interior_points) != 1:
        raise FanoError(
            f"matching polygon has {len(lattice.interior_points)} interior"
            " lattice points, need exactly 1"
        )
    return reflexive_polygon(lattice.boundary_points)


def is_weak_fano(D: DimerModel) -> bool:
    """Consistent torus dimer whose matching polygon has 1 interior point."""
    if D.genus != 1:
        return False
    if is_consistent(D).status != "consistent":
        return False
    lattice = matching_lattice(D, 0)
    if len(lattice.interior_points) != 1:
        return False
    # one interior point forces #triangles == #boundary segments, hence
    # the zigzag cycles are in bijection with the quiver vertices
    if len(zigzag_cycles(D)) != D.num_vertices:
        raise FanoError(
            f"weak Fano dimer with {len(zigzag_cycles(D))} zigzag cycles"
            f" but {D.num_vertices} vertices"
        )
    return True


# --- weights on boundary stable matchings -------------------------------------


@dataclass(frozen=True)
class LambdaWeights:
    """Positive weights on the boundary stable matchings.

    points[i] is a boundary lattice point of the matching polygon (ccw),
    matchings[i] the stable matching sitting there, values[i] its weight.
    The weighted points sum to (0, 0) and the weights sum to 2.
    """

    points: tuple[tuple[int, int], ...]
    matchings: tuple[frozenset[int], ...]
    values: tuple[Fraction, ...]

    def __post_init__(self):
        n = len(self.points)
        if not (len(self.matchings) == len(self.values) == n):
            raise FanoError("weight table lengths disagree")
        if any(v <= 0 for v in self.values):
            raise FanoError("weights must be strictly positive")
        sx = sum(v * p[0] for v, p in zip(self.values, self.points))
        sy = sum(v * p[1] for v, p in zip(self.values, self.points))
        if (sx, sy) != (0, 0) or sum(self.values) != 2:
            raise FanoError("weights violate the moment/total constraints")


def _boundary_data(lattice: MatchingLattice):
    pts = lattice.boundary_points
    mats = tuple(lattice.matchings[lattice.stable_at(p)] for p in pts)
    return pts, mats


def lambda_weights(D: DimerModel, o: int = 0) -> LambdaWeights:
    """Deterministic max-min-weight solution of the weight constraints."""
    from .rationallp import maximize

    if not is_weak_fano(D):
        raise FanoError("weights are only defined for weak Fano dimers")
    lattice = matching_lattice(D, o)
    pts, mats = _boundary_data(lattice)
    n = len(pts)
    # variables: n weights then the min-weight bound t; maximize t
    objective = [0] * n + [1]
    cons = [
        ([p[0] for p in pts] + [0], "==", 0),
        ([p[1] for p in pts] + [0], "==", 0),
        ([1] * n + [0], "==", 2),
    ]
    for i in range(n):
        row = [0] * (n + 1)
        row[i] = 1
        row[n] = -1
        cons.append((row, ">=", 0))
    res = maximize(objective, cons)
    if res.status != "optimal" or res.objective <= 0:
        raise FanoError(
            f"weight program is {res.status} with bound {res.objective};"
            " upstream weak Fano data must be corrupt"
        )
    return LambdaWeights(pts, mats, tuple(res.x[:n]))


def arrow_grading(D: DimerModel, weights: LambdaWeights) -> tuple[Fraction, ...]:
    """Per-arrow grade: total weight of the boundary matchings containing it."""
    out = []
    for a in range(D.num_arrows):
        out.append(sum((v for v, m in zip(weights.values, weights.matchings) if a in m), Fraction(0)))
    return tuple(out)


def walk_grade(grading, walk) -> Fraction:
    return sum((d * grading[a] for a, d in walk), Fraction(0))


def zigzag_grade_sums(D: DimerModel, weights: LambdaWeights) -> tuple[Fraction, ...]:
    """For each zigzag cycle Z, the sum over its arrows of (1 - grade)."""
    grading = arrow_grading(D, weights)
    return tuple(
        sum((1 - grading[a] for a in z.arrows), Fraction(0))
        for z in zigzag_cycles(D)
    )


# --- cyclic vertex order -------------------------------------------------------


@dataclass(frozen=True)
class VertexOrder:
    """Quiver vertices in cyclic order of their grade value in [0, 2)."""

    vertices: tuple[int, ...]
    values: tuple[Fraction, ...]
    weights: LambdaWeights  # the weights actually used (possibly perturbed)

    def __post_init__(self):
        if self.values[0] != 0:
            raise FanoError("cyclic order must start at value 0")
        for a, b in zip(self.values, self.values[1:]):
            if not a < b:
                raise FanoError("cyclic order values must strictly increase")


def _vertex_values(D, T, o, grading):
    vals = []
    for v in range(D.num_vertices):
        r = walk_grade(grading, tree_path(D, T, o, v))
        vals.append(r - 2 * math.floor(r / 2))
    return vals


def _perturbed(weights: LambdaWeights, attempt: int) -> LambdaWeights | None:
    """Weights nudged along the fixed dyadic direction, or None.

    The direction 2^{-j} in weight j never changes; retries only shrink
    the scale, so every successful retry resolves ties the same way (the
    scale-to-zero limit order) and the agreement check below is a check
    that the scale is already small enough.
    """
    from .intlinalg import solve_rational

    n = len(weights.values)
    eps = Fraction(1, 16 * n) / (2**attempt)
    delta = [eps * Fraction(1, 2 ** (j + 1)) for j in range(n)]
    # project exactly onto the kernel of the constraint matrix
    A = [
        [Fraction(p[0]) for p in weights.points],
        [Fraction(p[1]) for p in weights.points],
        [Fraction(1)] * n,
    ]
    g = [sum(A[r][j] * delta[j] for j in range(n)) for r in range(3)]
    B = [[sum(A[r][j] * A[s][j] for j in range(n)) for s in range(3)] for r in range(3)]
    z = solve_rational(B, g)
    if z is None:
        return None
    proj = [
        delta[j] - sum(A[r][j] * z[r] for r in range(3)) for j in range(n)
    ]
    new = tuple(v + p for v, p in zip(weights.values, proj))
    if any(v <= 0 for v in new):
        return None
    return LambdaWeights(weights.points, weights.matchings, new)


def vertex_order(D: DimerModel, o: int, weights: LambdaWeights) -> VertexOrder:
    """Vertices sorted by grade of a tree path from the root, values in [0,2).

    Well-defined because every cycle has an even integer grade (asserted).
    Equal values are retried with deterministic in-constraint perturbations
    of the weights; persistent ties are an error.
    """
    T = spanning_tree(D)
    grading = arrow_grading(D, weights)
    # well-definedness: every fundamental cycle grade is an even integer
    for e in T.nontree_arrows:
        r = grading[e] + walk_grade(grading, tree_path(D, T, D.head[e], D.tail[e]))
        if r.denominator != 1 or r.numerator % 2 != 0:
            raise FanoError(
                f"cycle through arrow {D.arrows[e]} has grade {r},"
                " not an even integer"
            )

    def attempt_order(w: LambdaWeights):
        vals = _vertex_values(D, T, o, arrow_grading(D, w))
        if len(set(vals)) != D.num_vertices:
            return None
        order = sorted(range(D.num_vertices), key=lambda v: vals[v])
        if order[0] != o:  # o has value 0, the strict minimum
            return None
        return VertexOrder(tuple(order), tuple(vals[v] for v in order), w)

    first = attempt_order(weights)
    if first is not None:
        return first
    found: list[VertexOrder] = []
    for attempt in range(8):
        w = _perturbed(weights, attempt)
        if w is None:
            continue
        got = attempt_order(w)
        if got is None:
            continue
        found.append(got)
        if len(found) >= 2 and found[-1].vertices == found[-2].vertices:
            return found[-1]
    if not found:
        raise FanoError("vertex grades stay tied under all perturbations")
    raise FanoError(
        "perturbation-dependent vertex order: successive scales gave"
        f" {[f.vertices for f in found]}"
    )


# --- the exceptional sequence and the two integer sequences --------------------


def exceptional_sequence(
    D: DimerModel, o: int = 0, weights: LambdaWeights | None = None
) -> tuple[tuple[int, ...], ...]:
    """Divisor classes of the cyclic strong exceptional sequence.

    Class i+1 is class i plus the boundary-matching degree vector of a
    tree path between consecutive vertices of the cyclic order, shifted
    by all-ones multiples so its grade lands in [0, 2).  The k steps sum
    to the all-ones vector (asserted).
    """
    if weights is None:
        weights = lambda_weights(D, o)
    order = vertex_order(D, o, weights)
    w = order.weights
    T = spanning_tree(D)
    k = D.num_vertices
    n = len(w.points)
    classes = [(0,) * n]
    total = [0] * n
    for i in range(k):
        u = order.vertices[i]
        v = order.vertices[(i + 1) % k]
        path = tree_path(D, T, u, v)
        degs = [degree(D, m, path) for m in w.matchings]
        r = sum((lam * d for lam, d in zip(w.values, degs)), Fraction(0))
        shift = -math.floor(r / 2)
        step = [d + shift for d in degs]
        total = [t + s for t, s in zip(total, step)]
        if i < k - 1:
            classes.append(tuple(c + s for c, s in zip(classes[-1], step)))
    if total != [1] * n:
        raise FanoError(f"steps sum to {total}, expected all ones")
    return tuple(classes)


def b_sequence(
    D: DimerModel, o: int = 0, weights: LambdaWeights | None = None
) -> tuple[int, ...]:
    """Arrow counts between consecutive vertices of the cyclic order, each -2."""
    if weights is None:
        weights = lambda_weights(D, o)
    order = vertex_order(D, o, weights)
    k = len(order.vertices)
    out = []
    for i in range(k):
        u = order.vertices[i]
        v = order.vertices[(i + 1) % k]
        count = sum(
            1
            for a in range(D.num_arrows)
            if D.tail[a] == u and D.head[a] == v
        )
        out.append(count - 2)
    return tuple(out)


def a_from_zigzags(D: DimerModel, o: int = 0) -> tuple[int, ...]:
    """Per boundary point: common arrows of its two zigzag cycles, minus 2.

    Cross-asserted index-for-index against the a-sequence of the matching
    polygon.
    """
    zz = boundary_zigzags(D, o)
    k = len(zz)
    out = []
    for i in range(k):
        prev = zz[(i - 1) % k].arrow_set
        cur = zz[i].arrow_set
        out.append(len(prev & cur) - 2)
    expected = a_sequence(matching_polygon(D, o))
    if tuple(out) != expected:
        raise FanoError(
            f"zigzag overlap sequence {tuple(out)} disagrees with the"
            f" polygon sequence {expected}"
        )
    return tuple(out)


def dihedral_equal(s, t) -> bool:
    """Equal up to rotation, possibly composed with reversal."""
    s, t = tuple(s), tuple(t)
    if len(s) != len(t):
        return False
    k = len(s)
    for r in range(k):
        rot = s[r:] + s[:r]
        if rot == t or tuple(reversed(rot)) == t:
            return True
    return False


# --- the duality verdict -------------------------------------------------------


@dataclass(frozen=True)
class FanoReport:
    a: tuple[int, ...]
    b: tuple[int, ...]
    classes: tuple[tuple[int, ...], ...]
    mirror_a: tuple[int, ...] | None
    mirror_b: tuple[int, ...] | None
    failures: tuple[str, ...]

    def __bool__(self):
        return not self.failures


def verify_duality(D: DimerModel, o: int = 0) -> FanoReport:
    """Check that the mirror dimer is weak Fano and swaps the two sequences."""
    a = a_from_zigzags(D, o)
    weights = lambda_weights(D, o)
    b = b_sequence(D, o, weights)
    classes = exceptional_sequence(D, o, weights)
    failures = []
    dual = mirror(D)
    mirror_a = mirror_b = None
    if not is_weak_fano(dual):
        failures.append("mirror dimer is not weak Fano")
    else:
        mirror_a = a_from_zigzags(dual, 0)
        mirror_b = b_sequence(dual, 0)
        if not dihedral_equal(mirror_a, b):
            failures.append(
                f"mirror zigzag sequence {mirror_a} does not match"
                f" arrow-count sequence {b}"
            )
        if not dihedral_equal(mirror_b, a):
            failures.append(
                f"mirror arrow-count sequence {mirror_b} does not match"
                f" zigzag sequence {a}"
            )
        try:
            P_b = polygon_from_sequence(b)
        except PolygonError as exc:
            failures.append(f"arrow-count sequence {b} is not a polygon: {exc}")
        else:
            if unimodular_equal(P_b, matching_polygon(dual, 0)) is None:
                failures.append(
                    f"polygon of {b} is not unimodular-equivalent to the"
                    " mirror matching polygon"
                )
    return FanoReport(a, b, classes, mirror_a, mirror_b, tuple(failures))
