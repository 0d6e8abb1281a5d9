"""Reflexive lattice polygons and their smooth toric weak Fano surfaces.

A reflexive polygon is recorded by its full cycle of boundary lattice
points (counterclockwise, origin the unique interior lattice point);
consecutive boundary points always form a lattice basis.  The surface
attached to a polygon has one ray per boundary point; the integers a_i
with v_{i-1} + a_i v_i + v_{i+1} = 0 are the self-intersection numbers of
the boundary divisors, and line-bundle cohomology reduces to exact lattice
point counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cache
from math import gcd

from .geometry import angular_less, det2, is_cyclically_angular_sorted, orient

IVec = tuple[int, int]


class PolygonError(ValueError):
    pass


class ToricInternalError(RuntimeError):
    """A certified internal invariant failed; indicates a bug, not bad input."""


@dataclass(frozen=True)
class ReflexivePolygon:
    """All boundary lattice points, in counterclockwise cyclic order."""

    points: tuple[IVec, ...]

    @property
    def size(self) -> int:
        return len(self.points)


def reflexive_polygon(points) -> ReflexivePolygon:
    """Validating constructor; raises PolygonError with the failed condition."""
    pts = tuple((int(p[0]), int(p[1])) for p in points)
    k = len(pts)
    if k < 3:
        raise PolygonError("fewer than 3 boundary points")
    if len(set(pts)) != k:
        raise PolygonError("repeated boundary point")
    if (0, 0) in pts:
        raise PolygonError("the origin must be interior, not a boundary point")
    for i in range(k):
        d = det2(pts[i], pts[(i + 1) % k])
        if d != 1:
            raise PolygonError(
                f"consecutive boundary points {pts[i]} and {pts[(i + 1) % k]}"
                f" have determinant {d}, not 1"
            )
        if orient(pts[i - 1], pts[i], pts[(i + 1) % k]) < 0:
            raise PolygonError(f"concave turn at boundary point {pts[i]}")
    if not is_cyclically_angular_sorted(pts):
        raise PolygonError(
            "boundary points do not wind once counterclockwise around the origin"
        )
    return ReflexivePolygon(pts)


def a_sequence(P: ReflexivePolygon) -> tuple[int, ...]:
    """The unique integers with v_{i-1} + a_i v_i + v_{i+1} = 0."""
    pts = P.points
    k = len(pts)
    out = []
    for i in range(k):
        cur = pts[i]
        sx = pts[i - 1][0] + pts[(i + 1) % k][0]
        sy = pts[i - 1][1] + pts[(i + 1) % k][1]
        if cur[0] != 0:
            if sx % cur[0] != 0:
                raise PolygonError(f"non-smooth boundary pair at {cur}")
            a = -(sx // cur[0])
        else:
            if sy % cur[1] != 0:
                raise PolygonError(f"non-smooth boundary pair at {cur}")
            a = -(sy // cur[1])
        if (sx + a * cur[0], sy + a * cur[1]) != (0, 0):
            raise PolygonError(f"non-smooth boundary pair at {cur}")
        out.append(a)
    return tuple(out)


def polygon_from_sequence(seq) -> ReflexivePolygon:
    """Rebuild a polygon from its a-sequence, anchored at (1,0), (0,1).

    Fails with "does not close" when the recurrence does not come back to
    its seed, or "not reflexive" when the closed cycle is not a valid
    reflexive boundary."""
    a = tuple(int(x) for x in seq)
    k = len(a)
    if k < 3:
        raise PolygonError("sequence shorter than 3")
    pts: list[IVec] = [(1, 0), (0, 1)]
    for i in range(1, k + 1):
        prev, cur = pts[i - 1], pts[i]
        ai = a[i % k]
        pts.append((-prev[0] - ai * cur[0], -prev[1] - ai * cur[1]))
    if pts[k] != pts[0] or pts[k + 1] != pts[1]:
        raise PolygonError("does not close")
    try:
        return reflexive_polygon(pts[:k])
    except PolygonError as e:
        raise PolygonError(f"not reflexive: {e}") from e


# --- dihedral equivalence of cyclic sequences --------------------------------


def dihedral_images(seq):
    s = tuple(seq)
    k = len(s)
    for r in range(k):
        rot = s[r:] + s[:r]
        yield rot
        yield rot[::-1]


def canonical_sequence(seq) -> tuple:
    """Lexicographically greatest rotation or reflected rotation."""
    return max(dihedral_images(seq))


def dihedral_equal(s1, s2) -> bool:
    return len(tuple(s1)) == len(tuple(s2)) and canonical_sequence(
        s1
    ) == canonical_sequence(s2)


def unimodular_equal(P1: ReflexivePolygon, P2: ReflexivePolygon):
    """A GL2(Z) matrix taking the boundary cycle of P1 to that of P2 (up to
    rotation, and reversal for determinant -1 maps), or None."""
    p, q = P1.points, P2.points
    k = len(p)
    if len(q) != k:
        return None
    p0, p1 = p[0], p[1]
    # inverse of the basis matrix with rows p0, p1 (determinant 1)
    inv = ((p1[1], -p0[1]), (-p1[0], p0[0]))
    for j in range(k):
        for step in (1, -1):
            q0, q1 = q[j], q[(j + step) % k]
            # rows of the candidate map: m sending p0 -> q0, p1 -> q1
            m00 = q0[0] * inv[0][0] + q1[0] * inv[0][1]
            m01 = q0[0] * inv[1][0] + q1[0] * inv[1][1]
            m10 = q0[1] * inv[0][0] + q1[1] * inv[0][1]
            m11 = q0[1] * inv[1][0] + q1[1] * inv[1][1]
            if all(
                (
                    m00 * p[i][0] + m01 * p[i][1],
                    m10 * p[i][0] + m11 * p[i][1],
                )
                == q[(j + step * i) % k]
                for i in range(k)
            ):
                return ((m00, m01), (m10, m11))
    return None


# --- the sixteen classes ------------------------------------------------------

_BOX = 4
_TABLE_SIZES = (3, 4, 4, 4, 5, 5, 6, 6, 6, 6, 7, 7, 8, 8, 8, 9)


@cache
def _enumerate_reflexive() -> tuple:
    prims = sorted(
        (x, y)
        for x in range(-_BOX, _BOX + 1)
        for y in range(-_BOX, _BOX + 1)
        if (x, y) != (0, 0) and gcd(x, y) == 1
    )
    succ: dict[IVec, list[IVec]] = {
        v: sorted(w for w in prims if det2(v, w) == 1) for v in prims
    }
    found: dict[tuple, ReflexivePolygon] = {}

    def close_ok(chain: list[IVec]) -> bool:
        v0 = chain[0]
        last = chain[-1]
        if det2(last, v0) != 1:
            return False
        if orient(chain[-2], last, v0) < 0 or orient(last, v0, chain[1]) < 0:
            return False
        return is_cyclically_angular_sorted(chain)

    def extend(chain: list[IVec], seen: set[IVec], descents: int):
        if len(chain) >= 3 and close_ok(chain):
            P = reflexive_polygon(chain)
            found.setdefault(canonical_sequence(a_sequence(P)), P)
        last = chain[-1]
        for w in succ[last]:
            if w in seen or w <= chain[0]:
                continue
            if len(chain) >= 2 and orient(chain[-2], last, w) < 0:
                continue
            d = descents + (0 if angular_less(last, w) else 1)
            if d > 1:
                continue
            chain.append(w)
            seen.add(w)
            extend(chain, seen, d)
            seen.discard(w)
            chain.pop()

    for v in prims:
        extend([v], {v}, 0)

    if sorted(len(P.points) for P in found.values()) != list(_TABLE_SIZES):
        raise ToricInternalError(
            f"reflexive enumeration found sizes"
            f" {sorted(len(P.points) for P in found.values())}"
        )
    by_size: dict[int, list[tuple]] = {}
    for seq in found:
        by_size.setdefault(len(seq), []).append(seq)
    labeled = []
    for k in sorted(by_size):
        for letter, seq in zip("abcdefgh", sorted(by_size[k])):
            # anchor the stored representative at (1,0), (0,1) via the
            # canonical sequence; this also re-validates each class
            labeled.append((f"{k}{letter}", polygon_from_sequence(seq)))
    return tuple(labeled)


def enumerate_reflexive() -> dict[str, ReflexivePolygon]:
    """The 16 reflexive polygons up to unimodular equivalence, labeled by
    boundary size and a letter ordered by canonical a-sequence."""
    return dict(_enumerate_reflexive())


# --- toric surfaces and cohomology --------------------------------------------


@dataclass(frozen=True)
class ToricWeakFanoSurface:
    """Smooth complete toric surface of a reflexive polygon: one ray per
    boundary lattice point, self-intersection numbers a, canonical class
    (-1, ..., -1)."""

    rays: tuple[IVec, ...]
    a: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.rays)

    @property
    def canonical_class(self) -> tuple[int, ...]:
        return (-1,) * self.k


def surface_of(P: ReflexivePolygon) -> ToricWeakFanoSurface:
    a = a_sequence(P)
    if sum(a) != 12 - 3 * len(a):
        raise ToricInternalError(f"self-intersections {a} sum to {sum(a)}")
    return ToricWeakFanoSurface(rays=P.points, a=a)


def linear_equivalence_witness(X: ToricWeakFanoSurface, d, e):
    """The lattice functional m with <m, v_r> = d_r - e_r for every ray, or
    None when the classes differ."""
    diff = [int(x) - int(y) for x, y in zip(d, e)]
    v0, v1 = X.rays[0], X.rays[1]
    # rows (v0; v1) have determinant 1
    mx = diff[0] * v1[1] - diff[1] * v0[1]
    my = v0[0] * diff[1] - v1[0] * diff[0]
    for r, v in enumerate(X.rays):
        if mx * v[0] + my * v[1] != diff[r]:
            return None
    return (mx, my)


def intersection(X: ToricWeakFanoSurface, d, e) -> int:
    """Bilinear intersection pairing: E_i.E_i = a_i, adjacent rays meet once."""
    k = X.k
    total = 0
    for i in range(k):
        total += d[i] * e[i] * X.a[i]
        j = (i + 1) % k
        total += d[i] * e[j] + d[j] * e[i]
    return total


def chi(X: ToricWeakFanoSurface, d) -> int:
    """Euler characteristic by Riemann-Roch."""
    num = intersection(X, d, d) - intersection(X, d, X.canonical_class)
    if num % 2 != 0:
        raise ToricInternalError(f"odd Riemann-Roch numerator for {d}")
    return 1 + num // 2


def _window(X: ToricWeakFanoSurface, d):
    """Integer box [xlo, xhi] x [ylo, yhi] that contains every pairwise
    intersection of the constraint lines <m, v_r> = -d_r, inflated by 1.
    Every lattice functional whose satisfied-ray pattern is anything other
    than a single cyclic arc (or empty, or full) lies inside."""
    xs: list[Fraction] = []
    ys: list[Fraction] = []
    k = X.k
    for i in range(k):
        for j in range(i + 1, k):
            vi, vj = X.rays[i], X.rays[j]
            det = det2(vi, vj)
            if det == 0:
                continue
            xs.append(Fraction(-d[i] * vj[1] + d[j] * vi[1], det))
            ys.append(Fraction(-vi[0] * d[j] + vj[0] * d[i], det))
    if not xs:
        raise ToricInternalError("no independent ray pair")
    return (
        math.floor(min(xs)) - 1,
        math.ceil(max(xs)) + 1,
        math.floor(min(ys)) - 1,
        math.ceil(max(ys)) + 1,
    )


def sections(X: ToricWeakFanoSurface, d) -> list[IVec]:
    """Lattice functionals m with <m, v_r> >= -d_r for every ray; the global
    sections of the divisor class d."""
    xlo, xhi, ylo, yhi = _window(X, d)
    out = []
    for mx in range(xlo, xhi + 1):
        for my in range(ylo, yhi + 1):
            if all(
                mx * v[0] + my * v[1] >= -d[r] for r, v in enumerate(X.rays)
            ):
                out.append((mx, my))
    return out


def h0(X: ToricWeakFanoSurface, d) -> int:
    return len(sections(X, d))


def h2(X: ToricWeakFanoSurface, d) -> int:
    """Via duality against the canonical class."""
    return h0(X, tuple(-1 - x for x in d))


def h1(X: ToricWeakFanoSurface, d) -> int:
    """Euler-characteristic residual; certified non-negative."""
    val = h0(X, d) + h2(X, d) - chi(X, d)
    if val < 0:
        raise ToricInternalError(f"negative first cohomology for {d}")
    return val


def _arc_count(sat: set[int], k: int) -> int:
    return sum(1 for r in sat if (r - 1) % k not in sat)


def h1_direct(X: ToricWeakFanoSurface, d) -> int:
    """First cohomology counted ray-pattern by ray-pattern: each lattice
    functional contributes one less than the number of contiguous cyclic
    arcs formed by its satisfied rays (nonempty proper patterns only)."""
    xlo, xhi, ylo, yhi = _window(X, d)
    k = X.k
    total = 0
    for mx in range(xlo, xhi + 1):
        for my in range(ylo, yhi + 1):
            sat = {
                r
                for r, v in enumerate(X.rays)
                if mx * v[0] + my * v[1] >= -d[r]
            }
            if 0 < len(sat) < k:
                total += _arc_count(sat, k) - 1
    return total


# --- cyclic strong exceptionality ----------------------------------------------


@dataclass(frozen=True)
class ExceptionalityReport:
    ok: bool
    violations: tuple[tuple[int, int, str], ...]

    def __bool__(self) -> bool:
        return self.ok


def is_cyclic_strong_exceptional(
    X: ToricWeakFanoSurface, classes
) -> ExceptionalityReport:
    """Check one period of the helix L_0..L_{k-1}, L_{n+k} = L_n - K.

    Forward and backward higher cohomology must vanish for every pair in a
    window of length k, and backward Homs must vanish for distances 1..k.
    One period suffices: twisting down by the effective class -K never
    creates new sections."""
    k = X.k
    ds = [tuple(int(x) for x in d) for d in classes]
    if len(ds) != k or any(len(d) != k for d in ds):
        raise ValueError(f"expected {k} classes of length {k}")

    def helix(n: int) -> tuple[int, ...]:
        q, r = divmod(n, k)
        return tuple(x + q for x in ds[r])

    viol = []
    if h1(X, (0,) * k) != 0:
        viol.append((0, 0, "self-ext1"))
    if h2(X, (0,) * k) != 0:
        viol.append((0, 0, "self-ext2"))
    if h0(X, (-1,) * k) != 0:
        viol.append((k, 0, "hom-backward"))
    for i in range(k):
        di = helix(i)
        for t in range(1, k):
            dj = helix(i + t)
            delta = tuple(x - y for x, y in zip(dj, di))
            neg = tuple(-x for x in delta)
            if h1(X, delta) != 0:
                viol.append((i, i + t, "ext1-forward"))
            if h2(X, delta) != 0:
                viol.append((i, i + t, "ext2-forward"))
            if h1(X, neg) != 0:
                viol.append((i + t, i, "ext1-backward"))
            if h2(X, neg) != 0:
                viol.append((i + t, i, "ext2-backward"))
            if h0(X, neg) != 0:
                viol.append((i + t, i, "hom-backward"))
    return ExceptionalityReport(ok=not viol, violations=tuple(viol))
