"""Exact planar lattice geometry.

Everything is computed over integers or `fractions.Fraction`; no floating
point enters any predicate.  Polygons are vertex cycles in counterclockwise
order.  Lattice points are integer pairs, general points are Fraction pairs.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

IVec = tuple[int, int]


def vadd(u, v):
    return (u[0] + v[0], u[1] + v[1])


def vsub(u, v):
    return (u[0] - v[0], u[1] - v[1])


def vneg(u):
    return (-u[0], -u[1])


def vscale(c, u):
    return (c * u[0], c * u[1])


def det2(u, v):
    return u[0] * v[1] - u[1] * v[0]


def dot2(u, v):
    return u[0] * v[0] + u[1] * v[1]


def orient(a, b, c):
    """Twice the signed area of triangle a,b,c; positive iff counterclockwise."""
    return det2(vsub(b, a), vsub(c, a))


def is_primitive(v: IVec) -> bool:
    return gcd(v[0], v[1]) == 1


def convex_hull(points: Iterable) -> list:
    """Convex hull in counterclockwise order, starting at the lexicographically
    minimal vertex; collinear boundary points are dropped.

    Degenerate inputs give a 0-, 1- or 2-point result.
    """
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def build(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and orient(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = build(pts)
    upper = build(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        return [pts[0], pts[-1]]
    return hull


def area2(poly: Sequence) -> int | Fraction:
    """Twice the signed area (positive for counterclockwise cycles)."""
    total = 0
    for i in range(len(poly)):
        total += det2(poly[i], poly[(i + 1) % len(poly)])
    return total


def boundary_lattice_points(hull: Sequence[IVec]) -> list[IVec]:
    """All lattice points on the boundary of an integer polygon, in
    counterclockwise cyclic order starting at the lexicographically minimal
    point.  `hull` must be a counterclockwise vertex cycle with len >= 3."""
    out: list[IVec] = []
    k = len(hull)
    for i in range(k):
        u, w = hull[i], hull[(i + 1) % k]
        d = vsub(w, u)
        g = gcd(abs(d[0]), abs(d[1]))
        step = (d[0] // g, d[1] // g)
        for t in range(g):
            out.append(vadd(u, vscale(t, step)))
    i0 = out.index(min(out))
    return out[i0:] + out[:i0]


def point_in_polygon(p, hull: Sequence) -> str:
    """Classify p against a counterclockwise convex polygon: 'in' (strict
    interior), 'on' (boundary), or 'out'."""
    on = False
    k = len(hull)
    if k == 0:
        return "out"
    if k == 1:
        return "on" if tuple(p) == tuple(hull[0]) else "out"
    if k == 2:
        a, b = hull
        if orient(a, b, p) != 0:
            return "out"
        lo, hi = min(a, b), max(a, b)
        return "on" if lo <= tuple(p) <= hi else "out"
    for i in range(k):
        s = orient(hull[i], hull[(i + 1) % k], p)
        if s < 0:
            return "out"
        if s == 0:
            on = True
    return "on" if on else "in"


def interior_lattice_points(hull: Sequence[IVec]) -> list[IVec]:
    """Lattice points strictly inside an integer convex polygon, sorted."""
    if len(hull) < 3:
        return []
    xs = [p[0] for p in hull]
    ys = [p[1] for p in hull]
    out = []
    for x in range(min(xs) + 1, max(xs)):
        for y in range(min(ys) + 1, max(ys)):
            if point_in_polygon((x, y), hull) == "in":
                out.append((x, y))
    return out


def clip_halfplane(subject: list, a, b) -> list:
    """Clip a polygon against the half-plane on the left of the directed line
    a -> b (Sutherland-Hodgman step, exact over Fraction)."""
    if not subject:
        return []
    out = []
    n = len(subject)
    for i in range(n):
        p, q = subject[i], subject[(i + 1) % n]
        sp, sq = orient(a, b, p), orient(a, b, q)
        if sp >= 0:
            out.append(p)
        if (sp > 0 and sq < 0) or (sp < 0 and sq > 0):
            t = Fraction(sp, sp - sq)
            out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    return out


def intersection_area2(polyA: Sequence, polyB: Sequence) -> Fraction:
    """Twice the area of the intersection of two convex counterclockwise
    polygons, exact."""
    subject = [(Fraction(p[0]), Fraction(p[1])) for p in polyA]
    k = len(polyB)
    for i in range(k):
        subject = clip_halfplane(subject, polyB[i], polyB[(i + 1) % k])
        if not subject:
            return Fraction(0)
    a = area2(subject)
    return a if a >= 0 else -a


def angle_halfplane(v) -> int:
    """0 for angles in [0, pi), 1 for [pi, 2pi); used for exact angular sort."""
    x, y = v
    return 0 if (y > 0 or (y == 0 and x > 0)) else 1


def angular_less(u, v) -> bool:
    """Strict exact comparison of directions by angle from the positive x-axis."""
    hu, hv = angle_halfplane(u), angle_halfplane(v)
    if hu != hv:
        return hu < hv
    return det2(u, v) > 0


def is_cyclically_angular_sorted(vs: Sequence[IVec]) -> bool:
    """True iff the nonzero vectors, with pairwise distinct directions, list
    angles in increasing cyclic order making exactly one full turn."""
    n = len(vs)
    if n < 3:
        return False
    descents = 0
    for i in range(n):
        if not angular_less(vs[i], vs[(i + 1) % n]):
            descents += 1
    return descents == 1
