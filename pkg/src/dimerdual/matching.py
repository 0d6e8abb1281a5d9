"""Perfect matchings and the lattice geometry they generate.

A perfect matching is an arrow subset meeting every face exactly once.
Each matching gets a point in Z^2 by evaluating its degree on two fixed
closed weak walks whose homology classes are (1,0) and (0,1); the convex
hull of these points is the matching polygon.  A set of matchings is
stable relative to a root vertex o when every vertex can be reached from o
along arrows used by none of them; each lattice point of the polygon
carries exactly one stable matching (for consistent dimers), and stable
pairs/triples assemble into a triangulation of the polygon with one
triangle per quiver vertex.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .core import (
    DimerModel,
    DimerError,
    SpanningTree,
    torus_homology,
    with_derived_offsets,
)
from .geometry import (
    area2,
    boundary_lattice_points,
    convex_hull,
    interior_lattice_points,
    intersection_area2,
)
from .zigzag import ZIG, ZigzagCycle, zigzag_cycles

FORWARD = 1
INVERSE = -1


class StableComplexError(ValueError):
    """A structural expectation of the stable complex failed; for a
    consistent dimer this falsifies the consistency assumption."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(self.diagnostics))


def enumerate_matchings(D: DimerModel) -> list[frozenset[int]]:
    """All perfect matchings, canonically sorted.

    Exact-cover backtracking: faces are the constraints, each arrow covers
    its positive and its negative face; the most constrained face is
    branched first."""
    covered = [False] * D.num_faces
    out = []
    chosen: list[int] = []

    def available(fi):
        return [
            a
            for a in D.faces[fi].boundary
            if not covered[D.pos_face_of[a]] and not covered[D.neg_face_of[a]]
        ]

    def rec():
        best = -1
        best_av: list[int] | None = None
        for fi in range(D.num_faces):
            if covered[fi]:
                continue
            av = available(fi)
            if best_av is None or len(av) < len(best_av):
                best, best_av = fi, av
                if not av:
                    break
        if best_av is None:
            out.append(frozenset(chosen))
            return
        for a in best_av:
            f1, f2 = D.pos_face_of[a], D.neg_face_of[a]
            covered[f1] = covered[f2] = True
            chosen.append(a)
            rec()
            chosen.pop()
            covered[f1] = covered[f2] = False

    rec()
    out.sort(key=lambda m: tuple(sorted(m)))
    return out


def walk_endpoints(D: DimerModel, walk) -> tuple[int, int] | None:
    """(start, end) vertices of a composable weak walk; None for the empty
    walk; raises on breaks."""
    cur = None
    start = None
    for arrow, direction in walk:
        if direction == FORWARD:
            s, e = D.tail[arrow], D.head[arrow]
        else:
            s, e = D.head[arrow], D.tail[arrow]
        if cur is None:
            start = s
        elif cur != s:
            raise DimerError(
                [f"walk does not compose at arrow {D.arrows[arrow]}"]
            )
        cur = e
    if cur is None:
        return None
    return (start, cur)


def degree(D: DimerModel, matching, walk) -> int:
    """Signed count of matched arrows along a weak walk."""
    walk_endpoints(D, walk)
    return sum(
        direction * (1 if arrow in matching else 0) for arrow, direction in walk
    )


def tree_potentials(D: DimerModel, T: SpanningTree, matching) -> list[int]:
    """Vertex potentials from the root along the tree: crossing a tree
    arrow toward its head raises the potential by 1 when the arrow is
    matched.  Degrees of tree paths are potential differences."""
    pi = [0] * D.num_vertices
    order = sorted(range(D.num_vertices), key=lambda v: T.depth[v])
    for v in order:
        a = T.parent_arrow[v]
        if a is None:
            continue
        inc = 1 if a in matching else 0
        if T.parent_sign[v] == 1:  # v is the head of a
            parent = D.tail[a]
            pi[v] = pi[parent] + inc
        else:
            parent = D.head[a]
            pi[v] = pi[parent] - inc
    return pi


def matching_coordinates(D: DimerModel, hom, matching) -> tuple[int, int]:
    """Degrees of the matching on the two canonical weak cycles spanning
    homology (integer combinations of fundamental cycles with classes
    (1,0) and (0,1))."""
    pi = tree_potentials(D, hom.tree, matching)
    cs = []
    for e in hom.tree.nontree_arrows:
        c = (1 if e in matching else 0) + pi[D.tail[e]] - pi[D.head[e]]
        cs.append(c)
    x = sum(n * c for n, c in zip(hom.combo_x, cs))
    y = sum(n * c for n, c in zip(hom.combo_y, cs))
    return (x, y)


def is_stable(D: DimerModel, o: int, matchings) -> bool:
    """Every vertex reachable from o along arrows unused by all given
    matchings."""
    banned = set()
    for m in matchings:
        banned |= set(m)
    out_arrows: list[list[int]] = [[] for _ in range(D.num_vertices)]
    for a in range(D.num_arrows):
        if a not in banned:
            out_arrows[D.tail[a]].append(a)
    seen = [False] * D.num_vertices
    seen[o] = True
    stack = [o]
    while stack:
        v = stack.pop()
        for a in out_arrows[v]:
            w = D.head[a]
            if not seen[w]:
                seen[w] = True
                stack.append(w)
    return all(seen)


@dataclass(frozen=True, eq=False)
class MatchingLattice:
    dimer: DimerModel  # carries the offsets actually used
    root: int
    matchings: tuple[frozenset[int], ...]
    coords: tuple[tuple[int, int], ...]  # normalized, per matching
    hull: tuple[tuple[int, int], ...]
    interior_points: tuple[tuple[int, int], ...]
    boundary_points: tuple[tuple[int, int], ...]
    stable_flags: tuple[bool, ...]

    @property
    def lattice_points(self) -> list[tuple[int, int]]:
        return sorted(set(self.boundary_points) | set(self.interior_points))

    def matchings_at(self, point) -> list[int]:
        return [i for i, c in enumerate(self.coords) if c == point]

    def stable_at(self, point) -> int:
        """Index of the unique stable matching at a lattice point."""
        found = [
            i
            for i, c in enumerate(self.coords)
            if c == point and self.stable_flags[i]
        ]
        if len(found) != 1:
            raise StableComplexError(
                [f"lattice point {point} carries {len(found)} stable matchings"]
            )
        return found[0]


def matching_lattice(D: DimerModel, o: int = 0) -> MatchingLattice:
    """Coordinates, polygon, and per-matching stability flags.

    Normalization: the unique interior lattice point goes to the origin;
    without a unique interior point, the lexicographically least hull
    vertex does."""
    D = with_derived_offsets(D)
    hom = torus_homology(D)
    ms = enumerate_matchings(D)
    if not ms:
        raise DimerError(["no matchings"])
    raw = [matching_coordinates(D, hom, m) for m in ms]
    hull0 = convex_hull(raw)
    if len(hull0) >= 3:
        inner = interior_lattice_points(hull0)
    else:
        inner = []
    shift = inner[0] if len(inner) == 1 else hull0[0]
    coords = tuple((x - shift[0], y - shift[1]) for x, y in raw)
    hull = tuple((x - shift[0], y - shift[1]) for x, y in hull0)
    interior = tuple(
        sorted((x - shift[0], y - shift[1]) for x, y in inner)
    )
    if len(hull) >= 3:
        boundary = tuple(boundary_lattice_points(list(hull)))
    else:
        boundary = hull
    flags = tuple(is_stable(D, o, [m]) for m in ms)
    return MatchingLattice(
        dimer=D,
        root=o,
        matchings=tuple(ms),
        coords=coords,
        hull=hull,
        interior_points=interior,
        boundary_points=boundary,
        stable_flags=flags,
    )


@dataclass(frozen=True, eq=False)
class StableComplex:
    lattice: MatchingLattice
    points: tuple[tuple[int, int], ...]  # all lattice points, sorted
    reps: tuple[int, ...]  # stable matching index per point
    edges: tuple[tuple[int, int], ...]  # point-index pairs
    triangles: tuple[tuple[int, int, int], ...]


def stable_complex(D: DimerModel, o: int = 0) -> StableComplex:
    """Stable pairs and triples over the stable representatives; checks
    that the triangles form an elementary triangulation of the polygon
    with one triangle per quiver vertex and that the complex is a disc."""
    lattice = matching_lattice(D, o)
    D = lattice.dimer
    points = tuple(lattice.lattice_points)
    diagnostics = []
    reps = []
    for pt in points:
        found = [
            i
            for i, c in enumerate(lattice.coords)
            if c == pt and lattice.stable_flags[i]
        ]
        if len(found) != 1:
            diagnostics.append(
                f"lattice point {pt} carries {len(found)} stable matchings"
            )
            reps.append(found[0] if found else -1)
        else:
            reps.append(found[0])
    if diagnostics:
        raise StableComplexError(diagnostics)

    n = len(points)
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if is_stable(D, o, [lattice.matchings[reps[i]], lattice.matchings[reps[j]]]):
                edges.append((i, j))
    edge_set = set(edges)
    triangles = []
    for i in range(n):
        for j in range(i + 1, n):
            if (i, j) not in edge_set:
                continue
            for k in range(j + 1, n):
                if (i, k) not in edge_set or (j, k) not in edge_set:
                    continue
                if is_stable(
                    D,
                    o,
                    [
                        lattice.matchings[reps[i]],
                        lattice.matchings[reps[j]],
                        lattice.matchings[reps[k]],
                    ],
                ):
                    triangles.append((i, j, k))

    for i, j, k in triangles:
        if abs(area2([points[i], points[j], points[k]])) != 1:
            diagnostics.append(
                f"stable triple {points[i]},{points[j]},{points[k]} is not elementary"
            )
    if len(triangles) != D.num_vertices:
        diagnostics.append(
            f"{len(triangles)} stable triangles for {D.num_vertices} quiver vertices"
        )
    hull_area = area2(list(lattice.hull)) if len(lattice.hull) >= 3 else 0
    if len(triangles) != hull_area:
        diagnostics.append(
            f"{len(triangles)} elementary triangles cannot tile area {hull_area}/2"
        )
    for t1 in range(len(triangles)):
        for t2 in range(t1 + 1, len(triangles)):
            tri1 = [points[i] for i in triangles[t1]]
            tri2 = [points[i] for i in triangles[t2]]
            if intersection_area2(tri1, tri2) != 0:
                diagnostics.append(
                    f"stable triangles {tri1} and {tri2} overlap"
                )
    chi = n - len(edges) + len(triangles)
    if chi != 1:
        diagnostics.append(f"stable complex has Euler characteristic {chi}, not 1")
    if diagnostics:
        raise StableComplexError(diagnostics)
    return StableComplex(
        lattice=lattice,
        points=points,
        reps=tuple(reps),
        edges=tuple(edges),
        triangles=tuple(triangles),
    )


def boundary_zigzags(D: DimerModel, o: int = 0) -> list[ZigzagCycle]:
    """Zigzag cycles read off the boundary: the symmetric difference of the
    stable matchings at adjacent boundary lattice points, matched to the
    cycles of the dimer, in boundary cyclic order."""
    lattice = matching_lattice(D, o)
    D = lattice.dimer
    bp = lattice.boundary_points
    reps = [lattice.matchings[lattice.stable_at(pt)] for pt in bp]
    cycles = zigzag_cycles(D)
    by_set: dict[frozenset, list[int]] = {}
    for ci, z in enumerate(cycles):
        by_set.setdefault(z.arrow_set, []).append(ci)
    out = []
    used = []
    diagnostics = []
    s = len(bp)
    for i in range(s):
        sym = frozenset(reps[i] ^ reps[(i + 1) % s])
        cands = by_set.get(sym, [])
        if len(cands) != 1:
            diagnostics.append(
                f"boundary step {bp[i]}->{bp[(i + 1) % s]}: symmetric difference"
                f" matches {len(cands)} zigzag cycles"
            )
            continue
        out.append(cycles[cands[0]])
        used.append(cands[0])
    if not diagnostics:
        if sorted(used) != list(range(len(cycles))):
            diagnostics.append(
                f"boundary steps cover {len(set(used))} of {len(cycles)} zigzag cycles"
            )
    if diagnostics:
        raise StableComplexError(diagnostics)
    return out


# ---------------------------------------------------------------------------
# Property-suite helpers (arc structure and degree half-spaces)


def cycle_through(D: DimerModel, a: int, parity: int) -> ZigzagCycle:
    """The zigzag cycle containing arrow a with the given parity."""
    for z in zigzag_cycles(D):
        for arrow, p in zip(z.arrows, z.parities):
            if arrow == a and p == parity:
                return z
    raise DimerError([f"arrow {D.arrows[a]} missing from zigzag cycles"])


def _is_cyclic_arc(indices: set[int], size: int) -> bool:
    """Is the index set a contiguous arc on Z/size (nonempty, proper)?"""
    if not indices or len(indices) == size:
        return False
    exits = sum(1 for i in indices if (i + 1) % size not in indices)
    return exits == 1


def boundary_arc_check(D: DimerModel, o: int = 0) -> list[str]:
    """Per-arrow arc property of boundary stable matchings.

    Each arrow must appear in a nonempty proper contiguous cyclic arc of
    the boundary representatives, and the symmetric differences at the two
    ends of that arc must be exactly the zig and zag cycles through the
    arrow."""
    lattice = matching_lattice(D, o)
    D = lattice.dimer
    bp = lattice.boundary_points
    s = len(bp)
    reps = [lattice.matchings[lattice.stable_at(pt)] for pt in bp]
    bz = boundary_zigzags(D, o)
    diagnostics = []
    for a in range(D.num_arrows):
        members = {i for i in range(s) if a in reps[i]}
        if not _is_cyclic_arc(members, s):
            diagnostics.append(
                f"arrow {D.arrows[a]}: boundary membership {sorted(members)}"
                f" is not a proper cyclic arc of size {s}"
            )
            continue
        start = next(i for i in members if (i - 1) % s not in members)
        end = next(i for i in members if (i + 1) % s not in members)
        ends = {
            (bz[(start - 1) % s].arrows, bz[(start - 1) % s].parities),
            (bz[end].arrows, bz[end].parities),
        }
        zig = cycle_through(D, a, ZIG)
        zag = cycle_through(D, a, -ZIG)
        want = {(zig.arrows, zig.parities), (zag.arrows, zag.parities)}
        if ends != want:
            diagnostics.append(
                f"arrow {D.arrows[a]}: arc-end zigzag cycles differ from the"
                f" zig/zag cycles through it"
            )
    return diagnostics


def sample_weak_walks(D: DimerModel, count: int, seed: int, max_len=None):
    """Deterministic sampler: uniform start vertex, per-step independent
    uniform direction and uniform arrow choice, length uniform in
    [0, 2|Q1|]."""
    rng = random.Random(seed)
    if max_len is None:
        max_len = 2 * D.num_arrows
    by_tail: list[list[int]] = [[] for _ in range(D.num_vertices)]
    by_head: list[list[int]] = [[] for _ in range(D.num_vertices)]
    for a in range(D.num_arrows):
        by_tail[D.tail[a]].append(a)
        by_head[D.head[a]].append(a)
    walks = []
    for _ in range(count):
        length = rng.randint(0, max_len)
        v = rng.randrange(D.num_vertices)
        walk = []
        for _ in range(length):
            direction = FORWARD if rng.random() < 0.5 else INVERSE
            cands = by_tail[v] if direction == FORWARD else by_head[v]
            a = cands[rng.randrange(len(cands))]
            walk.append((a, direction))
            v = D.head[a] if direction == FORWARD else D.tail[a]
        walks.append(tuple(walk))
    return walks


def _induced_subcomplex_disc(cx: StableComplex, members: set[int]):
    """(connected, euler characteristic) of the induced subcomplex."""
    verts = sorted(members)
    edges = [e for e in cx.edges if e[0] in members and e[1] in members]
    tris = [t for t in cx.triangles if all(i in members for i in t)]
    if not verts:
        return True, None  # vacuous
    adj: dict[int, list[int]] = {v: [] for v in verts}
    for i, j in edges:
        adj[i].append(j)
        adj[j].append(i)
    seen = {verts[0]}
    stack = [verts[0]]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    connected = len(seen) == len(verts)
    chi = len(verts) - len(edges) + len(tris)
    return connected, chi


def halfspace_disc_check(D: DimerModel, o: int, walks):
    """Degree half-spaces of the stable complex are discs.

    For each walk, stable matchings of nonnegative degree must induce a
    connected subcomplex of Euler characteristic 1, and likewise the
    strictly negative side.  Returns (diagnostics, stats); empty sides pass
    vacuously and are counted."""
    cx = stable_complex(D, o)
    lattice = cx.lattice
    diagnostics = []
    stats = {"walks": len(walks), "vacuous_sides": 0}
    for wi, walk in enumerate(walks):
        degs = [
            degree(lattice.dimer, lattice.matchings[cx.reps[i]], walk)
            for i in range(len(cx.points))
        ]
        for side, name in ((
            {i for i, d in enumerate(degs) if d >= 0},
            "nonnegative",
        ), (
            {i for i, d in enumerate(degs) if d < 0},
            "negative",
        )):
            connected, chi = _induced_subcomplex_disc(cx, side)
            if chi is None:
                stats["vacuous_sides"] += 1
                continue
            if not connected or chi != 1:
                diagnostics.append(
                    f"walk {wi}: {name} side connected={connected} chi={chi}"
                )
    return diagnostics, stats


def boundary_halfcircle_check(D: DimerModel, o: int, walks):
    """Boundary representatives of nonnegative degree form a contiguous
    cyclic arc, the empty set, or the whole circle, for every walk."""
    lattice = matching_lattice(D, o)
    bp = lattice.boundary_points
    s = len(bp)
    reps = [lattice.matchings[lattice.stable_at(pt)] for pt in bp]
    diagnostics = []
    for wi, walk in enumerate(walks):
        members = {
            i for i in range(s) if degree(lattice.dimer, reps[i], walk) >= 0
        }
        if members and len(members) != s and not _is_cyclic_arc(members, s):
            diagnostics.append(
                f"walk {wi}: nonnegative boundary set {sorted(members)} is not"
                f" an arc of size {s}"
            )
    return diagnostics
