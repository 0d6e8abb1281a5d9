"""Dimer models given purely by signed face cycles.

A dimer model is a quiver embedded in a closed oriented surface such that
the complement of the quiver is a disjoint union of open discs, each
bounded by a directed cycle of length at least 3.  The whole structure is
determined by the two sets of face cycles (positive = counterclockwise,
negative = clockwise): vertices arise by identifying arrow endpoints along
face compositions, and the surface genus falls out of the Euler
characteristic.

This module owns the data model, validation, derived topology (vertices,
genus), homology offsets for torus dimers, and isomorphism testing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .intlinalg import integer_solve, smith_normal_form

POSITIVE = 1
NEGATIVE = -1


class DimerError(ValueError):
    """Raised when a raw dimer description violates the model invariants.

    Carries the complete list of violations in .violations."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


@dataclass(frozen=True)
class Face:
    sign: int  # POSITIVE or NEGATIVE
    boundary: tuple[int, ...]  # arrow ids in composition order


@dataclass(frozen=True)
class RawDimer:
    """Unvalidated dimer description, as read from a file or built in code.

    faces entries are (sign, arrow-name sequence); endpoints optionally maps
    arrow name -> (tail label, head label); offsets optionally maps arrow
    name -> (dx, dy); positions optionally maps vertex label -> rational
    point (rendering only)."""

    name: str
    arrows: tuple[str, ...]
    faces: tuple[tuple[int, tuple[str, ...]], ...]
    endpoints: dict | None = None
    offsets: dict | None = None
    positions: dict | None = None


@dataclass(frozen=True)
class DimerModel:
    name: str
    arrows: tuple[str, ...]  # arrow id = position in this tuple
    faces: tuple[Face, ...]
    head: tuple[int, ...]  # vertex id per arrow
    tail: tuple[int, ...]
    num_vertices: int
    vertex_names: tuple[str, ...]
    pos_face_of: tuple[int, ...]  # face index per arrow
    neg_face_of: tuple[int, ...]
    offsets: tuple[tuple[int, int], ...] | None = None
    positions: tuple | None = None  # per-vertex rational point or None

    @property
    def num_arrows(self) -> int:
        return len(self.arrows)

    @property
    def num_faces(self) -> int:
        return len(self.faces)

    @property
    def euler_characteristic(self) -> int:
        return self.num_vertices - self.num_arrows + self.num_faces

    @property
    def genus(self) -> int:
        chi = self.euler_characteristic
        if chi % 2 != 0 or chi > 2:
            raise DimerError([f"non-surface gluing: Euler characteristic {chi}"])
        return (2 - chi) // 2

    def arrow_index(self, name: str) -> int:
        return self.arrows.index(name)

    def vertex_index(self, name: str) -> int:
        return self.vertex_names.index(name)

    def face_of(self, arrow: int, sign: int) -> int:
        return self.pos_face_of[arrow] if sign == POSITIVE else self.neg_face_of[arrow]

    def next_in_face(self, face_index: int, arrow: int) -> int:
        b = self.faces[face_index].boundary
        return b[(b.index(arrow) + 1) % len(b)]

    def prev_in_face(self, face_index: int, arrow: int) -> int:
        b = self.faces[face_index].boundary
        return b[(b.index(arrow) - 1) % len(b)]


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)
        return ra != rb


def derive_vertices(num_arrows, faces):
    """Vertices as union-find classes of arrow endpoint slots.

    Slot 2a is the head of arrow a, slot 2a+1 its tail.  In every face the
    head of entry i is the tail of entry i+1 (cyclically).  Returns
    (num_vertices, head, tail) with classes numbered in order of first
    appearance scanning arrows by id, tail slot before head slot."""
    uf = _UnionFind(2 * num_arrows)
    for face in faces:
        b = face.boundary
        for i, a in enumerate(b):
            nxt = b[(i + 1) % len(b)]
            uf.union(2 * a, 2 * nxt + 1)
    order: dict[int, int] = {}
    for a in range(num_arrows):
        for slot in (2 * a + 1, 2 * a):
            r = uf.find(slot)
            if r not in order:
                order[r] = len(order)
    head = tuple(order[uf.find(2 * a)] for a in range(num_arrows))
    tail = tuple(order[uf.find(2 * a + 1)] for a in range(num_arrows))
    return len(order), head, tail


def violations_of(raw: RawDimer) -> list[str]:
    """The complete violation list for a raw description (empty if valid).

    Face-structure problems (bad lengths, repeats, broken coverage) are
    reported alone, since derived checks are meaningless without coverage."""
    errs = []
    index = {name: i for i, name in enumerate(raw.arrows)}
    if len(index) != len(raw.arrows):
        dupes = sorted({n for n in raw.arrows if raw.arrows.count(n) > 1})
        errs.append(f"duplicate arrow names: {', '.join(dupes)}")
        return errs

    faces = []
    for fi, (sign, names) in enumerate(raw.faces):
        if sign not in (POSITIVE, NEGATIVE):
            errs.append(f"face {fi} has invalid sign {sign}")
            continue
        if len(names) < 3:
            errs.append(f"face {fi} has length {len(names)} < 3")
        seen = set()
        ids = []
        for n in names:
            if n not in index:
                errs.append(f"face {fi} references unknown arrow {n}")
                continue
            if n in seen:
                errs.append(f"face {fi} repeats arrow {n}")
            seen.add(n)
            ids.append(index[n])
        faces.append(Face(sign, tuple(ids)))

    pos_count = [0] * len(raw.arrows)
    neg_count = [0] * len(raw.arrows)
    for face in faces:
        for a in face.boundary:
            (pos_count if face.sign == POSITIVE else neg_count)[a] += 1
    for a, name in enumerate(raw.arrows):
        if pos_count[a] != 1:
            errs.append(f"arrow {name} in {pos_count[a]} positive faces")
        if neg_count[a] != 1:
            errs.append(f"arrow {name} in {neg_count[a]} negative faces")
    if errs:
        return errs

    num_vertices, head, tail = derive_vertices(len(raw.arrows), faces)

    uf = _UnionFind(num_vertices)
    for a in range(len(raw.arrows)):
        uf.union(tail[a], head[a])
    if len({uf.find(v) for v in range(num_vertices)}) != 1:
        errs.append("dimer is not connected")

    chi = num_vertices - len(raw.arrows) + len(faces)
    if chi % 2 != 0 or chi > 2:
        errs.append(f"non-surface gluing: Euler characteristic {chi}")

    if raw.endpoints is not None:
        missing = [n for n in raw.arrows if n not in raw.endpoints]
        if missing:
            errs.append(f"declared endpoints missing arrows: {', '.join(missing)}")
        label_of_class: dict[int, str] = {}
        class_of_label: dict[str, int] = {}
        for a, name in enumerate(raw.arrows):
            if name not in raw.endpoints:
                continue
            t_label, h_label = raw.endpoints[name]
            for label, cls in ((t_label, tail[a]), (h_label, head[a])):
                if label in class_of_label and class_of_label[label] != cls:
                    errs.append(
                        f"vertex label {label} refers to distinct derived vertices"
                        f" (at arrow {name})"
                    )
                elif cls in label_of_class and label_of_class[cls] != label:
                    errs.append(
                        f"derived vertex carries labels {label_of_class[cls]}"
                        f" and {label} (at arrow {name})"
                    )
                else:
                    class_of_label[label] = cls
                    label_of_class[cls] = label

    if raw.positions is not None and raw.endpoints is None:
        errs.append("positions given without declared endpoints")

    if raw.offsets is not None:
        missing = [n for n in raw.arrows if n not in raw.offsets]
        if missing:
            errs.append(f"offsets missing arrows: {', '.join(missing)}")
        else:
            off = [tuple(raw.offsets[n]) for n in raw.arrows]
            for fi, face in enumerate(faces):
                sx = sum(off[a][0] for a in face.boundary)
                sy = sum(off[a][1] for a in face.boundary)
                if (sx, sy) != (0, 0):
                    errs.append(f"face {fi} offset sum ({sx},{sy}) is not (0,0)")
            if not errs and chi % 2 == 0 and chi <= 2:
                genus = (2 - chi) // 2
                spans = _cycle_classes_span_z2(len(raw.arrows), head, tail, off)
                if genus == 1 and not spans:
                    errs.append("offsets do not span Z^2 on graph cycles")
                if genus != 1 and spans:
                    errs.append(f"offsets span Z^2 but genus is {genus}")
    return errs


def validate(raw: RawDimer) -> DimerModel:
    """Check a raw description and assemble the immutable model.

    Raises DimerError carrying the complete list of violations."""
    errs = violations_of(raw)
    if errs:
        raise DimerError(errs)
    index = {name: i for i, name in enumerate(raw.arrows)}
    faces = tuple(
        Face(sign, tuple(index[n] for n in names)) for sign, names in raw.faces
    )
    num_vertices, head, tail = derive_vertices(len(raw.arrows), faces)

    vertex_names = [f"v{i}" for i in range(num_vertices)]
    if raw.endpoints is not None:
        for a, name in enumerate(raw.arrows):
            t_label, h_label = raw.endpoints[name]
            vertex_names[tail[a]] = str(t_label)
            vertex_names[head[a]] = str(h_label)

    positions = None
    if raw.positions is not None:
        name_to_class = {vertex_names[v]: v for v in range(num_vertices)}
        pos = [None] * num_vertices
        for label, pt in raw.positions.items():
            if label not in name_to_class:
                raise DimerError([f"position for unknown vertex label {label}"])
            pos[name_to_class[label]] = (Fraction(pt[0]), Fraction(pt[1]))
        positions = tuple(pos)

    pos_face_of = [-1] * len(raw.arrows)
    neg_face_of = [-1] * len(raw.arrows)
    for fi, face in enumerate(faces):
        for a in face.boundary:
            if face.sign == POSITIVE:
                pos_face_of[a] = fi
            else:
                neg_face_of[a] = fi

    offsets = None
    if raw.offsets is not None:
        offsets = tuple(
            (int(raw.offsets[n][0]), int(raw.offsets[n][1])) for n in raw.arrows
        )

    return DimerModel(
        name=raw.name,
        arrows=tuple(raw.arrows),
        faces=faces,
        head=head,
        tail=tail,
        num_vertices=num_vertices,
        vertex_names=tuple(vertex_names),
        pos_face_of=tuple(pos_face_of),
        neg_face_of=tuple(neg_face_of),
        offsets=offsets,
        positions=positions,
    )


def euler_genus(D: DimerModel) -> tuple[int, int]:
    chi = D.euler_characteristic
    if chi % 2 != 0 or chi > 2:
        raise DimerError([f"non-surface gluing: Euler characteristic {chi}"])
    return chi, (2 - chi) // 2


# ---------------------------------------------------------------------------
# Spanning tree and homology


@dataclass(frozen=True)
class SpanningTree:
    """Lexicographically least spanning tree (greedy over arrow ids), rooted
    at vertex 0.  parent_arrow[v] joins v to its parent (None at the root);
    parent_sign[v] is +1 when v is the head of that arrow, -1 when the
    tail."""

    tree_arrows: frozenset[int]
    nontree_arrows: tuple[int, ...]
    parent_arrow: tuple
    parent_sign: tuple
    depth: tuple[int, ...]


def spanning_tree(D: DimerModel) -> SpanningTree:
    uf = _UnionFind(D.num_vertices)
    tree = []
    nontree = []
    for a in range(D.num_arrows):
        if uf.union(D.tail[a], D.head[a]):
            tree.append(a)
        else:
            nontree.append(a)
    adj: list[list[tuple[int, int]]] = [[] for _ in range(D.num_vertices)]
    for a in tree:
        adj[D.tail[a]].append((a, 1))  # leaving v toward head
        adj[D.head[a]].append((a, -1))  # leaving v toward tail
    parent_arrow: list = [None] * D.num_vertices
    parent_sign: list = [0] * D.num_vertices
    depth = [0] * D.num_vertices
    seen = [False] * D.num_vertices
    seen[0] = True
    stack = [0]
    while stack:
        v = stack.pop()
        for a, d in adj[v]:
            w = D.head[a] if d == 1 else D.tail[a]
            if not seen[w]:
                seen[w] = True
                parent_arrow[w] = a
                parent_sign[w] = d  # +1: w is the head of a
                depth[w] = depth[v] + 1
                stack.append(w)
    if not all(seen):
        raise DimerError(["dimer is not connected"])
    return SpanningTree(
        tree_arrows=frozenset(tree),
        nontree_arrows=tuple(nontree),
        parent_arrow=tuple(parent_arrow),
        parent_sign=tuple(parent_sign),
        depth=tuple(depth),
    )


def tree_path(D: DimerModel, T: SpanningTree, u: int, v: int):
    """Signed arrow walk u -> v inside the tree: list of (arrow, direction)
    with direction +1 for tail->head traversal."""
    up_from_u = []  # u toward root
    up_from_v = []
    a_, b_ = u, v
    while a_ != b_:
        if T.depth[a_] >= T.depth[b_]:
            ar = T.parent_arrow[a_]
            sg = T.parent_sign[a_]
            up_from_u.append((ar, -sg))  # child->parent goes against parent_sign
            a_ = D.tail[ar] if sg == 1 else D.head[ar]
        else:
            ar = T.parent_arrow[b_]
            sg = T.parent_sign[b_]
            up_from_v.append((ar, sg))  # parent->child
            b_ = D.tail[ar] if sg == 1 else D.head[ar]
    return up_from_u + list(reversed(up_from_v))


def _cycle_classes_span_z2(num_arrows, head, tail, offsets) -> bool:
    """Do the offset classes of graph cycles generate all of Z^2?"""
    uf = _UnionFind(max(max(head), max(tail)) + 1 if num_arrows else 1)
    tree = []
    nontree = []
    for a in range(num_arrows):
        if uf.union(tail[a], head[a]):
            tree.append(a)
        else:
            nontree.append(a)
    # potential per vertex: offset sum of the tree path from the root
    n_vert = max(max(head), max(tail)) + 1
    pot: list = [None] * n_vert
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n_vert)]
    for a in tree:
        adj[tail[a]].append((a, 1))
        adj[head[a]].append((a, -1))
    for start in range(n_vert):
        if pot[start] is not None:
            continue
        pot[start] = (0, 0)
        stack = [start]
        while stack:
            v = stack.pop()
            for a, d in adj[v]:
                w = head[a] if d == 1 else tail[a]
                if pot[w] is None:
                    ox, oy = offsets[a]
                    px, py = pot[v]
                    pot[w] = (px + d * ox, py + d * oy)
                    stack.append(w)
    classes = []
    for a in nontree:
        ox, oy = offsets[a]
        ptx, pty = pot[tail[a]]
        phx, phy = pot[head[a]]
        classes.append((ox + ptx - phx, oy + pty - phy))
    if not classes:
        return False
    A = [[c[0] for c in classes], [c[1] for c in classes]]
    return (
        integer_solve(A, [1, 0]) is not None and integer_solve(A, [0, 1]) is not None
    )


@dataclass(frozen=True)
class TorusHomology:
    """Homology bookkeeping for a torus dimer with offsets.

    cycle_classes[i] is the Z^2 class of the fundamental cycle of
    nontree_arrows[i].  combo_x / combo_y are integer combinations of the
    fundamental cycles whose classes are (1,0) and (0,1): the two weak
    cycles spanning H_1, used to read lattice coordinates off matchings."""

    tree: SpanningTree
    offsets: tuple[tuple[int, int], ...]
    cycle_classes: tuple[tuple[int, int], ...]
    combo_x: tuple[int, ...]
    combo_y: tuple[int, ...]


def torus_homology(D: DimerModel) -> TorusHomology:
    if D.genus != 1:
        raise DimerError(["not a torus dimer"])
    offsets = D.offsets if D.offsets is not None else derive_offsets(D)
    T = spanning_tree(D)
    classes = []
    for a in T.nontree_arrows:
        cx, cy = offsets[a]
        for ar, d in tree_path(D, T, D.head[a], D.tail[a]):
            ox, oy = offsets[ar]
            cx += d * ox
            cy += d * oy
        classes.append((cx, cy))
    A = [[c[0] for c in classes], [c[1] for c in classes]]
    nx = integer_solve(A, [1, 0])
    ny = integer_solve(A, [0, 1])
    if nx is None or ny is None:
        raise DimerError(["offsets do not span Z^2 on graph cycles"])
    return TorusHomology(
        tree=T,
        offsets=offsets,
        cycle_classes=tuple(classes),
        combo_x=tuple(nx),
        combo_y=tuple(ny),
    )


def derive_offsets(D: DimerModel) -> tuple[tuple[int, int], ...]:
    """Crossing numbers for a torus dimer, from scratch.

    Tree arrows get (0,0).  The face-boundary lattice inside the
    fundamental-cycle coordinates Z^m is diagonalized by Smith normal form;
    for a torus the quotient is exactly Z^2 (all elementary divisors 1 and
    corank 2), and the two free coordinates of the transform assign each
    non-tree arrow its offset.  The result is canonical only up to a
    unimodular change of basis, which all downstream comparisons respect."""
    chi, genus = euler_genus(D)
    if genus != 1:
        raise DimerError(["not a torus dimer"])
    T = spanning_tree(D)
    m = len(T.nontree_arrows)
    col_of = {a: i for i, a in enumerate(T.nontree_arrows)}
    M = [[0] * m for _ in D.faces]
    for fi, face in enumerate(D.faces):
        for a in face.boundary:
            if a in col_of:
                M[fi][col_of[a]] += 1
    S, P, Q = smith_normal_form(M)
    rank = sum(1 for i in range(min(len(D.faces), m)) if S[i][i] != 0)
    if m - rank != 2 or any(S[i][i] != 1 for i in range(rank)):
        raise DimerError(["face lattice is not a torus homology quotient"])
    offsets = [(0, 0)] * D.num_arrows
    for i, a in enumerate(T.nontree_arrows):
        offsets[a] = (Q[i][rank], Q[i][rank + 1])
    for face in D.faces:
        sx = sum(offsets[a][0] for a in face.boundary)
        sy = sum(offsets[a][1] for a in face.boundary)
        if (sx, sy) != (0, 0):
            raise DimerError(["derived offsets fail the face-sum-zero check"])
    return tuple(offsets)


def with_offsets(D: DimerModel, offsets) -> DimerModel:
    return DimerModel(
        name=D.name,
        arrows=D.arrows,
        faces=D.faces,
        head=D.head,
        tail=D.tail,
        num_vertices=D.num_vertices,
        vertex_names=D.vertex_names,
        pos_face_of=D.pos_face_of,
        neg_face_of=D.neg_face_of,
        offsets=tuple((int(o[0]), int(o[1])) for o in offsets),
        positions=D.positions,
    )


def with_derived_offsets(D: DimerModel) -> DimerModel:
    if D.offsets is not None:
        return D
    return with_offsets(D, derive_offsets(D))


# ---------------------------------------------------------------------------
# Isomorphism


def _face_signatures(D: DimerModel):
    """Per-face signature: sign, length, and the sorted profile of
    opposite-face lengths around the boundary.  Isomorphisms preserve it."""
    sigs = []
    for face in D.faces:
        profile = []
        for a in face.boundary:
            other = D.neg_face_of[a] if face.sign == POSITIVE else D.pos_face_of[a]
            profile.append(len(D.faces[other].boundary))
        sigs.append((face.sign, len(face.boundary), tuple(sorted(profile))))
    return sigs


def _attempt_match(D1: DimerModel, D2: DimerModel, f1: int, f2: int, rot: int):
    arrow_map: dict[int, int] = {}
    reverse: dict[int, int] = {}
    stack = [(f1, f2, rot)]
    while stack:
        g1, g2, r = stack.pop()
        b1 = D1.faces[g1].boundary
        b2 = D2.faces[g2].boundary
        if len(b1) != len(b2) or D1.faces[g1].sign != D2.faces[g2].sign:
            return None
        k = len(b1)
        for j in range(k):
            a1 = b1[j]
            a2 = b2[(r + j) % k]
            if a1 in arrow_map:
                if arrow_map[a1] != a2:
                    return None
                continue
            if a2 in reverse:
                return None
            arrow_map[a1] = a2
            reverse[a2] = a1
            sign = D1.faces[g1].sign
            o1 = D1.neg_face_of[a1] if sign == POSITIVE else D1.pos_face_of[a1]
            o2 = D2.neg_face_of[a2] if sign == POSITIVE else D2.pos_face_of[a2]
            p1 = D1.faces[o1].boundary.index(a1)
            p2 = D2.faces[o2].boundary.index(a2)
            stack.append((o1, o2, (p2 - p1) % len(D1.faces[o1].boundary)))
    if len(arrow_map) != D1.num_arrows:
        return None
    return arrow_map


def is_isomorphic(D1: DimerModel, D2: DimerModel):
    """Arrow bijection preserving face signs and cyclic boundary order, or
    None.  Deterministic: anchored at a face with the rarest signature,
    candidates scanned in face-index and rotation order."""
    if (
        D1.num_arrows != D2.num_arrows
        or D1.num_faces != D2.num_faces
        or D1.num_vertices != D2.num_vertices
    ):
        return None
    sigs1 = _face_signatures(D1)
    sigs2 = _face_signatures(D2)
    if sorted(sigs1) != sorted(sigs2):
        return None
    counts = {}
    for s in sigs1:
        counts[s] = counts.get(s, 0) + 1
    f1 = min(range(len(sigs1)), key=lambda i: (counts[sigs1[i]], sigs1[i], i))
    target = sigs1[f1]
    for f2 in range(len(sigs2)):
        if sigs2[f2] != target:
            continue
        for rot in range(len(D2.faces[f2].boundary)):
            m = _attempt_match(D1, D2, f1, f2, rot)
            if m is not None:
                return m
    return None
