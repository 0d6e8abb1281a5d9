"""Perfect matchings, lattice coordinates, stability, and the stable complex."""

import itertools

import pytest

from dimerdual.core import DimerError, torus_homology, tree_path, with_derived_offsets
from dimerdual.geometry import area2, point_in_polygon
from dimerdual.matching import (
    FORWARD,
    INVERSE,
    StableComplexError,
    boundary_arc_check,
    boundary_halfcircle_check,
    boundary_zigzags,
    degree,
    enumerate_matchings,
    halfspace_disc_check,
    is_stable,
    matching_coordinates,
    matching_lattice,
    sample_weak_walks,
    stable_complex,
    tree_potentials,
    walk_endpoints,
)
from dimerdual.zigzag import zigzag_cycles

from conftest import HANDWRITTEN

TORUS = ["c3", "conifold", "p2", "p1xp1", "inconsistent"]
CONSISTENT = ["c3", "conifold", "p2", "p1xp1"]


def brute_matchings(D):
    out = []
    for mask in range(1 << D.num_arrows):
        m = frozenset(i for i in range(D.num_arrows) if mask >> i & 1)
        if all(sum(1 for a in f.boundary if a in m) == 1 for f in D.faces):
            out.append(m)
    out.sort(key=lambda m: tuple(sorted(m)))
    return out


@pytest.mark.parametrize("name", HANDWRITTEN)
def test_enumeration_matches_brute_force(load, name):
    D = load(name)
    assert enumerate_matchings(D) == brute_matchings(D)


def test_known_matchings(load):
    c3 = load("c3")
    assert enumerate_matchings(c3) == [
        frozenset({c3.arrow_index(n)}) for n in ("x", "y", "z")
    ]
    conifold = load("conifold")
    assert enumerate_matchings(conifold) == [
        frozenset({conifold.arrow_index(n)}) for n in ("a1", "a2", "b1", "b2")
    ]
    genus2 = load("genus2")
    assert len(enumerate_matchings(genus2)) == 5


@pytest.mark.parametrize("name", TORUS)
def test_matching_sizes(load, name):
    D = load(name)
    for m in enumerate_matchings(D):
        assert len(m) == D.num_faces // 2


# --- walks and degrees ------------------------------------------------------


def test_walk_endpoints(load):
    D = load("p2")
    x1, y2 = D.arrow_index("x1"), D.arrow_index("y2")
    v1, v3 = D.vertex_index("1"), D.vertex_index("3")
    assert walk_endpoints(D, [(x1, FORWARD), (y2, FORWARD)]) == (v1, v3)
    assert walk_endpoints(D, [(y2, INVERSE), (x1, INVERSE)]) == (v3, v1)
    assert walk_endpoints(D, []) is None
    with pytest.raises(DimerError):
        walk_endpoints(D, [(x1, FORWARD), (x1, FORWARD)])


def test_degree_signs(load):
    D = load("p2")
    m = enumerate_matchings(D)[0]
    a = next(iter(m))
    assert degree(D, m, [(a, FORWARD)]) == 1
    assert degree(D, m, [(a, INVERSE)]) == -1


def test_tree_potentials_match_tree_path_degrees(load):
    for name in CONSISTENT:
        D = with_derived_offsets(load(name))
        hom = torus_homology(D)
        for m in enumerate_matchings(D):
            pi = tree_potentials(D, hom.tree, m)
            for u in range(D.num_vertices):
                for v in range(D.num_vertices):
                    walk = tree_path(D, hom.tree, u, v)
                    assert degree(D, m, walk) == pi[v] - pi[u]


def inverse_walk(walk):
    return [(a, -d) for a, d in reversed(walk)]


def combination_walk(D, hom, combo):
    """Closed walk based at vertex 0 realizing an integer combination of the
    fundamental cycles of the non-tree arrows."""
    T = hom.tree
    walk = []
    for idx, e in enumerate(T.nontree_arrows):
        n = combo[idx]
        if n == 0:
            continue
        base = D.tail[e]
        cyc = [(e, FORWARD)] + tree_path(D, T, D.head[e], D.tail[e])
        seg = cyc if n > 0 else inverse_walk(cyc)
        walk += tree_path(D, T, 0, base)
        for _ in range(abs(n)):
            walk += seg
        walk += tree_path(D, T, base, 0)
    return walk


def walk_class(D, walk):
    hx = hy = 0
    for a, d in walk:
        hx += d * D.offsets[a][0]
        hy += d * D.offsets[a][1]
    return (hx, hy)


@pytest.mark.parametrize("name", TORUS)
def test_coordinates_equal_degrees_on_explicit_walks(load, name):
    D = with_derived_offsets(load(name))
    hom = torus_homology(D)
    wx = combination_walk(D, hom, hom.combo_x)
    wy = combination_walk(D, hom, hom.combo_y)
    for w in (wx, wy):
        assert walk_endpoints(D, w) in (None, (0, 0))
    assert walk_class(D, wx) == (1, 0)
    assert walk_class(D, wy) == (0, 1)
    for m in enumerate_matchings(D):
        assert matching_coordinates(D, hom, m) == (
            degree(D, m, wx),
            degree(D, m, wy),
        )


@pytest.mark.parametrize("name", ["p2", "p1xp1"])
def test_degree_differences_are_homology_pairings(load, name):
    D = with_derived_offsets(load(name))
    hom = torus_homology(D)
    ms = enumerate_matchings(D)
    coords = [matching_coordinates(D, hom, m) for m in ms]
    for walk in sample_weak_walks(D, 30, seed=11):
        ends = walk_endpoints(D, walk)
        closed = list(walk)
        if ends is not None:
            closed += tree_path(D, hom.tree, ends[1], ends[0])
        hx, hy = walk_class(D, closed)
        degs = [degree(D, m, closed) for m in ms]
        for i in range(len(ms)):
            for j in range(len(ms)):
                dx = coords[i][0] - coords[j][0]
                dy = coords[i][1] - coords[j][1]
                assert degs[i] - degs[j] == hx * dx + hy * dy


# --- the matching polygon ---------------------------------------------------


def test_lattice_shapes(load):
    lat = matching_lattice(load("c3"))
    assert len(lat.hull) == 3
    assert area2(list(lat.hull)) == 1
    assert lat.interior_points == ()
    assert len(lat.boundary_points) == 3
    assert sorted(lat.coords) == sorted(lat.hull)

    lat = matching_lattice(load("conifold"))
    assert len(lat.hull) == 4
    assert area2(list(lat.hull)) == 2
    assert lat.interior_points == ()
    assert len(lat.boundary_points) == 4

    lat = matching_lattice(load("p2"))
    assert len(lat.hull) == 3
    assert area2(list(lat.hull)) == 3
    assert lat.interior_points == ((0, 0),)
    assert len(lat.boundary_points) == 3
    assert len(lat.lattice_points) == 4

    lat = matching_lattice(load("p1xp1"))
    assert len(lat.hull) == 4
    assert area2(list(lat.hull)) == 4
    assert lat.interior_points == ((0, 0),)
    assert len(lat.boundary_points) == 4
    assert len(lat.lattice_points) == 5


@pytest.mark.parametrize("name", TORUS)
def test_all_coordinates_lie_in_hull(load, name):
    lat = matching_lattice(load(name))
    for c in lat.coords:
        assert point_in_polygon(c, list(lat.hull)) != "out"
    assert sum(len(lat.matchings_at(p)) for p in set(lat.coords)) == len(
        lat.matchings
    )


def test_lattice_normalization_without_interior_point(load):
    lat = matching_lattice(load("conifold"))
    assert lat.hull[0] == (0, 0)
    assert min(lat.hull) == (0, 0)


def test_genus2_has_no_lattice(load):
    with pytest.raises(DimerError):
        matching_lattice(load("genus2"))


# --- stability --------------------------------------------------------------


def test_stability_conifold_pairs(load):
    D = load("conifold")
    a1, a2 = D.arrow_index("a1"), D.arrow_index("a2")
    b1, b2 = D.arrow_index("b1"), D.arrow_index("b2")
    r0, r1 = D.vertex_index("1"), D.vertex_index("2")
    assert is_stable(D, r0, [{a1}, {b1}])
    assert is_stable(D, r0, [{b1}, {b2}])
    assert not is_stable(D, r0, [{a1}, {a2}])
    assert is_stable(D, r1, [{a1}, {a2}])
    assert not is_stable(D, r1, [{b1}, {b2}])


def test_single_vertex_everything_stable(load):
    D = load("c3")
    ms = enumerate_matchings(D)
    assert is_stable(D, 0, ms)


def test_stable_complex_counts(load):
    for name, (pts, edges) in {
        "c3": (3, 3),
        "conifold": (4, 5),
        "p2": (4, 6),
        "p1xp1": (5, 8),
    }.items():
        D = load(name)
        cx = stable_complex(D)
        assert len(cx.points) == pts
        assert len(cx.edges) == edges
        assert len(cx.triangles) == D.num_vertices


def test_stable_complex_root_choice_flips_diagonal(load):
    D = load("conifold")
    cx0 = stable_complex(D, 0)
    cx1 = stable_complex(D, 1)
    assert len(cx0.edges) == len(cx1.edges) == 5
    assert set(cx0.edges) != set(cx1.edges)


def test_stable_complex_rejects_inconsistent_dimer(load):
    with pytest.raises(StableComplexError) as e:
        stable_complex(load("inconsistent"))
    assert e.value.diagnostics


# --- boundary zigzag readout ------------------------------------------------


@pytest.mark.parametrize("name", CONSISTENT)
def test_boundary_zigzags_biject_with_cycles(load, name):
    D = with_derived_offsets(load(name))
    bz = boundary_zigzags(D)
    cycles = zigzag_cycles(D)
    assert len(bz) == len(cycles)
    assert sorted((z.arrows, z.parities) for z in bz) == sorted(
        (z.arrows, z.parities) for z in cycles
    )
    lat = matching_lattice(D)
    assert len(bz) == len(lat.boundary_points)


# --- structural property checkers -------------------------------------------


@pytest.mark.parametrize("name", CONSISTENT)
def test_boundary_arc_property(load, name):
    assert boundary_arc_check(load(name)) == []


@pytest.mark.parametrize("name", CONSISTENT)
def test_halfspace_discs(load, name):
    D = load(name)
    walks = sample_weak_walks(D, 40, seed=7)
    diagnostics, stats = halfspace_disc_check(D, 0, walks)
    assert diagnostics == []
    assert stats["walks"] == 40


@pytest.mark.parametrize("name", CONSISTENT)
def test_boundary_halfcircles(load, name):
    D = load(name)
    walks = sample_weak_walks(D, 40, seed=7)
    assert boundary_halfcircle_check(D, 0, walks) == []


def test_sampler_is_deterministic(load):
    D = load("p2")
    assert sample_weak_walks(D, 10, seed=3) == sample_weak_walks(D, 10, seed=3)
    assert sample_weak_walks(D, 10, seed=3) != sample_weak_walks(D, 10, seed=4)
    for walk in sample_weak_walks(D, 10, seed=3):
        assert len(walk) <= 2 * D.num_arrows
        walk_endpoints(D, walk)  # composes


def test_triangles_use_stable_triples_only(load):
    D = load("p1xp1")
    cx = stable_complex(D)
    lat = cx.lattice
    for i, j, k in cx.triangles:
        assert is_stable(
            lat.dimer,
            0,
            [lat.matchings[cx.reps[i]], lat.matchings[cx.reps[j]], lat.matchings[cx.reps[k]]],
        )
    for i, j in itertools.combinations(range(len(cx.points)), 2):
        stable = is_stable(
            lat.dimer, 0, [lat.matchings[cx.reps[i]], lat.matchings[cx.reps[j]]]
        )
        assert ((i, j) in cx.edges) == stable
