"""Zigzag cycles, consistency LP, and the universal-cover probe."""

from fractions import Fraction as F

import pytest

from dimerdual.core import DimerError, with_derived_offsets, with_offsets
from dimerdual.zigzag import (
    ZAG,
    ZIG,
    common_arrow_count,
    is_consistent,
    zag_successor,
    zig_successor,
    zigzag_cycles,
    zigzag_probe,
)

from conftest import HANDWRITTEN


def test_successors_c3(load):
    D = load("c3")
    x, y, z = (D.arrow_index(n) for n in "xyz")
    assert zig_successor(D, x) == y  # positive face (x,y,z)
    assert zag_successor(D, x) == z  # negative face (x,z,y)


def test_successor_p2(load):
    D = load("p2")
    assert zig_successor(D, D.arrow_index("x1")) == D.arrow_index("y2")


def test_cycle_counts(load):
    assert [len(z) for z in zigzag_cycles(load("c3"))] == [2, 2, 2]
    assert [len(z) for z in zigzag_cycles(load("conifold"))] == [2, 2, 2, 2]
    assert [len(z) for z in zigzag_cycles(load("p2"))] == [6, 6, 6]
    assert [len(z) for z in zigzag_cycles(load("genus2"))] == [2, 6, 2]


def test_each_arrow_once_per_parity(load):
    for name in HANDWRITTEN:
        D = load(name)
        cycles = zigzag_cycles(D)
        assert sum(len(z) for z in cycles) == 2 * D.num_arrows
        zigs = sorted(
            a for z in cycles for a, p in zip(z.arrows, z.parities) if p == ZIG
        )
        zags = sorted(
            a for z in cycles for a, p in zip(z.arrows, z.parities) if p == ZAG
        )
        assert zigs == list(range(D.num_arrows))
        assert zags == list(range(D.num_arrows))


def test_cycles_compose(load):
    for name in HANDWRITTEN:
        D = load(name)
        for z in zigzag_cycles(D):
            k = len(z)
            for i in range(k):
                assert D.head[z.arrows[i]] == D.tail[z.arrows[(i + 1) % k]]
            for i in range(k):
                assert z.parities[i] == -z.parities[(i + 1) % k] or k == 1


def test_common_arrow_counts(load):
    D = load("p2")
    cycles = zigzag_cycles(D)
    assert len(cycles) == 3
    for i in range(3):
        for j in range(3):
            expect = 6 if i == j else 3
            assert common_arrow_count(cycles[i], cycles[j]) == expect
    D = load("c3")
    cycles = zigzag_cycles(D)
    x = D.arrow_index("x")
    through_x = [z for z in cycles if x in z.arrow_set]
    assert len(through_x) == 2
    assert common_arrow_count(*through_x) == 1


def test_homology_attached_with_offsets(load):
    D = with_derived_offsets(load("p2"))
    cycles = zigzag_cycles(D)
    assert all(z.homology is not None for z in cycles)
    assert all(z.homology != (0, 0) for z in cycles)
    D0 = load("p2")
    assert all(z.homology is None for z in zigzag_cycles(D0))


def test_consistent_catalog(load):
    for name, margin in [("c3", F(2, 3)), ("p2", F(2, 3)), ("conifold", F(1, 2))]:
        v = is_consistent(load(name))
        assert v.status == "consistent"
        assert v.margin == margin
        assert bool(v)


def test_consistency_witness_is_valid_grading(load):
    for name in ["c3", "conifold", "p2", "p1xp1"]:
        D = load(name)
        v = is_consistent(D)
        assert v.status == "consistent"
        R = v.r_charge
        assert all(0 < r < 2 for r in R)
        for face in D.faces:
            assert sum(R[a] for a in face.boundary) == 2
        ends = [0] * D.num_vertices
        tot = [F(0)] * D.num_vertices
        for a in range(D.num_arrows):
            for vx in (D.head[a], D.tail[a]):
                ends[vx] += 1
                tot[vx] += 1 - R[a]
        assert all(t == 2 for t in tot)


def test_inconsistent_example(load):
    v = is_consistent(load("inconsistent"))
    assert v.status == "inconsistent"
    assert not bool(v)
    assert v.certificate is not None


def test_genus2_undecided(load):
    v = is_consistent(load("genus2"))
    assert v.status == "undecided"


def test_probe_clean_on_consistent(load):
    for name in ["c3", "conifold", "p2", "p1xp1"]:
        assert zigzag_probe(load(name)) == []


def test_probe_finds_inconsistency_witness(load):
    D = load("inconsistent")
    violations = zigzag_probe(D)
    assert violations
    x = D.arrow_index("x")
    mine = [v for v in violations if v.arrow == x]
    assert mine
    first = min(mine, key=lambda v: (v.zag_index + v.zig_index, v.zag_index))
    assert (first.zag_index, first.zig_index) == (3, 3)


def test_probe_depth_zero_empty(load):
    assert zigzag_probe(load("inconsistent"), depth=0) == []


def test_probe_invariant_under_basis_change(load):
    D = with_derived_offsets(load("inconsistent"))
    # unimodular change of the offset basis
    changed = with_offsets(
        D, [(dx + dy, dy) for dx, dy in D.offsets]
    )
    v1 = zigzag_probe(D)
    v2 = zigzag_probe(changed)
    assert v1 == v2
    Dc = with_derived_offsets(load("p2"))
    changed = with_offsets(Dc, [(dy, -dx) for dx, dy in Dc.offsets])
    assert zigzag_probe(changed) == []


def test_probe_genus2_rejected(load):
    with pytest.raises(DimerError):
        zigzag_probe(load("genus2"))
