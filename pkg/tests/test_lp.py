"""Exact LP: handcrafted cases plus randomized comparison against a
brute-force vertex-enumeration oracle."""

from fractions import Fraction as F
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from dimerdual.intlinalg import solve_rational
from dimerdual.rationallp import (
    check_farkas,
    check_feasible,
    check_optimal,
    maximize,
    minimize,
)


def test_simple_box_optimum():
    res = maximize([1, 1], [([1, 0], "<=", 2), ([0, 1], "<=", 3)])
    assert res.status == "optimal"
    assert res.x == (2, 3)
    assert res.objective == 5
    assert check_optimal(2, [1, 1], [([1, 0], "<=", 2), ([0, 1], "<=", 3)], res.x, res.dual)


def test_infeasible_gives_farkas():
    cons = [([1], ">=", 1), ([1], "<=", 0)]
    res = maximize([1], cons)
    assert res.status == "infeasible"
    assert check_farkas(1, cons, res.farkas)


def test_unbounded_gives_ray():
    cons = [([1], ">=", 0)]
    res = maximize([1], cons)
    assert res.status == "unbounded"
    assert res.ray == (1,)


def test_equalities_and_interval_bounds():
    # vars R1..R3, t: face condition R1+R2+R3 == 2 with R in [t, 2-t]
    cons = [([1, 1, 1, 0], "==", 2)]
    for i in range(3):
        lo = [0] * 4
        lo[i], lo[3] = 1, -1
        hi = [0] * 4
        hi[i], hi[3] = 1, 1
        cons.append((lo, ">=", 0))
        cons.append((hi, "<=", 2))
    res = maximize([0, 0, 0, 1], cons)
    assert res.status == "optimal"
    assert res.objective == F(2, 3)
    assert res.x == (F(2, 3), F(2, 3), F(2, 3), F(2, 3))


def test_free_variables_go_negative():
    res = minimize([2, 1], [([1, 1], ">=", 3), ([1, 0], "<=", 5), ([0, 1], "<=", 5)])
    assert res.status == "optimal"
    assert res.objective == 1
    assert res.x == (-2, 5)


def test_fractional_data():
    res = maximize([F(1, 3)], [([F(2, 7)], "<=", F(5, 3))])
    assert res.status == "optimal"
    assert res.objective == F(35, 18)
    assert res.x == (F(35, 6),)


def test_redundant_equalities():
    # the third row is the sum of the first two
    cons = [
        ([1, 0], "==", 1),
        ([0, 1], "==", 2),
        ([1, 1], "==", 3),
        ([1, 0], "<=", 10),
    ]
    res = maximize([1, 1], cons)
    assert res.status == "optimal"
    assert res.x == (1, 2)


def test_degenerate_vertex():
    # three lines through the same point
    cons = [
        ([1, 0], "<=", 1),
        ([0, 1], "<=", 1),
        ([1, 1], "<=", 2),
    ]
    res = maximize([1, 1], cons)
    assert res.status == "optimal"
    assert res.objective == 2


def test_contradictory_equalities():
    cons = [([1, 1], "==", 1), ([1, 1], "==", 2)]
    res = maximize([0, 0], cons)
    assert res.status == "infeasible"
    assert check_farkas(2, cons, res.farkas)


def test_zero_objective_feasibility_probe():
    cons = [([1, 2], "==", 4), ([3, -1], "==", 5)]
    res = maximize([0, 0], cons)
    assert res.status == "optimal"
    assert res.x == (2, 1)


def _oracle_max(n, objective, constraints):
    """Enumerate candidate vertices as solutions of n-subsets of tight
    constraints.  Valid whenever the feasible region is bounded (callers add
    a box), since a nonempty polytope attains its max at a vertex and every
    vertex solves some n-subset."""
    best = None
    for subset in combinations(range(len(constraints)), n):
        A = [list(constraints[i][0]) for i in subset]
        b = [constraints[i][2] for i in subset]
        x = solve_rational(A, b)
        if x is None:
            continue
        if check_feasible(constraints, x):
            val = sum((F(c) * v for c, v in zip(objective, x)), F(0))
            if best is None or val > best:
                best = val
    return best


@st.composite
def _lp_instances(draw):
    n = draw(st.integers(1, 3))
    m = draw(st.integers(0, 5))
    coeff = st.integers(-4, 4)
    objective = [draw(coeff) for _ in range(n)]
    cons = []
    for _ in range(m):
        row = [draw(coeff) for _ in range(n)]
        sense = draw(st.sampled_from(["<=", ">=", "=="]))
        rhs = draw(st.integers(-6, 6))
        cons.append((row, sense, rhs))
    R = 7
    for j in range(n):
        e = [0] * n
        e[j] = 1
        cons.append((e, "<=", R))
        cons.append((e, ">=", -R))
    return n, objective, cons


@settings(max_examples=150, deadline=None)
@given(_lp_instances())
def test_against_vertex_oracle(inst):
    n, objective, cons = inst
    res = maximize(objective, cons)
    best = _oracle_max(n, objective, cons)
    if best is None:
        assert res.status == "infeasible"
        assert check_farkas(n, cons, res.farkas)
    else:
        assert res.status == "optimal"
        assert res.objective == best
        assert check_optimal(n, objective, cons, res.x, res.dual)


@settings(max_examples=60, deadline=None)
@given(_lp_instances())
def test_minimize_agrees_with_negated_maximize(inst):
    n, objective, cons = inst
    lo = minimize(objective, cons)
    hi = maximize([-v for v in objective], cons)
    assert lo.status == hi.status
    if lo.status == "optimal":
        assert lo.objective == -hi.objective


def test_rejects_bad_sense():
    with pytest.raises(ValueError):
        maximize([1], [([1], "<", 1)])
