"""Exact linear programming over the rationals, with certificates.

Two-phase primal simplex with Bland's rule, so termination is guaranteed.
The tableau is kept integral: every entry is a subdeterminant of the scaled
input, and each pivot divides exactly by the previous pivot element
(Sylvester's identity), so there is no rounding anywhere.  Variables are
free (unbounded in both directions) and are split internally.

Every result carries a certificate -- the optimal dual vector, a Farkas
infeasibility vector, or an improving ray -- and the certificate is checked
against the original constraints before the result is returned; a failed
check raises LPInternalError rather than returning a wrong verdict.

Constraint format: (coefficients, sense, rhs) with sense one of "<=", ">=",
"==".  All numbers may be ints or Fractions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

SENSES = ("<=", ">=", "==")


class LPInternalError(AssertionError):
    """The solver contradicted its own certificate; indicates a bug."""


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: tuple[Fraction, ...] | None = None
    objective: Fraction | None = None
    dual: tuple[Fraction, ...] | None = None
    farkas: tuple[Fraction, ...] | None = None
    ray: tuple[Fraction, ...] | None = None


def _dot(coeffs, x):
    return sum((Fraction(a) * b for a, b in zip(coeffs, x)), Fraction(0))


def check_feasible(constraints, x) -> bool:
    for coeffs, sense, rhs in constraints:
        v = _dot(coeffs, x)
        rhs = Fraction(rhs)
        if sense == "<=" and v > rhs:
            return False
        if sense == ">=" and v < rhs:
            return False
        if sense == "==" and v != rhs:
            return False
    return True


def check_farkas(num_vars, constraints, y) -> bool:
    """y combines the constraints into the contradiction 0 <= negative."""
    if len(y) != len(constraints):
        return False
    for yi, (_, sense, _) in zip(y, constraints):
        if sense == "<=" and yi < 0:
            return False
        if sense == ">=" and yi > 0:
            return False
    for j in range(num_vars):
        if sum((yi * Fraction(c[0][j]) for yi, c in zip(y, constraints)), Fraction(0)) != 0:
            return False
    total = sum((yi * Fraction(c[2]) for yi, c in zip(y, constraints)), Fraction(0))
    return total < 0


def check_optimal(num_vars, objective, constraints, x, y) -> bool:
    """x primal feasible, y dual feasible for the maximization, zero gap."""
    if not check_feasible(constraints, x):
        return False
    if len(y) != len(constraints):
        return False
    for yi, (_, sense, _) in zip(y, constraints):
        if sense == "<=" and yi < 0:
            return False
        if sense == ">=" and yi > 0:
            return False
    for j in range(num_vars):
        lhs = sum((yi * Fraction(c[0][j]) for yi, c in zip(y, constraints)), Fraction(0))
        if lhs != Fraction(objective[j]):
            return False
    ybound = sum((yi * Fraction(c[2]) for yi, c in zip(y, constraints)), Fraction(0))
    return ybound == _dot(objective, x)


def _den_lcm(values) -> int:
    out = 1
    for v in values:
        out = lcm(out, Fraction(v).denominator)
    return out


def maximize(objective, constraints, num_vars=None) -> LPResult:
    n = len(objective) if num_vars is None else num_vars
    cfrac = [Fraction(v) for v in objective]
    if len(cfrac) != n:
        raise ValueError("objective length disagrees with num_vars")
    L0 = _den_lcm(cfrac)
    cint = [int(v * L0) for v in cfrac]

    # Scale each row to integers and normalize to a nonnegative rhs.  The
    # internal row i equals factor_i times the original row i (factor_i is
    # positive-scale times an optional sign flip), so internal dual values
    # map back by multiplication with factor_i.
    irows = []  # (int coeffs, sense, int rhs, factor)
    for coeffs, sense, rhs in constraints:
        if sense not in SENSES:
            raise ValueError(f"bad sense {sense!r}")
        coeffs = [Fraction(v) for v in coeffs]
        if len(coeffs) != n:
            raise ValueError("constraint length disagrees with num_vars")
        rhs = Fraction(rhs)
        s = _den_lcm(coeffs + [rhs])
        a = [int(v * s) for v in coeffs]
        b = int(rhs * s)
        f = 1
        if b < 0:
            a = [-v for v in a]
            b = -b
            f = -1
            sense = {"<=": ">=", ">=": "<=", "==": "=="}[sense]
        irows.append((a, sense, b, Fraction(f * s)))

    m = len(irows)
    cols: list[tuple] = []
    for j in range(n):
        cols.append(("var", j, 1))
        cols.append(("var", j, -1))
    slack_col: list[int | None] = [None] * m
    art_col: list[int | None] = [None] * m
    for i, (a, sense, b, fac) in enumerate(irows):
        if sense == "<=":
            slack_col[i] = len(cols)
            cols.append(("slack", i, 1))
        elif sense == ">=":
            slack_col[i] = len(cols)
            cols.append(("slack", i, -1))
    for i, (a, sense, b, fac) in enumerate(irows):
        if sense != "<=":
            art_col[i] = len(cols)
            cols.append(("art", i))
    N = len(cols)

    T = [[0] * (N + 1) for _ in range(m + 1)]
    for i, (a, sense, b, fac) in enumerate(irows):
        row = T[i]
        for j in range(n):
            row[2 * j] = a[j]
            row[2 * j + 1] = -a[j]
        if slack_col[i] is not None:
            row[slack_col[i]] = 1 if sense == "<=" else -1
        if art_col[i] is not None:
            row[art_col[i]] = 1
        row[N] = b
    basis = [slack_col[i] if irows[i][1] == "<=" else art_col[i] for i in range(m)]
    D = 1

    def pivot(r, e):
        nonlocal D
        p = T[r][e]
        if p > 0:
            Tr = T[r]
            for i in range(m + 1):
                if i == r:
                    continue
                Ti = T[i]
                f = Ti[e]
                if f == 0 and p == D:
                    continue
                for jj in range(N + 1):
                    Ti[jj] = (p * Ti[jj] - f * Tr[jj]) // D
            D = p
        else:
            # Degenerate pivot on a negative element: only legal on a row at
            # value zero (used when expelling artificials).  Equivalent to
            # negating the row first, which keeps the denominator positive.
            if T[r][N] != 0:
                raise LPInternalError("negative pivot on a nonzero row")
            Tr = T[r]
            for i in range(m + 1):
                if i == r:
                    continue
                Ti = T[i]
                f = Ti[e]
                for jj in range(N + 1):
                    Ti[jj] = (f * Tr[jj] - p * Ti[jj]) // D
            T[r] = [-v for v in Tr]
            D = -p
        basis[r] = e

    def set_objective(cvec):
        row = T[m]
        for j in range(N + 1):
            acc = -cvec[j] * D if j < N else 0
            for i in range(m):
                cb = cvec[basis[i]]
                if cb:
                    acc += cb * T[i][j]
            row[j] = acc

    def bland(banned):
        """Run simplex to optimality; return None, or the entering column
        index of an unbounded direction."""
        while True:
            Tm = T[m]
            e = -1
            for j in range(N):
                if Tm[j] < 0 and not banned(j):
                    e = j
                    break
            if e < 0:
                return None
            r = -1
            for i in range(m):
                tie = T[i][e]
                if tie > 0:
                    if r < 0:
                        r = i
                    else:
                        lhs = T[i][N] * T[r][e]
                        rhs = T[r][N] * T[i][e]
                        if lhs < rhs or (lhs == rhs and basis[i] < basis[r]):
                            r = i
            if r < 0:
                return e
            pivot(r, e)

    def extract_x():
        x = [Fraction(0)] * n
        for i in range(m):
            info = cols[basis[i]]
            if info[0] == "var":
                x[info[1]] += info[2] * Fraction(T[i][N], D)
        return x

    def internal_duals(cvec):
        y = []
        for i in range(m):
            colidx = art_col[i] if art_col[i] is not None else slack_col[i]
            y.append(Fraction(T[m][colidx], D) + cvec[colidx])
        return y

    # ---- phase 1 ----
    c1 = [0] * N
    for i in range(m):
        if art_col[i] is not None:
            c1[art_col[i]] = -1
    set_objective(c1)
    if bland(lambda j: False) is not None:
        raise LPInternalError("phase 1 unbounded")
    if T[m][N] < 0:
        yint = internal_duals(c1)
        y = tuple(yi * irows[i][3] for i, yi in enumerate(yint))
        if not check_farkas(n, constraints, y):
            raise LPInternalError("Farkas certificate failed verification")
        return LPResult("infeasible", farkas=y)

    # expel basic artificials (degenerate pivots; redundant rows keep theirs,
    # but such rows are identically zero on real columns and stay that way)
    for r in range(m):
        if cols[basis[r]][0] == "art":
            e = next(
                (j for j in range(N) if cols[j][0] != "art" and T[r][j] != 0), None
            )
            if e is not None:
                pivot(r, e)

    # ---- phase 2 ----
    c2 = [0] * N
    for j, info in enumerate(cols):
        if info[0] == "var":
            c2[j] = info[2] * cint[info[1]]
    set_objective(c2)
    res = bland(lambda j: cols[j][0] == "art")
    if res is not None:
        e = res
        d = [Fraction(0)] * n
        info = cols[e]
        if info[0] == "var":
            d[info[1]] += info[2]
        for i in range(m):
            bi = cols[basis[i]]
            if bi[0] == "var":
                d[bi[1]] += bi[2] * -Fraction(T[i][e], D)
        x0 = extract_x()
        ok = check_feasible(constraints, x0) and _dot(objective, d) > 0
        for coeffs, sense, rhs in constraints:
            v = _dot(coeffs, d)
            if sense == "<=" and v > 0:
                ok = False
            if sense == ">=" and v < 0:
                ok = False
            if sense == "==" and v != 0:
                ok = False
        if not ok:
            raise LPInternalError("unbounded ray failed verification")
        return LPResult("unbounded", x=tuple(x0), ray=tuple(d))

    x = tuple(extract_x())
    obj = Fraction(T[m][N], D) / L0
    yint = internal_duals([Fraction(v) for v in c2])
    y = tuple(yi * irows[i][3] / L0 for i, yi in enumerate(yint))
    if not check_optimal(n, objective, constraints, x, y):
        raise LPInternalError("optimality certificate failed verification")
    return LPResult("optimal", x=x, objective=obj, dual=y)


def minimize(objective, constraints, num_vars=None) -> LPResult:
    """Minimize by negation.  The returned dual is for the negated problem
    and is omitted to avoid sign confusion; use maximize when duals matter."""
    res = maximize([-Fraction(v) for v in objective], constraints, num_vars)
    if res.status == "optimal":
        return LPResult("optimal", x=res.x, objective=-res.objective)
    return res
