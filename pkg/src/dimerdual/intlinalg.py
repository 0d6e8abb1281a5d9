"""Exact integer linear algebra.

Smith normal form with both transform matrices, integer linear solving, and
a small rational Gaussian solver.  Matrices are lists of lists of ints (or
Fractions for the rational solver); all arithmetic is exact.
"""

from __future__ import annotations

from fractions import Fraction


def identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(A, B):
    rows, inner, cols = len(A), len(B), len(B[0]) if B else 0
    return [
        [sum(A[i][k] * B[k][j] for k in range(inner)) for j in range(cols)]
        for i in range(rows)
    ]


def mat_vec(A, v):
    return [sum(A[i][k] * v[k] for k in range(len(v))) for i in range(len(A))]


def mat_det(A) -> Fraction:
    """Determinant by fraction-free-ish Gaussian elimination, exact."""
    n = len(A)
    M = [[Fraction(x) for x in row] for row in A]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det *= M[c][c]
        inv = 1 / M[c][c]
        for r in range(c + 1, n):
            if M[r][c] != 0:
                f = M[r][c] * inv
                for j in range(c, n):
                    M[r][j] -= f * M[c][j]
    return det


def smith_normal_form(A):
    """Return (S, P, Q) with P*A*Q = S, P and Q unimodular, and S diagonal
    with nonnegative entries s_1 | s_2 | ... along the diagonal."""
    m = len(A)
    n = len(A[0]) if m else 0
    S = [list(map(int, row)) for row in A]
    P = identity(m)
    Q = identity(n)

    def row_swap(i, j):
        S[i], S[j] = S[j], S[i]
        P[i], P[j] = P[j], P[i]

    def col_swap(i, j):
        for r in S:
            r[i], r[j] = r[j], r[i]
        for r in Q:
            r[i], r[j] = r[j], r[i]

    def row_sub(i, j, q):
        # row i -= q * row j
        for c in range(n):
            S[i][c] -= q * S[j][c]
        for c in range(m):
            P[i][c] -= q * P[j][c]

    def col_sub(j, i, q):
        # column j -= q * column i
        for r in S:
            r[j] -= q * r[i]
        for r in Q:
            r[j] -= q * r[i]

    def row_neg(i):
        S[i] = [-x for x in S[i]]
        P[i] = [-x for x in P[i]]

    for t in range(min(m, n)):
        while True:
            pivot = None
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    v = abs(S[i][j])
                    if v and (best is None or v < best):
                        best, pivot = v, (i, j)
            if pivot is None:
                return S, P, Q
            if pivot[0] != t:
                row_swap(t, pivot[0])
            if pivot[1] != t:
                col_swap(t, pivot[1])

            dirty = True
            while dirty:
                dirty = False
                for i in range(t + 1, m):
                    if S[i][t] != 0:
                        q = S[i][t] // S[t][t]
                        row_sub(i, t, q)
                        if S[i][t] != 0:
                            row_swap(t, i)
                            dirty = True
                for j in range(t + 1, n):
                    if S[t][j] != 0:
                        q = S[t][j] // S[t][t]
                        col_sub(j, t, q)
                        if S[t][j] != 0:
                            col_swap(t, j)
                            dirty = True
            if S[t][t] < 0:
                row_neg(t)

            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if S[i][j] % S[t][t] != 0:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            # pull the offending row into row t so the next round's pivot
            # becomes a gcd refining the divisibility chain
            for c in range(n):
                S[t][c] += S[bad][c]
            for c in range(m):
                P[t][c] += P[bad][c]
    return S, P, Q


def integer_solve(A, b):
    """One integer solution x of A x = b (free coordinates set to 0), or None."""
    m = len(A)
    n = len(A[0]) if m else 0
    S, P, Q = smith_normal_form(A)
    c = mat_vec(P, list(b))
    y = [0] * n
    for i in range(m):
        s = S[i][i] if i < n else 0
        if s != 0:
            if c[i] % s != 0:
                return None
            y[i] = c[i] // s
        elif c[i] != 0:
            return None
    return mat_vec(Q, y)


def solve_rational(A, b):
    """One exact solution of A x = b over the rationals (free coordinates 0),
    or None if the system is inconsistent.  A is m x n, b length m."""
    m = len(A)
    n = len(A[0]) if m else 0
    M = [[Fraction(x) for x in row] + [Fraction(b[i])] for i, row in enumerate(A)]
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(m):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append((r, c))
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if M[i][n] != 0:
            return None
    x = [Fraction(0)] * n
    for (i, c) in pivots:
        x[c] = M[i][n]
    return x
