"""Small exact linear algebra over Q (lists of Fraction rows)."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list  # list[list[Fraction]]


class SingularMatrix(ArithmeticError):
    pass


def independent_rows(vectors: Sequence[dict]) -> list[int]:
    """Indices of a maximal linearly independent subset, chosen greedily in order.

    Vectors are sparse dicts coordinate -> Fraction.
    """
    pivots: dict = {}  # pivot coordinate -> reduced vector with coefficient 1 there
    chosen = []
    for idx, v in enumerate(vectors):
        r = {k: Fraction(c) for k, c in v.items() if c}
        for p, pv in pivots.items():
            c = r.get(p)
            if c:
                for k, x in pv.items():
                    y = r.get(k, 0) - c * x
                    if y:
                        r[k] = y
                    else:
                        r.pop(k, None)
        if not r:
            continue
        p = min(r)
        inv = 1 / r[p]
        r = {k: x * inv for k, x in r.items()}
        for q, qv in pivots.items():
            c = qv.get(p)
            if c:
                for k, x in r.items():
                    y = qv.get(k, 0) - c * x
                    if y:
                        qv[k] = y
                    else:
                        qv.pop(k, None)
        pivots[p] = r
        chosen.append(idx)
    return chosen


def rank(vectors: Sequence[dict]) -> int:
    return len(independent_rows(vectors))


def solve(A: Matrix, B: Matrix) -> Matrix:
    """Solve A X = B exactly (A square, B with any number of columns)."""
    n = len(A)
    M = [list(map(Fraction, A[i])) + list(map(Fraction, B[i])) for i in range(n)]
    w = len(M[0])
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            raise SingularMatrix(f"no pivot in column {col}")
        M[col], M[piv] = M[piv], M[col]
        inv = 1 / M[col][col]
        row = [x * inv for x in M[col]]
        M[col] = row
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                Mr = M[r]
                for k in range(col, w):
                    if row[k]:
                        Mr[k] -= f * row[k]
    return [M[i][n:] for i in range(n)]


def ldl_pivots(A: Matrix) -> list[Fraction]:
    """Diagonal of D in a symmetrically pivoted LDL^T factorisation of symmetric A.

    The largest remaining diagonal entry is taken as pivot.  When every
    remaining diagonal entry is zero but the block is not, a 2x2 block
    [[0, b], [b, 0]] is split into pivots +|b| and -|b| (same inertia).  The
    signs of the returned pivots give the inertia of A.
    """
    n = len(A)
    M = [list(map(Fraction, row)) for row in A]
    active = list(range(n))
    pivots: list[Fraction] = []
    while active:
        k = max(active, key=lambda i: abs(M[i][i]))
        if M[k][k] != 0:
            d = M[k][k]
            pivots.append(d)
            active.remove(k)
            col = {i: M[i][k] for i in active if M[i][k] != 0}
            for i, a in col.items():
                f = a / d
                Mi = M[i]
                for j, b in col.items():
                    Mi[j] -= f * b
            continue
        pair = next(((i, j) for i in active for j in active if i < j and M[i][j] != 0), None)
        if pair is None:
            pivots.extend(Fraction(0) for _ in active)
            break
        i, j = pair
        # congruence by [[1, 1], [1, -1]] turns the block into diag(2b, -2b)
        for r in range(n):
            M[r][i], M[r][j] = M[r][i] + M[r][j], M[r][i] - M[r][j]
        for c in range(n):
            M[i][c], M[j][c] = M[i][c] + M[j][c], M[i][c] - M[j][c]
    return pivots


def inertia(A: Matrix) -> tuple[int, int, int]:
    p = ldl_pivots(A)
    return (sum(x > 0 for x in p), sum(x < 0 for x in p), sum(x == 0 for x in p))


def is_symmetric(A: Matrix) -> bool:
    return all(A[i][j] == A[j][i] for i in range(len(A)) for j in range(i))


def matmul(A: Matrix, B: Matrix) -> Matrix:
    Bt = list(zip(*B))
    return [[sum((a * b for a, b in zip(row, col) if a and b), Fraction(0)) for col in Bt] for row in A]


def transpose(A: Matrix) -> Matrix:
    return [list(r) for r in zip(*A)]
