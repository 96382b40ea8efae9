"""Exact rational linear algebra and a small simplex solver.

Everything here works on lists of Fractions. The systems that come out of
subdivisions and webs are tiny (tens of variables), so a dense tableau with
Bland's rule is plenty and keeps the results exact.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]


def _copy(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(v) for v in row] for row in rows]


def rref(rows: Sequence[Sequence], ncols: int) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    M = _copy(rows)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        M[r] = [v * inv for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rank(rows: Sequence[Sequence], ncols: int) -> int:
    return len(rref(rows, ncols)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> Matrix:
    """Basis of {x : rows @ x = 0}, as a list of column vectors."""
    R, pivots = rref(rows, ncols) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(R, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def restrict(G: Sequence[Sequence], basis: Sequence[Sequence]) -> Matrix:
    """Rewrite the rows of G in the coordinates of ``basis`` (x = sum z_j basis_j)."""
    return [[sum((a * b for a, b in zip(row, v) if a), Fraction(0)) for v in basis] for row in G]


def apply(A: Sequence[Sequence], x: Sequence) -> list[Fraction]:
    return [sum((a * b for a, b in zip(row, x)), Fraction(0)) for row in A]


class Unbounded(Exception):
    pass


def simplex_max(c: Sequence, A: Sequence[Sequence], b: Sequence) -> tuple[Fraction, list[Fraction]]:
    """Maximize c.x subject to A x <= b, x >= 0, with b >= 0.

    The slack basis is feasible by assumption, so a single phase suffices.
    Bland's rule rules out cycling on the (very) degenerate homogeneous systems
    this package produces.
    """
    m, n = len(A), len(c)
    if any(v < 0 for v in b):
        raise ValueError("simplex_max requires a nonnegative right-hand side")
    # tableau rows: [coeffs(n) | slacks(m) | rhs]
    T = []
    for i in range(m):
        row = [Fraction(v) for v in A[i]] + [Fraction(0)] * m + [Fraction(b[i])]
        row[n + i] = Fraction(1)
        T.append(row)
    z = [-Fraction(v) for v in c] + [Fraction(0)] * (m + 1)
    basis = [n + i for i in range(m)]
    width = n + m
    while True:
        enter = next((j for j in range(width) if z[j] < 0), None)
        if enter is None:
            break
        best = None
        leave = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            raise Unbounded()
        prow = T[leave]
        inv = 1 / prow[enter]
        prow = [v * inv for v in prow]
        T[leave] = prow
        nz = [j for j, v in enumerate(prow) if v]
        for i in range(m):
            if i != leave:
                f = T[i][enter]
                if f:
                    row = T[i]
                    for j in nz:
                        row[j] -= f * prow[j]
        f = z[enter]
        for j in nz:
            z[j] -= f * prow[j]
        basis[leave] = enter
    x = [Fraction(0)] * width
    for i, bv in enumerate(basis):
        x[bv] = T[i][-1]
    return z[-1], x[:n]


def strict_solution(G: Sequence[Sequence], nvars: int) -> list[Fraction] | None:
    """Find z with G z > 0 componentwise, or return None if none exists.

    Solves max t s.t. G z >= t, t <= 1 over free z; a positive optimum gives
    a strictly feasible point.
    """
    m = len(G)
    if m == 0:
        return [Fraction(0)] * nvars
    # variables: z+ (nvars), z- (nvars), t
    A = []
    for row in G:
        A.append([-Fraction(v) for v in row] + [Fraction(v) for v in row] + [Fraction(1)])
    A.append([Fraction(0)] * (2 * nvars) + [Fraction(1)])
    b = [Fraction(0)] * m + [Fraction(1)]
    c = [Fraction(0)] * (2 * nvars) + [Fraction(1)]
    opt, x = simplex_max(c, A, b)
    if opt <= 0:
        return None
    return [x[i] - x[nvars + i] for i in range(nvars)]


def implicit_equalities(G: Sequence[Sequence], nvars: int) -> tuple[set[int], list[Fraction]]:
    """Rows of G that vanish on the whole closed cone {z : G z >= 0}.

    Also returns a point of the cone that is strictly positive on every other row.
    """
    m = len(G)
    if m == 0:
        return set(), [Fraction(0)] * nvars
    # variables: z+, z-, w (m of them); rows G z >= w and w <= 1; maximize sum w
    A = []
    for i, row in enumerate(G):
        w = [Fraction(0)] * m
        w[i] = Fraction(1)
        A.append([-Fraction(v) for v in row] + [Fraction(v) for v in row] + w)
    for i in range(m):
        w = [Fraction(0)] * m
        w[i] = Fraction(1)
        A.append([Fraction(0)] * (2 * nvars) + w)
    b = [Fraction(0)] * m + [Fraction(1)] * m
    c = [Fraction(0)] * (2 * nvars) + [Fraction(1)] * m
    _, x = simplex_max(c, A, b)
    z = [x[i] - x[nvars + i] for i in range(nvars)]
    return {i for i in range(m) if x[2 * nvars + i] == 0}, z
