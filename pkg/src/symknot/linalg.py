"""Exact integer linear algebra on plain lists of ints.

Matrices are lists of rows. Nothing here touches floating point; the sizes
we meet (Goeritz and Seifert matrices of diagrams with a few dozen
crossings) are small enough for textbook elimination.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[int]]


def copy_matrix(m: Sequence[Sequence[int]]) -> Matrix:
    return [list(row) for row in m]


def transpose(m: Sequence[Sequence[int]]) -> Matrix:
    if not m:
        return []
    return [list(col) for col in zip(*m)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def bareiss_det(m: Sequence[Sequence[int]]) -> int:
    """Determinant by fraction-free Gaussian elimination."""
    a = copy_matrix(m)
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rank(m: Sequence[Sequence[int]]) -> int:
    rows = [[Fraction(x) for x in row] for row in m]
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c] / rows[r][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
    return r


def smith_diagonal(m: Sequence[Sequence[int]]) -> list[int]:
    """Diagonal of the Smith normal form, non-negative, in divisibility order.

    The pivot at every stage is an entry of smallest nonzero absolute value
    in the remaining block. Returns min(rows, cols) entries, zeros last.
    """
    a = copy_matrix(m)
    nr = len(a)
    nc = len(a[0]) if nr else 0
    diag: list[int] = []
    t = 0
    while t < min(nr, nc):
        entries = [(abs(a[i][j]), i, j) for i in range(t, nr) for j in range(t, nc) if a[i][j]]
        if not entries:
            break
        _, pi, pj = min(entries)
        a[t], a[pi] = a[pi], a[t]
        for row in a:
            row[t], row[pj] = row[pj], row[t]
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, nr):
                q = a[i][t] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    dirty = True
            for j in range(t + 1, nc):
                q = a[t][j] // p
                if q:
                    for row in a:
                        row[j] -= q * row[t]
                if a[t][j]:
                    dirty = True
            if not dirty:
                bad = next(((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc)
                            if a[i][j] % p), None)
                if bad is None:
                    break
                a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
                continue
            # a smaller remainder appeared in row t or column t: re-pivot on it
            cand = [(abs(a[i][t]), i, t) for i in range(t, nr) if a[i][t]]
            cand += [(abs(a[t][j]), t, j) for j in range(t, nc) if a[t][j]]
            _, pi, pj = min(cand)
            a[t], a[pi] = a[pi], a[t]
            for row in a:
                row[t], row[pj] = row[pj], row[t]
        diag.append(abs(a[t][t]))
        t += 1
    diag += [0] * (min(nr, nc) - len(diag))
    return diag


def _column_echelon(m: Sequence[Sequence[int]], n: int) -> tuple[Matrix, Matrix, int]:
    """Column-reduce m to lower echelon form; return (reduced m, unimodular U, pivots)."""
    a = copy_matrix(m)
    u = identity(n)

    def colop(dst: int, src: int, q: int) -> None:
        for row in a:
            row[dst] -= q * row[src]
        for row in u:
            row[dst] -= q * row[src]

    def colswap(i: int, j: int) -> None:
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in u:
            row[i], row[j] = row[j], row[i]

    pc = 0
    for row in a:
        if pc >= n:
            break
        while True:
            nz = [(abs(row[j]), j) for j in range(pc, n) if row[j]]
            if not nz:
                break
            _, j0 = min(nz)
            colswap(pc, j0)
            done = True
            for j in range(pc + 1, n):
                if row[j]:
                    colop(j, pc, row[j] // row[pc])
                    if row[j]:
                        done = False
            if done:
                pc += 1
                break
    return a, u, pc


def integer_kernel(m: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    """Basis (as a list of vectors) of the integer right kernel {x : m x = 0}.

    Column operations bring m to column echelon form while the same
    operations are applied to an identity matrix; the columns that end up
    zero give the kernel, and they span a direct summand of Z^n.
    """
    n = ncols if ncols is not None else (len(m[0]) if m else 0)
    _, u, pc = _column_echelon(m, n)
    return [[u[i][j] for i in range(n)] for j in range(pc, n)]


def unit_solutions(m: Sequence[Sequence[int]]) -> Matrix:
    """Integer vectors x_1..x_l with m x_i = e_i, for an l x n matrix m.

    Requires the rows of m to span a direct summand of Z^n.
    """
    l = len(m)
    n = len(m[0]) if l else 0
    a, u, pc = _column_echelon(m, n)
    if pc != l:
        raise ValueError("rows are linearly dependent")
    out = []
    for i in range(l):
        # forward substitution in the lower-triangular block a[:, :l]
        y = [0] * l
        for r in range(l):
            rhs = int(r == i) - sum(a[r][k] * y[k] for k in range(r))
            if rhs % a[r][r]:
                raise ValueError("rows do not span a direct summand")
            y[r] = rhs // a[r][r]
        out.append([sum(u[row][k] * y[k] for k in range(l)) for row in range(n)])
    return out


def primitive(v: Sequence[int]) -> list[int]:
    from math import gcd

    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        return list(v)
    return [x // g for x in v]


def solve_unit_pairing(w: Sequence[int]) -> list[int]:
    """Integer vector x with x . w = 1, for a primitive vector w."""
    n = len(w)
    # extended Euclid accumulated over coordinates
    g, coeffs = 0, [0] * n
    for i, wi in enumerate(w):
        if wi == 0:
            continue
        if g == 0:
            g, coeffs = wi, [0] * n
            coeffs[i] = 1
            continue
        d, s, t = _xgcd(g, wi)
        coeffs = [c * s for c in coeffs]
        coeffs[i] += t
        g = d
    if abs(g) != 1:
        raise ValueError("vector is not primitive")
    return [c * g for c in coeffs]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def poly_det(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> list[int]:
    """Coefficients (constant term first) of det(a + t*b) as a polynomial in t.

    Evaluates at n+1 integer points with exact determinants and
    interpolates; the result is exact because the degree is at most n.
    """
    n = len(a)
    if n == 0:
        return [1]
    xs = list(range(n + 1))
    ys = [bareiss_det([[a[i][j] + x * b[i][j] for j in range(n)] for i in range(n)]) for x in xs]
    coeffs = [Fraction(0)] * (n + 1)
    for k, (xk, yk) in enumerate(zip(xs, ys)):
        if yk == 0:
            continue
        basis = [Fraction(1)]
        denom = 1
        for j, xj in enumerate(xs):
            if j == k:
                continue
            basis = [Fraction(0)] + basis
            for i in range(len(basis) - 1):
                basis[i] -= xj * basis[i + 1]
            denom *= xk - xj
        for i, c in enumerate(basis):
            coeffs[i] += c * yk / denom
    out = []
    for c in coeffs:
        if c.denominator != 1:
            raise ArithmeticError("interpolation produced a non-integer coefficient")
        out.append(int(c))
    return out
