"""Fraction-free linear algebra over integral domains.

Ring elements need ``+ - *``, ``is_zero()`` and ``divexact``.  Poly, ZPoly,
plain ints and Fractions (through the small adapter below) all qualify.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

Matrix = list[list]


def _divexact(a, b):
    if isinstance(a, Fraction):
        return a / b
    if isinstance(a, int):
        q, r = divmod(a, b)
        if r:
            raise ArithmeticError("inexact integer division")
        return q
    return a.divexact(b)


def _is_zero(a) -> bool:
    return a == 0 if isinstance(a, (int, Fraction)) else a.is_zero()


def bareiss_forward(m: Matrix, rhs: Sequence | None = None):
    """Fraction-free elimination.  Returns (U, b, sign) with U upper triangular.

    The last diagonal entry of U is sign * det(m).
    """
    n = len(m)
    a = [list(row) + ([rhs[i]] if rhs is not None else []) for i, row in enumerate(m)]
    width = len(a[0]) if a else 0
    sign = 1
    prev = None
    for k in range(n):
        piv = next((i for i in range(k, n) if not _is_zero(a[i][k])), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        pk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, width):
                v = row_i[j] * pk - aik * row_k[j]
                row_i[j] = v if prev is None else _divexact(v, prev)
            row_i[k] = pk * 0
        prev = pk
    if rhs is None:
        return a, None, sign
    return [row[:-1] for row in a], [row[-1] for row in a], sign


def bareiss_det(m: Matrix):
    if not m:
        raise ValueError("empty matrix")
    try:
        u, _, sign = bareiss_forward(m)
    except ZeroDivisionError:
        return m[0][0] * 0
    d = u[-1][-1]
    return d if sign > 0 else -d


def bareiss_solve(m: Matrix, rhs: Sequence):
    """Solve m x = rhs over the fraction field.

    Returns (X, det) with X ring elements and x = X / det.
    """
    u, b, sign = bareiss_forward(m, rhs)
    n = len(m)
    det = u[n - 1][n - 1]
    x = [None] * n
    for i in range(n - 1, -1, -1):
        acc = det * b[i]
        for j in range(i + 1, n):
            acc = acc - u[i][j] * x[j]
        x[i] = _divexact(acc, u[i][i])
    return x, det


def matmul(a: Matrix, b: Matrix) -> Matrix:
    n, k, m = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        ai = a[i]
        for j in range(m):
            acc = None
            for l in range(k):
                x = ai[l]
                if _is_zero(x):
                    continue
                y = b[l][j]
                if _is_zero(y):
                    continue
                t = x * y
                acc = t if acc is None else acc + t
            row.append(acc if acc is not None else a[0][0] * 0)
        out.append(row)
    return out


def matvec(a: Matrix, v: Sequence) -> list:
    out = []
    for row in a:
        acc = None
        for x, y in zip(row, v):
            if _is_zero(x) or _is_zero(y):
                continue
            t = x * y
            acc = t if acc is None else acc + t
        out.append(acc if acc is not None else v[0] * 0)
    return out


def berkowitz(m: Matrix, mul: Callable | None = None, zero=None, one=None) -> list:
    """Characteristic polynomial coefficients [1, c1, ..., cn] of det(x I - m).

    Division free, so it works over any commutative ring (truncated series in
    particular).  ``mul`` overrides the ring product when needed.
    """
    n = len(m)
    mul = mul or (lambda x, y: x * y)
    if zero is None:
        zero = m[0][0] * 0
    if one is None:
        one = zero + 1
    # vect holds the charpoly coefficients of the leading r x r block
    vect = [one, -m[0][0]]
    for r in range(1, n):
        # column above/left parts of the bordering
        R = [m[r][j] for j in range(r)]
        C = [m[i][r] for i in range(r)]
        A = [row[:r] for row in m[:r]]
        arr = r + 1
        # Toeplitz column: 1, -a, -R C, -R A C, ...
        col = [one, -m[r][r]]
        cur = C
        for _ in range(r):
            s = zero
            for x, y in zip(R, cur):
                s = s + mul(x, y)
            col.append(-s)
            if len(col) >= arr + 1:
                break
            nxt = []
            for i in range(r):
                acc = zero
                for j in range(r):
                    acc = acc + mul(A[i][j], cur[j])
                nxt.append(acc)
            cur = nxt
        col = col[:arr + 1]
        new = []
        for i in range(arr + 1):
            acc = zero
            for j in range(0, i + 1):
                if j < len(col) and i - j < len(vect):
                    acc = acc + mul(col[j], vect[i - j])
            new.append(acc)
        vect = new
    return vect


def solve_fractions(m: Sequence[Sequence], rhs: Sequence) -> list | None:
    """Solve a possibly overdetermined rational system exactly.

    Returns one solution (free unknowns set to 0), or None if inconsistent.
    """
    from fractions import Fraction

    rows = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(m, rhs)]
    ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    if any(row[-1] for row in rows[r:]):
        return None
    x = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        x[c] = rows[i][-1]
    return x
