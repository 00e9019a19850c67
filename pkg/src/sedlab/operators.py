"""Multiplication operator matrices and their determinants.

A matrix is a list of rows; column j holds the coefficients of the
image of basis vector e_j (matrix-of-a-linear-map convention).  Exact
matrices carry int/Fraction entries, float matrices are handled through
numpy.

The exact determinant uses fraction-free Bareiss elimination over the
integers after clearing row denominators, so 16x16 determinants of
rational matrices are computed without any rounding.  The float
determinant is an LU factorization with partial pivoting that reports
0.0 when a pivot falls below 1e-13 in absolute value.

For a sedenion v = v1 + v2*e8 the left multiplication matrix decomposes
into octonion blocks

    M(v) = [[ L(v1),      -R(v2).K ],
            [ L(v2).K,     R(v1)   ]]

where L/R are octonion left/right multiplication matrices and K is the
conjugation matrix diag(1, -1, ..., -1).  The conjugation factor K is
forced by the doubling formula: the off-diagonal contributions act on
the conjugated input halves.

Plain-text dump format: one row per line, entries space-separated,
rationals as p/q.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

import numpy as np

from .algebra import CDElement, basis_table, format_scalar

PIVOT_TOL = 1e-13


def identity_matrix(n: int) -> list:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matvec(m: list, v) -> list:
    return [sum(row[j] * v[j] for j in range(len(v))) for row in m]


def matmul(a: list, b: list) -> list:
    n, k, p = len(a), len(b), len(b[0])
    return [[sum(a[i][t] * b[t][j] for t in range(k)) for j in range(p)]
            for i in range(n)]


def left_mult_matrix(v: CDElement) -> list:
    """Matrix of w -> v*w in the standard basis."""
    dim = v.dim
    table = basis_table(v.level) if v.level > 0 else None
    m = [[0] * dim for _ in range(dim)]
    if table is None:
        m[0][0] = v.coeffs[0]
        return m
    for i, a in enumerate(v.coeffs):
        if a == 0:
            continue
        row = table[i]
        for j in range(dim):
            sign, k = row[j]
            m[k][j] = m[k][j] + (a if sign > 0 else -a)
    return m


def right_mult_matrix(v: CDElement) -> list:
    """Matrix of w -> w*v in the standard basis."""
    dim = v.dim
    table = basis_table(v.level) if v.level > 0 else None
    m = [[0] * dim for _ in range(dim)]
    if table is None:
        m[0][0] = v.coeffs[0]
        return m
    for j, a in enumerate(v.coeffs):
        if a == 0:
            continue
        for i in range(dim):
            sign, k = table[i][j]
            m[k][i] = m[k][i] + (a if sign > 0 else -a)
    return m


def octonion_block_matrix(v1: CDElement, v2: CDElement) -> list:
    """Sedenion left-multiplication matrix assembled from octonion blocks.

    Independent of left_mult_matrix at level 4: only level-3 operator
    matrices and the conjugation matrix K enter.
    """
    if v1.level != 3 or v2.level != 3:
        raise ValueError("octonion blocks need level-3 inputs")
    l1 = left_mult_matrix(v1)
    l2 = left_mult_matrix(v2)
    r1 = right_mult_matrix(v1)
    r2 = right_mult_matrix(v2)

    def conj_cols(m):
        # m.K: negate columns 1..7 (conjugate the input first)
        return [[row[0]] + [-row[j] for j in range(1, 8)] for row in m]

    top = [conj_cols(r2)[i] for i in range(8)]
    bot = [conj_cols(l2)[i] for i in range(8)]
    out = []
    for i in range(8):
        out.append(l1[i] + [-x for x in top[i]])
    for i in range(8):
        out.append(bot[i] + r1[i])
    return out


def det_exact(m: list) -> Fraction:
    """Exact determinant by Bareiss elimination after denominator clearing."""
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("matrix is not square")
    if n == 0:
        return Fraction(1)
    scale = Fraction(1)
    a = []
    for row in m:
        fracs = [Fraction(x) for x in row]
        d = lcm(*(f.denominator for f in fracs)) if n else 1
        scale *= d
        a.append([int(f * d) for f in fracs])

    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        pkk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            ai, ak = a[i], a[k]
            for j in range(k + 1, n):
                ai[j] = (ai[j] * pkk - aik * ak[j]) // prev
            ai[k] = 0
        prev = pkk
    return Fraction(sign * a[n - 1][n - 1], 1) / scale


def det_float(m) -> float:
    """LU determinant with partial pivoting; 0.0 on a sub-tolerance pivot."""
    a = np.array(m, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix is not square")
    det = 1.0
    for k in range(n - 1):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if abs(a[p, k]) <= PIVOT_TOL:
            return 0.0
        if p != k:
            a[[k, p]] = a[[p, k]]
            det = -det
        det *= a[k, k]
        factors = a[k + 1:, k] / a[k, k]
        a[k + 1:, k + 1:] -= np.outer(factors, a[k, k + 1:])
    if abs(a[n - 1, n - 1]) <= PIVOT_TOL:
        return 0.0
    return det * a[n - 1, n - 1]


def format_matrix(m: list) -> str:
    return "\n".join(" ".join(format_scalar(x) for x in row) for row in m) + "\n"
