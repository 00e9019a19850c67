"""Multiplication matrices and exact/float determinants."""

from fractions import Fraction
from functools import lru_cache

import pytest

from sedlab.algebra import basis, cd_multiply, element, join, norm_sq
from sedlab.invariants import det_left_mult_closed_form
from sedlab.operators import (det_exact, det_float, format_matrix,
                              identity_matrix, left_mult_matrix, matmul,
                              matvec, octonion_block_matrix,
                              right_mult_matrix)
from sedlab.rng import SplitMix64


def rand_elem(rng, level, bound=3):
    return element(level, [rng.rational(bound) for _ in range(1 << level)])


def minor_expansion_det(m):
    """Independent oracle: cofactor expansion with subset memoization.

    Integer matrices only; exponential states but fine for one 16x16.
    """
    n = len(m)

    @lru_cache(maxsize=None)
    def rec(cols):
        row = n - len(cols)
        if not cols:
            return 1
        total = 0
        sign = 1
        for idx, c in enumerate(cols):
            a = m[row][c]
            if a:
                total += sign * a * rec(cols[:idx] + cols[idx + 1:])
            sign = -sign
        return total

    return rec(tuple(range(n)))


def test_left_mult_identity_and_scaling():
    for level in (2, 3, 4):
        dim = 1 << level
        assert left_mult_matrix(basis(level, 0)) == identity_matrix(dim)
        assert right_mult_matrix(basis(level, 0)) == identity_matrix(dim)
        two = left_mult_matrix(basis(level, 0).scale(2))
        assert two == [[2 * x for x in row] for row in identity_matrix(dim)]


def test_matrix_matches_multiplication():
    rng = SplitMix64(11)
    v = rand_elem(rng, 4)
    m = left_mult_matrix(v)
    r = right_mult_matrix(v)
    for _ in range(50):
        w = rand_elem(rng, 4)
        assert matvec(m, w.coeffs) == list(cd_multiply(v, w).coeffs)
        assert matvec(r, w.coeffs) == list(cd_multiply(w, v).coeffs)


def test_matrix_matches_multiplication_float():
    rng = SplitMix64(12)
    v = element(4, [rng.uniform(-2, 2) for _ in range(16)])
    m = left_mult_matrix(v)
    for _ in range(50):
        w = element(4, [rng.uniform(-2, 2) for _ in range(16)])
        prod = cd_multiply(v, w).coeffs
        mv = matvec(m, w.coeffs)
        scale = max(1.0, max(abs(x) for x in prod))
        assert all(abs(a - b) <= 1e-12 * scale for a, b in zip(mv, prod))


def test_right_mult_column():
    r = right_mult_matrix(basis(4, 1))
    col = [r[i][2] for i in range(16)]
    assert col == list(cd_multiply(basis(4, 2), basis(4, 1)).coeffs)


def test_sedenion_block_structure():
    """M(v) decomposes into octonion blocks (with the conjugation factor
    on the blocks that consume the conjugated input half)."""
    rng = SplitMix64(13)
    for _ in range(100):
        v1 = rand_elem(rng, 3, 2)
        v2 = rand_elem(rng, 3, 2)
        assert left_mult_matrix(join(v1, v2)) == octonion_block_matrix(v1, v2)


def test_octonion_determinant_law():
    rng = SplitMix64(14)
    for _ in range(100):
        x = rand_elem(rng, 3)
        n4 = norm_sq(x) ** 4
        assert det_exact(left_mult_matrix(x)) == n4
        assert det_exact(right_mult_matrix(x)) == n4


def test_det_exact_basics():
    assert det_exact(identity_matrix(16)) == 1
    diag2 = [[2 if i == j else 0 for j in range(16)] for i in range(16)]
    assert det_exact(diag2) == 2 ** 16
    rng = SplitMix64(15)
    for _ in range(10):
        a = [[rng.rational(2) for _ in range(5)] for _ in range(5)]
        b = [[rng.rational(2) for _ in range(5)] for _ in range(5)]
        assert det_exact(matmul(a, b)) == det_exact(a) * det_exact(b)


def test_det_exact_against_independent_oracles():
    # v1 = e0 + e1, v2 = 2 e0: two independent oracles agree
    v = join(basis(3, 0) + basis(3, 1), basis(3, 0).scale(2))
    m = left_mult_matrix(v)
    d = det_exact(m)
    assert d == minor_expansion_det(tuple(tuple(int(x) for x in row)
                                          for row in m))
    assert d == det_left_mult_closed_form(v)
    assert d == 1679616  # = 6^8; the invariant-triple is (6, -2, 2)


def test_det_closed_form_oracle_random():
    rng = SplitMix64(16)
    for _ in range(50):
        v = rand_elem(rng, 4)
        assert det_exact(left_mult_matrix(v)) == det_left_mult_closed_form(v)


def test_homogeneity():
    rng = SplitMix64(17)
    for _ in range(20):
        v = rand_elem(rng, 4, 2)
        s = rng.rational(3)
        if s == 0:
            s = Fraction(1, 2)
        assert det_exact(left_mult_matrix(v.scale(s))) == \
            s ** 16 * det_exact(left_mult_matrix(v))


def test_swap_and_sign_symmetry():
    rng = SplitMix64(18)
    for _ in range(30):
        v1 = rand_elem(rng, 3, 2)
        v2 = rand_elem(rng, 3, 2)
        d = det_exact(left_mult_matrix(join(v1, v2)))
        assert det_exact(left_mult_matrix(join(v2, v1))) == d
        assert det_exact(left_mult_matrix(join(v1, -v2))) == d


def test_det_float():
    assert det_float(identity_matrix(16)) == 1.0
    zd = left_mult_matrix(basis(4, 1) + basis(4, 10))
    assert abs(det_float(zd)) <= 1e-9
    rng = SplitMix64(19)
    for _ in range(100):
        m = [[rng.rational(5) for _ in range(6)] for _ in range(6)]
        de = float(det_exact(m))
        df = det_float([[float(x) for x in row] for row in m])
        assert abs(df - de) <= 1e-9 * max(1.0, abs(de))
    for _ in range(20):
        v = rand_elem(rng, 4)
        de = float(det_exact(left_mult_matrix(v)))
        df = det_float([[float(x) for x in row]
                        for row in left_mult_matrix(v)])
        assert abs(df - de) <= 1e-9 * max(1.0, abs(de), abs(df))


def test_det_float_singular_tolerance():
    m = identity_matrix(8)
    m = [[float(x) for x in row] for row in m]
    m[7][7] = 1e-14
    assert det_float(m) == 0.0


def test_matrix_dump_format():
    text = format_matrix([[Fraction(1, 2), 3], [-1, Fraction(0)]])
    assert text == "1/2 3\n-1 0\n"


def test_det_exact_rejects_nonsquare():
    with pytest.raises(ValueError):
        det_exact([[1, 2, 3], [4, 5, 6]])
