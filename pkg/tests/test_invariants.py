"""Quartic invariants, the factorization check, annihilators, frames."""

import math
from fractions import Fraction

import numpy as np
import pytest

from sedlab.algebra import basis, cd_multiply, element, join, norm_sq, zero
from sedlab.invariants import (Frame, NotZeroDivisorError,
                               SingularityMismatchError, ZeroElementError,
                               check_factorization, codimension_check, d1,
                               d2_component, d2_geometric,
                               det_left_mult_closed_form, exact_nullspace,
                               find_annihilator, invariant_triple,
                               is_zero_divisor, random_frame,
                               random_imaginary_zero_divisor,
                               stiefel_normalize, stiefel_scale)
from sedlab.operators import det_exact, left_mult_matrix, matvec
from sedlab.rng import SplitMix64


def rand_elem(rng, bound=3):
    return element(4, [rng.rational(bound) for _ in range(16)])


def test_d1_examples():
    assert d1(zero(4)) == 0
    assert d1(basis(4, 0) + basis(4, 1) + basis(4, 8)) == 3
    rng = SplitMix64(21)
    for _ in range(100):
        v = rand_elem(rng)
        assert d1(v) == norm_sq(v)


def test_d2_geometric_examples():
    assert d2_geometric(basis(4, 1) + basis(4, 10)) == 0
    assert d2_geometric(basis(4, 0) + basis(4, 1) + basis(4, 8)) == 5
    assert d2_geometric(basis(4, 0)) == 1


def test_d2_component():
    assert d2_component((0,) * 16) == 0
    v = basis(4, 0) + basis(4, 1) + basis(4, 8)
    assert d2_component(v.coeffs) == 5
    rng = SplitMix64(22)
    for _ in range(200):
        v = rand_elem(rng)
        assert d2_component(v.coeffs) == d2_geometric(v)
    with pytest.raises(ValueError):
        d2_component((1, 2, 3))


def test_invariant_triple_examples():
    assert invariant_triple(basis(4, 0)) == (1, 1, 0)
    assert invariant_triple(join(basis(3, 0) + basis(3, 1),
                                 basis(3, 0).scale(2))) == (6, -2, 2)
    assert invariant_triple(basis(4, 0) + basis(4, 1) + basis(4, 8)) == (3, 1, 1)


def test_invariant_triple_realizability():
    rng = SplitMix64(23)
    for _ in range(100):
        a, b, c = invariant_triple(rand_elem(rng))
        assert a >= abs(b)
        assert 4 * c * c <= a * a - b * b
        d = d2_geometric(zero(4))
        assert d == 0  # a = 0 forces b = c = 0


def test_check_factorization_unit_and_zero_divisor():
    rep = check_factorization(basis(4, 0), exact=True)
    assert (rep.delta, rep.d1, rep.d2, rep.holds) == (1, 1, 1, True)
    rep = check_factorization(basis(4, 1) + basis(4, 10), exact=True)
    assert rep.delta == 0 and rep.d2 == 0 and rep.holds
    repf = check_factorization(element(4, (1.0,) + (0.0,) * 15), exact=False)
    assert repf.holds and repf.delta == 1.0


def test_check_factorization_diverges_from_determinant_generically():
    """The d1^4*d2^2 identity is a special-locus identity: the honest
    determinant follows det_left_mult_closed_form, and the two coincide
    exactly when Re(v1) Im(v2) == Re(v2) Im(v1)."""
    rng = SplitMix64(24)
    seen_false = 0
    for _ in range(50):
        v = rand_elem(rng)
        rep = check_factorization(v, exact=True)
        assert rep.delta == det_left_mult_closed_form(v)
        predicted = rep.delta == rep.d1 ** 4 * rep.d2 ** 2
        assert rep.holds == predicted
        seen_false += not rep.holds
    assert seen_false > 0


def test_factorization_holds_on_imaginary_pairs():
    rng = SplitMix64(25)
    for _ in range(50):
        v = random_imaginary_zero_divisor(rng)
        rep = check_factorization(v, exact=True)
        assert rep.holds and rep.delta == 0
    # imaginary pairs that are not zero divisors also satisfy it
    for _ in range(50):
        x = element(3, [0] + [rng.rational(2) for _ in range(7)])
        y = element(3, [0] + [rng.rational(2) for _ in range(7)])
        rep = check_factorization(join(x, y), exact=True)
        assert rep.holds


def test_check_factorization_float_backend():
    rng = SplitMix64(37)
    # imaginary pairs satisfy the identity within the float tolerance
    for _ in range(10):
        v = random_imaginary_zero_divisor(rng)
        vf = element(4, tuple(float(c) for c in v.coeffs))
        assert check_factorization(vf, exact=False).holds
    # generic elements miss it by far more than the tolerance
    seen_false = 0
    for _ in range(10):
        vf = element(4, tuple(rng.uniform(-2, 2) for _ in range(16)))
        seen_false += not check_factorization(vf, exact=False).holds
    assert seen_false == 10


def test_report_json_shape():
    rep = check_factorization(basis(4, 0), exact=True)
    d = rep.to_json_dict()
    assert set(d) == {"v", "delta", "d1", "d2", "holds"}
    assert d["v"].startswith("4:") and d["holds"] is True


def test_d1_d2_homogeneity():
    rng = SplitMix64(36)
    for _ in range(50):
        v = rand_elem(rng, 2)
        s = rng.rational(3)
        assert d1(v.scale(s)) == s * s * d1(v)
        assert d2_geometric(v.scale(s)) == s ** 4 * d2_geometric(v)


def test_is_zero_divisor():
    assert is_zero_divisor(basis(4, 1) + basis(4, 10))
    assert not is_zero_divisor(basis(4, 0))
    with pytest.raises(ZeroElementError):
        is_zero_divisor(zero(4))
    v = basis(4, 3) + basis(4, 10)
    for s in (Fraction(1, 7), 2, 100):
        assert is_zero_divisor(v.scale(s)) == is_zero_divisor(v)
    vf = element(4, tuple(float(c) for c in v.coeffs))
    assert is_zero_divisor(vf.scale(1e-3)) == is_zero_divisor(vf)


def test_zero_divisor_predicate_vs_kernel():
    # generic elements: d2 > 0, nonzero determinant, trivial kernel
    rng = SplitMix64(26)
    for _ in range(25):
        v = rand_elem(rng)
        m = left_mult_matrix(v)
        assert not is_zero_divisor(v)
        assert det_exact(m) != 0
        assert exact_nullspace(m) == []
    # imaginary equal-norm orthogonal pairs: all three agree positively
    for _ in range(10):
        v = random_imaginary_zero_divisor(rng)
        m = left_mult_matrix(v)
        assert is_zero_divisor(v)
        assert det_exact(m) == 0
        assert len(exact_nullspace(m)) > 0


def test_find_annihilator():
    v = basis(4, 1) + basis(4, 10)
    w, kdim = find_annihilator(v)
    assert abs(math.sqrt(float(norm_sq(w))) - 1.0) <= 1e-12
    vf = element(4, tuple(float(c) for c in v.coeffs))
    residual = math.sqrt(float(norm_sq(cd_multiply(vf, w))))
    assert residual <= 1e-10 * math.sqrt(float(norm_sq(vf)))
    assert kdim == 4
    # deterministic first-basis-vector contract: support {e7, e12}, repeatable
    support = {i for i, c in enumerate(w.coeffs) if c != 0.0}
    assert support == {7, 12}
    w2, _ = find_annihilator(v)
    assert w == w2
    with pytest.raises(NotZeroDivisorError):
        find_annihilator(basis(4, 0))


def test_annihilator_float_backend():
    v = element(4, tuple(float(c) for c in
                         (basis(4, 3) + basis(4, 10)).coeffs))
    w, kdim = find_annihilator(v)
    residual = math.sqrt(float(norm_sq(cd_multiply(v, w))))
    assert residual <= 1e-10 * math.sqrt(float(norm_sq(v)))
    assert kdim == 4


def test_kernel_dimension_observation():
    """Recorded observation: imaginary-pair zero divisors all show the
    same kernel dimension; generic normalized frames scale to elements
    with d2 = 0 but a nonsingular matrix."""
    rng = SplitMix64(27)
    dims = set()
    for _ in range(20):
        _, kdim = find_annihilator(random_imaginary_zero_divisor(rng))
        dims.add(kdim)
    assert dims == {4}
    for _ in range(5):
        v = stiefel_scale(1.5, random_frame(rng))
        with pytest.raises(SingularityMismatchError):
            find_annihilator(v)


def test_annihilator_verified_by_matvec():
    rng = SplitMix64(28)
    for _ in range(10):
        v = random_imaginary_zero_divisor(rng)
        m = left_mult_matrix(v)
        for vec in exact_nullspace(m):
            assert all(x == 0 for x in matvec(m, vec))


def test_stiefel_explicit():
    v = (basis(4, 1) + basis(4, 10)).scale(3.0)
    vf = element(4, tuple(float(c) for c in v.coeffs))
    r, f = stiefel_normalize(vf)
    assert abs(r - 3.0) <= 1e-12
    assert np.allclose(f.v1, np.eye(8)[1]) and np.allclose(f.v2, np.eye(8)[2])


def test_stiefel_round_trips():
    rng = SplitMix64(29)
    for _ in range(100):
        f = random_frame(rng)
        r = rng.uniform(0.1, 5.0)
        v = stiefel_scale(r, f)
        r2, f2 = stiefel_normalize(v)
        assert abs(r2 - r) <= 1e-12 * max(1.0, r)
        assert np.max(np.abs(f2.v1 - f.v1)) <= 1e-12
        assert np.max(np.abs(f2.v2 - f.v2)) <= 1e-12
    for _ in range(100):
        v = element(4, tuple(float(c) for c in
                             random_imaginary_zero_divisor(rng).coeffs))
        r, f = stiefel_normalize(v)
        back = stiefel_scale(r, f)
        scale = max(1.0, max(abs(c) for c in v.coeffs))
        assert all(abs(a - b) <= 1e-12 * scale
                   for a, b in zip(back.coeffs, v.coeffs))


def test_stiefel_errors():
    with pytest.raises(NotZeroDivisorError):
        stiefel_normalize(element(4, (1.0,) + (0.0,) * 15))
    bad = Frame(np.eye(8)[0], np.eye(8)[0])  # not orthogonal
    with pytest.raises(ValueError):
        stiefel_scale(1.0, bad)
    with pytest.raises(ValueError):
        stiefel_scale(-1.0, Frame(np.eye(8)[0], np.eye(8)[1]))


def test_codimension_check():
    f = Frame(np.eye(8)[0], np.eye(8)[1])
    assert codimension_check(f) == 2
    rng = SplitMix64(30)
    for _ in range(100):
        f = random_frame(rng)
        assert codimension_check(f) == 2
        # elimination oracle: residual of row 2 after removing row 1
        jac = np.zeros((2, 16))
        jac[0, :8], jac[0, 8:] = 2 * f.v1, -2 * f.v2
        jac[1, :8], jac[1, 8:] = f.v2, f.v1
        r0 = jac[0] / np.linalg.norm(jac[0])
        resid = jac[1] - (jac[1] @ r0) * r0
        assert np.linalg.norm(resid) > 1e-8
