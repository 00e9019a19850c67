"""Quartic invariants of a sedenion, the determinant identity check, and
the normalized-frame (Stiefel) maps.

For v = v1 + v2*e8 the fundamental scalars are

    a = |v1|^2 + |v2|^2      (= d1(v), the squared norm)
    b = |v1|^2 - |v2|^2
    c = <v1, v2>             (standard inner product on R^8)

and d2 = b^2 + 4c^2, which vanishes exactly when the two halves have
equal norms and are orthogonal.  d2 has an equivalent expansion purely
in the 16 components (d2_component); the two are equal exactly over
rationals.

check_factorization compares det M(v) against d1^4 * d2^2.  The actual
closed form of the determinant is

    det M(v) = a^4 * (a^2 - 4*(|x|^2|y|^2 - <x,y>^2))^2,
    x = Im v1, y = Im v2,

(det_left_mult_closed_form below, exact over rationals), which collapses
to a^4 * d2^2 precisely when Re(v1)*Im(v2) == Re(v2)*Im(v1), e.g. on
pairs of imaginary octonions.  Off that locus the d1^4*d2^2 identity
fails, so `holds` is genuinely informative.

All functions are pure and inputs immutable; parallel batch use is safe.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .algebra import (CDElement, element, format_element, format_scalar,
                      inner, join, norm_sq, split)
from .operators import det_exact, det_float, left_mult_matrix

DEFAULT_ZD_TOL = 1e-10
FLOAT_FACTOR_RTOL = 1e-9


class ZeroElementError(ValueError):
    """The zero element is not classified as divisor or non-divisor."""


class NotZeroDivisorError(ValueError):
    """Raised when an operation requires d2(v) = 0 and it is not."""


class SingularityMismatchError(RuntimeError):
    """d2(v) = 0 but the left multiplication matrix is nonsingular.

    Such inputs exist (e.g. v1 = e0, v2 = e1): the equal-norm/orthogonal
    condition does not imply a nontrivial kernel once the halves have
    real parts.
    """


class InvariantTriple(NamedTuple):
    a: object
    b: object
    c: object


def d1(v: CDElement):
    v1, v2 = split(v)
    return norm_sq(v1) + norm_sq(v2)


def d2_geometric(v: CDElement):
    v1, v2 = split(v)
    b = norm_sq(v1) - norm_sq(v2)
    c = inner(v1, v2)
    return b * b + 4 * c * c


def d2_component(coeffs):
    """d2 expanded in the 16 components.

    Sum of sgn(m,n)*a_m^2*a_n^2 over all m,n (sgn = -1 exactly for
    cross-half index pairs that are not 8 apart) plus the correlation
    term 8 * sum_{i<j} a_i a_{i+8} a_j a_{j+8}.
    """
    a = tuple(coeffs)
    if len(a) != 16:
        raise ValueError("d2_component needs 16 coefficients")
    total = 0
    for m in range(16):
        am2 = a[m] * a[m]
        for n in range(16):
            cross = (m < 8) != (n < 8)
            neg = cross and abs(m - n) != 8
            term = am2 * a[n] * a[n]
            total = total - term if neg else total + term
    corr = 0
    for i in range(8):
        for j in range(i + 1, 8):
            corr = corr + a[i] * a[i + 8] * a[j] * a[j + 8]
    return total + 8 * corr


def invariant_triple(v: CDElement) -> InvariantTriple:
    v1, v2 = split(v)
    return InvariantTriple(norm_sq(v1) + norm_sq(v2),
                           norm_sq(v1) - norm_sq(v2),
                           inner(v1, v2))


def det_left_mult_closed_form(v: CDElement):
    """Closed form of det M(v); independent oracle for the exact determinant."""
    v1, v2 = split(v)
    a = norm_sq(v1) + norm_sq(v2)
    x = v1.coeffs[1:]
    y = v2.coeffs[1:]
    xx = sum(t * t for t in x)
    yy = sum(t * t for t in y)
    xy = sum(p * q for p, q in zip(x, y))
    return a**4 * (a * a - 4 * (xx * yy - xy * xy))**2


@dataclass(frozen=True)
class FactorizationReport:
    v: CDElement
    delta: object
    d1: object
    d2: object
    holds: bool

    def to_json_dict(self) -> dict:
        if isinstance(self.delta, float):
            fmt = lambda x: repr(float(x))
        else:
            fmt = format_scalar
        return {
            "v": format_element(self.v),
            "delta": fmt(self.delta),
            "d1": fmt(self.d1),
            "d2": fmt(self.d2),
            "holds": self.holds,
        }


def check_factorization(v: CDElement, exact: bool = True) -> FactorizationReport:
    """Compare det M(v) with d1(v)^4 * d2(v)^2.

    Exact backend: coefficients coerced to Fractions, equality is exact.
    Float backend: LU determinant, relative tolerance 1e-9 (floored at
    absolute scale 1).
    """
    if exact:
        w = element(4, [Fraction(c) for c in v.coeffs])
        delta = det_exact(left_mult_matrix(w))
        a = d1(w)
        dd2 = d2_geometric(w)
        holds = delta == a**4 * dd2**2
        return FactorizationReport(w, delta, a, dd2, holds)
    w = element(4, [float(c) for c in v.coeffs])
    delta = det_float(left_mult_matrix(w))
    a = d1(w)
    dd2 = d2_geometric(w)
    prod = a**4 * dd2**2
    holds = abs(delta - prod) <= FLOAT_FACTOR_RTOL * max(1.0, abs(delta), abs(prod))
    return FactorizationReport(w, delta, a, dd2, holds)


def is_zero_divisor(v: CDElement, tol: float = DEFAULT_ZD_TOL) -> bool:
    """Scale-invariant test d2(v) <= tol * d1(v)^2 (tol = 0 when exact)."""
    if v.is_zero():
        raise ZeroElementError("zero element is not classified")
    if v.is_exact():
        return d2_geometric(v) == 0
    return d2_geometric(v) <= tol * float(d1(v)) ** 2


# --- nullspace / annihilator -----------------------------------------------

def exact_nullspace(m: list) -> list:
    """Basis of the exact right nullspace, deterministic elimination order.

    Gauss-Jordan over Fractions, pivots chosen as the first nonzero row
    in column order; basis vectors come from free columns in increasing
    order with the free variable set to 1.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    a = [[Fraction(x) for x in row] for row in m]
    pivot_of_col = {}
    r = 0
    for col in range(cols):
        piv = next((i for i in range(r, rows) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][col]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivot_of_col[col] = r
        r += 1
        if r == rows:
            break
    basis = []
    free_cols = [c for c in range(cols) if c not in pivot_of_col]
    for fc in free_cols:
        vec = [Fraction(0)] * cols
        vec[fc] = Fraction(1)
        for pc, pr in pivot_of_col.items():
            vec[pc] = -a[pr][fc]
        basis.append(vec)
    return basis


def float_nullspace(m, pivot_tol: float = 1e-8) -> list:
    """Nullspace basis by elimination with a pivot threshold (float)."""
    a = np.array(m, dtype=float)
    rows, cols = a.shape
    scale = max(1.0, float(np.max(np.abs(a))))
    pivot_of_col = {}
    r = 0
    for col in range(cols):
        piv = r + int(np.argmax(np.abs(a[r:, col]))) if r < rows else None
        if piv is None or abs(a[piv, col]) <= pivot_tol * scale:
            continue
        a[[r, piv]] = a[[piv, r]]
        a[r] /= a[r, col]
        for i in range(rows):
            if i != r and a[i, col] != 0.0:
                a[i] -= a[i, col] * a[r]
        pivot_of_col[col] = r
        r += 1
        if r == rows:
            break
    basis = []
    for fc in (c for c in range(cols) if c not in pivot_of_col):
        vec = np.zeros(cols)
        vec[fc] = 1.0
        for pc, pr in pivot_of_col.items():
            vec[pc] = -a[pr, fc]
        basis.append(vec)
    return basis


def find_annihilator(v: CDElement, tol: float = DEFAULT_ZD_TOL):
    """Unit-norm w with v*w = 0, plus the kernel dimension of M(v).

    Exact inputs use the exact nullspace; floats eliminate with a pivot
    threshold.  The first basis vector under the deterministic
    elimination order is returned, scaled to unit norm (float).
    """
    if not is_zero_divisor(v, tol):
        raise NotZeroDivisorError("not a zero divisor: d2(v) != 0")
    m = left_mult_matrix(v)
    basis_vecs = exact_nullspace(m) if v.is_exact() else float_nullspace(m)
    kernel_dim = len(basis_vecs)
    if kernel_dim == 0:
        raise SingularityMismatchError(
            "d2(v) = 0 but the left multiplication matrix is nonsingular")
    w = np.array([float(x) for x in basis_vecs[0]])
    w /= np.linalg.norm(w)
    return element(4, tuple(float(x) for x in w)), kernel_dim


# --- normalized frames (Stiefel maps) --------------------------------------

@dataclass(frozen=True)
class Frame:
    """Orthonormal pair (v1, v2) of vectors in R^8."""

    v1: np.ndarray
    v2: np.ndarray

    def errors(self) -> tuple:
        """(max norm deviation, |<v1,v2>|)."""
        n1 = abs(float(np.linalg.norm(self.v1)) - 1.0)
        n2 = abs(float(np.linalg.norm(self.v2)) - 1.0)
        return max(n1, n2), abs(float(self.v1 @ self.v2))

    def is_valid(self, tol: float = 1e-8) -> bool:
        norm_err, orth_err = self.errors()
        return len(self.v1) == 8 and len(self.v2) == 8 and \
            norm_err <= tol and orth_err <= tol


def stiefel_scale(r: float, f: Frame) -> CDElement:
    """(r, frame) -> r*u1 + (r*u2)e8; inverse of stiefel_normalize."""
    if not r > 0:
        raise ValueError("radius must be positive")
    if not f.is_valid():
        raise ValueError("invalid frame: vectors must be orthonormal in R^8")
    coeffs = tuple(float(r * x) for x in f.v1) + tuple(float(r * x) for x in f.v2)
    return element(4, coeffs)


def stiefel_normalize(v: CDElement, tol: float = DEFAULT_ZD_TOL):
    """v -> (|v1|, (v1/|v1|, v2/|v2|)); requires d2(v) = 0 within tol."""
    if not is_zero_divisor(v, tol):
        raise NotZeroDivisorError("not a zero divisor: d2(v) != 0")
    v1 = np.array([float(c) for c in v.coeffs[:8]])
    v2 = np.array([float(c) for c in v.coeffs[8:]])
    r = float(np.linalg.norm(v1))
    return r, Frame(v1 / r, v2 / np.linalg.norm(v2))


def codimension_check(f: Frame, sv_tol: float = 1e-8) -> int:
    """Rank of the 2x16 Jacobian of (|v1|^2-|v2|^2, <v1,v2>) at (f.v1, f.v2)."""
    jac = np.zeros((2, 16))
    jac[0, :8] = 2.0 * f.v1
    jac[0, 8:] = -2.0 * f.v2
    jac[1, :8] = f.v2
    jac[1, 8:] = f.v1
    sv = np.linalg.svd(jac, compute_uv=False)
    return int(np.sum(sv > sv_tol))


def random_frame(rng) -> Frame:
    """Orthonormal pair from 16 PRNG normals (Gram-Schmidt)."""
    while True:
        v1 = np.array([rng.normal() for _ in range(8)])
        n1 = np.linalg.norm(v1)
        if n1 < 1e-6:
            continue
        v1 /= n1
        v2 = np.array([rng.normal() for _ in range(8)])
        v2 -= (v2 @ v1) * v1
        n2 = np.linalg.norm(v2)
        if n2 < 1e-6:
            continue
        return Frame(v1, v2 / n2)


def random_imaginary_zero_divisor(rng, bound: int = 3) -> CDElement:
    """Exact-rational element with imaginary halves of equal norm,
    orthogonal to each other: v2 signed-swaps v1's coordinates in pairs,
    which forces <v1,v2> = 0 and equal norms exactly."""
    while True:
        a, b, c, d, e, f = (rng.rational(bound) for _ in range(6))
        if a == b == c == d == e == f == 0:
            continue
        s = abs(rng.rational(bound)) + 1  # positive rational scale
        x = tuple(s * t for t in (0, a, b, c, d, e, f, 0))
        y = tuple(s * t for t in (0, -b, a, -d, c, -f, e, 0))
        return join(element(3, x), element(3, y))
