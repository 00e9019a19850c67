"""Determinant evaluation on test pairs and the 6x6 monomial system.

Six octonion pairs (v1, v2) produce rows of monomials
{a^4, a^2 b^2, a^2 c^2, b^4, b^2 c^2, c^4} evaluated at the invariant
triple of each pair, against the exact determinants of the
corresponding 16x16 multiplication matrices.  The solver is exact
rational throughout; a singular system raises a structured error
carrying the exact rank and a minimal dependency certificate (each
dependent row expressed in terms of earlier rows).

The historically printed six-pair set is provided (published_pairs);
it is rank 4: pair 2 is 2*pair 1 (row 2 = 256 * row 1) and pair 5's triple is
a multiple of pair 3's (row 5 = 16 * row 3).  corrected_pairs generates
a deterministic full-rank replacement with small integer coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import CDElement, basis, element, join, zero
from .invariants import InvariantTriple, invariant_triple
from .operators import det_exact, left_mult_matrix
from .rng import SplitMix64

MONOMIAL_NAMES = ("a^4", "a^2*b^2", "a^2*c^2", "b^4", "b^2*c^2", "c^4")

DEFAULT_PAIR_SEED = 1


class SingularSystemError(ValueError):
    """Monomial matrix is singular; carries rank and row dependencies."""

    def __init__(self, rank: int, dependencies: list):
        self.rank = rank
        # list of (row, {base_row: coeff}) in 1-based indexing
        self.dependencies = dependencies
        deps = "; ".join(
            f"row {r} = " + " + ".join(f"{format_coeff(c)} * row {b}"
                                       for b, c in sorted(combo.items()))
            for r, combo in dependencies)
        super().__init__(f"singular system: rank {rank} of 6 ({deps})")


def format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


@dataclass(frozen=True)
class TestPair:
    v1: CDElement
    v2: CDElement
    triple: InvariantTriple
    delta: Fraction


def make_test_pair(v1: CDElement, v2: CDElement) -> TestPair:
    v = join(v1, v2)
    return TestPair(v1, v2, invariant_triple(v),
                    det_exact(left_mult_matrix(v)))


def monomial_row(t: InvariantTriple) -> list:
    a, b, c = Fraction(t.a), Fraction(t.b), Fraction(t.c)
    return [a**4, a**2 * b**2, a**2 * c**2, b**4, b**2 * c**2, c**4]


def published_pairs() -> list:
    """The six printed test pairs (rank-deficient as published)."""
    e0, e1 = basis(3, 0), basis(3, 1)
    z = zero(3)
    raw = [
        (e0, z),
        (2 * e0, z),
        (e0, e1),
        (e0, 2 * e1),
        (e0 + e1, e0 - e1),
        (e0 + e1, 2 * e0),
    ]
    return [make_test_pair(v1, v2) for v1, v2 in raw]


def corrected_pairs(seed: int = DEFAULT_PAIR_SEED) -> list:
    """Deterministic full-rank pair set with small integer coefficients.

    Draws octonion pairs with entries in [-2, 2] until the monomial
    matrix has nonzero exact determinant and at least three pairs have
    c != 0.
    """
    rng = SplitMix64(seed)
    while True:
        pairs = []
        for _ in range(6):
            v1 = element(3, [rng.randint(-2, 2) for _ in range(8)])
            v2 = element(3, [rng.randint(-2, 2) for _ in range(8)])
            pairs.append(make_test_pair(v1, v2))
        amat, _ = build_system(pairs)
        if det_exact(amat) == 0:
            continue
        if sum(1 for p in pairs if p.triple.c != 0) < 3:
            continue
        return pairs


def build_system(pairs: list):
    """(A, rhs): monomial rows against exact determinants."""
    if len(pairs) != 6:
        raise ValueError("exactly six test pairs are required")
    amat = [monomial_row(p.triple) for p in pairs]
    rhs = [Fraction(p.delta) for p in pairs]
    return amat, rhs


def _rank_with_certificate(amat: list):
    """Exact rank plus, for each dependent row, its combination of
    earlier independent rows (online elimination, no row swaps)."""
    n = len(amat[0])
    pivots = []  # (col, reduced_row, combo {orig_row_1based: coeff})
    deps = []
    for idx, row in enumerate(amat):
        cur = [Fraction(x) for x in row]
        combo = {idx + 1: Fraction(1)}
        for col, prow, pcombo in pivots:
            f = cur[col]
            if f == 0:
                continue
            cur = [x - f * y for x, y in zip(cur, prow)]
            for k, v in pcombo.items():
                combo[k] = combo.get(k, Fraction(0)) - f * v
        lead = next((j for j, x in enumerate(cur) if x != 0), None)
        if lead is None:
            expansion = {k: -v for k, v in combo.items() if k != idx + 1 and v != 0}
            deps.append((idx + 1, expansion))
        else:
            inv = 1 / cur[lead]
            cur = [x * inv for x in cur]
            pivots.append((lead, cur, {k: v * inv for k, v in combo.items()}))
    return len(pivots), deps


def solve_coefficients(pairs: list) -> tuple:
    """Exact solution (alpha..zeta) of the 6x6 system, or a structured
    singularity diagnosis."""
    amat, rhs = build_system(pairs)
    rank, deps = _rank_with_certificate(amat)
    if rank < 6:
        raise SingularSystemError(rank, deps)
    a = [row[:] + [rhs[i]] for i, row in enumerate(amat)]
    n = 6
    for col in range(n):
        piv = next(i for i in range(col, n) if a[i][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return tuple(a[i][n] for i in range(n))


@dataclass(frozen=True)
class ClosedFormReport:
    samples: int
    seed: int
    counterexamples: list  # (v, delta, a^4*(b^2+4c^2)^2)

    @property
    def holds(self) -> bool:
        return not self.counterexamples


def verify_closed_form(samples: int, seed: int, bound: int = 3) -> ClosedFormReport:
    """Exact comparison det M(v) vs a^4 (b^2+4c^2)^2 on random rational
    sedenions; all counterexamples are listed."""
    rng = SplitMix64(seed)
    bad = []
    for _ in range(samples):
        v = element(4, [rng.rational(bound) for _ in range(16)])
        t = invariant_triple(v)
        a, b, c = Fraction(t.a), Fraction(t.b), Fraction(t.c)
        target = a**4 * (b * b + 4 * c * c)**2
        delta = det_exact(left_mult_matrix(v))
        if delta != target:
            bad.append((v, delta, target))
    return ClosedFormReport(samples, seed, bad)
