"""Cayley-Dickson algebra arithmetic over exact rationals or floats.

A level-n element has 2^n coefficients over the standard basis
e_0, ..., e_{2^n - 1}; level 3 gives the octonions and level 4 the
sedenions.  Multiplication doubles recursively from the reals via

    (x1, x2)(y1, y2) = (x1*y1 - conj(y2)*x2,  x2*conj(y1) + y2*x1)

where an element of level n+1 is the pair (x1, x2) of its lower and
upper level-n halves.  The recursion is the ground truth; a cached
signed basis product table (derived from the recursion, validated as a
signed permutation in every row and column) accelerates products.

Coefficients may be ints/Fractions (exact, no rounding anywhere) or
floats (IEEE double).  All values are immutable and every operation is
a pure function, so everything here is safe to use from multiple
threads.

Text form of an element: ``level:c0,c1,...`` with rationals written as
``p/q`` (plain integers without the ``/q``) and floats in decimal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Real
from typing import NamedTuple


class LevelMismatchError(ValueError):
    """Raised when two operands live in algebras of different levels."""


def _check_levels(x: "CDElement", y: "CDElement") -> None:
    if x.level != y.level:
        raise LevelMismatchError(
            f"level mismatch: {x.level} vs {y.level}")


@dataclass(frozen=True)
class CDElement:
    """Immutable element of the level-n Cayley-Dickson algebra."""

    level: int
    coeffs: tuple

    def __post_init__(self):
        if self.level < 0:
            raise ValueError("level must be nonnegative")
        if len(self.coeffs) != 1 << self.level:
            raise ValueError(
                f"level {self.level} element needs {1 << self.level} "
                f"coefficients, got {len(self.coeffs)}")

    @property
    def dim(self) -> int:
        return 1 << self.level

    def is_exact(self) -> bool:
        return all(not isinstance(c, float) for c in self.coeffs)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __add__(self, other: "CDElement") -> "CDElement":
        _check_levels(self, other)
        return CDElement(self.level,
                         tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "CDElement") -> "CDElement":
        _check_levels(self, other)
        return CDElement(self.level,
                         tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "CDElement":
        return CDElement(self.level, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, CDElement):
            return cd_multiply(self, other)
        if isinstance(other, Real):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, Real):
            return self.scale(other)
        return NotImplemented

    def scale(self, s) -> "CDElement":
        return CDElement(self.level, tuple(s * a for a in self.coeffs))

    def __repr__(self):
        return f"CDElement({format_element(self)!r})"


class OctonionPair(NamedTuple):
    """The two octonion halves (v1, v2) of a sedenion v = v1 + v2*e8."""

    v1: CDElement
    v2: CDElement


def zero(level: int) -> CDElement:
    return CDElement(level, (0,) * (1 << level))


def basis(level: int, m: int) -> CDElement:
    if not 0 <= m < (1 << level):
        raise ValueError(f"basis index {m} out of range for level {level}")
    c = [0] * (1 << level)
    c[m] = 1
    return CDElement(level, tuple(c))


def element(level: int, coeffs) -> CDElement:
    return CDElement(level, tuple(coeffs))


# --- multiplication -------------------------------------------------------

def _conj(a: tuple) -> tuple:
    return (a[0],) + tuple(-c for c in a[1:])


def _mul_recursive(a: tuple, b: tuple) -> tuple:
    """Reference doubling recursion on raw coefficient tuples."""
    n = len(a)
    if n == 1:
        return (a[0] * b[0],)
    h = n // 2
    x1, x2 = a[:h], a[h:]
    y1, y2 = b[:h], b[h:]
    lo = tuple(p - q for p, q in zip(_mul_recursive(x1, y1),
                                     _mul_recursive(_conj(y2), x2)))
    hi = tuple(p + q for p, q in zip(_mul_recursive(x2, _conj(y1)),
                                     _mul_recursive(y2, x1)))
    return lo + hi


# Cached signed basis tables: _TABLES[level][i][j] = (sign, k) meaning
# e_i * e_j = sign * e_k.  Built from the recursion, then validated.
_TABLES: dict[int, tuple] = {}


def basis_table(level: int):
    table = _TABLES.get(level)
    if table is None:
        table = _build_table(level)
        _validate_table(table)
        _TABLES[level] = table
    return table


def _build_table(level: int):
    dim = 1 << level
    rows = []
    for i in range(dim):
        ei = tuple(1 if m == i else 0 for m in range(dim))
        row = []
        for j in range(dim):
            ej = tuple(1 if m == j else 0 for m in range(dim))
            prod = _mul_recursive(ei, ej)
            nz = [(k, c) for k, c in enumerate(prod) if c != 0]
            if len(nz) != 1 or nz[0][1] not in (1, -1):
                raise AssertionError(
                    f"basis product e_{i}e_{j} is not a signed basis element")
            row.append((nz[0][1], nz[0][0]))
        rows.append(tuple(row))
    return tuple(rows)


def _validate_table(table) -> None:
    dim = len(table)
    for i in range(dim):
        if table[0][i] != (1, i) or table[i][0] != (1, i):
            raise AssertionError("e_0 is not acting as the identity")
        row_targets = {k for _, k in table[i]}
        col_targets = {table[j][i][1] for j in range(dim)}
        if row_targets != set(range(dim)) or col_targets != set(range(dim)):
            raise AssertionError(
                f"row/column {i} of the basis table is not a signed permutation")


def _install_corrupted_table(level: int, i: int = 1, j: int = 2) -> None:
    """Test hook: rebuild the table and flip one sign (negative controls).

    Idempotent: always corrupts relative to the pristine recursion.
    """
    rows = [list(r) for r in _build_table(level)]
    sign, k = rows[i][j]
    rows[i][j] = (-sign, k)
    _TABLES[level] = tuple(tuple(r) for r in rows)


def _reset_tables() -> None:
    _TABLES.clear()


def cd_multiply(x: CDElement, y: CDElement) -> CDElement:
    """Product xy at the common level (table-accelerated)."""
    _check_levels(x, y)
    if x.level == 0:
        return CDElement(0, (x.coeffs[0] * y.coeffs[0],))
    table = basis_table(x.level)
    out = [0] * x.dim
    for i, a in enumerate(x.coeffs):
        if a == 0:
            continue
        row = table[i]
        for j, b in enumerate(y.coeffs):
            if b == 0:
                continue
            sign, k = row[j]
            if sign > 0:
                out[k] += a * b
            else:
                out[k] -= a * b
    return CDElement(x.level, tuple(out))


def cd_multiply_recursive(x: CDElement, y: CDElement) -> CDElement:
    """Product by the bare doubling recursion (ground truth for tests)."""
    _check_levels(x, y)
    return CDElement(x.level, _mul_recursive(x.coeffs, y.coeffs))


def conjugate(x: CDElement) -> CDElement:
    return CDElement(x.level, _conj(x.coeffs))


def norm_sq(x: CDElement):
    total = 0
    for c in x.coeffs:
        total = total + c * c
    return total


def inner(x: CDElement, y: CDElement):
    _check_levels(x, y)
    total = 0
    for a, b in zip(x.coeffs, y.coeffs):
        total = total + a * b
    return total


# --- sedenion split/join --------------------------------------------------

def split(v: CDElement) -> OctonionPair:
    """Halves (v1, v2) of a level-4 element v = v1 + v2*e8."""
    if v.level != 4:
        raise LevelMismatchError(f"split needs a level-4 element, got level {v.level}")
    return OctonionPair(CDElement(3, v.coeffs[:8]), CDElement(3, v.coeffs[8:]))


def join(v1: CDElement, v2: CDElement) -> CDElement:
    if v1.level != 3 or v2.level != 3:
        raise LevelMismatchError(
            f"join needs two level-3 elements, got levels {v1.level}, {v2.level}")
    return CDElement(4, v1.coeffs + v2.coeffs)


# --- text serialization ---------------------------------------------------

def format_scalar(c) -> str:
    if isinstance(c, float):
        return repr(c)
    f = Fraction(c)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def parse_scalar(tok: str, exact: bool = False):
    """One coefficient; decimal notation parses to float unless exact."""
    tok = tok.strip()
    if "/" in tok:
        return Fraction(tok)
    if any(ch in tok for ch in ".eE") and not tok.lstrip("+-").isdigit():
        return Fraction(tok) if exact else float(tok)
    return int(tok)


def format_element(x: CDElement) -> str:
    return f"{x.level}:" + ",".join(format_scalar(c) for c in x.coeffs)


def parse_element(s: str, exact: bool = False) -> CDElement:
    head, _, body = s.partition(":")
    if not body:
        raise ValueError(f"malformed element {s!r}: expected 'level:c0,c1,...'")
    level = int(head)
    coeffs = tuple(parse_scalar(t, exact) for t in body.split(","))
    return CDElement(level, coeffs)
