"""Deterministic pseudo-random numbers for reproducible experiments.

Every random draw in this package flows through :class:`SplitMix64`, a
64-bit-state generator small enough to restate completely here so that
traces and golden files can be reproduced anywhere:

    state <- (state + 0x9E3779B97F4A7C15) mod 2^64
    z <- state
    z <- (z XOR (z >> 30)) * 0xBF58476D1CE4E5B9   mod 2^64
    z <- (z XOR (z >> 27)) * 0x94D049BB133111EB   mod 2^64
    output: z XOR (z >> 31)

Uniform doubles in [0, 1) take the top 53 bits: (u64 >> 11) * 2^-53.
Gaussians use the Box-Muller transform on consecutive uniform pairs
(the second value of each pair is cached and returned next).
"""

from __future__ import annotations

import math
from fractions import Fraction

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """SplitMix64 generator; identical output for identical seeds."""

    def __init__(self, seed: int):
        self._state = seed & _MASK
        self._spare_normal = None

    def u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK
        return z ^ (z >> 31)

    def float01(self) -> float:
        return (self.u64() >> 11) * 2.0**-53

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.float01()

    def randint(self, lo: int, hi: int) -> int:
        """Integer in [lo, hi], by reduction of one 64-bit word."""
        if hi < lo:
            raise ValueError("empty range")
        return lo + self.u64() % (hi - lo + 1)

    def rational(self, bound: int, max_den: int = 4) -> Fraction:
        """Exact rational in [-bound, bound] with denominator <= max_den."""
        den = self.randint(1, max_den)
        num = self.randint(-bound * den, bound * den)
        return Fraction(num, den)

    def normal(self) -> float:
        if self._spare_normal is not None:
            z = self._spare_normal
            self._spare_normal = None
            return z
        # Box-Muller; u1 = 0 is remapped to avoid log(0).
        u1 = self.float01()
        u2 = self.float01()
        if u1 <= 0.0:
            u1 = 2.0**-53
        r = math.sqrt(-2.0 * math.log(u1))
        self._spare_normal = r * math.sin(2.0 * math.pi * u2)
        return r * math.cos(2.0 * math.pi * u2)
