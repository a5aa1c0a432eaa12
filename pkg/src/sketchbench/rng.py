"""Deterministic 64-bit pseudo-random number generation.

The update path of a logarithmic sketch consumes one uniform draw per
accepted-or-rejected increment, so the generator must be seedable, cheap,
and serializable.  We use xoroshiro128+ (Blackman & Vigna, 2018 revision
with rotation constants 24/16/37), seeded through splitmix64 as its
authors recommend.  Doubles are built from the top 53 bits of each output
word, giving uniforms on [0, 1).
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1

# splitmix64 increment ("golden gamma").
_GAMMA = 0x9E3779B97F4A7C15

_INV_2_53 = 1.0 / (1 << 53)


def fmix64(z: int) -> int:
    """splitmix64 finalizer: a full-avalanche bijection on 64-bit words."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def splitmix64(state: int) -> tuple[int, int]:
    """One splitmix64 step: returns (output, next_state)."""
    state = (state + _GAMMA) & MASK64
    return fmix64(state), state


class Xoroshiro128Plus:
    """xoroshiro128+ with a 128-bit state held as two 64-bit words.

    State is seeded from a single 64-bit integer via two splitmix64 steps;
    the all-zero state (a fixed point of the transition) is remapped.
    """

    __slots__ = ("s0", "s1")

    def __init__(self, seed: int):
        state = seed & MASK64
        self.s0, state = splitmix64(state)
        self.s1, state = splitmix64(state)
        if self.s0 == 0 and self.s1 == 0:
            self.s1 = _GAMMA

    @classmethod
    def from_state(cls, s0: int, s1: int) -> "Xoroshiro128Plus":
        if s0 == 0 and s1 == 0:
            raise ValueError("all-zero xoroshiro128+ state is invalid")
        rng = cls.__new__(cls)
        rng.s0 = s0 & MASK64
        rng.s1 = s1 & MASK64
        return rng

    @property
    def state(self) -> tuple[int, int]:
        return self.s0, self.s1

    def next_u64(self) -> int:
        s0, s1 = self.s0, self.s1
        result = (s0 + s1) & MASK64
        s1 ^= s0
        self.s0 = (((s0 << 24) | (s0 >> 40)) ^ s1 ^ (s1 << 16)) & MASK64
        self.s1 = ((s1 << 37) | (s1 >> 27)) & MASK64
        return result

    def next_float(self) -> float:
        """Uniform double in [0, 1) from the top 53 bits of the next word."""
        return (self.next_u64() >> 11) * _INV_2_53
