"""Fixed 64-bit PRNG so generated datasets are stable across platforms.

The generator is xoshiro256** seeded by expanding a 64-bit seed through
the SplitMix64 stream; per-item seeds are derived with the SplitMix64
finalizer (``mix64``) so any subset of a dataset can be regenerated
independently of the rest.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    """SplitMix64 finalizer: a 64-bit bijective mixing function."""
    z &= _MASK64
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & _MASK64
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & _MASK64
    z ^= z >> 31
    return z


def splitmix64_stream(seed: int, n: int) -> list[int]:
    """First ``n`` outputs of SplitMix64 starting from ``seed``."""
    out = []
    state = seed & _MASK64
    for _ in range(n):
        state = (state + _GOLDEN) & _MASK64
        out.append(mix64(state))
    return out


def derive_seed(base_seed: int, index: int) -> int:
    """Independent per-index seed: mix64(base_seed XOR index)."""
    return mix64((base_seed ^ index) & _MASK64)


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK64


class Xoshiro256StarStar:
    """xoshiro256** with a documented draw vocabulary.

    ``next_u64`` is the raw generator step. ``below(n)`` maps one u64 to
    [0, n) by the multiply-shift reduction ``(u * n) >> 64``;
    ``next_double`` uses the top 53 bits. Consumers must treat the draw
    order as part of their output contract.
    """

    def __init__(self, seed: int):
        s = splitmix64_stream(seed, 4)
        self._s0, self._s1, self._s2, self._s3 = s

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self._s0, self._s1, self._s2, self._s3
        result = (_rotl((s1 * 5) & _MASK64, 7) * 9) & _MASK64
        t = (s1 << 17) & _MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self._s0, self._s1, self._s2, self._s3 = s0, s1, s2, s3
        return result

    def next_double(self) -> float:
        """Uniform double in [0, 1) with 53-bit resolution."""
        return (self.next_u64() >> 11) * 2.0**-53

    def below(self, n: int) -> int:
        """Uniform integer in [0, n); n must be positive."""
        if n <= 0:
            raise ValueError(f"bound must be positive, got {n}")
        return (self.next_u64() * n) >> 64

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi], both ends inclusive."""
        if hi < lo:
            raise ValueError(f"empty range [{lo}, {hi}]")
        return lo + self.below(hi - lo + 1)

    def uniform(self, a: float, b: float) -> float:
        """Uniform double in [a, b)."""
        return a + (b - a) * self.next_double()
