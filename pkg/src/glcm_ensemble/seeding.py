"""Deterministic seed derivation built on SplitMix64.

Every random decision in the pipeline (dataset split, bootstrap samples,
feature subsampling, SVM epoch order, synthetic images) draws from a stream
derived from one master seed::

    child(seed, tag, index) = mix(mix(seed ^ fnv1a64(tag)) + index)

where ``mix`` is the SplitMix64 output function.  The derivation is pure, so
streams never depend on call order or worker count.  Distinct tags hash to
distinct 64-bit values; a collision would need an FNV-1a collision between
two of the fixed tag strings used here, which has been checked not to occur.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def mix64(z: int) -> int:
    """SplitMix64 finalizer (Stafford variant 13)."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def fnv1a64(text: str) -> int:
    h = _FNV_OFFSET
    for byte in text.encode("utf-8"):
        h = ((h ^ byte) * _FNV_PRIME) & MASK64
    return h


def derive_seed(seed: int, tag: str, index: int = 0) -> int:
    """Return the 64-bit child seed for ``(tag, index)`` under ``seed``."""
    base = mix64((seed & MASK64) ^ fnv1a64(tag))
    return mix64((base + index) & MASK64)


class SplitMix64:
    """Small portable PRNG; the reference stream is Vigna's ``splitmix64.c``."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        return mix64(self.state)

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 bits of precision."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def randbelow(self, n: int) -> int:
        """Unbiased integer in [0, n) by rejection sampling."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            r = self.next_u64()
            if r < limit:
                return r % n

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randbelow(i + 1)
            items[i], items[j] = items[j], items[i]

    def permutation(self, n: int) -> list[int]:
        order = list(range(n))
        self.shuffle(order)
        return order

    def sample(self, n: int, k: int) -> list[int]:
        """``k`` distinct integers from ``range(n)`` (partial Fisher-Yates)."""
        pool = list(range(n))
        for i in range(k):
            j = i + self.randbelow(n - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]


class SeedTree:
    """Named access to derived streams under one master seed."""

    def __init__(self, master: int):
        self.master = master & MASK64

    def seed(self, tag: str, index: int = 0) -> int:
        return derive_seed(self.master, tag, index)

    def child(self, tag: str, index: int = 0) -> "SeedTree":
        return SeedTree(self.seed(tag, index))

    def rng(self, tag: str, index: int = 0) -> SplitMix64:
        return SplitMix64(self.seed(tag, index))
