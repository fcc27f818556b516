"""Tiny deterministic PRNG used by instance generators and shuffles.

A 64-bit linear congruential generator is enough here: we only need
reproducible draws from small menus, identical across platforms and
Python versions. ``split`` derives an independent stream so that, e.g.,
each leader's shuffle does not perturb the others.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
_MULT = 6364136223846793005
_INC = 1442695040888963407
_GOLDEN = 0x9E3779B97F4A7C15


def _splitmix64(x: int) -> int:
    x = (x + _GOLDEN) & _MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK
    return (x ^ (x >> 31)) & _MASK


class Lcg:
    """64-bit LCG; top 32 bits are used for draws."""

    def __init__(self, seed: int):
        self.state = _splitmix64(seed & _MASK)

    def next_u64(self) -> int:
        self.state = (self.state * _MULT + _INC) & _MASK
        return self.state

    def next_u32(self) -> int:
        return self.next_u64() >> 32

    def randint(self, n: int) -> int:
        """Uniform integer in [0, n)."""
        if n <= 0:
            raise ValueError("randint needs n >= 1")
        return self.next_u32() % n

    def uniform(self, lo: float = 0.0, hi: float = 1.0) -> float:
        return lo + (hi - lo) * (self.next_u32() / 2**32)

    def choice(self, seq):
        return seq[self.randint(len(seq))]

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.randint(i + 1)
            items[i], items[j] = items[j], items[i]

    def split(self, tag: int) -> "Lcg":
        child = Lcg(0)
        child.state = _splitmix64(self.state ^ _splitmix64(tag + 1))
        return child
