"""Seeded 64-bit splitmix generator used by all simulation code.

Test vectors (seed 1234567):
    next_u64() -> 6457827717110365317
    next_u64() -> 3203168211198807973
    next_u64() -> 9817491932198370423

Matches the reference splitmix64 stepping (golden-gamma increment).
"""

from __future__ import annotations

MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return z ^ (z >> 31)

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def randrange(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection (unbiased)."""
        if n <= 0:
            raise ValueError("empty range")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def choice(self, seq):
        return seq[self.randrange(len(seq))]

    def spawn(self, stream: int) -> "SplitMix64":
        """Derived generator for a parallel stream (e.g. per-trial seeds)."""
        return SplitMix64(self.state ^ (0xA5A5A5A55A5A5A5A + stream * 0x9E3779B97F4A7C15))
