"""Deterministic 64-bit pseudo-random generator (SplitMix64).

Every randomised step of the pipeline (shift points, negative-perturbation
draws, separating linear forms) is driven by this generator so that a run is
reproducible from its integer seed on any platform.

Recurrence, all arithmetic modulo 2**64::

    state <- state + 0x9E3779B97F4A7C15
    z <- state
    z <- (z xor (z >> 30)) * 0xBF58476D1CE4E5B9
    z <- (z xor (z >> 27)) * 0x94D049BB133111EB
    output z xor (z >> 31)
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15

# Stream tags keep the draws of different pipeline stages independent.
STREAM_SHIFT = 0x5348494654
STREAM_LAMBDA = 0x4C414D4244
STREAM_SEPARATOR = 0x5345504152
STREAM_LAMBDA_MULT = 0x4C4D554C54


def _mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """SplitMix64 stream with exact unbiased integer draws."""

    __slots__ = ("state",)

    def __init__(self, seed: int, stream: int = 0) -> None:
        self.state = (seed ^ _mix((stream * GOLDEN) & MASK64)) & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK64
        return _mix(self.state)

    def randbelow(self, n: int) -> int:
        """Uniform integer in ``[0, n)`` by rejection sampling."""
        if n <= 0:
            raise ValueError("randbelow needs a positive bound")
        if n > 1 << 64:
            # Concatenate words for very large ranges.
            words = (n.bit_length() + 63) // 64
            limit = (1 << (64 * words)) - ((1 << (64 * words)) % n)
            while True:
                x = 0
                for _ in range(words):
                    x = (x << 64) | self.next_u64()
                if x < limit:
                    return x % n
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in the closed range ``[lo, hi]``."""
        return lo + self.randbelow(hi - lo + 1)
