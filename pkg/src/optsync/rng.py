"""SplitMix64, the only random source used by optsync.

Generator ``splitmix64-v1``
---------------------------
State is one unsigned 64-bit word initialised to the user seed (mod 2**64).
Each call to :meth:`SplitMix64.next_u64` does::

    state = (state + 0x9E3779B97F4A7C15) mod 2**64
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 mod 2**64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB mod 2**64
    return z ^ (z >> 31)

Bounded integers use Lemire's multiply-shift with rejection, so draws are
exactly uniform: for a range of size ``s``, take ``x = next_u64()``, form
``p = x * s``; with ``lo = p mod 2**64`` reject while ``lo < (2**64 - s) mod s``;
the result is ``p >> 64``.

This is small enough to port verbatim, which keeps seeded tree traces
reproducible across implementations.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
VERSION = "splitmix64-v1"


class SplitMix64:
    __slots__ = ("state",)

    def __init__(self, seed: int) -> None:
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, s: int) -> int:
        """Uniform integer in ``[0, s)``."""
        if s <= 0:
            raise ValueError("range size must be positive")
        threshold = ((1 << 64) - s) % s
        while True:
            p = self.next_u64() * s
            if (p & MASK64) >= threshold:
                return p >> 64

    def integer(self, lo: int, hi: int) -> int:
        """Uniform integer in the closed range ``[lo, hi]``."""
        return lo + self.below(hi - lo + 1)
