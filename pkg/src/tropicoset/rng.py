"""Deterministic 64-bit PRNG used by every sampled check.

splitmix64 with the standard constants (Steele, Lea & Flood 2014):
gamma 0x9E3779B97F4A7C15, mixers 0xBF58476D1CE4E5B9 and
0x94D049BB133111EB.  Results are identical on every platform and do not
depend on Python's hash seed or the stdlib ``random`` module.  Streams
can be split by index so parallel workers stay reproducible.
"""

from fractions import Fraction

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def _mix64(z):
    z = (z ^ (z >> 30)) * _MIX1 & _MASK
    z = (z ^ (z >> 27)) * _MIX2 & _MASK
    return z ^ (z >> 31)


class SplitMix64:
    """Tiny deterministic generator; one instance per sampling task."""

    __slots__ = ("_state",)

    def __init__(self, seed):
        self._state = seed & _MASK

    def next_u64(self):
        self._state = (self._state + _GAMMA) & _MASK
        return _mix64(self._state)

    def randint(self, lo, hi):
        """Uniform integer in [lo, hi], inclusive."""
        if hi < lo:
            raise ValueError("empty range")
        span = hi - lo + 1
        # rejection sampling to avoid modulo bias
        limit = (_MASK + 1) - ((_MASK + 1) % span)
        while True:
            u = self.next_u64()
            if u < limit:
                return lo + (u % span)

    def uniform(self, lo=0.0, hi=1.0):
        """Uniform float in [lo, hi); 53-bit mantissa."""
        u = self.next_u64() >> 11
        return lo + (hi - lo) * (u / float(1 << 53))

    def fraction(self, lo, hi, denominator=256):
        """Uniform rational k/denominator in [lo, hi]."""
        lo_k = -(-lo * denominator // 1)  # ceil
        hi_k = hi * denominator // 1      # floor
        k = self.randint(int(lo_k), int(hi_k))
        return Fraction(k, denominator)

    def split(self, index):
        """Independent substream: deterministic in (seed, index)."""
        return SplitMix64(_mix64(self._state ^ _mix64(index & _MASK)))
