"""Portable pseudo-random generator: xoshiro256** seeded through splitmix64.

Everything here is integer arithmetic on 64-bit words, so a given seed
produces the same stream on every platform.  ``next_double`` maps the top
53 bits of a draw to [0, 1).
"""
import numpy as np
from numba import njit

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15

_U11 = np.uint64(11)
_INV_2_53 = 1.0 / 9007199254740992.0


def splitmix64(x):
    """One splitmix64 output for state ``x`` (plain Python ints)."""
    z = (x + GOLDEN_GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def seed_state(seed):
    """Expand a 64-bit seed into a xoshiro256** state array."""
    x = int(seed) & MASK64
    words = []
    for _ in range(4):
        words.append(splitmix64(x))
        x = (x + GOLDEN_GAMMA) & MASK64
    if not any(words):
        words[0] = 1
    return np.array(words, dtype=np.uint64)


def derive_seed(base_seed, k):
    """Per-k seed for a topic-count sweep: splitmix64(base XOR k * golden gamma)."""
    return splitmix64((int(base_seed) ^ ((int(k) * GOLDEN_GAMMA) & MASK64)) & MASK64)


@njit(cache=True)
def _rotl(x, k):
    return (x << np.uint64(k)) | (x >> np.uint64(64 - k))


@njit(cache=True)
def next_u64(s):
    result = _rotl(s[1] * np.uint64(5), 7) * np.uint64(9)
    t = s[1] << np.uint64(17)
    s[2] ^= s[0]
    s[3] ^= s[1]
    s[1] ^= s[2]
    s[0] ^= s[3]
    s[2] ^= t
    s[3] = _rotl(s[3], 45)
    return result


@njit(cache=True)
def next_double(s):
    return np.float64(next_u64(s) >> _U11) * _INV_2_53


class Xoshiro256:
    """Pure-Python xoshiro256**; the same stream as the compiled functions."""

    def __init__(self, seed):
        self.s = [int(v) for v in seed_state(seed)]

    @staticmethod
    def _rot(x, k):
        return ((x << k) | (x >> (64 - k))) & MASK64

    def next_u64(self):
        s = self.s
        result = (self._rot((s[1] * 5) & MASK64, 7) * 9) & MASK64
        t = (s[1] << 17) & MASK64
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = self._rot(s[3], 45)
        return result

    def next_double(self):
        return (self.next_u64() >> 11) * _INV_2_53

    def below(self, n):
        """Uniform integer in [0, n) by rejection (no modulo bias)."""
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n
