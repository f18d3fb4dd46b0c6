"""SplitMix64 pseudo-random stream.

SplitMix64 (Steele, Lea and Flood) is a 64-bit counter-based generator whose
output depends only on integer arithmetic modulo 2**64, so streams are
identical on every platform. Doubles are ``(z >> 11) * 2**-53`` in [0, 1).
"""
import numpy as np

from cspair import kernels

_MASK = (1 << 64) - 1
_SPLIT = 0xD1B54A32D192ED03


class SplitMix64:
    def __init__(self, seed):
        self.state = int(seed) & _MASK

    def random(self, count):
        """Return ``count`` doubles in [0, 1) and advance the stream."""
        self.state, out = kernels.splitmix64_doubles(self.state, int(count))
        return out

    def uniform(self, low, high, count):
        return low + (high - low) * self.random(count)

    def substream(self, index):
        """Independent child stream for ``index`` (does not advance ``self``)."""
        return substream(self.state, index)


def substream(seed, index):
    """Stream derived from ``(seed, index)``; used for per-trial randomness."""
    child = SplitMix64((int(seed) ^ ((int(index) + 1) * _SPLIT)) & _MASK)
    # one warm-up draw decorrelates neighbouring indices
    child.random(1)
    return child


def uniform_matrix(stream, rows, cols, low=-1.0, high=1.0):
    return np.asarray(stream.uniform(low, high, rows * cols)).reshape(rows, cols)
