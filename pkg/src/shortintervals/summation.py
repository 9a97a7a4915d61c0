"""Compensated summation helpers.

Zero sums and sieve prefix sums accumulate 1e5..1e7 terms; plain sequential
float addition loses 5-8 digits at that length, which is too sloppy for the
identity checks in the test suite.  Final reductions use math.fsum (exactly
rounded); running prefixes use a chunked cumulative sum with a Kahan carry
across chunks, which keeps the absolute error near a single rounding of the
total instead of growing linearly with the term count.
"""

import math

import numpy as np

_CHUNK = 1 << 16


class KahanAccumulator:
    """Streaming compensated sum."""

    __slots__ = ("total", "carry")

    def __init__(self) -> None:
        self.total = 0.0
        self.carry = 0.0

    def add(self, value: float) -> None:
        y = value - self.carry
        t = self.total + y
        self.carry = (t - self.total) - y
        self.total = t


def compensated_cumsum(values: np.ndarray) -> np.ndarray:
    """Cumulative sum with per-chunk compensation.

    Within each chunk the native cumsum is used (error bounded by the chunk
    length); chunk totals are carried with exactly rounded summation, so the
    error at any prefix stays at the within-chunk level regardless of the
    array length.
    """
    values = np.asarray(values, dtype=np.float64)
    out = np.empty_like(values)
    base = KahanAccumulator()
    for i in range(0, len(values), _CHUNK):
        chunk = values[i:i + _CHUNK]
        np.cumsum(chunk, out=out[i:i + len(chunk)])
        if base.total != 0.0 or base.carry != 0.0:
            out[i:i + len(chunk)] += base.total + base.carry
        base.add(float(math.fsum(chunk)))
    return out


def exact_sum(values) -> float:
    """Exactly rounded sum of a float iterable or array."""
    return math.fsum(np.asarray(values, dtype=np.float64))
