"""Exact prime-power arithmetic over integer windows.

Everything here is unconditional: a segmented sieve produces the positions
n = p^m together with log p, and the Chebyshev-style sums (psi, its running
integral psi1, trapezoid-weighted sums) are evaluated from that table with
compensated summation.  The table is immutable after construction and safe
to share between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, SieveRangeError
from .summation import compensated_cumsum, exact_sum

_BLOCK = 1 << 22


def von_mangoldt(n: int) -> float:
    """log p if n is a prime power p^m, else 0.

    Total function on positive integers, computed by trial factorization;
    the sieve table must agree with it everywhere (this is the oracle the
    tests compare against).
    """
    if n < 1:
        raise DomainError(f"von_mangoldt needs n >= 1, got {n}")
    if n == 1:
        return 0.0
    m = n
    p = 0
    for d in range(2, math.isqrt(n) + 1):
        if m % d == 0:
            p = d
            while m % d == 0:
                m //= d
            break
    if p == 0:
        return math.log(n)  # n itself is prime
    if m != 1:
        return 0.0  # second prime factor survived
    return math.log(p)


def primes_upto(n: int) -> np.ndarray:
    """All primes <= n, ascending int64 array."""
    if n < 2:
        return np.empty(0, dtype=np.int64)
    mask = np.ones(n + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if mask[p]:
            mask[p * p::p] = False
    return np.flatnonzero(mask).astype(np.int64)


def prime_blocks(lo: int, hi: int, block: int = _BLOCK):
    """Yield ascending arrays of the primes in [lo, hi], one block at a time."""
    if hi < 2 or hi < lo:
        return
    lo = max(lo, 2)
    base = primes_upto(math.isqrt(hi))
    for start in range(lo, hi + 1, block):
        stop = min(start + block - 1, hi)
        mask = np.ones(stop - start + 1, dtype=bool)
        for p in base:
            first = max(p * p, ((start + p - 1) // p) * p)
            if first > stop:
                continue
            mask[first - start::p] = False
        yield np.flatnonzero(mask) + start


@dataclass(frozen=True)
class IntervalQuery:
    """Window parameters (x, h, delta, alpha, beta) for the smoothed count.

    The ordering 2 <= delta <= h <= x is required throughout; alpha and beta
    locate the split points of the zero sum and must be positive.
    """

    x: float
    h: float
    delta: float
    alpha: float = 1.0
    beta: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.x) and self.x > 0):
            raise DomainError(f"x must be positive and finite, got {self.x}")
        if not (2.0 <= self.delta <= self.h <= self.x):
            raise DomainError(
                "need 2 <= delta <= h <= x, got "
                f"delta={self.delta}, h={self.h}, x={self.x}")
        if self.alpha <= 0 or self.beta <= 0:
            raise DomainError("alpha and beta must be positive")

    @property
    def support_lo(self) -> float:
        return self.x - self.delta

    @property
    def support_hi(self) -> float:
        return self.x + self.h + self.delta


def trapezoid_weight(n, q: IntervalQuery):
    """Piecewise-linear window: 0 outside [x-delta, x+h+delta], linear ramps
    of width delta on both sides, 1 on the plateau [x, x+h].

    Accepts a scalar or an array of (real) sample points.
    """
    knots_x = (q.x - q.delta, q.x, q.x + q.h, q.x + q.h + q.delta)
    knots_y = (0.0, 1.0, 1.0, 0.0)
    w = np.interp(n, knots_x, knots_y, left=0.0, right=0.0)
    if np.isscalar(n):
        return float(w)
    return w


@dataclass(frozen=True)
class SieveTable:
    """Prime powers in [lo, hi] with their von Mangoldt values.

    Stored sparsely: `positions` holds every n = p^m in the window in
    ascending order and `log_values` the matching log p.  `psi_prefix[i]` is
    the compensated running sum of log_values up to index i, so Chebyshev
    sums are prefix lookups.
    """

    lo: int
    hi: int
    positions: np.ndarray = field(repr=False)
    log_values: np.ndarray = field(repr=False)
    psi_prefix: np.ndarray = field(repr=False)

    # -- construction ------------------------------------------------------

    @classmethod
    def build(cls, limit: int) -> "SieveTable":
        """Sieve the full range [1, limit]."""
        return cls.build_range(1, limit)

    @classmethod
    def build_range(cls, lo: int, hi: int) -> "SieveTable":
        """Sieve the window [lo, hi] using base primes up to sqrt(hi)."""
        if lo < 1 or hi < lo:
            raise DomainError(f"need 1 <= lo <= hi, got lo={lo}, hi={hi}")
        pos_parts = []
        log_parts = []
        for primes in prime_blocks(lo, hi):
            pos_parts.append(primes)
            log_parts.append(np.log(primes.astype(np.float64)))
        # proper powers p^m (m >= 2); only p <= sqrt(hi) can contribute
        pw_pos = []
        pw_log = []
        for p in primes_upto(math.isqrt(hi)):
            p = int(p)
            q = p * p
            lp = math.log(p)
            while q <= hi:
                if q >= lo:
                    pw_pos.append(q)
                    pw_log.append(lp)
                q *= p
        if pw_pos:
            pos_parts.append(np.asarray(pw_pos, dtype=np.int64))
            log_parts.append(np.asarray(pw_log, dtype=np.float64))
        if pos_parts:
            positions = np.concatenate(pos_parts)
            logs = np.concatenate(log_parts)
            order = np.argsort(positions, kind="stable")
            positions = positions[order]
            logs = logs[order]
        else:
            positions = np.empty(0, dtype=np.int64)
            logs = np.empty(0, dtype=np.float64)
        positions.setflags(write=False)
        logs.setflags(write=False)
        prefix = compensated_cumsum(logs)
        prefix.setflags(write=False)
        return cls(lo=int(lo), hi=int(hi), positions=positions,
                   log_values=logs, psi_prefix=prefix)

    # -- point lookups -----------------------------------------------------

    def lambda_value(self, n: int) -> float:
        """von Mangoldt value at integer n inside the window."""
        if not (self.lo <= n <= self.hi):
            raise SieveRangeError(
                f"n={n} outside sieved window [{self.lo}, {self.hi}]")
        i = int(np.searchsorted(self.positions, n))
        if i < len(self.positions) and self.positions[i] == n:
            return float(self.log_values[i])
        return 0.0

    def _check_full(self):
        if self.lo > 2:
            raise SieveRangeError(
                "prefix sums need a table starting at 1 "
                f"(this one starts at {self.lo})")

    def _prefix_at(self, x: float) -> float:
        """Sum of log_values over positions <= x (inclusive at integers)."""
        i = int(np.searchsorted(self.positions, math.floor(x), side="right"))
        return float(self.psi_prefix[i - 1]) if i else 0.0

    # -- Chebyshev sums ----------------------------------------------------

    def psi(self, x: float) -> float:
        """Sum of von Mangoldt values over n <= x; inclusive at integer x."""
        if x < 0:
            raise DomainError(f"psi needs x >= 0, got {x}")
        self._check_full()
        if x > self.hi:
            raise SieveRangeError(f"psi({x}) beyond sieved limit {self.hi}")
        return self._prefix_at(x)

    def psi_interval(self, x: float, h: float) -> float:
        """psi(x + h) - psi(x); the caller subtracts h for the error term."""
        if x < 0 or h < 0:
            raise DomainError("psi_interval needs x >= 0 and h >= 0")
        return self.psi(x + h) - self.psi(x)

    def psi1(self, x: float) -> float:
        """Integrated count: sum of (x - n) * lambda(n) over n <= x.

        Continuous, piecewise linear and nondecreasing in x; evaluated by an
        exactly rounded sum so that second differences at widely different
        scales stay meaningful.
        """
        if x < 0:
            raise DomainError(f"psi1 needs x >= 0, got {x}")
        self._check_full()
        if x > self.hi:
            raise SieveRangeError(f"psi1({x}) beyond sieved limit {self.hi}")
        i = int(np.searchsorted(self.positions, math.floor(x), side="right"))
        if i == 0:
            return 0.0
        terms = (x - self.positions[:i]) * self.log_values[:i]
        return exact_sum(terms)

    def weighted_lambda_sum(self, q: IntervalQuery) -> float:
        """Sum of lambda(n) * weight(n) over the support of the window."""
        lo_n = math.ceil(q.support_lo)
        hi_n = math.floor(q.support_hi)
        if lo_n < self.lo or hi_n > self.hi:
            raise SieveRangeError(
                f"window [{lo_n}, {hi_n}] outside sieved range "
                f"[{self.lo}, {self.hi}]")
        a = int(np.searchsorted(self.positions, lo_n))
        b = int(np.searchsorted(self.positions, hi_n, side="right"))
        if a == b:
            return 0.0
        pts = self.positions[a:b].astype(np.float64)
        w = trapezoid_weight(pts, q)
        return exact_sum(w * self.log_values[a:b])


# -- prime gap scan ---------------------------------------------------------

@dataclass(frozen=True)
class GapRecord:
    """One record-sized gap between consecutive primes."""

    p: int
    p_next: int
    gap: int
    ratio: float  # gap / (sqrt(p) log p)


def _gap_ratio(p: int, gap: int) -> float:
    return gap / (math.sqrt(p) * math.log(p))


def max_gap_scan(limit: int) -> list[GapRecord]:
    """Record gaps between consecutive primes p < limit.

    A pair enters the list when its gap ties or beats every earlier gap, so
    the running maximum is visible together with the later pairs attaining
    it.  The follower prime may exceed `limit`.
    """
    if limit < 5:
        raise DomainError(f"max_gap_scan needs limit >= 5, got {limit}")
    records: list[GapRecord] = []
    best = 0
    prev = None
    # pad the range so the prime after the last p < limit is available
    pad = max(2000, 2 * math.isqrt(limit))
    for primes in prime_blocks(2, limit + pad):
        if len(primes) == 0:
            continue
        if prev is not None:
            primes = np.concatenate(([prev], primes))
        gaps = np.diff(primes)
        start = 0
        while True:
            hits = np.nonzero(gaps[start:] >= best)[0]
            if len(hits) == 0:
                break
            i = start + int(hits[0])
            p = int(primes[i])
            if p >= limit:
                break
            g = int(gaps[i])
            records.append(GapRecord(p, int(primes[i + 1]), g,
                                     _gap_ratio(p, g)))
            best = g
            start = i + 1
        prev = int(primes[-1])
        if prev >= limit:
            break
    return records


def gap_ratio_audit(limit: int, coefficient: float = 22.0 / 25.0,
                    min_p: int = 5):
    """Check gap < coefficient * sqrt(p) log p for every pair with
    min_p <= p < limit.

    Returns (pairs_checked, violations, max_ratio, argmax_pair).
    """
    if limit <= min_p:
        raise DomainError("limit must exceed min_p")
    checked = 0
    violations = 0
    max_ratio = 0.0
    argmax = None
    prev = None
    pad = max(2000, 2 * math.isqrt(limit))
    for primes in prime_blocks(2, limit + pad):
        if len(primes) == 0:
            continue
        if prev is not None:
            primes = np.concatenate(([prev], primes))
        ps = primes[:-1]
        gaps = np.diff(primes)
        keep = (ps >= min_p) & (ps < limit)
        ps_f = ps[keep].astype(np.float64)
        if len(ps_f):
            ratios = gaps[keep] / (np.sqrt(ps_f) * np.log(ps_f))
            checked += len(ps_f)
            violations += int(np.count_nonzero(ratios >= coefficient))
            i = int(np.argmax(ratios))
            if ratios[i] > max_ratio:
                max_ratio = float(ratios[i])
                argmax = (int(ps[keep][i]), int(ps[keep][i] + gaps[keep][i]))
        prev = int(primes[-1])
        if prev >= limit:
            break
    return checked, violations, max_ratio, argmax
