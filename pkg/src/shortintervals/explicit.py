"""Truncated explicit-formula evaluation over a zero table.

Under the Riemann hypothesis every nontrivial zero is 1/2 + i gamma, and the
integrated count psi1 and the smoothed window count admit expansions as sums
over the ordinates.  This module evaluates those sums over the ingested
table, truncates at a requested height, and attaches rigorous analytic
bounds for everything omitted (the unseen zeros are bounded through the
classical counting estimates, never extrapolated).

Phases gamma * log t are formed in double precision, which keeps the
absolute phase error below ~3e-9 for t <= 1e10 and gamma <= 1e6; inputs
outside that envelope are rejected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, TableExhaustedError
from .sieve import IntervalQuery, SieveTable
from .summation import exact_sum
from .zeros import ZeroTable

LOG_2PI = math.log(2.0 * math.pi)

# double-precision phase envelope
MAX_T = 1.0e10
MAX_GAMMA = 1.0e6


def _check_envelope(t_max: float, gammas: np.ndarray) -> None:
    if t_max > MAX_T:
        raise DomainError(
            f"arguments up to {t_max:g} exceed the double-precision phase "
            f"envelope t <= {MAX_T:g}")
    if len(gammas) and float(gammas[-1]) > MAX_GAMMA:
        raise DomainError(
            f"ordinates beyond {MAX_GAMMA:g} exceed the double-precision "
            "phase envelope")


def _rho_rho_plus_1(gammas: np.ndarray) -> np.ndarray:
    """rho (rho + 1) for rho = 1/2 + i gamma."""
    return (0.75 - gammas * gammas) + 2j * gammas


def _power_diff(b: float, a: float, gammas: np.ndarray) -> np.ndarray:
    """b^(rho+1) - a^(rho+1) for 0 < a < b, elementwise over ordinates.

    Evaluated as -b^(rho+1) * expm1((rho+1) log(a/b)) with log(a/b) via
    log1p, so nearby endpoints do not cancel catastrophically.
    """
    ell = math.log1p((a - b) / b)  # log(a/b) <= 0
    u = 1.5 * ell
    v = gammas * ell
    em_u = math.expm1(u)
    exp_u = math.exp(u)
    cos_v = np.cos(v)
    sin_v = np.sin(v)
    half = np.sin(0.5 * v)
    # expm1(u + iv) = expm1(u) cos v + (cos v - 1) + i exp(u) sin v
    expm1_z = (em_u * cos_v - 2.0 * half * half) + 1j * (exp_u * sin_v)
    lb = math.log(b)
    b_pow = (b ** 1.5) * np.exp(1j * (gammas * lb))
    return -b_pow * expm1_z


def zero_kernel_batch(gammas, q: IntervalQuery) -> np.ndarray:
    """Window response of each zero: the second difference of t^(rho+1)
    across the ramp edges, divided by rho (rho + 1)."""
    gammas = np.atleast_1d(np.asarray(gammas, dtype=np.float64))
    if np.any(gammas <= 0):
        raise DomainError("ordinates must be positive")
    _check_envelope(q.support_hi, np.sort(gammas))
    upper = _power_diff(q.x + q.h + q.delta, q.x + q.h, gammas)
    lower = _power_diff(q.x, q.x - q.delta, gammas)
    return (upper - lower) / _rho_rho_plus_1(gammas)


def zero_kernel(gamma: float, q: IntervalQuery) -> complex:
    """Single-zero window response (scalar form of zero_kernel_batch)."""
    return complex(zero_kernel_batch(np.asarray([gamma]), q)[0])


def _pair_sum(gammas: np.ndarray, q: IntervalQuery) -> float:
    """Sum of the kernel over zeros with the given positive ordinates plus
    their conjugates: 2 Re of the one-sided sum."""
    if len(gammas) == 0:
        return 0.0
    return 2.0 * exact_sum(np.real(zero_kernel_batch(gammas, q)))


# -- integrated count via the zero sum ---------------------------------------

@dataclass(frozen=True)
class TruncatedPsi1:
    value: float
    truncation_height: float
    tail_bound: float
    zero_count_used: int


def _require_half_integer(x: float) -> None:
    if float(x) == math.floor(x):
        raise DomainError(
            f"x={x} is an integer; the expansion needs x outside the "
            "integers (use a half-integer)")
    if x - math.floor(x) != 0.5:
        raise DomainError(f"x must be a half-integer, got {x}")


def truncated_psi1(x: float, T: float, table: ZeroTable) -> TruncatedPsi1:
    """Evaluate x^2/2 - 2 Re sum_{0<gamma<=T} x^(rho+1)/(rho(rho+1))
    - x log(2 pi) together with a rigorous bound on the omitted zeros.

    The tail bound is 2 x^(3/2) times (exact table sum of 1/gamma^2 above T
    plus the analytic beyond-table majorant), since each omitted conjugate
    pair contributes at most 2 x^(3/2) / gamma^2.
    """
    if x <= 0:
        raise DomainError(f"x must be positive, got {x}")
    _require_half_integer(x)
    if T > table.gamma_max:
        raise TableExhaustedError(
            f"truncation height {T} beyond table top {table.gamma_max}")
    gammas = table.ordinates
    _check_envelope(x, gammas)
    k = int(np.searchsorted(gammas, T, side="right"))
    used = gammas[:k]
    lx = math.log(x)
    num = (x ** 1.5) * np.exp(1j * (used * lx))
    terms = np.real(num / _rho_rho_plus_1(used))
    zero_sum = 2.0 * exact_sum(terms)
    value = 0.5 * x * x - zero_sum - x * LOG_2PI
    above = gammas[k:]
    partial_above = exact_sum(1.0 / (above * above)) if len(above) else 0.0
    tail = 2.0 * (x ** 1.5) * (partial_above
                               + table.beyond_table_inv_gamma_sq())
    return TruncatedPsi1(value=value, truncation_height=float(T),
                         tail_bound=tail, zero_count_used=k)


# -- three-way zero-sum split -------------------------------------------------

@dataclass(frozen=True)
class ZeroSumSplit:
    """The window zero sum cut at alpha x/h and beta x/delta.

    `low`, `middle` and `high_partial` are conjugate-paired partial sums of
    the kernel over table ordinates in the three ranges; `high_tail_bound`
    majorizes every zero the table does not reach (including any middle-range
    heights above the table top, so the identity budget stays rigorous).
    """

    low: float
    middle: float
    high_partial: float
    high_tail_bound: float
    alpha: float
    beta: float
    low_cut: float
    mid_cut: float

    @property
    def partial_total(self) -> float:
        return self.low + self.middle + self.high_partial


def zero_sum_split(q: IntervalQuery, table: ZeroTable) -> ZeroSumSplit:
    low_cut = q.alpha * q.x / q.h
    mid_cut = q.beta * q.x / q.delta
    gammas = table.ordinates
    if low_cut > table.gamma_max:
        raise TableExhaustedError(
            f"low cutoff {low_cut:g} beyond table top {table.gamma_max:g}; "
            "the middle range would hold no data")
    i = int(np.searchsorted(gammas, low_cut, side="right"))
    j = int(np.searchsorted(gammas, mid_cut, side="right"))
    low = _pair_sum(gammas[:i], q)
    middle = _pair_sum(gammas[i:j], q)
    high_partial = _pair_sum(gammas[j:], q)
    # every unseen zero sits above gamma_max; each conjugate pair is at most
    # 2 * 4 (x+h+delta)^(3/2) / gamma^2 in absolute value
    envelope = 8.0 * (q.support_hi ** 1.5)
    tail = envelope * table.beyond_table_inv_gamma_sq()
    return ZeroSumSplit(low=low, middle=middle, high_partial=high_partial,
                        high_tail_bound=tail, alpha=q.alpha, beta=q.beta,
                        low_cut=low_cut, mid_cut=mid_cut)


# -- smoothed-interval identity ------------------------------------------------

def residual_budget(q: IntervalQuery, split: ZeroSumSplit) -> float:
    """Allowance for the identity residual: the expansion error 48/(5 delta)
    plus the analytic bound on zeros beyond the table."""
    return 48.0 / (5.0 * q.delta) + split.high_tail_bound / q.delta


def smoothed_interval_residual(q: IntervalQuery, sieve: SieveTable,
                               table: ZeroTable,
                               split: ZeroSumSplit | None = None) -> float:
    """Sieved weighted count minus its zero-sum expansion:

        weighted_lambda_sum(q) - (h + delta - (1/delta) * partial_total)

    Callers assert |residual| <= residual_budget(q, split).
    """
    if split is None:
        split = zero_sum_split(q, table)
    weighted = sieve.weighted_lambda_sum(q)
    predicted = q.h + q.delta - split.partial_total / q.delta
    return weighted - predicted


@dataclass(frozen=True)
class SmoothedIntervalCheck:
    residual: float
    budget: float
    split: ZeroSumSplit

    @property
    def ok(self) -> bool:
        return abs(self.residual) <= self.budget


def smoothed_interval_check(q: IntervalQuery, sieve: SieveTable,
                            table: ZeroTable) -> SmoothedIntervalCheck:
    split = zero_sum_split(q, table)
    residual = smoothed_interval_residual(q, sieve, table, split)
    return SmoothedIntervalCheck(residual=residual,
                                 budget=residual_budget(q, split),
                                 split=split)
