"""Right-hand-side evaluators and the grid verifier.

Each bound evaluator computes one displayed majorant with its stated gate;
`verify_theorem_grid` sweeps sieved interval counts against the headline
short-interval bound and records every auxiliary majorant alongside.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .sieve import IntervalQuery, SieveTable


@dataclass(frozen=True)
class Constants:
    """Printed constants used across the bounds (exact as displayed)."""

    gamma_1: float = 14.134725          # first zero ordinate (gate value)
    lemma1_eps: float = 12.0 / 5.0      # integrated-formula error allowance
    lemma2_eps_num: float = 48.0 / 5.0  # smoothed-identity error numerator
    delta_factor: float = 0.1           # delta = 0.1 sqrt(x) log x
    schoenfeld_c: float = 1.0 / (8.0 * math.pi)
    theorem_c1: float = math.sqrt(2.0) / math.pi
    theorem_c1_tight: float = 1.0 / math.pi  # variant for h = o(x)
    theorem_c2: float = 5.0
    crossover_delta: float = 0.5 + 1.0 / (4.0 * math.sqrt(2.0))
    carneiro_c: float = 22.0 / 25.0


CONSTANTS = Constants()


def default_delta(x: float) -> float:
    """The canonical ramp width 0.1 sqrt(x) log x."""
    return CONSTANTS.delta_factor * math.sqrt(x) * math.log(x)


# -- per-range zero-sum majorants ---------------------------------------------

def high_zero_sum_bound(q: IntervalQuery) -> float:
    """Majorant of the zero sum above beta x / delta:
    4 delta (x+h+delta)^(3/2) log(beta x/delta) / (pi beta x).

    Gate: the cutoff must reach the first ordinate.
    """
    cut = q.beta * q.x / q.delta
    if cut < CONSTANTS.gamma_1:
        raise DomainError(
            f"high cutoff beta x/delta = {cut:g} below the first ordinate "
            f"{CONSTANTS.gamma_1}")
    return (4.0 * q.delta * q.support_hi ** 1.5
            / (math.pi * q.beta * q.x) * math.log(cut))


def low_zero_sum_bound(q: IntervalQuery) -> float:
    """Majorant of the zero sum below alpha x / h:
    alpha x (h+delta) delta log(alpha x/h) / (pi h sqrt(x-delta)).

    Gate: alpha x > h so the log factor is positive.
    """
    if q.alpha * q.x <= q.h:
        raise DomainError(
            f"low cutoff alpha x/h = {q.alpha * q.x / q.h:g} is not above 1")
    return (q.alpha * q.x * (q.h + q.delta) * q.delta
            / (math.pi * q.h * math.sqrt(q.x - q.delta))
            * math.log(q.alpha * q.x / q.h))


def reciprocal_sum_formula(t1: float, t2: float) -> float:
    """(1/4pi)(log^2 t2 - log^2 t1) + (1/2pi) log(t2/t1) + 1/2, ungated.

    This is the closed form of integrating the counting-function bounds
    against 1/t^2; the gated wrapper below enforces the stated range.
    """
    l1 = math.log(t1)
    l2 = math.log(t2)
    return ((l2 * l2 - l1 * l1) / (4.0 * math.pi)
            + (l2 - l1) / (2.0 * math.pi) + 0.5)


def reciprocal_zero_sum_bound(t1: float, t2: float) -> float:
    """Bound on the sum of 1/gamma over t1 < gamma < t2, for t2 > t1 >= 100."""
    if not (t2 > t1 >= 100.0):
        raise DomainError(f"need t2 > t1 >= 100, got t1={t1}, t2={t2}")
    return reciprocal_sum_formula(t1, t2)


def middle_zero_sum_bound(q: IntervalQuery) -> float:
    """Majorant of the zero sum between the two cutoffs:
    delta (x+h+delta)^(1/2) ((1/pi) log(ab x^2/(h delta)) log(b h/(a delta))
    + (2/pi) log(b h/(a delta)) + 2)."""
    if q.beta * q.h <= q.alpha * q.delta:
        raise DomainError(
            "middle range is empty: beta h must exceed alpha delta")
    big = math.log(q.alpha * q.beta * q.x * q.x / (q.h * q.delta))
    small = math.log(q.beta * q.h / (q.alpha * q.delta))
    return (q.delta * math.sqrt(q.support_hi)
            * (big * small / math.pi + 2.0 * small / math.pi + 2.0))


# -- ramp-edge and assembled error bounds ---------------------------------------

def edge_bound_formula(x: float, h: float, delta: float) -> float:
    """4 delta log(x+h+delta) / log(delta), the short-interval prime count
    bound applied to both ramps."""
    if delta <= 1.0:
        raise DomainError(f"edge bound needs delta > 1, got {delta}")
    return 4.0 * delta * math.log(x + h + delta) / math.log(delta)


def brun_titchmarsh_edge_bound(q: IntervalQuery) -> float:
    """Edge-ramp majorant for a validated window query."""
    return edge_bound_formula(q.x, q.h, q.delta)


def combined_error_term(x: float, h: float | None = None) -> float:
    """Assembled error term E at alpha = beta = 1, delta = 0.1 sqrt x log x:

        11/10 sqrt(x) log x
        + x (h+delta) log(x/h) / (pi h sqrt(x-delta))
        + 4 (x+h+delta)^(3/2) log(x/delta) / (pi x)

    covering ramp edges, expansion error, the width term and both outer
    zero-sum ranges.  `h` defaults to x, which maximizes the expression over
    the admissible plateau widths delta <= h <= x, so the default is the
    worst case of the whole family.
    """
    if x < 1000.0:
        raise DomainError(f"combined error term needs x >= 1000, got {x}")
    delta = default_delta(x)
    if h is None:
        h = x
    if not (delta <= h <= x):
        raise DomainError(
            f"need delta <= h <= x, got delta={delta:g}, h={h:g}, x={x:g}")
    s = math.sqrt(x) * math.log(x)
    low_term = (x * (h + delta) / (math.pi * h * math.sqrt(x - delta))
                * math.log(x / h))
    high_term = (4.0 * (x + h + delta) ** 1.5 / (math.pi * x)
                 * math.log(x / delta))
    return 1.1 * s + low_term + high_term


def combined_error_term_simplified(x: float) -> float:
    """The h-free simplification of the error term for x > e^10:

        11/10 sqrt(x) log x + x log x / (pi sqrt(x - delta))
        + (2/pi) (2x + delta)^(3/2) log x / x

    Note: this relaxation overshoots; its ratio to sqrt(x) log x never drops
    below 11/10 + 1/pi + 4 sqrt(2)/pi ~ 3.219, so it does NOT stay under
    3 sqrt(x) log x anywhere (the h-dependent form above does).
    """
    if x < 1000.0:
        raise DomainError(f"simplified error term needs x >= 1000, got {x}")
    delta = default_delta(x)
    s = math.sqrt(x) * math.log(x)
    return (1.1 * s + x * math.log(x) / (math.pi * math.sqrt(x - delta))
            + (2.0 / math.pi) * (2.0 * x + delta) ** 1.5 * math.log(x) / x)


# -- headline and reference bounds ----------------------------------------------

def theorem_domain_ok(x: float, h: float) -> bool:
    return x >= 2.0e4 and math.sqrt(x) * math.log(x) <= h <= x


def short_interval_bound(x: float, h: float,
                         tight_constant: bool = False) -> float:
    """The headline bound on |psi(x+h) - psi(x) - h| for x >= 2e4 and
    sqrt(x) log x <= h <= x:

        c1 sqrt(x) log x log(h / (sqrt(x) log x)) + 5 sqrt(x) log x

    with c1 = sqrt(2)/pi, or 1/pi when `tight_constant` is set (the variant
    valid for h = o(x); reported only, never asserted).
    """
    if x < 2.0e4:
        raise DomainError(f"bound stated for x >= 2e4, got x={x}")
    s = math.sqrt(x) * math.log(x)
    if not (s <= h <= x):
        raise DomainError(
            f"need sqrt(x) log x <= h <= x, got h={h:g} with "
            f"sqrt(x) log x={s:g}, x={x:g}")
    c1 = CONSTANTS.theorem_c1_tight if tight_constant else CONSTANTS.theorem_c1
    return c1 * s * math.log(h / s) + CONSTANTS.theorem_c2 * s


def schoenfeld_bound(x: float) -> float:
    """(1/8pi) sqrt(x) log^2 x, the conditional bound on |psi(x) - x| for
    x >= 73.2."""
    if x < 73.2:
        raise DomainError(f"bound stated for x >= 73.2, got {x}")
    lx = math.log(x)
    return CONSTANTS.schoenfeld_c * math.sqrt(x) * lx * lx


def crossover_exponent() -> float:
    """1/2 + 1/(4 sqrt 2): below x^this the short-interval bound has the
    smaller leading coefficient than the differenced Schoenfeld bound."""
    return CONSTANTS.crossover_delta


# -- grid verification -----------------------------------------------------------

LEMMA_COLUMNS = ("lemma3", "lemma4", "lemma5_mid_budget", "lemma6",
                 "bt_edge", "E")


@dataclass(frozen=True)
class BoundReport:
    """One (x, h) verification row."""

    x: float
    h: float
    delta: float
    observed: float
    theorem_rhs: float
    margin: float
    lemma_values: dict = field(repr=False)
    passed: bool


def _lemma_values(q: IntervalQuery) -> dict:
    t1 = q.alpha * q.x / q.h
    t2 = q.beta * q.x / q.delta
    # at h = x (alpha = 1) the low range is empty and its majorant degenerates
    low = 0.0 if q.alpha * q.x == q.h else low_zero_sum_bound(q)
    return {
        "lemma3": high_zero_sum_bound(q),
        "lemma4": low,
        "lemma5_mid_budget": reciprocal_sum_formula(t1, t2),
        "lemma6": middle_zero_sum_bound(q),
        "bt_edge": brun_titchmarsh_edge_bound(q),
        "E": combined_error_term(q.x, q.h),
    }


def half_integer_grid(xs) -> list[float]:
    """Offset grid values to half-integers (expansion hypotheses need
    non-integer evaluation points)."""
    return [math.floor(float(x)) + 0.5 for x in xs]


def evaluate_point(x: float, h: float, sieve: SieveTable,
                   alpha: float = 1.0, beta: float = 1.0,
                   delta: float | None = None,
                   tight_constant: bool = False) -> BoundReport:
    if delta is None:
        delta = default_delta(x)
    rhs = short_interval_bound(x, h, tight_constant=tight_constant)
    observed = abs(sieve.psi_interval(x, h) - h)
    q = IntervalQuery(x=x, h=h, delta=delta, alpha=alpha, beta=beta)
    return BoundReport(x=x, h=h, delta=delta, observed=observed,
                       theorem_rhs=rhs, margin=rhs - observed,
                       lemma_values=_lemma_values(q),
                       passed=observed < rhs)


def verify_theorem_grid(xs, h_rules, sieve: SieveTable,
                        alpha: float = 1.0, beta: float = 1.0,
                        delta_rule=default_delta, workers: int = 1,
                        tight_constant: bool = False) -> list[BoundReport]:
    """Evaluate every (x, h-rule) pair and report observed vs bound.

    `h_rules` is a sequence of callables h(x).  Grid x values are offset to
    half-integers first.  Points are independent and evaluated concurrently;
    the result is sorted by (x, h) so output order never depends on the
    worker count.
    """
    points = []
    for x in half_integer_grid(xs):
        for rule in h_rules:
            h = float(rule(x))
            if not theorem_domain_ok(x, h):
                raise DomainError(
                    f"grid point x={x:g} h={h:g} violates the bound domain "
                    "(x >= 2e4 and sqrt(x) log x <= h <= x)")
            points.append((x, h))

    def run(point):
        x, h = point
        return evaluate_point(x, h, sieve, alpha=alpha, beta=beta,
                              delta=float(delta_rule(x)),
                              tight_constant=tight_constant)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(run, points))
    else:
        reports = [run(p) for p in points]
    reports.sort(key=lambda r: (r.x, r.h))
    return reports


def summarize_reports(reports) -> dict:
    """Aggregate pass counts and worst observed/bound ratios, split at e^10
    (the derivation range gap: the bound is stated from 2e4 but its error
    majorization is established past e^10, so both subranges are reported)."""
    e10 = math.exp(10.0)
    summary = {
        "points": len(reports),
        "passed": sum(1 for r in reports if r.passed),
        "failed": sum(1 for r in reports if not r.passed),
        "max_ratio": 0.0, "argmax_x": float("nan"), "argmax_h": float("nan"),
        "max_ratio_below_e10": 0.0, "max_ratio_above_e10": 0.0,
    }
    for r in reports:
        ratio = r.observed / r.theorem_rhs
        if ratio > summary["max_ratio"]:
            summary["max_ratio"] = ratio
            summary["argmax_x"] = r.x
            summary["argmax_h"] = r.h
        key = ("max_ratio_below_e10" if r.x <= e10
               else "max_ratio_above_e10")
        summary[key] = max(summary[key], ratio)
    return summary
