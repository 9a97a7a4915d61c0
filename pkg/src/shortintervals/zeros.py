"""Ingestion and queries over tables of nontrivial zeta-zero ordinates.

The table format is plain text, one positive decimal ordinate per line in
strictly ascending order; blank lines and '#' comments are ignored.  A table
is treated as an initial segment of the zero sequence (it must start at the
first ordinate 14.13...), so the number of entries at or below T is exactly
the counting function N(T) as far as the table reaches.

Everything beyond the largest ingested ordinate is handled analytically:
contributions of unseen zeros are bounded using the classical estimates
  N(T) < T log T / (2 pi)                 (T > 15)
  sum_{gamma >= T} 1/gamma^2 < log T / (2 pi T)   (T >= 14.13...)
never by numerical extrapolation.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import (DomainError, EmptyInputError, TableExhaustedError,
                     ZeroOrderError, ZeroParseError)
from .summation import exact_sum

GAMMA_1 = 14.134725  # first ordinate, to the precision used in gates

DEFAULT_ZERO_RESOURCE = "zeros_100k.txt"


def skewes_bound(T: float) -> float:
    """Classical tail estimate: sum over gamma >= T of 1/gamma^2 is below
    log T / (2 pi T), valid for every T at or above the first ordinate."""
    if T < GAMMA_1:
        raise DomainError(f"tail estimate needs T >= {GAMMA_1}, got {T}")
    return math.log(T) / (2.0 * math.pi * T)


def counting_upper(T: float) -> float:
    """N(T) < T log T / (2 pi), valid for T > 15."""
    return T * math.log(T) / (2.0 * math.pi)


def counting_lower(T: float) -> float:
    """N(T) > T log T / (2 pi) - T / 2, valid for T > 100."""
    return T * math.log(T) / (2.0 * math.pi) - T / 2.0


@dataclass(frozen=True)
class CountingViolation:
    T: float
    kind: str  # "upper" or "lower"
    count: int
    bound: float


@dataclass(frozen=True)
class CountingBoundsReport:
    upper_checked: int
    lower_checked: int
    violations: list[CountingViolation]

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class ZeroTable:
    """Validated ascending ordinates of the first `count` nontrivial zeros."""

    ordinates: np.ndarray = field(repr=False)
    count: int
    gamma_max: float
    source_digest: str

    # -- counting ------------------------------------------------------------

    def count_below(self, T: float) -> int:
        """N(T): number of table ordinates with 0 < gamma <= T."""
        if T > self.gamma_max:
            raise TableExhaustedError(
                f"T={T} beyond largest ingested ordinate {self.gamma_max}")
        return int(np.searchsorted(self.ordinates, T, side="right"))

    # -- reciprocal-power sums ------------------------------------------------

    def beyond_table_inv_gamma_sq(self) -> float:
        """Rigorous bound on sum of 1/gamma^2 over zeros above gamma_max.

        Two analytic majorants are available from the classical estimates and
        the smaller wins:

        * integration by parts of the Stieltjes integral against the counting
          function, sum_{gamma > G} 1/gamma^2 = -N(G)/G^2
          + 2 * integral_G^inf N(t)/t^3 dt, bounded via N(t) < t log t/(2 pi)
          into (log G + 1)/(pi G) - N(G)/G^2  (needs G > 15);
        * the tail estimate at T = G minus the gamma = G term itself:
          log G/(2 pi G) - 1/G^2.
        """
        G = self.gamma_max
        skewes = skewes_bound(G) - 1.0 / (G * G)
        if G <= 15.0:
            return skewes
        parts = (math.log(G) + 1.0) / (math.pi * G) - self.count / (G * G)
        return min(parts, skewes)

    def sum_inv_gamma_sq_above(self, T: float) -> tuple[float, float]:
        """(partial, tail_bound) for the sum of 1/gamma^2 over gamma >= T.

        `partial` is the exact sum over table ordinates at or above T;
        `tail_bound` majorizes every zero beyond the table, so
        partial + tail_bound is a rigorous upper bound for the full sum.
        """
        if not (math.isfinite(T) and T > 0):
            raise DomainError(f"need finite T > 0, got {T}")
        i = int(np.searchsorted(self.ordinates, T, side="left"))
        g = self.ordinates[i:]
        partial = exact_sum(1.0 / (g * g)) if len(g) else 0.0
        return partial, self.beyond_table_inv_gamma_sq()

    def sum_inv_gamma_range(self, T1: float, T2: float) -> float:
        """Sum of 1/gamma over ordinates strictly between T1 and T2."""
        if not (0 < T1 < T2):
            raise DomainError(f"need 0 < T1 < T2, got T1={T1}, T2={T2}")
        if T2 > self.gamma_max:
            raise TableExhaustedError(
                f"T2={T2} beyond largest ingested ordinate {self.gamma_max}")
        a = int(np.searchsorted(self.ordinates, T1, side="right"))
        b = int(np.searchsorted(self.ordinates, T2, side="left"))
        if a >= b:
            return 0.0
        return exact_sum(1.0 / self.ordinates[a:b])

    # -- classical bound audit -------------------------------------------------

    def check_counting_bounds(self, T_samples) -> CountingBoundsReport:
        """Assert the classical N(T) bounds at each sample height.

        The upper bound is checked for T > 15 and the lower bound for
        T > 100, per their stated ranges of validity.
        """
        violations: list[CountingViolation] = []
        upper_checked = 0
        lower_checked = 0
        for T in np.asarray(T_samples, dtype=np.float64):
            T = float(T)
            n = self.count_below(T)
            if T > 15.0:
                upper_checked += 1
                bound = counting_upper(T)
                if not n < bound:
                    violations.append(CountingViolation(T, "upper", n, bound))
            if T > 100.0:
                lower_checked += 1
                bound = counting_lower(T)
                if not n > bound:
                    violations.append(CountingViolation(T, "lower", n, bound))
        return CountingBoundsReport(upper_checked, lower_checked, violations)


def _iter_data_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def load_zeros(source) -> ZeroTable:
    """Parse and validate a zero-ordinate file.

    `source` may be a filesystem path, a bytes/str blob, or a file-like
    object.  Rejects malformed lines (with their line number), non-positive
    or non-ascending entries, empty input, and tables that do not start at
    the first ordinate.
    """
    if isinstance(source, (str, Path)) and "\n" not in str(source):
        data = Path(source).read_bytes()
    elif isinstance(source, bytes):
        data = source
    elif isinstance(source, str):
        data = source.encode()
    else:
        data = source.read()
        if isinstance(data, str):
            data = data.encode()
    digest = hashlib.sha256(data).hexdigest()
    text = data.decode("utf-8")

    values = []
    last = 0.0
    for lineno, token in _iter_data_lines(text):
        try:
            v = float(token)
        except ValueError:
            raise ZeroParseError(f"not a decimal ordinate: {token!r}",
                                 line=lineno) from None
        if not math.isfinite(v) or v <= 0:
            raise ZeroParseError(f"ordinate must be positive, got {token!r}",
                                 line=lineno)
        if v <= last:
            raise ZeroOrderError(
                f"ordinate {v} not above previous {last}", line=lineno)
        values.append(v)
        last = v
    if not values:
        raise EmptyInputError("no ordinates found in input")
    first = values[0]
    if not (14.0 < first < 14.14):
        raise ZeroParseError(
            "table must start at the first ordinate 14.13...; "
            f"got {first}", line=None)
    ordinates = np.asarray(values, dtype=np.float64)
    ordinates.setflags(write=False)
    return ZeroTable(ordinates=ordinates, count=len(values),
                     gamma_max=float(ordinates[-1]), source_digest=digest)


def default_zero_path() -> Path:
    """Path of the bundled 100k-ordinate table."""
    return Path(str(resources.files(__package__) / "data"
                    / DEFAULT_ZERO_RESOURCE))


def load_default_zeros() -> ZeroTable:
    return load_zeros(default_zero_path())
