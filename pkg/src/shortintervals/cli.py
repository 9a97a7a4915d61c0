"""Command-line front end.

Subcommands: zeros (validate | stats), verify-theorem, explicit,
check-lemma, gaps.  Configuration comes from defaults, then an optional
key = value config file, then SHORTINTERVALS_* environment variables, then
flags; later sources win.  Reports are deterministic: identical config and
zero file produce byte-identical output (floats are fixed at 12 significant
digits and no timestamps enter the report files).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
import time
from dataclasses import dataclass, field, fields, replace

import numpy as np

from . import bounds, explicit
from .errors import ConfigError, DomainError, VerifierError, ZeroFileError
from .sieve import IntervalQuery, SieveTable, gap_ratio_audit, max_gap_scan
from .zeros import (ZeroTable, counting_lower, counting_upper,
                    default_zero_path, load_zeros, skewes_bound)

ENV_PREFIX = "SHORTINTERVALS_"

DEFAULT_H_RULES = ("sqrt(x)*log(x)", "10*sqrt(x)*log(x)", "x^0.75", "x")


@dataclass
class RunConfig:
    zeros_path: str = ""
    sieve_limit: int = 0  # 0 = sized from the grid
    x_grid: str = "log:30:20000:100000000"
    h_rules: tuple = DEFAULT_H_RULES
    delta_rule: str = "0.1*sqrt(x)*log(x)"
    alpha: float = 1.0
    beta: float = 1.0
    output_format: str = "csv"
    output_path: str = ""
    workers: int = 0  # 0 = available parallelism
    tight_constant: bool = False
    counting_samples: int = 1000
    skewes_samples: int = 200

    def resolved_zeros_path(self) -> str:
        return self.zeros_path or str(default_zero_path())

    def resolved_workers(self) -> int:
        return self.workers if self.workers > 0 else (os.cpu_count() or 1)


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(name: str, raw: str):
    if name not in _FIELD_TYPES:
        raise ConfigError(f"unknown config key: {name}")
    if name == "h_rules":
        return tuple(s.strip() for s in raw.split(",") if s.strip())
    current = getattr(RunConfig(), name)
    if isinstance(current, bool):
        if raw.lower() in ("1", "true", "yes", "on"):
            return True
        if raw.lower() in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"{name}: expected a boolean, got {raw!r}")
    if isinstance(current, int):
        return int(raw)
    if isinstance(current, float):
        return float(raw)
    return raw


def parse_config_file(path: str) -> dict:
    """key = value lines; blanks and '#' comments ignored."""
    overrides = {}
    with open(path, "r", encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            key, _, value = line.partition("=")
            overrides[key.strip()] = _coerce(key.strip(), value.strip())
    return overrides


def env_overrides(environ=None) -> dict:
    environ = os.environ if environ is None else environ
    overrides = {}
    for name in _FIELD_TYPES:
        raw = environ.get(ENV_PREFIX + name.upper())
        if raw is not None:
            overrides[name] = _coerce(name, raw)
    return overrides


def build_config(args) -> RunConfig:
    cfg = RunConfig()
    if getattr(args, "config", None):
        cfg = replace(cfg, **parse_config_file(args.config))
    cfg = replace(cfg, **env_overrides())
    flag_map = {
        "zeros": "zeros_path", "sieve_limit": "sieve_limit",
        "x_grid": "x_grid", "alpha": "alpha", "beta": "beta",
        "format": "output_format", "out": "output_path",
        "workers": "workers", "delta_rule": "delta_rule",
        "tight_constant": "tight_constant",
        "counting_samples": "counting_samples",
        "skewes_samples": "skewes_samples",
    }
    updates = {}
    for flag, name in flag_map.items():
        value = getattr(args, flag, None)
        if value is not None and value is not False:
            updates[name] = value
    h_rules = getattr(args, "h_rule", None)
    if h_rules:
        updates["h_rules"] = tuple(h_rules)
    cfg = replace(cfg, **updates)
    if cfg.output_format not in ("csv", "json"):
        raise ConfigError(f"output format must be csv or json, "
                          f"got {cfg.output_format!r}")
    return cfg


# -- rule and grid parsing ----------------------------------------------------

_RULE_SQRTLOG = re.compile(r"^(?:(\d+(?:\.\d+)?)\*)?sqrt\(x\)\*log\(x\)$")
_RULE_POWER = re.compile(r"^x\^(\d+(?:\.\d+)?)$")
_RULE_NUMBER = re.compile(r"^\d+(?:\.\d+)?(?:[eE][+-]?\d+)?$")


def parse_rule(spec: str):
    """Turn an h/delta specifier into a callable of x."""
    spec = spec.strip()
    if spec == "x":
        return lambda x: x
    m = _RULE_SQRTLOG.match(spec)
    if m:
        c = float(m.group(1)) if m.group(1) else 1.0
        return lambda x: c * math.sqrt(x) * math.log(x)
    m = _RULE_POWER.match(spec)
    if m:
        e = float(m.group(1))
        return lambda x: x ** e
    if _RULE_NUMBER.match(spec):
        v = float(spec)
        return lambda x: v
    raise ConfigError(
        f"cannot parse rule {spec!r}; accepted forms: 'x', 'x^E', "
        "'C*sqrt(x)*log(x)', 'sqrt(x)*log(x)', or a number")


def parse_x_grid(spec: str) -> list[float]:
    spec = spec.strip()
    if spec.startswith("log:"):
        parts = spec.split(":")
        if len(parts) != 4:
            raise ConfigError(f"bad grid spec {spec!r}; want log:N:LO:HI")
        try:
            n = int(parts[1])
            lo = float(parts[2])
            hi = float(parts[3])
        except ValueError as e:
            raise ConfigError(f"bad grid spec {spec!r}: {e}") from None
        if n < 1 or lo <= 0 or hi < lo:
            raise ConfigError(f"bad grid spec {spec!r}")
        if n == 1:
            return [lo]
        return list(np.geomspace(lo, hi, n))
    try:
        xs = [float(tok) for tok in spec.split(",") if tok.strip()]
    except ValueError as e:
        raise ConfigError(f"bad grid spec {spec!r}: {e}") from None
    if not xs:
        raise ConfigError("empty x grid")
    return xs


def validated_grid(cfg: RunConfig):
    """Grid points, h rules and delta rule with domain checks applied."""
    xs = bounds.half_integer_grid(parse_x_grid(cfg.x_grid))
    rules = [(spec, parse_rule(spec)) for spec in cfg.h_rules]
    if not rules:
        raise ConfigError("at least one h rule is required")
    delta_rule = parse_rule(cfg.delta_rule)
    for x in xs:
        if x < 2.0e4:
            raise ConfigError(
                f"grid x={x:g} below 2e4, outside the bound's domain")
        for spec, rule in rules:
            h = float(rule(x))
            if not bounds.theorem_domain_ok(x, h):
                raise ConfigError(
                    f"h rule {spec!r} gives h={h:g} at x={x:g}, outside "
                    "[sqrt(x) log x, x]")
        d = float(delta_rule(x))
        if not (2.0 <= d <= x):
            raise ConfigError(
                f"delta rule {cfg.delta_rule!r} gives delta={d:g} at x={x:g}")
    return xs, rules, delta_rule


# -- report serialization -----------------------------------------------------

def _f12(v: float) -> float:
    """Round to 12 significant digits (shared by both output formats)."""
    return float(f"{v:.12g}")


def report_row(r: bounds.BoundReport) -> dict:
    row = {
        "x": _f12(r.x), "h": _f12(r.h), "delta": _f12(r.delta),
        "observed": _f12(r.observed), "theorem_rhs": _f12(r.theorem_rhs),
        "margin": _f12(r.margin),
    }
    for key in bounds.LEMMA_COLUMNS:
        row[key] = _f12(r.lemma_values[key])
    row["pass"] = bool(r.passed)
    return row


CSV_COLUMNS = ("x", "h", "delta", "observed", "theorem_rhs", "margin",
               *bounds.LEMMA_COLUMNS, "pass")


def render_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([
            f"{row[c]:.12g}" if c != "pass" else str(row[c]).lower()
            for c in CSV_COLUMNS])
    return buf.getvalue()


def render_json(rows: list[dict], cfg: RunConfig, table: ZeroTable,
                summary: dict) -> str:
    header = {
        "config": {
            "zeros_path": cfg.resolved_zeros_path(),
            "sieve_limit": cfg.sieve_limit,
            "x_grid": cfg.x_grid,
            "h_rules": list(cfg.h_rules),
            "delta_rule": cfg.delta_rule,
            "alpha": cfg.alpha, "beta": cfg.beta,
            "tight_constant": cfg.tight_constant,
        },
        "zero_table": {
            "digest": table.source_digest,
            "count": table.count,
            "gamma_max": _f12(table.gamma_max),
        },
        "summary": {k: (_f12(v) if isinstance(v, float) else v)
                    for k, v in summary.items()},
        "reports": rows,
    }
    return json.dumps(header, indent=1, sort_keys=True) + "\n"


def _emit(text: str, path: str) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _summary_line(summary: dict) -> str:
    return ("summary points={points} pass={passed} fail={failed} "
            "max_ratio={max_ratio:.6g} at_x={argmax_x:.12g} "
            "at_h={argmax_h:.12g} "
            "max_ratio_below_e10={max_ratio_below_e10:.6g} "
            "max_ratio_above_e10={max_ratio_above_e10:.6g}"
            .format(**summary))


# -- subcommands ----------------------------------------------------------------

def cmd_zeros(args) -> int:
    cfg = build_config(args)
    path = args.path or cfg.resolved_zeros_path()
    try:
        table = load_zeros(path)
    except ZeroFileError as e:
        print(f"zeros {args.action}: rejected: {e}")
        return 2
    if args.action == "stats":
        print(f"file {path}")
        print(f"digest {table.source_digest}")
        print(f"count {table.count}")
        print(f"gamma_min {table.ordinates[0]:.6f}")
        print(f"gamma_max {table.gamma_max:.6f}")
        for T in (100.0, 1000.0, 10000.0, table.gamma_max):
            if T <= table.gamma_max:
                print(f"N({T:g}) = {table.count_below(T)}")
        return 0
    # validate: counting bounds plus the reciprocal-square tail audit
    samples = np.geomspace(15.001, table.gamma_max,
                           max(cfg.counting_samples, 10))
    report = table.check_counting_bounds(samples)
    print(f"counting bounds: upper checked {report.upper_checked}, "
          f"lower checked {report.lower_checked}, "
          f"violations {len(report.violations)}")
    for v in report.violations[:20]:
        print(f"  VIOLATION {v.kind} at T={v.T:.6g}: N={v.count} "
              f"vs bound {v.bound:.6g}")
    # sample strictly inside [15, gamma_max): at the very top the tail
    # majorant equals the classical bound and the comparison degenerates
    n_skewes = max(cfg.skewes_samples, 10)
    edges = np.geomspace(15.0, table.gamma_max, n_skewes + 1)
    skewes_T = np.sqrt(edges[:-1] * edges[1:])
    skewes_bad = 0
    for T in skewes_T:
        partial, tail = table.sum_inv_gamma_sq_above(float(T))
        if not partial + tail < skewes_bound(float(T)):
            skewes_bad += 1
            print(f"  VIOLATION tail at T={T:.6g}: "
                  f"{partial + tail:.6g} vs {skewes_bound(float(T)):.6g}")
    print(f"reciprocal-square tail: checked {len(skewes_T)}, "
          f"violations {skewes_bad}")
    ok = report.ok and skewes_bad == 0
    print(f"zeros validate: {'PASS' if ok else 'FAIL'}")
    return 0 if ok else 1


def _sieve_for(limit: int) -> SieveTable:
    t0 = time.perf_counter()
    table = SieveTable.build(limit)
    print(f"sieve built to {limit} in {time.perf_counter() - t0:.1f}s",
          file=sys.stderr)
    return table


def cmd_verify_theorem(args) -> int:
    cfg = build_config(args)
    xs, rules, delta_rule = validated_grid(cfg)
    needed = 0
    for x in xs:
        for _, rule in rules:
            needed = max(needed, int(math.ceil(x + float(rule(x)))) + 1)
    if cfg.sieve_limit and cfg.sieve_limit < needed:
        print(f"capacity exceeded: sieve_limit {cfg.sieve_limit} "
              f"< required {needed}")
        return 2
    limit = cfg.sieve_limit or needed
    zero_table = load_zeros(cfg.resolved_zeros_path())
    sieve = _sieve_for(limit)
    reports = bounds.verify_theorem_grid(
        xs, [rule for _, rule in rules], sieve,
        alpha=cfg.alpha, beta=cfg.beta, delta_rule=delta_rule,
        workers=cfg.resolved_workers(), tight_constant=cfg.tight_constant)
    rows = [report_row(r) for r in reports]
    summary = bounds.summarize_reports(reports)
    if cfg.output_format == "csv":
        _emit(render_csv(rows), cfg.output_path)
    else:
        _emit(render_json(rows, cfg, zero_table, summary), cfg.output_path)
    print(_summary_line(summary))
    return 0 if summary["failed"] == 0 else 1


def cmd_explicit(args) -> int:
    cfg = build_config(args)
    x = args.x
    zero_table = load_zeros(cfg.resolved_zeros_path())
    T = args.height if args.height is not None else zero_table.gamma_max
    limit = cfg.sieve_limit or int(math.ceil(x)) + 1
    if limit < x:
        print(f"capacity exceeded: sieve_limit {limit} < x = {x:g}")
        return 2
    result = explicit.truncated_psi1(x, T, zero_table)
    sieve = _sieve_for(limit)
    sieved = sieve.psi1(x)
    residual = abs(result.value - sieved)
    budget = bounds.CONSTANTS.lemma1_eps + result.tail_bound
    ok = residual <= budget
    print(f"x {x:.12g}")
    print(f"truncation_height {result.truncation_height:.12g}")
    print(f"zeros_used {result.zero_count_used}")
    print(f"sieved_psi1 {sieved:.12g}")
    print(f"formula_psi1 {result.value:.12g}")
    print(f"residual {residual:.12g}")
    print(f"budget {budget:.12g}")
    print(f"explicit-check: {'PASS' if ok else 'FAIL'}")
    return 0 if ok else 1


def _query_from_args(args, cfg) -> IntervalQuery:
    if args.x is None or args.h is None:
        raise ConfigError("this lemma needs --x and --h")
    delta = args.delta if args.delta is not None else bounds.default_delta(
        args.x)
    return IntervalQuery(x=args.x, h=args.h, delta=delta,
                         alpha=cfg.alpha, beta=cfg.beta)


def cmd_check_lemma(args) -> int:
    cfg = build_config(args)
    lemma = args.lemma
    if lemma == "5":
        if args.t1 is None or args.t2 is None:
            raise ConfigError("lemma 5 needs --t1 and --t2")
        rhs = bounds.reciprocal_zero_sum_bound(args.t1, args.t2)
        table = load_zeros(cfg.resolved_zeros_path())
        lhs = table.sum_inv_gamma_range(args.t1, args.t2)
        ok = lhs < rhs
        print(f"lemma5 T1={args.t1:g} T2={args.t2:g}")
        print(f"table_sum {lhs:.12g}")
        print(f"bound {rhs:.12g}")
    elif lemma == "E":
        if args.x is None:
            raise ConfigError("E needs --x")
        value = bounds.combined_error_term(args.x, args.h)
        cap = 3.0 * math.sqrt(args.x) * math.log(args.x)
        ok = value < cap
        print(f"E x={args.x:g} h={args.h if args.h is not None else args.x:g}")
        print(f"value {value:.12g}")
        print(f"cap_3_sqrtx_logx {cap:.12g}")
    elif lemma == "bt":
        q = _query_from_args(args, cfg)
        rhs = bounds.brun_titchmarsh_edge_bound(q)
        print(f"bt x={q.x:g} h={q.h:g} delta={q.delta:g}")
        print(f"bound {rhs:.12g}")
        # numeric fact used downstream: edge sums plus the expansion error
        # stay under sqrt(x) log x (holds at the canonical delta, x >= 1000)
        combined = rhs + 48.0 / (5.0 * q.delta)
        slack = math.sqrt(q.x) * math.log(q.x)
        ok = combined < slack
        print(f"edge_plus_eps {combined:.12g}")
        print(f"sqrtx_logx {slack:.12g}")
    elif lemma in ("3", "4", "6"):
        q = _query_from_args(args, cfg)
        table = load_zeros(cfg.resolved_zeros_path())
        split = explicit.zero_sum_split(q, table)
        if lemma == "3":
            rhs = bounds.high_zero_sum_bound(q)
            lhs = abs(split.high_partial) + split.high_tail_bound
            print(f"lemma3 cutoff {split.mid_cut:.12g}")
        elif lemma == "4":
            rhs = bounds.low_zero_sum_bound(q)
            lhs = abs(split.low)
            print(f"lemma4 cutoff {split.low_cut:.12g}")
        else:
            rhs = bounds.middle_zero_sum_bound(q)
            lhs = abs(split.middle)
            print(f"lemma6 range ({split.low_cut:.12g}, "
                  f"{split.mid_cut:.12g}]")
        ok = lhs < rhs
        print(f"zero_sum {lhs:.12g}")
        print(f"bound {rhs:.12g}")
    else:  # pragma: no cover - argparse restricts choices
        raise ConfigError(f"unknown lemma id {lemma!r}")
    print(f"check-lemma {lemma}: {'PASS' if ok else 'FAIL'}")
    return 0 if ok else 1


def cmd_gaps(args) -> int:
    records = max_gap_scan(args.limit)
    print("p p_next gap ratio")
    for r in records:
        print(f"{r.p} {r.p_next} {r.gap} {r.ratio:.6f}")
    checked, violations, max_ratio, argmax = gap_ratio_audit(args.limit)
    print(f"audit pairs={checked} violations={violations} "
          f"max_ratio={max_ratio:.6f} at={argmax}")
    return 0 if violations == 0 else 1


# -- entry point ------------------------------------------------------------------

def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="key = value config file")
    parser.add_argument("--zeros", help="zero-ordinate file path")
    parser.add_argument("--sieve-limit", dest="sieve_limit", type=int)
    parser.add_argument("--workers", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shortintervals",
        description="Numerical verification of short-interval prime "
                    "counting bounds under the Riemann hypothesis")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("zeros", help="validate or summarize a zero table")
    p.add_argument("action", choices=("validate", "stats"))
    p.add_argument("path", nargs="?", default="")
    p.add_argument("--counting-samples", dest="counting_samples", type=int)
    p.add_argument("--skewes-samples", dest="skewes_samples", type=int)
    _add_common(p)
    p.set_defaults(func=cmd_zeros)

    p = sub.add_parser("verify-theorem",
                       help="sweep the short-interval bound over a grid")
    p.add_argument("--x-grid", dest="x_grid")
    p.add_argument("--h-rule", dest="h_rule", action="append",
                   help="repeatable; e.g. 'sqrt(x)*log(x)', 'x^0.75', 'x'")
    p.add_argument("--delta-rule", dest="delta_rule")
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--out")
    p.add_argument("--tight-constant", dest="tight_constant",
                   action="store_true", default=None,
                   help="report the 1/pi leading-constant variant")
    _add_common(p)
    p.set_defaults(func=cmd_verify_theorem)

    p = sub.add_parser("explicit",
                       help="integrated count: sieve vs zero-sum expansion")
    p.add_argument("--x", type=float, required=True,
                   help="half-integer evaluation point")
    p.add_argument("--height", type=float,
                   help="truncation height (default: table top)")
    _add_common(p)
    p.set_defaults(func=cmd_explicit)

    p = sub.add_parser("check-lemma", help="evaluate one auxiliary bound")
    p.add_argument("lemma", choices=("3", "4", "5", "6", "bt", "E"))
    p.add_argument("--x", type=float)
    p.add_argument("--h", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--t1", type=float)
    p.add_argument("--t2", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    _add_common(p)
    p.set_defaults(func=cmd_check_lemma)

    p = sub.add_parser("gaps", help="maximal prime gap records")
    p.add_argument("--limit", type=int, default=100000)
    _add_common(p)
    p.set_defaults(func=cmd_gaps)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, DomainError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except VerifierError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
