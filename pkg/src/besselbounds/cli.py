"""Command-line front end.

Subcommands::

    eval     F and G at one point, by quadrature, series and closed forms
    bounds   every registered bound at one point
    verify   sweep the registry over a grid; exit 1 on any violation
    tables   relative-error tables (1: lower bound, 2: upper bound)
    limits   small- and large-x limit checks of the table ratios

Exit status: 0 success, 1 violations or failed checks, 2 invalid input.

``verify --config FILE`` reads ``key = value`` lines; ``#`` starts a comment,
lists are comma separated and command-line flags take precedence.  Keys:
``bounds``, ``nu_grid``, ``gamma_grid``, ``x_grid``, ``rel_slack``,
``terms``, ``adaptive``, ``invert_side``, ``format``, ``output``.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Sequence

from . import besselint as bi
from . import boundlib as bl
from . import harness as hs
from .errors import ConvergenceError, DomainError
from .logvalue import LogValue

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
CONFIG_KEYS = {"bounds", "nu_grid", "gamma_grid", "x_grid", "rel_slack", "terms",
               "adaptive", "invert_side", "format", "output"}


class ConfigError(ValueError):
    pass


def _float_list(text: str) -> list[float]:
    text = text.strip()
    if not text:
        return []
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from None


def _id_list(text: str) -> list[str]:
    return [v.strip() for v in text.split(",") if v.strip()]


def _bool(text: str) -> bool:
    v = text.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def read_config(path: str | Path) -> dict:
    """Parse a ``key = value`` file into typed settings."""
    out: dict = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    for n, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{n}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ConfigError(f"{path}:{n}: unknown key {key!r}")
        try:
            if key.endswith("_grid"):
                out[key] = _float_list(value)
            elif key in ("bounds", "invert_side"):
                out[key] = _id_list(value)
            elif key == "rel_slack":
                out[key] = float(value)
            elif key == "terms":
                out[key] = int(value)
            elif key == "adaptive":
                out[key] = _bool(value)
            else:
                out[key] = value
        except (ValueError, argparse.ArgumentTypeError) as exc:
            raise ConfigError(f"{path}:{n}: {exc}") from None
    return out


# ------------------------------------------------------------ formatting ---

def _text_num(v: float | None) -> str:
    return "-" if v is None else f"{v:.6g}"


def _lv_text(v: LogValue) -> str:
    dec = v.decimal_or_none()
    shown = f"{dec:.6g}" if dec is not None else "out of double range"
    log = "-inf" if v.sign == 0 else f"{v.logmag:.6g}"
    return f"{shown}  (sign {v.sign:+d}, log|.| {log})"


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------- eval ---

def _eval_records(p: bi.ParamPoint) -> list[tuple[str, LogValue | str]]:
    rec: list[tuple[str, LogValue | str]] = []

    def add(name, fn):
        try:
            rec.append((name, fn()))
        except (DomainError, ConvergenceError, ArithmeticError) as exc:
            rec.append((name, f"unavailable: {exc}"))

    add("F quadrature", lambda: bi.integral_f(p))
    add("F series", lambda: bi.integral_f_series(p))
    add("G quadrature", lambda: bi.integral_g(p))
    add("G series", lambda: bi.integral_g_series(p))
    if p.x > 0.0 and p.gamma == 1.0:
        add("F closed form (gamma=1)", lambda: bi.integral_f_gamma1(p.nu, p.x))
    if p.x > 0.0 and p.gamma == 0.0:
        add("F closed form (gamma=0)", lambda: bi.integral_f_gamma0(p.nu, p.x))
    return rec


def cmd_eval(args) -> int:
    p = bi.ParamPoint(args.nu, args.gamma, args.x)
    rec = _eval_records(p)
    if args.format == "json":
        body = {"point": {"nu": p.nu, "gamma": p.gamma, "x": p.x},
                "values": {k: (hs.logvalue_json(v) if isinstance(v, LogValue) else {"error": v})
                           for k, v in rec}}
        _emit(json.dumps(body, indent=2) + "\n", args.output)
    else:
        lines = [f"nu={p.nu:g} gamma={p.gamma:g} x={p.x:g}"]
        lines += [f"  {k:<26} {_lv_text(v) if isinstance(v, LogValue) else v}" for k, v in rec]
        _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


# ------------------------------------------------------------- bounds ---

def cmd_bounds(args) -> int:
    p = bi.ParamPoint(args.nu, args.gamma, args.x)
    opts = bl.TruncatedSum(args.terms, args.adaptive)
    ids = args.ids or [b.id for b in bl.list_bounds()]
    targets = {}
    rows = []
    for bid in ids:
        spec = bl.get_bound(bid)
        why = spec.violated(p, args.x_star)
        if why is not None:
            rows.append((spec, None, None, f"requires {why}"))
            continue
        value = bl.evaluate_bound(bid, p, opts, x_star=args.x_star)
        if spec.target not in targets:
            targets[spec.target] = (bi.integral_f if spec.target == "F" else bi.integral_g)(p)
        t = targets[spec.target]
        ratio = (value / t).to_float() if t.sign else None
        rows.append((spec, value, ratio, None))
    if args.format == "json":
        body = [{"id": s.id, "target": s.target, "side": s.side, "valid": why is None,
                 "reason": why, "value": hs.logvalue_json(v), "ratio": r}
                for s, v, r, why in rows]
        _emit(json.dumps({"point": {"nu": p.nu, "gamma": p.gamma, "x": p.x}, "bounds": body},
                         indent=2) + "\n", args.output)
    elif args.format == "csv":
        lines = ["id,target,side,valid,value_sign,value_log_magnitude,value_decimal,ratio"]
        for s, v, r, why in rows:
            j = hs.logvalue_json(v) or {"sign": None, "log_magnitude": None, "decimal": None}
            cells = [s.id, s.target, s.side, why is None, j["sign"], j["log_magnitude"],
                     j["decimal"], r]
            lines.append(",".join(hs._fmt(c) for c in cells))
        _emit("\n".join(lines) + "\n", args.output)
    else:
        lines = [f"nu={p.nu:g} gamma={p.gamma:g} x={p.x:g}"]
        for s, v, r, why in rows:
            head = f"  {s.id:<10} {s.side:<5} {s.target}"
            lines.append(f"{head}  {why}" if why else
                         f"{head}  value {_lv_text(v)}  ratio {_text_num(r)}")
        _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


# ------------------------------------------------------------- verify ---

def _sweep_config(args) -> tuple[hs.SweepConfig, str, str | None]:
    conf = read_config(args.config) if args.config else {}
    for key in ("bounds", "nu_grid", "gamma_grid", "x_grid", "rel_slack", "terms",
                "invert_side", "format", "output"):
        v = getattr(args, key)
        if v is not None:
            conf[key] = v
    if args.adaptive:
        conf["adaptive"] = True
    kw = {}
    if "bounds" in conf:
        kw["bound_ids"] = frozenset(conf["bounds"])
    for key in ("nu_grid", "gamma_grid", "x_grid"):
        if key in conf:
            kw[key] = tuple(conf[key])
    if "rel_slack" in conf:
        kw["rel_slack"] = conf["rel_slack"]
    kw["truncation"] = bl.TruncatedSum(conf.get("terms", 5), conf.get("adaptive", False))
    kw["inverted"] = frozenset(conf.get("invert_side", ()))
    fmt = conf.get("format", "text")
    if fmt not in ("text", "json", "csv"):
        raise ConfigError(f"format must be text, json or csv, not {fmt!r}")
    return hs.SweepConfig(**kw), fmt, conf.get("output")


def _sweep_text(report: hs.SweepReport) -> str:
    lines = [f"{'bound':<10} {'side':<5} tgt {'points':>6} {'min margin':>12} violations"]
    for b in report.bounds:
        lines.append(f"{b.id:<10} {b.side:<5} {b.target:<3} {b.points_checked:>6} "
                     f"{_text_num(b.min_margin):>12} {len(b.violations)}"
                     + (f"  ({len(b.failures)} evaluation failures)" if b.failures else ""))
    lines.append(f"total points: {report.total_points}")
    if report.violating_ids:
        lines.append("violations in: " + ", ".join(report.violating_ids))
    if report.failing_ids:
        lines.append("evaluation failures in: " + ", ".join(report.failing_ids))
    lines.append("OK" if report.ok else "FAILED")
    return "\n".join(lines) + "\n"


def cmd_verify(args) -> int:
    cfg, fmt, output = _sweep_config(args)
    report = hs.run_sweep(cfg)
    body = {"json": hs.report_to_json, "csv": hs.report_to_csv}.get(fmt, _sweep_text)(report)
    _emit(body, output)
    if output or fmt != "text":
        # keep the verdict visible when the report goes elsewhere
        if report.violating_ids:
            sys.stderr.write("violations in: " + ", ".join(report.violating_ids) + "\n")
        sys.stderr.write(("OK" if report.ok else "FAILED") + "\n")
    return EXIT_OK if report.ok else EXIT_FAIL


# ------------------------------------------------------------- tables ---

def cmd_tables(args) -> int:
    spec = hs.TableSpec(which=args.which)
    table = hs.make_table(spec)
    if args.format == "csv":
        body = hs.table_to_csv(spec, table)
    elif args.format == "json":
        body = hs.table_to_json(spec, table)
    else:
        head = f"{'(nu, gamma)':<13}" + "".join(f"{x:>10g}" for x in spec.x_grid)
        lines = [head] + [f"{f'({nu:g}, {g:g})':<13}" + "".join(f"{v:>10.4f}" for v in row)
                          for (nu, g), row in zip(spec.rows, table)]
        body = "\n".join(lines) + "\n"
    _emit(body, args.output)
    return EXIT_OK


# ------------------------------------------------------------- limits ---

def cmd_limits(args) -> int:
    checks = hs.limit_checks()
    if args.format == "json":
        body = json.dumps(hs.limits_to_dict(checks), indent=2) + "\n"
    else:
        body = "".join(
            f"({c.name}) {'PASS' if c.passed else 'FAIL'}  {c.description}: measured "
            f"{c.measured:.6g}, expected {c.expected:.6g}, deviation {c.deviation:.3g} "
            f"(tolerance {c.tolerance:g}{' relative' if c.relative else ''})\n" for c in checks)
    _emit(body, args.output)
    return EXIT_OK if all(c.passed for c in checks) else EXIT_FAIL


# ------------------------------------------------------------- parser ---

def _real(text: str) -> float:
    v = float(text)
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"not a finite number: {text!r}")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="besselbounds", description=__doc__.split("\n\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def point_args(p):
        p.add_argument("--nu", type=_real, required=True)
        g = p.add_mutually_exclusive_group(required=True)
        g.add_argument("--gamma", type=_real)
        g.add_argument("--beta", type=_real, help="beta = -gamma")
        p.add_argument("--x", type=_real, required=True)

    def out_args(p, formats=("text", "json"), default="text"):
        p.add_argument("--format", choices=formats, default=default)
        p.add_argument("--output", "-o", help="write to this file instead of stdout")

    p = sub.add_parser("eval", help="evaluate F and G")
    point_args(p)
    out_args(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("bounds", help="evaluate registered bounds at a point")
    point_args(p)
    p.add_argument("--id", dest="ids", action="append", help="bound id (repeatable)")
    p.add_argument("--terms", type=int, default=5, help="truncation K of L-INEQB4")
    p.add_argument("--adaptive", action="store_true", help="choose K adaptively")
    p.add_argument("--x-star", type=_real, default=None, help="x* for U-THM21")
    out_args(p, ("text", "json", "csv"))
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("verify", help="sweep bounds over a grid")
    p.add_argument("--config", help="key = value settings file")
    p.add_argument("--bounds", type=_id_list, default=None, help="comma-separated ids")
    p.add_argument("--nu-grid", type=_float_list, default=None)
    p.add_argument("--gamma-grid", type=_float_list, default=None)
    p.add_argument("--x-grid", type=_float_list, default=None)
    p.add_argument("--rel-slack", type=float, default=None)
    p.add_argument("--terms", type=int, default=None)
    p.add_argument("--adaptive", action="store_true")
    p.add_argument("--invert-side", type=_id_list, default=None, metavar="IDS",
                   help="self-test: flip the side of these bounds")
    p.add_argument("--format", choices=("text", "json", "csv"), default=None)
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("tables", help="relative-error tables")
    p.add_argument("which", choices=("1", "2"))
    out_args(p, ("csv", "json", "text"), default="csv")
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("limits", help="limit checks of the table ratios")
    out_args(p)
    p.set_defaults(func=cmd_limits)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "beta", None) is not None:
        args.gamma = -args.beta
    try:
        return args.func(args)
    except (DomainError, ConfigError) as exc:
        print(f"besselbounds {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"besselbounds {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
