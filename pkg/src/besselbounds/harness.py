"""Grid sweeps over the bound registry, tightness and limit checks, tables.

Margins are reported in units of the bounded quantity T (F or G):
``(bound - T) / T`` for upper bounds and ``(T - bound) / T`` for lower
bounds, so a negative margin is a violation and its size is auditable
directly.  Side checks are skipped at ``x = 0`` where every quantity is 0.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import boundlib as bl
from .besselint import ParamPoint, integral_f, integral_g
from .errors import ConvergenceError, DomainError
from .logvalue import LogValue

SWEEP_NU = (-0.4, -0.1, 0.0, 0.25, 0.5, 1.0, 1.5, 2.5, 5.0, 10.0)
SWEEP_GAMMA = (0.1, 0.25, 0.5, 0.75, 0.9)
SWEEP_X = (0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 25.0, 50.0, 100.0, 200.0)
MAX_REL_SLACK = 1e-6

TABLE_NU = (1.0, 2.5, 5.0, 10.0)
TABLE_GAMMA = (0.25, 0.5, 0.75)
TABLE_X = (0.5, 5.0, 10.0, 15.0, 25.0, 50.0, 100.0)
TABLE_DIGITS = 4
LAST_TERMS_LIMIT = 0.2373


# --------------------------------------------------------------- sweeps ---

@dataclass(frozen=True)
class SweepConfig:
    """What to sweep.

    ``inverted`` names bounds whose side is deliberately flipped when
    checking; it exists only so the verification pipeline can be shown to
    flag a wrong bound.
    """

    bound_ids: frozenset[str] = frozenset(b.id for b in bl.list_bounds())
    nu_grid: tuple[float, ...] = SWEEP_NU
    gamma_grid: tuple[float, ...] = SWEEP_GAMMA
    x_grid: tuple[float, ...] = SWEEP_X
    rel_slack: float = 1e-9
    truncation: bl.TruncatedSum = bl.TruncatedSum()
    inverted: frozenset[str] = frozenset()

    def __post_init__(self):
        for name in ("bound_ids", "inverted"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        for name in ("nu_grid", "gamma_grid", "x_grid"):
            grid = tuple(float(v) for v in getattr(self, name))
            if not grid:
                raise DomainError(f"{name} must be nonempty")
            if not all(math.isfinite(v) for v in grid):
                raise DomainError(f"{name} entries must be finite")
            object.__setattr__(self, name, grid)
        if not self.bound_ids:
            raise DomainError("bound_ids must be nonempty")
        for bid in self.bound_ids | self.inverted:
            bl.get_bound(bid)
        if not 0.0 <= self.rel_slack <= MAX_REL_SLACK:
            raise DomainError(f"0 <= rel_slack <= {MAX_REL_SLACK:g}")


@dataclass(frozen=True)
class PointResult:
    point: ParamPoint
    value: LogValue | None
    target_value: LogValue | None
    margin: float | None
    ratio: float | None
    error: str | None = None


@dataclass
class BoundReport:
    id: str
    target: str
    side: str
    records: list[PointResult] = field(default_factory=list)
    rel_slack: float = 1e-9

    @property
    def points_checked(self) -> int:
        return sum(1 for r in self.records if r.error is None)

    @property
    def violations(self) -> list[PointResult]:
        return [r for r in self.records
                if r.margin is not None and r.margin < -self.rel_slack]

    @property
    def failures(self) -> list[PointResult]:
        return [r for r in self.records if r.error is not None]

    @property
    def min_margin(self) -> float | None:
        ms = [r.margin for r in self.records if r.margin is not None]
        return min(ms) if ms else None

    @property
    def tightness_ratios(self) -> list[tuple[float, float]]:
        return [(r.point.x, r.ratio) for r in self.records if r.ratio is not None]


@dataclass
class SweepReport:
    config: SweepConfig
    bounds: list[BoundReport]

    @property
    def total_points(self) -> int:
        return sum(b.points_checked for b in self.bounds)

    @property
    def violating_ids(self) -> list[str]:
        return [b.id for b in self.bounds if b.violations]

    @property
    def failing_ids(self) -> list[str]:
        return [b.id for b in self.bounds if b.failures]

    @property
    def ok(self) -> bool:
        return not self.violating_ids and not self.failing_ids


def _margin(side: str, value: LogValue, target: LogValue) -> tuple[float, float]:
    diff = value - target if side == "upper" else target - value
    return (diff / target).to_float(), (value / target).to_float()


def run_sweep(cfg: SweepConfig) -> SweepReport:
    """Evaluate every selected bound at every grid point inside its region.

    Evaluation failures are recorded per point and never stop the sweep.
    Bounds are reported in registry order and points in grid order, so the
    report does not depend on evaluation order.
    """
    specs = [b for b in bl.list_bounds() if b.id in cfg.bound_ids]
    reports = {b.id: BoundReport(b.id, b.target, b.side, rel_slack=cfg.rel_slack) for b in specs}
    for nu in cfg.nu_grid:
        for gamma in cfg.gamma_grid:
            for x in cfg.x_grid:
                try:
                    p = ParamPoint(nu, gamma, x)
                except DomainError:
                    continue
                active = [b for b in specs if bl.validity(b.id, p)]
                if not active or p.x == 0.0:
                    continue
                targets: dict[str, LogValue | str] = {}
                for b in active:
                    if b.target not in targets:
                        fn = integral_f if b.target == "F" else integral_g
                        try:
                            targets[b.target] = fn(p)
                        except (ConvergenceError, ArithmeticError, ValueError) as exc:
                            targets[b.target] = f"{b.target}: {exc}"
                    reports[b.id].records.append(_check_point(b, p, targets[b.target], cfg))
    return SweepReport(cfg, [reports[b.id] for b in specs])


def _check_point(b: bl.BoundSpec, p: ParamPoint, target, cfg: SweepConfig) -> PointResult:
    if isinstance(target, str):
        return PointResult(p, None, None, None, None, error=target)
    try:
        value = bl.evaluate_bound(b.id, p, cfg.truncation)
        side = b.side
        if b.id in cfg.inverted:
            side = "lower" if side == "upper" else "upper"
        margin, ratio = _margin(side, value, target)
    except (ConvergenceError, ArithmeticError, ValueError) as exc:
        return PointResult(p, None, target, None, None, error=str(exc))
    return PointResult(p, value, target, margin, ratio)


# ------------------------------------------------------------ tightness ---

def tightness_check(bound_id: str, nu: float, gamma: float,
                    x_sequence: Iterable[float],
                    opts: bl.TruncatedSum | None = None) -> list[tuple[float, float]]:
    """Ratios bound / target along ``x_sequence`` for a tight bound."""
    spec = bl.get_bound(bound_id)
    if not spec.tight_at_infinity:
        raise DomainError(f"{bound_id} is not tight as x -> infinity")
    fn = integral_f if spec.target == "F" else integral_g
    out = []
    for x in x_sequence:
        p = ParamPoint(nu, gamma, x)
        out.append((p.x, (bl.evaluate_bound(bound_id, p, opts) / fn(p)).to_float()))
    return out


def approaches_one(ratios: Sequence[tuple[float, float]], last: int = 3) -> bool:
    """True if |ratio - 1| strictly decreases over the final ``last`` points."""
    tail = [abs(r - 1.0) for _, r in ratios[-last:]]
    return all(b < a for a, b in zip(tail, tail[1:]))


# --------------------------------------------------------------- tables ---

@dataclass(frozen=True)
class TableSpec:
    """Grid of a relative-error table; rows are (nu, gamma), gamma outermost."""

    which: str = "table1"
    nu_grid: tuple[float, ...] = TABLE_NU
    gamma_grid: tuple[float, ...] = TABLE_GAMMA
    x_grid: tuple[float, ...] = TABLE_X
    digits: int | None = TABLE_DIGITS

    def __post_init__(self):
        which = {"1": "table1", "2": "table2"}.get(str(self.which), self.which)
        if which not in ("table1", "table2"):
            raise DomainError("which in {table1, table2}")
        object.__setattr__(self, "which", which)
        for name in ("nu_grid", "gamma_grid", "x_grid"):
            if not getattr(self, name):
                raise DomainError(f"{name} must be nonempty")

    @property
    def rows(self) -> list[tuple[float, float]]:
        return [(nu, g) for g in self.gamma_grid for nu in self.nu_grid]


def relative_error(which: str, p: ParamPoint, opts: bl.TruncatedSum | None = None) -> float:
    """(F - L) / F for table1, (U - F) / F for table2.

    L is the lower half of the two-sided bound truncated per ``opts``
    (default five terms) and U its upper half.
    """
    f = integral_f(p)
    if which == "table1":
        return ((f - bl.evaluate_bound("L-INEQB4", p, opts)) / f).to_float()
    return ((bl.evaluate_bound("U-GAU3", p) - f) / f).to_float()


def make_table(spec: TableSpec) -> list[list[float]]:
    out = []
    for nu, g in spec.rows:
        row = [relative_error(spec.which, ParamPoint(nu, g, x)) for x in spec.x_grid]
        out.append([round(v, spec.digits) for v in row] if spec.digits is not None else row)
    return out


# --------------------------------------------------------------- limits ---

@dataclass(frozen=True)
class LimitCheck:
    name: str
    description: str
    measured: float
    expected: float
    tolerance: float
    relative: bool

    @property
    def deviation(self) -> float:
        d = abs(self.measured - self.expected)
        return d / abs(self.expected) if self.relative else d

    @property
    def passed(self) -> bool:
        return self.deviation <= self.tolerance


def limit_checks(small_x: float = 1e-3, large_x: float = 2000.0) -> list[LimitCheck]:
    """Small- and large-x limits of the table ratios.

    (a) U/F ~ (2 nu + 1) / ((1 - gamma) x) as x -> 0, at nu = 1, gamma = 0.25;
    (b) 1 - L/F -> 1 - (sum_{k<5} 0.75^k) / 4 = 0.2373 as x -> oo, nu = 1;
    (c) 1 - L/F -> 1 / (2 (nu + 1)) as x -> 0, nu in {1, 2.5}, every table gamma.
    """
    checks = []
    nu, g = 1.0, 0.25
    p = ParamPoint(nu, g, small_x)
    u_over_f = (bl.evaluate_bound("U-GAU3", p) / integral_f(p)).to_float()
    checks.append(LimitCheck("a", f"U/F at nu={nu:g}, gamma={g:g}, x={small_x:g}",
                             u_over_f, (2 * nu + 1) / ((1 - g) * small_x), 0.05, True))
    p = ParamPoint(1.0, 0.75, large_x)
    checks.append(LimitCheck("b", f"1-L/F at nu=1, gamma=0.75, x={large_x:g}",
                             relative_error("table1", p), LAST_TERMS_LIMIT, 0.005, False))
    for nu in (1.0, 2.5):
        for g in TABLE_GAMMA:
            p = ParamPoint(nu, g, small_x)
            checks.append(LimitCheck("c", f"1-L/F at nu={nu:g}, gamma={g:g}, x={small_x:g}",
                                     relative_error("table1", p), 1.0 / (2 * (nu + 1)),
                                     1e-2, False))
    return checks


# -------------------------------------------------------- serialization ---

def logvalue_json(v: LogValue | None) -> dict | None:
    """{sign, log_magnitude, decimal}; decimal is null outside double range."""
    if v is None:
        return None
    return {"sign": v.sign,
            "log_magnitude": None if v.sign == 0 else v.logmag,
            "decimal": v.to_float() if v.fits_float() else None}


def _point_json(p: ParamPoint) -> dict:
    return {"nu": p.nu, "gamma": p.gamma, "x": p.x}


def report_to_dict(report: SweepReport) -> dict:
    cfg = report.config
    return {
        "schema": "besselbounds.sweep/1",
        "config": {
            "bound_ids": sorted(cfg.bound_ids),
            "nu_grid": list(cfg.nu_grid),
            "gamma_grid": list(cfg.gamma_grid),
            "x_grid": list(cfg.x_grid),
            "rel_slack": cfg.rel_slack,
            "truncation": {"terms": cfg.truncation.terms, "adaptive": cfg.truncation.adaptive},
            "inverted": sorted(cfg.inverted),
        },
        "ok": report.ok,
        "total_points": report.total_points,
        "bounds": [{
            "id": b.id,
            "target": b.target,
            "side": b.side,
            "points_checked": b.points_checked,
            "min_margin": b.min_margin,
            "violation_count": len(b.violations),
            "failure_count": len(b.failures),
            "points": [{
                "point": _point_json(r.point),
                "value": logvalue_json(r.value),
                "target_value": logvalue_json(r.target_value),
                "margin": r.margin,
                "ratio": r.ratio,
                "violation": r.margin is not None and r.margin < -b.rel_slack,
                "error": r.error,
            } for r in b.records],
        } for b in report.bounds],
    }


def report_to_json(report: SweepReport) -> str:
    return json.dumps(report_to_dict(report), indent=2, allow_nan=False) + "\n"


CSV_FIELDS = ("bound_id", "target", "side", "nu", "gamma", "x",
              "value_sign", "value_log_magnitude", "value_decimal",
              "target_sign", "target_log_magnitude", "target_decimal",
              "margin", "ratio", "violation", "error")


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return repr(v) if isinstance(v, float) else str(v)


def report_to_csv(report: SweepReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for b in report.bounds:
        for r in b.records:
            cells = [b.id, b.target, b.side, r.point.nu, r.point.gamma, r.point.x]
            for v in (r.value, r.target_value):
                j = logvalue_json(v)
                cells += [None, None, None] if j is None else [j["sign"], j["log_magnitude"], j["decimal"]]
            cells += [r.margin, r.ratio,
                      r.margin is not None and r.margin < -b.rel_slack, r.error]
            w.writerow([_fmt(c) for c in cells])
    return buf.getvalue()


def table_to_csv(spec: TableSpec, table: Sequence[Sequence[float]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["nu", "gamma"] + [_fmt(float(x)) for x in spec.x_grid])
    for (nu, g), row in zip(spec.rows, table):
        w.writerow([_fmt(float(nu)), _fmt(float(g))] + [_fmt(float(v)) for v in row])
    return buf.getvalue()


def table_from_csv(text: str) -> tuple[list[float], list[tuple[float, float]], list[list[float]]]:
    """Inverse of :func:`table_to_csv`: (x columns, row labels, matrix)."""
    rows = list(csv.reader(io.StringIO(text)))
    xs = [float(v) for v in rows[0][2:]]
    labels = [(float(r[0]), float(r[1])) for r in rows[1:]]
    matrix = [[float(v) for v in r[2:]] for r in rows[1:]]
    return xs, labels, matrix


def table_to_json(spec: TableSpec, table: Sequence[Sequence[float]]) -> str:
    return json.dumps({
        "schema": "besselbounds.table/1",
        "which": spec.which,
        "x": list(spec.x_grid),
        "rows": [{"nu": nu, "gamma": g, "values": list(row)}
                 for (nu, g), row in zip(spec.rows, table)],
    }, indent=2) + "\n"


def limits_to_dict(checks: Sequence[LimitCheck]) -> dict:
    return {
        "schema": "besselbounds.limits/1",
        "ok": all(c.passed for c in checks),
        "checks": [{"name": c.name, "description": c.description, "measured": c.measured,
                    "expected": c.expected, "tolerance": c.tolerance,
                    "relative": c.relative, "deviation": c.deviation, "passed": c.passed}
                   for c in checks],
    }
