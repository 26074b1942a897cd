"""The expressions E_n(nu, beta, x) = e^{-beta x} K_{nu+n}(x) x^{1-nu} F(nu, -beta, x).

They appear in the solution of the variance-gamma Stein equation.  For
``-1 < beta < 0``, ``nu > -1/2`` and ``n`` in {0, 1, 2} each E_n is bounded
uniformly in ``x >= 0``; this module evaluates them, the uniform constants,
and a grid estimate of their suprema.
"""

from __future__ import annotations

import math
from functools import lru_cache
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import specfun as sf
from .besselint import ParamPoint, integral_cumulative, integral_f
from .errors import DomainError
from .logvalue import LogValue

SCAN_POINTS = 2000
SCAN_X_MIN = 1e-6


@dataclass(frozen=True)
class ExprPoint:
    nu: float
    beta: float
    x: float
    n: int

    def __post_init__(self):
        _check(self.n, self.nu, self.beta)
        if not (math.isfinite(self.x) and self.x >= 0.0):
            raise DomainError("x >= 0")

    @property
    def gamma(self) -> float:
        return -self.beta


def _check(n, nu, beta):
    if n not in (0, 1, 2):
        raise DomainError("n in {0, 1, 2}")
    if not nu > -0.5:
        raise DomainError("nu > -1/2")
    if not -1.0 < beta < 0.0:
        raise DomainError("-1 < beta < 0")


def limit_at_zero(n: int, nu: float) -> float:
    """lim_{x -> 0+} E_n: 2 (nu + 1) / (2 nu + 1) for n = 2, else 0."""
    return 2.0 * (nu + 1.0) / (2.0 * nu + 1.0) if n == 2 else 0.0


def limit_at_infinity(beta: float) -> float:
    """lim_{x -> oo} E_n = 1 / (2 (1 + beta)), the same for every n."""
    return 1.0 / (2.0 * (1.0 + beta))


def _combine(n: int, nu: float, beta: float, x: float, f: LogValue) -> LogValue:
    log_pref = -beta * x + (1.0 - nu) * math.log(x)
    return (sf.bessel_k_scaled(nu + n, x) * f).scale_log(log_pref)


def expression_e(q: ExprPoint) -> LogValue:
    """E_n at ``q``; at x = 0 the analytic limit is returned."""
    if q.x == 0.0:
        return LogValue.from_float(limit_at_zero(q.n, q.nu))
    f = integral_f(ParamPoint(q.nu, q.gamma, q.x))
    return _combine(q.n, q.nu, q.beta, q.x, f)


def uniform_upper(n: int, nu: float, beta: float) -> float:
    """Sharpest available constant C with E_n < C for all x >= 0.

    The constants valid for every nu > -1/2 are always available; for
    nu >= 1/2 the smaller of those and the older, nu-restricted ones is used.
    """
    _check(n, nu, beta)
    d = (2.0 * nu + 1.0) * (1.0 + beta)
    if n == 2:
        general = (2.0 * nu + 7.0) / d
        restricted = 2.0 * (nu + 1.0) / d
    else:
        general = (2.0 * nu + 7.0) / (2.0 * d)
        restricted = (nu + 1.0) / d
    return min(general, restricted) if nu >= 0.5 else general


def supremum_lower(n: int, nu: float, beta: float) -> float:
    """max of the two boundary limits, a lower bound for sup E_n."""
    _check(n, nu, beta)
    return max(limit_at_infinity(beta), limit_at_zero(n, nu))


def default_scan_grid(beta: float, points: int = SCAN_POINTS) -> np.ndarray:
    """Log-spaced abscissae on [1e-6, 300 / (1 + beta)]."""
    return np.geomspace(SCAN_X_MIN, 300.0 / (1.0 + beta), points)


@lru_cache(maxsize=64)
def _cumulative_f(nu: float, gamma: float, xs: tuple[float, ...]) -> tuple[LogValue, ...]:
    # shared by the three n at one (nu, beta)
    return tuple(integral_cumulative(nu, gamma, xs))


def supremum_scan(n: int, nu: float, beta: float,
                  x_grid: Sequence[float] | None = None) -> tuple[float, float]:
    """Grid estimate of sup_{x >= 0} E_n.

    The maximum runs over ``x_grid`` (default :func:`default_scan_grid`) and
    the two analytic boundary limits; the limit at infinity is included only
    when the grid extends to at least 50 / (1 + beta).  Returns
    ``(sup_value, argmax_x)`` with ``argmax_x`` equal to ``0.0`` or ``inf``
    when a limit wins.
    """
    _check(n, nu, beta)
    xs = default_scan_grid(beta) if x_grid is None else np.asarray(x_grid, dtype=float)
    if xs.size == 0:
        raise DomainError("x_grid must be nonempty")
    best_v, best_x = limit_at_zero(n, nu), 0.0
    if xs.max() >= 50.0 / (1.0 + beta):
        # the limit at infinity counts only once the grid reaches the asymptotic range
        lim = limit_at_infinity(beta)
        if lim > best_v:
            best_v, best_x = lim, math.inf
    interior = [float(x) for x in xs if x > 0.0]
    if interior:
        fs = _cumulative_f(float(nu), -float(beta), tuple(interior))
        for x, f in zip(interior, fs):
            v = _combine(n, nu, beta, x, f).to_float()
            if v > best_v:
                best_v, best_x = v, x
    return best_v, best_x


def product_ik(shift: int, nu: float, x: float) -> float:
    """x K_{nu+shift}(x) I_nu(x)."""
    if shift not in (0, 1, 2):
        raise DomainError("shift in {0, 1, 2}")
    if not x > 0.0:
        raise DomainError("x > 0")
    prod = sf.bessel_k_scaled(nu + shift, x) * sf.bessel_i_any(nu, x)
    return prod.scale_log(math.log(x)).to_float()
