"""Overflow-safe special functions returned as :class:`LogValue`.

I_nu and the modified Struve function L_nu are summed from their positive-term
power series with a running exponent, K_nu is a tanh-sinh quadrature of
``exp(-x cosh t) cosh(nu t)`` with the factor ``exp(-x)`` pulled out, and the
lower incomplete gamma function switches between its series and the
Legendre continued fraction at ``x = a + 1``.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from .errors import ConvergenceError, DomainError
from .logvalue import LogValue
from .quadrature import tanh_sinh

TERM_CAP = 200_000
_SERIES_RTOL = 1e-17
_LOG_RESCALE = 300.0
_RESCALE_AT = math.exp(_LOG_RESCALE)
_LOG2 = math.log(2.0)
_LOG_SQRT_PI = 0.5 * math.log(math.pi)
# K integrand is truncated where it falls below this fraction of its peak
_K_LOG_CUTOFF = math.log(1e20)
# below this argument M_nu = L_nu - I_nu is formed by direct subtraction
_STRUVE_M_DIRECT_MAX = 8.0


def _is_negative_integer(nu: float) -> bool:
    return nu < 0 and float(nu).is_integer()


def _log_hyp_series(q: float, c1: float, c2: float, start: int = 0) -> float:
    """log of sum_{k>=start} prod_{j<k} q / ((j + c1) (j + c2)).

    Requires ``c1, c2 > 0`` so every term is positive.  The partial sum is
    renormalised whenever it passes e^300, which keeps the loop finite for
    arguments up to several thousand.
    """
    shift = 0.0
    k = 0
    while k < start:
        shift += math.log(q / ((k + c1) * (k + c2)))
        k += 1
    term = 1.0
    total = 1.0
    while True:
        term *= q / ((k + c1) * (k + c2))
        k += 1
        total += term
        if total > _RESCALE_AT:
            total /= _RESCALE_AT
            term /= _RESCALE_AT
            shift += _LOG_RESCALE
        if term <= _SERIES_RTOL * total:
            return shift + math.log(total)
        if k - start > TERM_CAP:
            raise ConvergenceError(f"power series did not converge within {TERM_CAP} terms")


# ---------------------------------------------------------------- gamma ----

def gamma_fn(a: float) -> LogValue:
    """Gamma function as a LogValue; ``a`` must not be a nonpositive integer."""
    if a <= 0 and float(a).is_integer():
        raise DomainError("a must not be a nonpositive integer")
    if not math.isfinite(a):
        raise DomainError("a must be finite")
    sign = 1 if a > 0 or math.floor(a) % 2 == 0 else -1
    return LogValue(sign, math.lgamma(a))


# ----------------------------------------------------------- Bessel I ----

@lru_cache(maxsize=1 << 16)
def _log_bessel_i(nu: float, x: float, start: int = 0) -> float:
    q = 0.25 * x * x
    lead = nu * math.log(0.5 * x) - math.lgamma(nu + 1.0)
    return lead + _log_hyp_series(q, 1.0, nu + 1.0, start)


def _check_i_args(nu: float, x: float) -> float:
    if not (x > 0 and math.isfinite(x)):
        raise DomainError("x > 0")
    if _is_negative_integer(nu):
        return -nu
    if not nu > -1.0:
        raise DomainError("nu > -1 (or a negative integer)")
    return float(nu)


def bessel_i_scaled(nu: float, x: float) -> LogValue:
    """I_nu(x) from its defining power series, as a LogValue.

    Orders ``nu > -1`` keep every series term positive; negative integer
    orders are mapped through I_{-n} = I_n.
    """
    nu = _check_i_args(nu, x)
    return LogValue(1, _log_bessel_i(nu, float(x)))


def bessel_i_tail(nu: float, x: float, start: int = 1) -> LogValue:
    """Power series of I_nu(x) with its first ``start`` terms removed.

    ``bessel_i_tail(0, x)`` is ``I_0(x) - 1`` without cancellation.
    """
    nu = _check_i_args(nu, x)
    if start < 0:
        raise DomainError("start >= 0")
    return LogValue(1, _log_bessel_i(nu, float(x), int(start)))


def log_bessel_ie(nu: float, x: float) -> float:
    """log(exp(-x) I_nu(x)), unchecked fast path for quadrature integrands."""
    return _log_bessel_i(nu, x) - x


def bessel_i_any(nu: float, x: float) -> LogValue:
    """I_nu(x) for any order ``nu > -2``, signed.

    Orders in (-2, -1) are reached from the positive-term regime with the
    recurrence I_{mu-1} = I_{mu+1} + (2 mu / x) I_mu.
    """
    if nu > -1.0 or _is_negative_integer(nu):
        return bessel_i_scaled(nu, x)
    if not nu > -2.0:
        raise DomainError("nu > -2")
    mu = nu + 1.0
    return bessel_i_scaled(mu + 1.0, x) + bessel_i_scaled(mu, x) * (2.0 * mu / x)


# ----------------------------------------------------------- Bessel K ----

def _logcosh(y):
    y = np.abs(y)
    return y + np.log1p(np.exp(-2.0 * y)) - _LOG2


@lru_cache(maxsize=1 << 14)
def _log_bessel_k(nu: float, x: float) -> float:
    nu = abs(nu)

    def g(t):
        return -2.0 * x * np.sinh(0.5 * t) ** 2 + _logcosh(nu * t)

    def dg(t):
        return -x * math.sinh(t) + nu * math.tanh(nu * t)

    if nu * nu <= x:
        t_peak = 0.0
    else:
        hi = math.asinh(nu / x) + 1.0
        lo = min(1e-8, 0.5 * hi)
        t_peak = brentq(dg, lo, hi, xtol=1e-15, rtol=1e-15)
    g_peak = float(g(t_peak))
    target = g_peak - _K_LOG_CUTOFF

    step = 1.0
    t_hi = t_peak + step
    while float(g(t_hi)) > target:
        step *= 2.0
        t_hi = t_peak + step
    t_right = brentq(lambda t: float(g(t)) - target, t_peak, t_hi, xtol=1e-14)
    if t_peak > 0.0 and float(g(0.0)) < target:
        t_left = brentq(lambda t: float(g(t)) - target, 0.0, t_peak, xtol=1e-14)
    else:
        t_left = 0.0

    def f(t):
        return np.exp(g(t) - g_peak)

    total = tanh_sinh(f, t_peak, t_right)
    if t_peak > t_left:
        total += tanh_sinh(f, t_left, t_peak)
    return -x + g_peak + math.log(total)


def bessel_k_scaled(nu: float, x: float) -> LogValue:
    """K_nu(x) as a LogValue; negative orders use K_{-nu} = K_nu."""
    if not (x > 0 and math.isfinite(x)):
        raise DomainError("x > 0")
    if not math.isfinite(nu):
        raise DomainError("nu must be finite")
    return LogValue(1, _log_bessel_k(abs(float(nu)), float(x)))


# ------------------------------------------------ incomplete gamma -------

def _log_gamma_series(a: float, x: float) -> float:
    # gamma(a, x) = x^a e^-x sum_n x^n / (a (a+1) ... (a+n))
    shift = 0.0
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(TERM_CAP):
        ap += 1.0
        term *= x / ap
        total += term
        if total > _RESCALE_AT:
            total /= _RESCALE_AT
            term /= _RESCALE_AT
            shift += _LOG_RESCALE
        if term <= _SERIES_RTOL * total:
            return a * math.log(x) - x + shift + math.log(total)
    raise ConvergenceError("incomplete gamma series did not converge")


def _log_upper_gamma_cf(a: float, x: float) -> float:
    # modified Lentz evaluation of the continued fraction for Gamma(a, x)
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, TERM_CAP):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            return a * math.log(x) - x + math.log(h)
    raise ConvergenceError("incomplete gamma continued fraction did not converge")


def lower_incomplete_gamma(a: float, x: float) -> LogValue:
    """gamma(a, x) = integral_0^x t^(a-1) e^-t dt as a LogValue."""
    if not a > 0:
        raise DomainError("a > 0")
    if not x >= 0:
        raise DomainError("x >= 0")
    if x == 0:
        return LogValue.zero()
    if x < a + 1.0:
        return LogValue(1, _log_gamma_series(a, x))
    lg = math.lgamma(a)
    q = math.exp(_log_upper_gamma_cf(a, x) - lg)
    return LogValue(1, lg + math.log1p(-q))


def upper_incomplete_gamma(a: float, x: float) -> LogValue:
    """Gamma(a, x) = Gamma(a) - gamma(a, x), computed on the stable side of the split."""
    if not a > 0:
        raise DomainError("a > 0")
    if not x >= 0:
        raise DomainError("x >= 0")
    if x == 0:
        return gamma_fn(a)
    if x < a + 1.0:
        lg = math.lgamma(a)
        p = math.exp(_log_gamma_series(a, x) - lg)
        return LogValue(1, lg + math.log1p(-p))
    return LogValue(1, _log_upper_gamma_cf(a, x))


# ----------------------------------------------------------- Struve ------

def struve_l(nu: float, x: float) -> LogValue:
    """Modified Struve function L_nu(x) from its positive-term series."""
    if not (x > 0 and math.isfinite(x)):
        raise DomainError("x > 0")
    if not nu > -1.5:
        raise DomainError("nu > -3/2")
    lead = (nu + 1.0) * math.log(0.5 * x) - math.lgamma(1.5) - math.lgamma(nu + 1.5)
    return LogValue(1, lead + _log_hyp_series(0.25 * x * x, 1.5, nu + 1.5))


def _struve_m_integral(nu: float, x: float) -> LogValue:
    # M_nu(x) = -2 (x/2)^nu / (sqrt(pi) Gamma(nu + 1/2)) int_0^1 e^{-xt} (1 - t^2)^{nu - 1/2} dt,
    # integrated in s = 1 - t so the endpoint singularity sits at s = 0
    p = nu - 0.5

    def f(s):
        return np.exp(-x * (1.0 - s) + p * np.log(s * (2.0 - s)))

    integral = tanh_sinh(f, 0.0, 1.0, rtol=1e-14)
    log_pref = _LOG2 + nu * math.log(0.5 * x) - _LOG_SQRT_PI - math.lgamma(nu + 0.5)
    return LogValue(-1, log_pref + math.log(integral))


def struve_m(nu: float, x: float) -> LogValue:
    """M_nu(x) = L_nu(x) - I_nu(x), free of the exponential cancellation.

    Accuracy is absolute on the scale (x/2)^(nu+1): near nu = -1/2, where M_nu
    is itself exponentially small, only that absolute accuracy survives.  This
    is what the closed form of the gamma = 0 integral needs, since there the
    order nu - 1 term is dominated by the order nu term.

    For large ``x`` both L_nu and I_nu grow like e^x while their difference
    grows only algebraically, so the subtraction is avoided there: the
    integral representation covers ``nu > -1/2`` and lower orders use the
    Struve recurrence M_{nu-1} = M_{nu+1} + (2 nu / x) M_nu
    + (x/2)^nu / (sqrt(pi) Gamma(nu + 3/2)).
    """
    if not (x > 0 and math.isfinite(x)):
        raise DomainError("x > 0")
    if not nu > -1.5:
        raise DomainError("nu > -3/2")
    if x <= _STRUVE_M_DIRECT_MAX:
        return struve_l(nu, x) - bessel_i_any(nu, x)
    if nu > -0.5:
        return _struve_m_integral(nu, x)
    mu = nu + 1.0
    inhom = LogValue(1, mu * math.log(0.5 * x) - _LOG_SQRT_PI - math.lgamma(mu + 1.5))
    return _struve_m_integral(mu + 1.0, x) + _struve_m_integral(mu, x) * (2.0 * mu / x) + inhom
