"""Registry of closed-form bounds for F and G.

Throughout, ``A = exp(-gamma x) x^nu`` and ``c = 1 / (1 - gamma)``.  Each entry
names its target integral (``"F"`` or ``"G"``), the side it bounds, the region
where it is proved, and whether its ratio to the target tends to 1 as
x -> infinity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from . import specfun as sf
from .besselint import ParamPoint
from .errors import DomainError
from .logvalue import LogValue

_LOG2 = math.log(2.0)


class BoundValidityError(DomainError):
    """A bound was evaluated outside the region where it is proved."""


@dataclass(frozen=True)
class TruncatedSum:
    """Truncation of the series sum_k gamma^k I_{nu+k+1}(x) in L-INEQB4.

    ``terms`` fixes the number of summands (5 reproduces the published
    tables).  With ``adaptive=True`` summation instead continues until the
    dropped tail, bounded by gamma^K I_{nu+K+1}(x) / (1 - gamma), is below
    ``1e-12`` of the partial sum.  Truncation only weakens a lower bound, so
    either choice is sound.
    """

    terms: int = 5
    adaptive: bool = False

    def __post_init__(self):
        if not (isinstance(self.terms, int) and self.terms >= 1):
            raise DomainError("terms >= 1")


Predicate = tuple[str, Callable[[ParamPoint], bool]]


@dataclass(frozen=True)
class BoundSpec:
    id: str
    target: str
    side: str
    region: tuple[Predicate, ...]
    tight_at_infinity: bool
    evaluator: Callable = field(repr=False)
    description: str = ""

    def violated(self, p: ParamPoint, x_star: float | None = None) -> str | None:
        """Name of the first violated constraint, or None inside the region."""
        if not 0.0 < p.gamma < 1.0:
            return "0 < gamma < 1"
        for name, pred in self.region:
            if not pred(p):
                return name
        if self.id == "U-THM21":
            xs = default_x_star(p.gamma) if x_star is None else x_star
            if not xs > 1.0 / (1.0 - p.gamma):
                return "x_star > 1/(1-gamma)"
            if not p.x >= xs:
                return "x >= x_star"
        return None


def default_x_star(gamma: float) -> float:
    """The x* = 2 / (1 - gamma) used for U-THM21 unless overridden."""
    return 2.0 / (1.0 - gamma)


def m_factor(nu: float, gamma: float, x_star: float) -> float:
    """max{2 (nu + 1 + x*) / (2 nu + 1), x* / ((1 - gamma) x* - 1)}."""
    if not nu > -0.5:
        raise DomainError("nu > -1/2")
    if not 0.0 < gamma < 1.0:
        raise DomainError("0 < gamma < 1")
    if not x_star > 1.0 / (1.0 - gamma):
        raise DomainError("x_star > 1/(1-gamma)")
    return max(2.0 * (nu + 1.0 + x_star) / (2.0 * nu + 1.0),
               x_star / ((1.0 - gamma) * x_star - 1.0))


# -------------------------------------------------------------- helpers ---

def _log_a(p: ParamPoint) -> float:
    return -p.gamma * p.x + p.nu * math.log(p.x)


def _ai(p: ParamPoint, order: float) -> LogValue:
    """A * I_order(x)."""
    return sf.bessel_i_scaled(order, p.x).scale_log(_log_a(p))


def _c(p: ParamPoint) -> float:
    return 1.0 / (1.0 - p.gamma)


def _corrected(p: ParamPoint, const: float) -> LogValue:
    # c (1 - const * c / x) A I_nu
    factor = 1.0 - const * _c(p) / p.x
    return _ai(p, p.nu) * (_c(p) * factor)


def _ineqb2_rhs(p: ParamPoint) -> LogValue:
    # c { A (I_nu - (x/2)^nu / Gamma(nu+1)) - gamma(2nu+1, gamma x) / (Gamma(nu+1) 2^nu gamma^(2nu)) }
    nu, g = p.nu, p.gamma
    head = sf.bessel_i_tail(nu, p.x, 1).scale_log(_log_a(p))
    log_inc = (sf.lower_incomplete_gamma(2.0 * nu + 1.0, g * p.x).logmag
               - math.lgamma(nu + 1.0) - nu * _LOG2 - 2.0 * nu * math.log(g))
    return (head - LogValue(1, log_inc)) * _c(p)


def _series_sum(p: ParamPoint, opts: TruncatedSum) -> LogValue:
    # sum_k gamma^k I_{nu+k+1}(x)
    total = LogValue.zero()
    log_g = math.log(p.gamma)
    k = 0
    while True:
        term = sf.bessel_i_scaled(p.nu + k + 1.0, p.x).scale_log(k * log_g)
        total = total + term
        k += 1
        if not opts.adaptive:
            if k >= opts.terms:
                return total
            continue
        # tail after k terms is below gamma^k I_{nu+k+1} / (1 - gamma)
        tail = sf.bessel_i_scaled(p.nu + k + 1.0, p.x).scale_log(k * log_g) * _c(p)
        if tail.logmag - total.logmag < math.log(1e-12) or k > 100_000:
            return total


# ------------------------------------------------------------ evaluators ---

def _u_thm21(p, opts, x_star):
    xs = default_x_star(p.gamma) if x_star is None else x_star
    return _ai(p, p.nu + 1.0) * m_factor(p.nu, p.gamma, xs)


def _l_ineqb2(p, opts, x_star):
    return _ineqb2_rhs(p)


def _l_ineqb3(p, opts, x_star):
    nu = p.nu
    return _corrected(p, 4.0 * nu * nu / (2.0 * nu - 1.0))


def _l_ineqb4(p, opts, x_star):
    return _series_sum(p, opts).scale_log(_log_a(p))


def _l_ineqb5(p, opts, x_star):
    return sf.bessel_i_tail(0.0, p.x, 1).scale_log(-p.gamma * p.x) * _c(p)


def _u_ineqb10(p, opts, x_star):
    nu = p.nu
    return _ai(p, nu + 1.0) * (2.0 * (2.0 * nu + 7.0) * _c(p) / (2.0 * nu + 1.0))


def _u_ineqb11(p, opts, x_star):
    nu = p.nu
    return _ai(p, nu) * ((2.0 * nu + 7.0) * _c(p) / (2.0 * nu + 1.0))


def _l_ineqb12(p, opts, x_star):
    nu = p.nu
    return _corrected(p, 4.0 * nu * (2.0 * nu + 5.0) / (2.0 * nu - 1.0))


def _l_ineqb23(p, opts, x_star):
    nu = p.nu
    return _corrected(p, 4.0 * nu * (4.0 * nu + 1.0) / (2.0 * nu - 1.0))


def _l_neat(p, opts, x_star):
    # c (e^{-gamma x} I_0(x) - 1)
    return (sf.bessel_i_scaled(0.0, p.x).scale_log(-p.gamma * p.x) - 1.0) * _c(p)


def _u_gau9(p, opts, x_star):
    nu = p.nu
    bracket = sf.bessel_i_scaled(nu + 1.0, p.x) * (2.0 * (nu + 1.0)) - sf.bessel_i_scaled(nu + 3.0, p.x)
    return bracket.scale_log(_log_a(p)) * (_c(p) / (2.0 * nu + 1.0))


def _u_gau1(p, opts, x_star):
    nu = p.nu
    return _ai(p, nu + 1.0) * (2.0 * (nu + 1.0) * _c(p) / (2.0 * nu + 1.0))


def _u_gau2(p, opts, x_star):
    return _ai(p, p.nu) * _c(p)


def _l_old(p, opts, x_star):
    return _ai(p, p.nu + 1.0)


_NU_ALL = ("nu > -1/2", lambda p: p.nu > -0.5)
_NU_NONPOS = ("-1/2 < nu <= 0", lambda p: -0.5 < p.nu <= 0.0)
_NU_GE_3_2 = ("nu >= 3/2", lambda p: p.nu >= 1.5)
_NU_GT_1_2 = ("nu > 1/2", lambda p: p.nu > 0.5)
_NU_GE_1_2 = ("nu >= 1/2", lambda p: p.nu >= 0.5)
_NU_ZERO = ("nu = 0", lambda p: p.nu == 0.0)

_REGISTRY: tuple[BoundSpec, ...] = (
    BoundSpec("U-THM21", "F", "upper", (_NU_ALL,), False, _u_thm21,
              "M(x*) A I_{nu+1} for x >= x*"),
    BoundSpec("L-INEQB2", "F", "lower", (_NU_NONPOS,), True, _l_ineqb2,
              "c{A(I_nu - (x/2)^nu/Gamma(nu+1)) - gamma(2nu+1,gamma x)/(Gamma(nu+1)2^nu gamma^2nu)}"),
    BoundSpec("L-INEQB3", "F", "lower", (_NU_GE_3_2,), True, _l_ineqb3,
              "c(1 - 4nu^2 c/((2nu-1)x)) A I_nu"),
    BoundSpec("L-INEQB4", "F", "lower", (_NU_ALL,), True, _l_ineqb4,
              "A sum_k gamma^k I_{nu+k+1}"),
    BoundSpec("L-INEQB5", "F", "lower", (_NU_ZERO,), True, _l_ineqb5,
              "c e^{-gamma x}(I_0 - 1)"),
    BoundSpec("U-INEQB10", "F", "upper", (_NU_ALL,), False, _u_ineqb10,
              "2(2nu+7)c/(2nu+1) A I_{nu+1}"),
    BoundSpec("U-INEQB11", "F", "upper", (_NU_ALL,), False, _u_ineqb11,
              "(2nu+7)c/(2nu+1) A I_nu"),
    BoundSpec("L-INEQB12", "F", "lower", (_NU_GT_1_2,), True, _l_ineqb12,
              "c(1 - 4nu(2nu+5)c/((2nu-1)x)) A I_nu"),
    BoundSpec("L-INEQB21", "G", "lower", (_NU_NONPOS,), True, _l_ineqb2,
              "right-hand side of L-INEQB2, bounding G"),
    BoundSpec("L-INEQB22", "G", "lower", (_NU_GE_3_2,), True, _l_ineqb3,
              "right-hand side of L-INEQB3, bounding G"),
    BoundSpec("L-INEQB23", "G", "lower", (_NU_GT_1_2,), True, _l_ineqb23,
              "c(1 - 4nu(4nu+1)c/((2nu-1)x)) A I_nu"),
    BoundSpec("L-NEAT", "G", "lower", (_NU_ZERO,), True, _l_neat,
              "c(e^{-gamma x} I_0 - 1)"),
    BoundSpec("U-GAU9", "F", "upper", (_NU_GE_1_2,), True, _u_gau9,
              "A c (2(nu+1) I_{nu+1} - I_{nu+3})/(2nu+1)"),
    BoundSpec("U-GAU1", "F", "upper", (_NU_GE_1_2,), False, _u_gau1,
              "2(nu+1)c/(2nu+1) A I_{nu+1}"),
    BoundSpec("U-GAU2", "F", "upper", (_NU_GE_1_2,), True, _u_gau2,
              "c A I_nu"),
    BoundSpec("U-GAU3", "F", "upper", (_NU_GE_1_2,), True, _u_gau2,
              "upper half of the two-sided bound whose lower half is L-INEQB4"),
    BoundSpec("L-OLD", "F", "lower", (_NU_ALL,), False, _l_old,
              "A I_{nu+1}"),
)
_BY_ID = {b.id: b for b in _REGISTRY}


def list_bounds() -> tuple[BoundSpec, ...]:
    return _REGISTRY


def get_bound(bound_id: str) -> BoundSpec:
    try:
        return _BY_ID[bound_id]
    except KeyError:
        raise DomainError(f"unknown bound id {bound_id!r}") from None


def validity(bound_id: str, p: ParamPoint, x_star: float | None = None) -> bool:
    return get_bound(bound_id).violated(p, x_star) is None


def evaluate_bound(bound_id: str, p: ParamPoint, opts: TruncatedSum | None = None,
                   *, x_star: float | None = None) -> LogValue:
    """Value of bound ``bound_id`` at ``p``.

    Raises
    ------
    BoundValidityError
        If ``p`` lies outside the bound's region; the message names the
        violated constraint.
    """
    spec = get_bound(bound_id)
    why = spec.violated(p, x_star)
    if why is not None:
        raise BoundValidityError(f"{bound_id} requires {why}")
    if p.x == 0.0:
        return LogValue.zero()
    return spec.evaluator(p, opts or TruncatedSum(), x_star)
