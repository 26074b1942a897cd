"""Evaluation and bounds for exponentially weighted integrals of Bessel I.

    F(nu, gamma, x) = int_0^x exp(-gamma t) t^nu I_nu(t) dt
    G(nu, gamma, x) = int_0^x exp(-gamma t) t^nu I_{nu+1}(t) dt

Modules: :mod:`specfun` (Bessel, incomplete gamma, Struve), :mod:`besselint`
(F and G), :mod:`boundlib` (closed-form bounds), :mod:`steinx` (the E_n
expressions), :mod:`harness` (sweeps, tables, reports), :mod:`cli`.
"""

from .besselint import ParamPoint, integral_f, integral_g
from .boundlib import TruncatedSum, evaluate_bound, list_bounds
from .errors import ConvergenceError, DomainError
from .logvalue import LogValue

__all__ = [
    "ConvergenceError", "DomainError", "LogValue", "ParamPoint", "TruncatedSum",
    "evaluate_bound", "integral_f", "integral_g", "list_bounds",
]
__version__ = "0.1.0"
