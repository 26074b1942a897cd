"""Sign plus natural-log magnitude representation of real numbers.

Quantities such as ``exp((1 - gamma) * x) * x**(nu - 1/2)`` overflow a double
long before the inequalities of interest stop being informative.  A
:class:`LogValue` carries ``sign * exp(logmag)`` so that products, quotients,
sums and comparisons stay finite for ``|logmag|`` far beyond the float range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import total_ordering

# largest logmag whose exp() is still a finite double
_LOG_FLOAT_MAX = math.log(1.7976931348623157e308)


@total_ordering
@dataclass(frozen=True, eq=False)
class LogValue:
    """A real number stored as ``sign * exp(logmag)``.

    ``sign`` is one of -1, 0, +1.  For ``sign == 0`` the value is exactly zero
    and ``logmag`` is normalised to ``-inf``.
    """

    sign: int
    logmag: float

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or +1, got {self.sign!r}")
        if math.isnan(self.logmag):
            raise ValueError("logmag is NaN")
        if self.sign == 0 or self.logmag == -math.inf:
            object.__setattr__(self, "sign", 0)
            object.__setattr__(self, "logmag", -math.inf)
        elif self.logmag == math.inf:
            raise ValueError("logmag must be finite for a nonzero value")

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls) -> "LogValue":
        return cls(0, -math.inf)

    @classmethod
    def from_log(cls, logmag: float, sign: int = 1) -> "LogValue":
        return cls(sign, logmag)

    @classmethod
    def from_float(cls, value: float) -> "LogValue":
        value = float(value)
        if math.isnan(value) or math.isinf(value):
            raise ValueError(f"cannot represent {value!r}")
        if value == 0.0:
            return cls.zero()
        return cls(1 if value > 0 else -1, math.log(abs(value)))

    @staticmethod
    def _coerce(other) -> "LogValue":
        if isinstance(other, LogValue):
            return other
        if isinstance(other, (int, float)):
            return LogValue.from_float(other)
        return NotImplemented

    # -- conversion --------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return self.sign == 0

    def fits_float(self) -> bool:
        return self.sign == 0 or self.logmag <= _LOG_FLOAT_MAX

    def to_float(self) -> float:
        """Return the value as a float; raise ``OverflowError`` if it does not fit.

        Values too small for a double underflow silently to 0.0.
        """
        if self.sign == 0:
            return 0.0
        if self.logmag > _LOG_FLOAT_MAX:
            raise OverflowError(f"exp({self.logmag}) exceeds the double range")
        return self.sign * math.exp(self.logmag)

    def __float__(self) -> float:
        return self.to_float()

    def decimal_or_none(self) -> float | None:
        return self.to_float() if self.fits_float() else None

    # -- arithmetic --------------------------------------------------------
    def __neg__(self) -> "LogValue":
        return LogValue(-self.sign, self.logmag)

    def __abs__(self) -> "LogValue":
        return LogValue(abs(self.sign), self.logmag)

    def __mul__(self, other) -> "LogValue":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.sign == 0 or other.sign == 0:
            return LogValue.zero()
        return LogValue(self.sign * other.sign, self.logmag + other.logmag)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "LogValue":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.sign == 0:
            raise ZeroDivisionError("LogValue division by zero")
        if self.sign == 0:
            return LogValue.zero()
        return LogValue(self.sign * other.sign, self.logmag - other.logmag)

    def __rtruediv__(self, other) -> "LogValue":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __add__(self, other) -> "LogValue":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.sign == 0:
            return other
        if other.sign == 0:
            return self
        big, small = (self, other) if self.logmag >= other.logmag else (other, self)
        r = math.exp(small.logmag - big.logmag)
        if big.sign == small.sign:
            return LogValue(big.sign, big.logmag + math.log1p(r))
        if r == 1.0:
            return LogValue.zero()
        return LogValue(big.sign, big.logmag + math.log1p(-r))

    __radd__ = __add__

    def __sub__(self, other) -> "LogValue":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "LogValue":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def scale_log(self, log_factor: float) -> "LogValue":
        """Multiply by ``exp(log_factor)``."""
        if self.sign == 0:
            return self
        return LogValue(self.sign, self.logmag + log_factor)

    # -- comparison --------------------------------------------------------
    def _key(self):
        # order-preserving key: (sign, signed log)
        if self.sign == 0:
            return (0, 0.0)
        return (self.sign, self.sign * self.logmag)

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._key() == other._key()

    def __lt__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._key() < other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self) -> str:
        return f"LogValue(sign={self.sign}, logmag={self.logmag!r})"


def ratio(a: LogValue, b: LogValue) -> float:
    """Return ``a / b`` as a float (the quotient must fit a double)."""
    return (a / b).to_float()


def log_sum(values) -> LogValue:
    total = LogValue.zero()
    for v in values:
        total = total + v
    return total
