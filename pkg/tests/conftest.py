"""High-precision reference values shared by the test modules."""

import mpmath as mp
import pytest

REF_DPS = 50


def mp_f_series(nu, gamma, x, shift=0, dps=REF_DPS):
    """int_0^x e^{-gamma t} t^nu I_{nu+shift}(t) dt by the termwise-integrated series.

    Each term is a lower incomplete gamma function; all terms are positive, so
    the sum is exact to working precision.  Used instead of numerical
    quadrature, which loses accuracy on the t^(2 nu) endpoint of negative nu.
    """
    with mp.workdps(dps):
        nu, gamma, x = mp.mpf(nu), mp.mpf(gamma), mp.mpf(x)
        mu = nu + shift
        total = mp.mpf(0)
        k = 0
        while True:
            a = nu + mu + 2 * k + 1
            if gamma == 0:
                w = x ** a / a
            else:
                w = mp.gammainc(a, 0, gamma * x) / gamma ** a
            term = w / (2 ** (mu + 2 * k) * mp.factorial(k) * mp.gamma(mu + k + 1))
            total += term
            if k > 5 and term < total * mp.mpf(10) ** (-dps):
                return total
            k += 1


@pytest.fixture(scope="session")
def mp_f():
    return mp_f_series
