import math

import mpmath as mp
import pytest
from hypothesis import given, settings, strategies as st

from besselbounds import specfun as sf
from besselbounds.errors import DomainError


def fl(v):
    return v.to_float()


def mp_i_series(nu, x, dps=50):
    # I_nu(x) summed term by term at 50 digits
    with mp.workdps(dps):
        nu, x = mp.mpf(nu), mp.mpf(x)
        term = (x / 2) ** nu / mp.gamma(nu + 1)
        total, k = term, 0
        while term > total * mp.mpf(10) ** (-dps) or k < x:
            k += 1
            term *= (x / 2) ** 2 / (k * (nu + k))
            total += term
        return total


# ------------------------------------------------------------------- I ---

def test_i0_at_origin():
    assert fl(sf.bessel_i_scaled(0.0, 1e-12)) == pytest.approx(1.0, rel=1e-15)


@pytest.mark.parametrize("x", [0.3, 2.0, 17.0, 250.0])
def test_integer_order_symmetry(x):
    assert sf.bessel_i_scaled(-2.0, x).logmag == sf.bessel_i_scaled(2.0, x).logmag


@pytest.mark.parametrize("nu,x", [
    (1.0, 2.0), (0.0, 0.01), (-0.4, 3.0), (0.5, 40.0), (2.5, 100.0), (10.0, 1.0),
    (5.0, 700.0), (0.0, 2000.0), (1.5, 5000.0),
])
def test_i_against_series_oracle(nu, x):
    ref = mp_i_series(nu, x)
    assert sf.bessel_i_scaled(nu, x).logmag == pytest.approx(float(mp.log(ref)), abs=1e-12)


def test_i_half_integer_closed_form():
    for x in (0.1, 1.0, 30.0):
        assert fl(sf.bessel_i_scaled(0.5, x)) == pytest.approx(
            math.sqrt(2 / (math.pi * x)) * math.sinh(x), rel=1e-13)


def test_i_tail_has_no_cancellation():
    x = 1e-5
    assert fl(sf.bessel_i_tail(0.0, x)) == pytest.approx(x * x / 4 * (1 + x * x / 16), rel=1e-14)


def test_i_any_below_minus_one():
    x, nu = 2.0, -1.3
    with mp.workdps(30):
        assert fl(sf.bessel_i_any(nu, x)) == pytest.approx(float(mp.besseli(nu, x)), rel=1e-12)


@pytest.mark.parametrize("nu,x", [(0.0, 0.0), (0.0, -1.0), (-1.5, 1.0), (0.0, math.inf)])
def test_i_domain(nu, x):
    with pytest.raises(DomainError):
        sf.bessel_i_scaled(nu, x)


# ------------------------------------------------------------------- K ---

def test_k_half_integer():
    assert fl(sf.bessel_k_scaled(0.5, 1.0)) == pytest.approx(math.sqrt(math.pi / 2) / math.e,
                                                            rel=1e-12)


def test_k_large_x_asymptotic():
    x = 100.0
    assert fl(sf.bessel_k_scaled(0.0, x)) / (math.sqrt(math.pi / (2 * x)) * math.exp(-x)) \
        == pytest.approx(1.0, abs=0.01)


@pytest.mark.parametrize("nu,x", [
    (2.0, 3.0), (0.0, 1e-6), (0.25, 1e-3), (7.0, 0.05), (12.0, 5000.0), (1.5, 700.0), (3.3, 20.0),
])
def test_k_against_mpmath(nu, x):
    with mp.workdps(40):
        ref = mp.log(mp.besselk(nu, x))
    assert sf.bessel_k_scaled(nu, x).logmag == pytest.approx(float(ref), abs=1e-10)


def test_k_against_cosh_integral():
    with mp.workdps(30):
        ref = mp.quad(lambda t: mp.exp(-3 * mp.cosh(t)) * mp.cosh(2 * t), [0, 1, 3, 6])
    assert fl(sf.bessel_k_scaled(2.0, 3.0)) == pytest.approx(float(ref), rel=1e-10)


def test_k_symmetric_in_order():
    assert sf.bessel_k_scaled(-1.7, 2.0) == sf.bessel_k_scaled(1.7, 2.0)


# ------------------------------------------------------ incomplete gamma ---

@pytest.mark.parametrize("x", [0.0, 1e-8, 0.5, 3.0, 40.0])
def test_gamma_inc_exponential_case(x):
    assert fl(sf.lower_incomplete_gamma(1.0, x)) == pytest.approx(-math.expm1(-x), rel=1e-13)


def test_gamma_inc_zero():
    assert sf.lower_incomplete_gamma(2.5, 0.0).is_zero


def test_gamma_inc_oracle():
    with mp.workdps(30):
        ref = mp.quad(lambda t: t ** 1.5 * mp.exp(-t), [0, 3])
    assert fl(sf.lower_incomplete_gamma(2.5, 3.0)) == pytest.approx(float(ref), rel=1e-12)


@pytest.mark.parametrize("a", [0.2, 1.0, 2.5, 11.0, 151.0])
def test_gamma_inc_continuous_across_crossover(a):
    for x in ((a + 1.0) * (1 - 1e-12), (a + 1.0) * (1 + 1e-12)):
        with mp.workdps(30):
            ref = mp.log(mp.gammainc(a, 0, x))
        assert sf.lower_incomplete_gamma(a, x).logmag == pytest.approx(float(ref), abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.05, 80.0), st.floats(0.0, 200.0))
def test_gamma_inc_complement(a, x):
    lower = sf.lower_incomplete_gamma(a, x)
    upper = sf.upper_incomplete_gamma(a, x)
    total = (lower + upper).logmag
    assert total == pytest.approx(math.lgamma(a), abs=1e-11 * max(1.0, abs(math.lgamma(a))))


@pytest.mark.parametrize("a,x", [(0.0, 1.0), (-1.0, 1.0), (1.0, -0.5)])
def test_gamma_inc_domain(a, x):
    with pytest.raises(DomainError):
        sf.lower_incomplete_gamma(a, x)


# --------------------------------------------------------------- Struve ---

@pytest.mark.parametrize("x", [0.2, 1.0, 9.0])
def test_struve_half_integer(x):
    assert fl(sf.struve_l(0.5, x)) == pytest.approx(
        math.sqrt(2 / (math.pi * x)) * (math.cosh(x) - 1), rel=1e-12)


@pytest.mark.parametrize("nu,x", [(0.0, 1.0), (-0.4, 2.0), (1.0, 30.0), (-1.2, 0.5), (2.5, 400.0)])
def test_struve_against_mpmath(nu, x):
    with mp.workdps(50):
        ref = mp.log(mp.struvel(nu, x))
    assert sf.struve_l(nu, x).logmag == pytest.approx(float(ref), abs=1e-10)


def test_struve_small_x_linear():
    r = [fl(sf.struve_l(0.0, x)) / (x * x) for x in (1e-4, 1e-6)]
    # L_0(x) ~ 2 x / pi, so L_0 / x^2 blows up while L_0 / x settles
    s = [fl(sf.struve_l(0.0, x)) / x for x in (1e-4, 1e-6)]
    assert r[1] > r[0]
    assert s[1] == pytest.approx(2 / math.pi, rel=1e-8)
    assert s[0] == pytest.approx(s[1], rel=1e-7)


@pytest.mark.parametrize("nu,x", [(0.5, 3.0), (1.0, 20.0), (0.0, 100.0), (2.5, 50.0)])
def test_struve_m_matches_difference(nu, x):
    with mp.workdps(150):
        ref = mp.struvel(nu, x) - mp.besseli(nu, x)
    assert fl(sf.struve_m(nu, x)) == pytest.approx(float(ref), rel=1e-10)


# ---------------------------------------------------------------- Gamma ---

def test_gamma_fn_values():
    assert fl(sf.gamma_fn(1.0)) == pytest.approx(1.0, rel=1e-15)
    assert fl(sf.gamma_fn(0.5)) == pytest.approx(math.sqrt(math.pi), rel=1e-15)
    # product oracle: Gamma(4.5) = 3.5 * 2.5 * 1.5 * 0.5 * sqrt(pi)
    assert fl(sf.gamma_fn(4.5)) == pytest.approx(3.5 * 2.5 * 1.5 * 0.5 * math.sqrt(math.pi),
                                                rel=1e-14)
    assert fl(sf.gamma_fn(-0.5)) == pytest.approx(-2 * math.sqrt(math.pi), rel=1e-14)
    with pytest.raises(DomainError):
        sf.gamma_fn(-2.0)


# ------------------------------------------------------ property suite ---

REC_NU = [0.5, 1.0, 2.5, 5.0]
REC_X = [0.1, 1.0, 10.0, 100.0]
PROP_NU = [-0.5, -0.4, -0.1, 0.0, 0.25, 0.5, 1.0, 2.5, 5.0, 10.0]
PROP_X = [1e-3, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0, 200.0, 1000.0]


@pytest.mark.parametrize("nu", REC_NU)
@pytest.mark.parametrize("x", REC_X)
def test_recurrence(nu, x):
    lhs = sf.bessel_i_scaled(nu + 1, x)
    rhs = sf.bessel_i_any(nu - 1, x) - sf.bessel_i_scaled(nu, x) * (2 * nu / x)
    assert abs(fl(lhs / rhs) - 1) <= 1e-9


@pytest.mark.parametrize("nu", [0.5, 1.0, 2.5, 5.0])
@pytest.mark.parametrize("x", [0.5, 2.0, 10.0, 60.0])
def test_derivative_of_power_times_i(nu, x):
    h = 1e-5 * x

    def g(t):
        return t ** nu * fl(sf.bessel_i_scaled(nu, t))

    fd = (g(x + h) - g(x - h)) / (2 * h)
    exact = x ** nu * fl(sf.bessel_i_any(nu - 1, x))
    assert fd == pytest.approx(exact, rel=1e-6)


@pytest.mark.parametrize("x", [0.1, 1.0, 10.0, 60.0])
def test_derivative_of_i0(x):
    h = 1e-5 * x
    fd = (fl(sf.bessel_i_scaled(0, x + h)) - fl(sf.bessel_i_scaled(0, x - h))) / (2 * h)
    assert fd == pytest.approx(fl(sf.bessel_i_scaled(1, x)), rel=1e-6)


@pytest.mark.parametrize("nu", PROP_NU)
@pytest.mark.parametrize("x", PROP_X)
def test_i_decreasing_in_order(nu, x):
    lo, hi = sf.bessel_i_scaled(nu + 1, x), sf.bessel_i_scaled(nu, x)
    if nu == -0.5 and x > 18:
        # I_{1/2} / I_{-1/2} = tanh x is 1 to double precision here
        assert lo <= hi
    else:
        assert lo < hi


@pytest.mark.parametrize("nu", [v for v in PROP_NU if v > -0.5])
@pytest.mark.parametrize("x", PROP_X)
def test_k_increasing_in_order(nu, x):
    assert sf.bessel_k_scaled(nu + 1, x) > sf.bessel_k_scaled(nu, x)


@pytest.mark.parametrize("nu", [-0.9, -0.5, 0.0, 0.5, 1.0, 2.5, 5.0, 10.0])
@pytest.mark.parametrize("x", PROP_X)
def test_i_ratio_lower_bound(nu, x):
    r = fl(sf.bessel_i_scaled(nu + 1, x) / sf.bessel_i_scaled(nu, x))
    assert r > x / (2 * (nu + 1) + x)


@pytest.mark.parametrize("mu", [0.51, 0.75, 1.0, 1.5, 2.5, 5.0, 12.0])
@pytest.mark.parametrize("x", PROP_X)
def test_k_ratio_upper_bound(mu, x):
    r = fl(sf.bessel_k_scaled(mu, x) / sf.bessel_k_scaled(mu - 1, x))
    sharp = (mu - 0.5 + math.sqrt((mu - 0.5) ** 2 + x * x)) / x
    assert r < sharp * (1 + 1e-12)
    assert sharp <= 1 + (2 * mu - 1) / x


@pytest.mark.parametrize("nu", [-0.4, 0.0, 0.5, 1.0, 2.5, 5.0, 10.0])
@pytest.mark.parametrize("x", PROP_X)
def test_wronskian(nu, x):
    w = (sf.bessel_i_scaled(nu, x) * sf.bessel_k_scaled(nu + 1, x)
         + sf.bessel_i_scaled(nu + 1, x) * sf.bessel_k_scaled(nu, x))
    assert fl(w) * x == pytest.approx(1.0, rel=1e-9)


@pytest.mark.parametrize("nu", [0.0, 1.0, 2.5])
def test_i_small_x_asymptotic(nu):
    def ratio(x):
        lead = (x / 2) ** nu / math.gamma(nu + 1) * (1 + x * x / (4 * (nu + 1)))
        return fl(sf.bessel_i_scaled(nu, x)) / lead

    errs = [abs(ratio(x) - 1) for x in (1e-1, 1e-2, 1e-3)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-10


@pytest.mark.parametrize("nu", [0.0, 1.0, 2.5])
def test_i_large_x_asymptotic(nu):
    errs = [abs(sf.bessel_i_scaled(nu, x).logmag - (x - 0.5 * math.log(2 * math.pi * x)))
            for x in (50.0, 500.0, 5000.0)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-3


@pytest.mark.parametrize("nu", [0.5, 1.0, 2.5])
def test_k_small_x_asymptotic(nu):
    x = 1e-6
    lead = 2 ** (nu - 1) * math.gamma(nu) * x ** (-nu)
    assert fl(sf.bessel_k_scaled(nu, x)) / lead == pytest.approx(1.0, abs=1e-3)


def test_k0_small_x_logarithmic():
    x = 1e-12
    assert fl(sf.bessel_k_scaled(0.0, x)) / (-math.log(x)) == pytest.approx(1.0, abs=0.03)
