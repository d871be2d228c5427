import math
import warnings

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import special

from betadiv import levy
from betadiv.betapower import Params
from betadiv.levy import (
    HyperExpMixture,
    NotInELPError,
    TailKind,
    count_sign_changes,
    distorted_rho,
    elp_condition,
    gamma_drift_c,
    gamma_limit_exponent,
    gamma_limit_exponent_closed,
    hyperexp_nu_integer_b,
    hyperexp_nu_integer_s,
    is_integer,
    jump_measure,
    killing_rate,
    psi_exact,
    psi_quadrature,
    psi_rescaled,
    rho,
    rho_prime,
    tail_constant,
)
from betadiv.specfun import DomainError, QuadratureConfig, integrate_semiinf

# b s e^{-(a+b)x} 2F1(1+b, 1-s; 2; 1-e^{-x}) by mpmath at 60 digits
RHO_ORACLE = [
    ((1, 2, 0.5), 0.3, 0.51368195246120435364),
    ((0.3, 0.7, 1.3), 1.0, 0.26382744165947219094),
    ((1, 2.5, 3), 2.0, -0.00043604960162234872444),
    ((0.5, 3, 0.7), 0.05, 1.8173326421093290496),
    ((2, 0.4, 0.9), 5.0, 2.665858658451459559e-6),
    ((1, 0.5, 2), 10.0, 7.6485996083355170108e-8),
    ((1, 2, 3), 0.7, -0.0024917746834857810963),
]

# u Gamma(a+s+u) Gamma(a+b+u) / (Gamma(a+b+s+u) Gamma(a+u)) by mpmath
PSI_ORACLE = [
    ((1, 2, 0.5), 1.0, 0.68571428571428571429),
    ((0.3, 1.5, 0.5), 0.25, 0.11172777079311360144),
    ((2, 3, 0.7), 4.0, 2.9944322275768492958),
    ((0.5, 0.5, 2), 1.0, 0.625),
    ((1, 10, 0.3), 0.25, 0.11972556516730974664),
    ((1, 1, 1), 1.0, 2.0 / 3.0),
]

pos = st.floats(0.05, 5.0)
params = st.builds(Params, pos, pos, pos)
elp_params = params.filter(elp_condition)


@pytest.mark.parametrize("t,x,expected", RHO_ORACLE)
def test_rho_matches_oracle(t, x, expected):
    assert rho(Params(*t), x) == pytest.approx(expected, rel=1e-10, abs=1e-300)


@given(params)
def test_rho_at_zero_is_bs(p):
    assert rho(p, 0.0) == p.b * p.s


@given(params)
def test_rho_prime_at_zero(p):
    expected = -(p.b * p.s / 2) * (2 * p.a + p.b + p.b * p.s + p.s - 1)
    assert abs(rho_prime(p, 0.0) - expected) <= 1e-10 * max(1.0, abs(expected))


@given(params, st.floats(0.01, 8.0))
def test_rho_prime_by_central_difference(p, x):
    h = 1e-5
    fd = (rho(p, x + h) - rho(p, x - h)) / (2 * h)
    assert rho_prime(p, x) == pytest.approx(fd, rel=1e-5, abs=1e-9 * (1 + p.b * p.s))


@given(params, st.floats(0.0, 30.0))
def test_rho_symmetric_in_b_and_s(p, x):
    lhs, rhs = rho(p, x), rho(p.swapped(), x)
    assert abs(lhs - rhs) <= 1e-10 * (1 + abs(lhs))


@pytest.mark.parametrize("a,b", [(1, 2), (0.3, 0.7), (2.5, 4)])
def test_rho_closed_form_when_s_is_one(a, b):
    x = np.geomspace(1e-4, 40, 50)
    np.testing.assert_allclose(rho(Params(a, b, 1), x), b * np.exp(-(a + b) * x), rtol=1e-12)


def test_rho_huge_argument_underflows_to_zero():
    assert rho(Params(1, 0.5, 0.5), 1e4) == 0.0


def test_rho_rejects_negative_x():
    with pytest.raises(DomainError):
        rho(Params(1, 1, 1), -1.0)


def test_distorted_rho_is_scoped():
    p = Params(1, 2, 0.5)
    base = rho(p, 0.3)
    with distorted_rho(1e-4):
        assert rho(p, 0.3) == pytest.approx(base * (1 + 1e-4), rel=1e-14)
    assert rho(p, 0.3) == base


@pytest.mark.parametrize(
    "t,kind,value",
    [
        ((1, 2, 0.5), TailKind.CONSTANT, math.gamma(1.5) / (math.gamma(3) * math.gamma(0.5))),
        ((1, 1, 2), TailKind.ZERO, 0.0),
        ((1, 2, 2), TailKind.CONSTANT, -0.5),
        ((1, 3, 3), TailKind.CONSTANT, 1.0 / 3.0),
        ((1, 0.5, 0.5), TailKind.LINEAR, 1.0 / (math.gamma(1.5) * math.gamma(0.5))),
    ],
)
def test_tail_constant(t, kind, value):
    tc = tail_constant(Params(*t))
    assert tc.kind is kind
    assert tc.value == pytest.approx(value, rel=1e-12, abs=1e-300)


@pytest.mark.parametrize("t", [(1, 2, 0.5), (1, 3, 3), (0.7, 0.4, 1.6)])
def test_tail_constant_matches_hypergeometric_at_large_x(t):
    p = Params(*t)
    tc = tail_constant(p)
    lo, hi = sorted((p.b, p.s))
    mpmath.mp.dps = 40
    z = 1 - mpmath.mpf(10) ** -12
    assert float(mpmath.hyp2f1(1 + lo, 1 - hi, 2, z)) == pytest.approx(tc.value, rel=1e-5)


def test_nu_closed_form_s_one():
    jm = jump_measure(Params(1, 2, 1))
    x = np.geomspace(1e-3, 20, 40)
    np.testing.assert_allclose(jm.density(x), 2 * 3 * np.exp(-3 * x), rtol=1e-13)


@pytest.mark.parametrize("a,s", [(1, 0.5), (2, 3), (0.3, 1.7)])
def test_nu_closed_form_b_one(a, s):
    jm = jump_measure(Params(a, 1, s))
    r = 1 + a / s
    x = np.geomspace(1e-3, 20, 40)
    np.testing.assert_allclose(jm.density(x), r * np.exp(-r * x), rtol=1e-12)
    assert jm.closed_form.total_mass() == pytest.approx(1.0, rel=1e-14)


def test_hyperexp_integer_b_value_at_zero():
    mix = hyperexp_nu_integer_b(1, 2, 0.5)
    assert mix.density(0.0) == pytest.approx(9.0, rel=1e-14)


@pytest.mark.parametrize("a,n,s", [(1, 2, 0.5), (0.4, 3, 0.8), (2, 4, 0.3)])
def test_hyperexp_integer_b_matches_rho_prime(a, n, s):
    p = Params(a, n, s)
    mix = hyperexp_nu_integer_b(a, n, s)
    x = np.geomspace(1e-3, 30, 60)
    np.testing.assert_allclose(mix.density(x), -rho_prime(p, x / s) / s**2, rtol=1e-8, atol=1e-14)
    assert mix.total_mass() == pytest.approx(n, rel=1e-12)


@pytest.mark.parametrize("a,b,n", [(1, 0.5, 2), (0.3, 0.9, 3), (2, 0.25, 5)])
def test_hyperexp_integer_s_matches_rho_prime(a, b, n):
    p = Params(a, b, n)
    mix = hyperexp_nu_integer_s(a, b, n)
    x = np.geomspace(1e-3, 30, 60)
    np.testing.assert_allclose(mix.density(x), -rho_prime(p, x / n) / n**2, rtol=1e-8, atol=1e-14)
    assert mix.total_mass() == pytest.approx(b, rel=1e-12)


def test_hyperexp_signed_for_large_s():
    with pytest.raises(DomainError):
        hyperexp_nu_integer_b(1, 2, 1.5)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        mix = hyperexp_nu_integer_b(1, 2, 1.5, allow_negative=True)
    assert not mix.has_positive_weights()
    assert np.min(mix.density(np.geomspace(1e-3, 20, 200))) < 0


def test_hyperexp_rejects_repeated_rates():
    with pytest.raises(ValueError):
        HyperExpMixture(((1.0, 2.0), (1.0, 2.0)))


@pytest.mark.parametrize("t", [(1, 2, 3), (0.1, 0.1, 0.1), (0.2, 0.2, 0.2)])
def test_jump_measure_outside_region(t):
    p = Params(*t)
    with pytest.raises(NotInELPError, match="2a"):
        jump_measure(p)


@pytest.mark.parametrize("t", [(1, 2.5, 0.5), (0.5, 0.3, 0.7), (1, 0.5, 2)])
def test_jump_measure_mass_and_survival(t):
    p = Params(*t)
    jm = jump_measure(p)
    assert jm.total_rate == p.b
    assert jm.survival(0.0) == pytest.approx(p.b, rel=1e-14)
    x = 0.7
    tail = integrate_semiinf(lambda y: jm.density(x + y), QuadratureConfig(1e-14, 1e-12, 12))
    assert jm.survival(x) == pytest.approx(tail, rel=1e-8)


@given(elp_params, st.floats(0.0, 50.0))
def test_jump_density_non_negative_in_region(p, x):
    assert jump_measure(p).series_density(x) >= -1e-12


@pytest.mark.parametrize("t,u,expected", PSI_ORACLE)
def test_psi_exact_matches_oracle(t, u, expected):
    assert psi_exact(Params(*t), u) == pytest.approx(expected, rel=1e-13)


@given(params, st.floats(0.0, 20.0))
def test_psi_exact_symmetric(p, u):
    assert psi_exact(p, u) == pytest.approx(psi_exact(p.swapped(), u), rel=1e-12, abs=0)


@pytest.mark.parametrize("t", [(0.7, 2, 0.4), (1, 1, 1), (0.3, 0.5, 3)])
@pytest.mark.parametrize("u", [0.5, 1.0, 5.0])
def test_psi_quadrature_matches_exact(t, u):
    p = Params(*t)
    ex = psi_exact(p, u)
    assert abs(psi_quadrature(p, u) - ex) <= 1e-8 * abs(ex)


def test_psi_at_zero():
    assert psi_exact(Params(1, 2, 0.5), 0.0) == 0.0
    assert psi_quadrature(Params(1, 2, 0.5), 0.0) == 0.0


def test_psi_rescaled_methods_agree():
    p = Params(1, 50, 0.5)
    assert psi_rescaled(p, 1.3, "exact") == pytest.approx(psi_rescaled(p, 1.3, "quadrature"), rel=1e-8)


@given(params)
def test_killing_rate_in_unit_interval(p):
    k = killing_rate(p)
    assert 0 < k < 1


def test_killing_rate_large_b_does_not_overflow():
    k = killing_rate(Params(1, 1000, 0.5))
    mpmath.mp.dps = 30
    ref = mpmath.gamma(1.5) * mpmath.gamma(1001) / (mpmath.gamma(1) * mpmath.gamma(1001.5))
    assert k == pytest.approx(float(ref), rel=1e-12)


@pytest.mark.parametrize("t,count", [((1, 2, 3), 1), ((1, 2.5, 3), 2), ((1, 0.5, 2), 0), ((1, 2, 0.5), 0)])
def test_rho_sign_change_counts(t, count):
    p = Params(*t)
    assert count_sign_changes(lambda x: rho(p, x), 0.0, 40.0) == count


def test_count_sign_changes_sine():
    assert count_sign_changes(np.sin, 0.5, 20.0) == 6


@pytest.mark.parametrize("v,expected", [(2.0, True), (2.0 + 1e-13, True), (2.5, False), (1e-9, False)])
def test_is_integer(v, expected):
    assert is_integer(v) is expected


@pytest.mark.parametrize("a", [0.5, 1.0, 2.0, 3.7, 10.0])
def test_gamma_drift_matches_digamma(a):
    assert gamma_drift_c(a, 1.0) == pytest.approx(special.digamma(a), abs=1e-9)


def test_gamma_drift_euler_constant():
    assert gamma_drift_c(1.0, 1.0) == pytest.approx(-0.5772156649015329, abs=1e-10)


@pytest.mark.parametrize("a,s,lam", [(1, 0.5, 1), (2, 0.3, 2.5), (0.5, 0.8, 0.4)])
def test_gamma_limit_exponent_integral_matches_ratio(a, s, lam):
    assert gamma_limit_exponent(a, s, lam) == pytest.approx(gamma_limit_exponent_closed(a, s, lam), rel=1e-8)


def test_gamma_limit_exponent_domain():
    with pytest.raises(DomainError):
        gamma_limit_exponent(1, 1.5, 1)
