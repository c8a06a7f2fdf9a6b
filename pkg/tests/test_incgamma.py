import math

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from neutrix_specfun.errors import ConvergenceFailure, DomainError
from neutrix_specfun.incgamma import (
    ArgKind,
    EvalConfig,
    classify,
    deriv_series_generic,
    deriv_series_neg_int,
    lower_gamma,
    lower_gamma_deriv,
    neg_int_identity_residual,
    recurrence_shift,
    regularized_integral,
    series_generic,
    series_neg_int,
    series_zero,
)
from neutrix_specfun.neutrix import IntegralFamily, basis_for_integrand, extract_finite_part
from neutrix_specfun.quadrature import Method, exp_moment_finite_part
from neutrix_specfun.verify import gamma_recurrence_residual, identity_rhs
from oracle_values import GAMMA, GAMMA_DERIV


def _fit(power, x, r=0, powers=(), vanishing=(1, 2, 3, 4)):
    F = IntegralFamily(lambda u: u**power * mp.log(u) ** r * mp.exp(-u), x)
    return extract_finite_part(F, basis_for_integrand(powers, r, vanishing=vanishing)).finite_part


@pytest.mark.parametrize(
    "alpha, kind, m",
    [
        (2.5, ArgKind.POSITIVE, None),
        (-3 + 1e-14, ArgKind.NEGATIVE_INTEGER, 3),
        (-0.5, ArgKind.NEGATIVE_NON_INTEGER, None),
        (0.0, ArgKind.ZERO, None),
        (-2.0, ArgKind.NEGATIVE_INTEGER, 2),
        (-2 + 1e-6, ArgKind.NEGATIVE_NON_INTEGER, None),
    ],
)
def test_classify(alpha, kind, m):
    cls = classify(alpha, 1e-9)
    assert cls.kind is kind and cls.m == m


def test_classify_rejects_bad_input():
    with pytest.raises(ValueError):
        classify(1.0, 0.1)
    with pytest.raises(DomainError):
        classify(math.nan)


def test_lower_gamma_examples():
    assert lower_gamma(0, 1).value == pytest.approx(-0.7966, abs=5e-6)
    assert lower_gamma(1, 1).value == pytest.approx(1 - math.exp(-1), abs=1e-15)
    assert lower_gamma(-0.5, 1).value == pytest.approx(regularized_integral(-0.5, 1).value, abs=1e-9)


@pytest.mark.parametrize("key", sorted(GAMMA))
def test_lower_gamma_oracle_table(key):
    alpha, x = key
    res = lower_gamma(alpha, x)
    expected = GAMMA[key]
    assert res.value == pytest.approx(expected, abs=1e-12 * max(1, abs(expected)))
    assert res.abs_err_est < 1e-10 * max(1, abs(expected))


def test_large_x_uses_quadrature():
    assert lower_gamma(-2.5, 11).method is Method.REGULARIZED_QUADRATURE
    assert lower_gamma(-2, 20).method is Method.REGULARIZED_QUADRATURE
    assert lower_gamma(-2.5, 9).method is Method.SERIES


def test_series_generic_examples():
    assert series_generic(2, 1).value == pytest.approx(1 - 2 * math.exp(-1), abs=1e-15)
    assert series_generic(0.5, 1).value == pytest.approx(math.sqrt(math.pi) * math.erf(1), abs=1e-14)
    assert series_generic(-1.5, 2).value == pytest.approx(regularized_integral(-1.5, 2).value, abs=1e-9)


def test_series_generic_rejects_poles():
    with pytest.raises(DomainError):
        series_generic(-2.0, 1.0)
    with pytest.raises(DomainError):
        series_generic(0.5, 0.0)


@pytest.mark.parametrize("x, expected", [(0.5, -1.13699), (0.75, -0.917556), (1.0, -0.7966)])
def test_series_zero_reference_values(x, expected):
    assert series_zero(x).value == pytest.approx(expected, abs=5e-6)


def test_series_neg_int_examples():
    assert series_neg_int(1, 1).value == pytest.approx(-0.5712792, abs=1e-6)
    assert neg_int_identity_residual(1, 0.5) == pytest.approx(0, abs=1e-10)
    assert series_neg_int(2, 1).value == pytest.approx(_fit(-3, 1.0, powers=[-2, -1]), abs=1e-6)


def test_series_neg_int_needs_positive_m():
    with pytest.raises(DomainError):
        series_neg_int(0, 1.0)


@pytest.mark.parametrize("alpha, x, tol", [(1.5, 1, 1e-10), (-0.5, 1, 1e-9), (-1.5, 4, 1e-8)])
def test_regularized_integral_two_path(alpha, x, tol):
    assert regularized_integral(alpha, x).value == pytest.approx(series_generic(alpha, x).value, abs=tol)


def test_recurrence_shift_examples():
    assert recurrence_shift(0.5, 1, 1).value == pytest.approx(math.sqrt(math.pi) * math.erf(1), abs=1e-14)
    assert recurrence_shift(-0.5, 1, 2).value == pytest.approx(series_generic(-0.5, 1).value, abs=1e-9)
    assert recurrence_shift(-2.5, 2, 3).value == pytest.approx(regularized_integral(-2.5, 2).value, abs=1e-8)


def test_recurrence_shift_rejects_zero_steps():
    with pytest.raises(DomainError):
        recurrence_shift(-0.5, 1, 0)


@pytest.mark.parametrize("m, x, tol", [(1, 1.0, 1e-10), (2, 0.5, 1e-10), (3, 2.0, 1e-9)])
def test_identity_residual_examples(m, x, tol):
    assert abs(neg_int_identity_residual(m, x)) < tol


def test_identity_lhs_value():
    lhs = series_neg_int(1, 1).value + series_zero(1).value
    assert lhs == pytest.approx(-1.3678794, abs=1e-7)


@pytest.mark.parametrize("m", range(1, 7))
@pytest.mark.parametrize("x", [0.5, 1.0, 2.0, 4.0])
def test_identity_grid(m, x):
    assert abs(neg_int_identity_residual(m, x)) < 1e-9 * max(1, abs(identity_rhs(m, x)))


def test_deriv_series_generic_examples():
    with mp.workdps(30):
        oracle = float(mp.quad(lambda u: mp.log(u) * mp.exp(-u), [0, 1]))
    assert deriv_series_generic(1, 1, 1).value == pytest.approx(oracle, abs=1e-12)
    assert oracle == pytest.approx(-0.7965996, abs=1e-7)
    h = 1e-5
    fd = (lower_gamma(0.5 + h, 1).value - lower_gamma(0.5 - h, 1).value) / (2 * h)
    assert deriv_series_generic(0.5, 1, 1).value == pytest.approx(fd, abs=1e-6)
    fit = _fit(-1.5, 1.0, 2, powers=[-0.5], vanishing=(0.5, 1.5, 2.5))
    assert deriv_series_generic(-0.5, 1, 2).value == pytest.approx(fit, abs=1e-5)


@pytest.mark.parametrize("m, x, r, tol", [(1, 1.0, 1, 1e-5), (1, math.e, 1, 1e-5), (2, 0.5, 2, 1e-4)])
def test_deriv_series_neg_int_oracle(m, x, r, tol):
    fit = _fit(-m - 1, x, r, powers=range(-m, 0), vanishing=(1, 2, 3))
    assert deriv_series_neg_int(m, x, r).value == pytest.approx(fit, abs=tol)


@pytest.mark.parametrize("key", sorted(GAMMA_DERIV))
def test_lower_gamma_deriv_oracle_table(key):
    alpha, x, r = key
    expected = GAMMA_DERIV[key]
    assert lower_gamma_deriv(alpha, x, r).value == pytest.approx(expected, abs=1e-11 * max(1, abs(expected)))


def test_deriv_order_limits():
    with pytest.raises(DomainError):
        lower_gamma_deriv(-0.5, 1.0, 7)
    assert lower_gamma_deriv(-0.5, 1.0, 7, EvalConfig(max_deriv=7)).value
    assert lower_gamma_deriv(-0.5, 1.0, 0).value == lower_gamma(-0.5, 1.0).value


def test_series_budget_exhausted():
    with pytest.raises(ConvergenceFailure):
        series_generic(-0.5, 9.0, EvalConfig(max_terms=8))


def test_config_validation():
    with pytest.raises(ValueError):
        EvalConfig(series_tol=0)
    with pytest.raises(ValueError):
        EvalConfig(integer_tol=1e-3)


# properties


def _dx(f, x, h=1e-6):
    return (f(x + h) - f(x - h)) / (2 * h)


@pytest.mark.parametrize("lo, hi", [(0.1, 3), (-3.9, -0.1), (0.0, 0.0), (-1.0, -1.0), (-3.0, -3.0)])
def test_x_derivative_is_integrand(rng, lo, hi):
    for _ in range(10):
        a = rng.uniform(lo, hi)
        if lo < 0 and lo != hi and abs(a - round(a)) < 1e-3:
            continue
        x = rng.uniform(0.2, 5)
        fd = _dx(lambda t: lower_gamma(a, t).value, x)
        assert fd == pytest.approx(x ** (a - 1) * math.exp(-x), rel=1e-6)


@pytest.mark.parametrize("alpha", [-0.5, -2.0, 0.0, 1.5])
def test_x_derivative_of_alpha_derivative(rng, alpha):
    for _ in range(10):
        x, r = rng.uniform(0.2, 5), rng.randint(1, 3)
        fd = _dx(lambda t: lower_gamma_deriv(alpha, t, r).value, x)
        target = x ** (alpha - 1) * math.log(x) ** r * math.exp(-x)
        assert fd == pytest.approx(target, rel=1e-6, abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(alpha=st.floats(-4, 4).filter(lambda a: abs(a - round(a)) > 1e-3), x=st.floats(0.1, 5))
def test_recurrence(alpha, x):
    res, g = gamma_recurrence_residual(alpha, x)
    assert abs(res) < 1e-10 * max(1, abs(g))


@settings(max_examples=40, deadline=None)
@given(alpha=st.floats(-3.9, -0.1).filter(lambda a: abs(a - round(a)) > 1e-3), x=st.floats(0.05, 5))
def test_two_path(alpha, x):
    s = series_generic(alpha, x).value
    tol = 1e-8 * max(1, abs(s))
    assert regularized_integral(alpha, x).value == pytest.approx(s, abs=tol)
    assert recurrence_shift(alpha, x, math.ceil(-alpha) + 1).value == pytest.approx(s, abs=tol)


@settings(max_examples=30, deadline=None)
@given(
    alpha=st.one_of(st.floats(-3.5, 1.5), st.sampled_from([0.0, -1.0, -2.0, -3.0])),
    x=st.one_of(st.floats(0.05, 6), st.just(1.0)),
    r=st.integers(1, 3),
)
def test_alpha_derivative_series_matches_quadrature(alpha, x, r):
    cls = classify(alpha)
    if cls.kind is ArgKind.NEGATIVE_INTEGER:
        series = deriv_series_neg_int(cls.m, x, r).value
    elif cls.kind is ArgKind.ZERO:
        series = lower_gamma_deriv(0.0, x, r).value
    else:
        series = deriv_series_generic(alpha, x, r).value
    beta = -cls.m if cls.m else (0.0 if cls.kind is ArgKind.ZERO else alpha)
    quad = exp_moment_finite_part(beta, x, r, -1).value
    assert quad == pytest.approx(series, abs=1e-8 * max(1, abs(series)))


@pytest.mark.parametrize("m", [1, 2, 3])
def test_pole_residue(m):
    limit = (-1) ** m / math.factorial(m)
    gaps = []
    for j in range(3, 7):
        d = 10.0**-j
        gaps.append(abs(d * series_generic(-m + d, 1.0).value - limit))
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < 1e-3


def test_domain_errors():
    for x in (0.0, -1.0, math.inf, math.nan):
        with pytest.raises(DomainError):
            lower_gamma(0.5, x)
