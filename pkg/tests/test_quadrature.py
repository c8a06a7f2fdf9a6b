import math

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from neutrix_specfun.errors import ConvergenceFailure, DomainError
from neutrix_specfun.neutrix import IntegralFamily, basis_for_integrand, extract_finite_part
from neutrix_specfun.quadrature import (
    Evaluation,
    Method,
    QuadratureConfig,
    exp_moment_finite_part,
    exp_tail_ratio,
    integrate,
    power_log_finite_part,
    log_moment_finite_part,
    log_power_antiderivative,
    power_log_antiderivative,
)


def test_exp_on_unit_interval():
    res = integrate(lambda u: math.exp(-u), 0.0, 1.0)
    assert res.value == pytest.approx(1 - math.exp(-1), abs=1e-13)
    assert res.method is Method.REGULARIZED_QUADRATURE
    assert 0 < res.abs_err_est < 1e-12


def test_inverse_sqrt_endpoint_singularity():
    # oracle: sum_{k>=1} (-1)^k / (k! (k + 1/2)), summed well past 1e-16
    oracle = math.fsum((-1) ** k / (math.factorial(k) * (k + 0.5)) for k in range(1, 30))
    res = integrate(lambda u: u**-0.5 * math.expm1(-u), 0.0, 1.0)
    assert oracle == pytest.approx(-0.5063517343751459, abs=1e-15)
    assert res.value == pytest.approx(oracle, abs=1e-12)


def test_tighter_tolerance_agrees_within_estimate():
    f = lambda u: u**-2 * math.exp(-u)  # noqa: E731
    coarse = integrate(f, 1.0, 2.0, QuadratureConfig(abs_tol=1e-8, rel_tol=1e-6))
    fine = integrate(f, 1.0, 2.0, QuadratureConfig(abs_tol=1e-13, rel_tol=1e-11))
    assert abs(coarse.value - fine.value) <= coarse.abs_err_est + fine.abs_err_est
    assert fine.value == pytest.approx(float(mp.quad(lambda u: u**-2 * mp.exp(-u), [1, 2])), abs=1e-13)


def test_log_singularity_is_integrable():
    res = integrate(math.log, 0.0, 1.0)
    assert res.value == pytest.approx(-1.0, abs=1e-12)


def test_reversed_interval_rejected():
    with pytest.raises(DomainError):
        integrate(math.exp, 1.0, 1.0)
    with pytest.raises(DomainError):
        integrate(math.exp, 2.0, 1.0)


def test_subdivision_budget_exhausted():
    with pytest.raises(ConvergenceFailure):
        integrate(lambda u: math.sin(1 / u), 1e-3, 1.0, QuadratureConfig(max_subdivisions=3))


def test_non_finite_integrand_reported():
    with pytest.raises(ConvergenceFailure, match="not finite"):
        integrate(lambda u: math.inf, 0.0, 1.0)


@pytest.mark.parametrize("kwargs", [{"abs_tol": 0}, {"rel_tol": -1}, {"max_subdivisions": 0}])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        QuadratureConfig(**kwargs)


def test_evaluation_invariants():
    with pytest.raises(ValueError):
        Evaluation(1.0, -1e-3, Method.SERIES, 1)
    with pytest.raises(ValueError):
        Evaluation(1.0, 0.0, Method.SERIES, -1)
    assert float(Evaluation(2.5, 0.0, "series", 3)) == 2.5


@settings(max_examples=30, deadline=None)
@given(
    a=st.floats(-2, 2),
    w1=st.floats(0.05, 3),
    w2=st.floats(0.05, 3),
)
def test_additivity(a, w1, w2):
    f = lambda u: math.cos(3 * u) * math.exp(-u * u)  # noqa: E731
    b, c = a + w1, a + w1 + w2
    ab, bc, ac = integrate(f, a, b), integrate(f, b, c), integrate(f, a, c)
    slack = ab.abs_err_est + bc.abs_err_est + ac.abs_err_est + 4 * math.ulp(1.0)
    assert abs(ac.value - ab.value - bc.value) <= slack


@pytest.mark.parametrize("u, r, expected", [(1.0, 1, -1.0), (1.0, 2, 2.0), (math.e, 1, 0.0)])
def test_log_power_antiderivative(u, r, expected):
    assert log_power_antiderivative(u, r) == pytest.approx(expected, abs=1e-15)


def test_log_power_antiderivative_derivative(rng):
    for _ in range(10):
        u, r = rng.uniform(0.1, 3), rng.randint(1, 4)
        h = 1e-6
        fd = (log_power_antiderivative(u + h, r) - log_power_antiderivative(u - h, r)) / (2 * h)
        # rounding in the difference quotient is about ulp(F) / h
        noise = 10 * math.ulp(abs(log_power_antiderivative(u, r)) + 1) / h
        assert fd == pytest.approx(math.log(u) ** r, rel=1e-6, abs=noise)


@pytest.mark.parametrize("u, s, r, expected", [(1.0, 1, 1, -1.0), (1.0, 2, 3, -0.375)])
def test_power_log_antiderivative(u, s, r, expected):
    assert power_log_antiderivative(u, s, r) == pytest.approx(expected, abs=1e-15)


def _fd_power_log(u, s, r, h=1e-6):
    return (power_log_antiderivative(u + h, s, r) - power_log_antiderivative(u - h, s, r)) / (2 * h)


def test_power_log_antiderivative_derivative_at_07():
    u, s, r = 0.7, 1, 2
    assert _fd_power_log(u, s, r) == pytest.approx(u ** (-s - 1) * math.log(u) ** r, rel=1e-6)


def test_power_log_antiderivative_derivative_random(rng):
    for _ in range(10):
        u, s, r = rng.uniform(0.1, 3), rng.randint(1, 3), rng.randint(1, 3)
        target = u ** (-s - 1) * math.log(u) ** r
        assert _fd_power_log(u, s, r) == pytest.approx(target, rel=1e-6, abs=1e-8)


def test_antiderivatives_reject_zero():
    with pytest.raises(DomainError):
        log_power_antiderivative(0.0, 1)
    with pytest.raises(DomainError):
        power_log_antiderivative(0.0, 1, 1)


@pytest.mark.parametrize("m, n, expected", [(1, 1, -1.0), (2, 3, -0.375), (3, 1, -1 / 9)])
def test_log_moment_finite_part(m, n, expected):
    assert log_moment_finite_part(m, n) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("m", range(1, 6))
@pytest.mark.parametrize("n", range(1, 6))
def test_log_moment_matches_fit(m, n):
    F = IntegralFamily(lambda t: t ** (-m - 1) * mp.log(t) ** n, 1)
    fit = extract_finite_part(F, basis_for_integrand([-m], n))
    assert fit.finite_part == pytest.approx(log_moment_finite_part(m, n), abs=1e-6)


@pytest.mark.parametrize(
    "alpha, r, x, expected", [(-1.0, 1, math.e, 0.5), (0.0, 1, 1.0, -1.0)]
)
def test_power_log_examples(alpha, r, x, expected):
    assert power_log_finite_part(alpha, r, x) == pytest.approx(expected, abs=1e-15)


def test_power_log_convergent_case_is_exact(rng):
    for _ in range(10):
        a, x = rng.uniform(-0.99, 3), rng.uniform(0.1, 5)
        assert power_log_finite_part(a, 0, x) == x ** (a + 1) / (a + 1)


def test_power_log_matches_fit():
    x = 1.3
    F = IntegralFamily(lambda u: u**-0.5 * mp.log(u) ** 2, x)
    basis = [t for t in basis_for_integrand([], 2, vanishing=(0.5,)) if t.lam > 0]
    fit = extract_finite_part(F, basis)
    assert fit.finite_part == pytest.approx(power_log_finite_part(-0.5, 2, x), abs=1e-6)


@pytest.mark.parametrize("z", [-12.0, -4.0001, -4.0, -1e-9, 0.0, 2.5, 4.0, 4.0001, 9.0])
@pytest.mark.parametrize("m", [0, 1, 3])
def test_exp_tail_ratio(z, m):
    with mp.workdps(40):
        zz = mp.mpf(z)
        if z == 0:
            ref = 1 / mp.factorial(m)
        else:
            ref = (mp.exp(zz) - mp.fsum(zz**i / mp.factorial(i) for i in range(m))) / zz**m
    assert exp_tail_ratio(z, m) == pytest.approx(float(ref), rel=1e-13)


@pytest.mark.parametrize("beta, upper, r, sign", [(-0.5, 1.0, 0, -1), (-2.5, 3.0, 1, 1), (-1.0, 0.7, 2, -1)])
def test_exp_moment_finite_part_matches_high_precision(beta, upper, r, sign):
    # finite part with mpmath: subtract enough Maclaurin terms, add their finite parts
    M = 4
    with mp.workdps(40):
        f = lambda v: v ** (beta - 1) * mp.log(v) ** r * (  # noqa: E731
            mp.exp(sign * v) - mp.fsum((sign * v) ** i / mp.factorial(i) for i in range(M))
        )
        # geometric breakpoints keep mpmath's quadrature honest near v = 0
        body = mp.quad(f, [0] + [upper * mp.mpf(4) ** -k for k in range(25, 0, -1)] + [upper])
    closed = math.fsum(sign**i / math.factorial(i) * power_log_finite_part(beta + i - 1, r, upper) for i in range(M))
    res = exp_moment_finite_part(beta, upper, r, sign)
    assert res.value == pytest.approx(float(body) + closed, abs=1e-11)
