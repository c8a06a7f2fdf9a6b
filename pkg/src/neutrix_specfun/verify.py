"""Cross-check suites: reference values, identities, recurrences, two-path
agreement and neutrix-fit oracles.

Each suite yields :class:`CaseResult` records; ``run_suites`` drives them for
the ``verify`` command.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable, Iterator

import mpmath as mp

from . import incgamma as ig
from . import incgamma_star as gs
from . import polygamma as pg
from .errors import SpecfunError
from .neutrix import IntegralFamily, basis_for_integrand, verify_case
from .quadrature import power_log_finite_part, log_moment_finite_part

SEED = 20240611


@dataclass
class CaseResult:
    suite: str
    name: str
    expected: float
    observed: float
    abs_diff: float
    tol: float
    passed: bool
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "name": self.name,
            "expected": self.expected,
            "observed": self.observed,
            "abs_diff": self.abs_diff,
            "tol": self.tol,
            "pass": self.passed,
            "diagnostics": self.diagnostics,
        }


def _compare(suite: str, name: str, expected: float, compute: Callable[[], float], tol: float) -> CaseResult:
    try:
        observed = float(compute())
    except (SpecfunError, ArithmeticError, ValueError) as exc:
        return CaseResult(suite, name, expected, math.nan, math.inf, tol, False,
                          {"error": f"{type(exc).__name__}: {exc}"})
    diff = abs(observed - expected)
    return CaseResult(suite, name, expected, observed, diff, tol, diff < tol)


# reference values for gamma(0, x) and gamma*(0, x_-) at six printed digits
GAMMA0_FIXTURES = ((0.5, -1.13699), (0.75, -0.917556), (1.0, -0.7966))
GAMMA_STAR0_FIXTURES = ((-1 / 3, 0.735308), (-0.5, 0.122996), (-0.75, -0.630117), (-1.0, -1.3179))


def fixtures(tol: float = 5e-6) -> Iterator[CaseResult]:
    for x, ref in GAMMA0_FIXTURES:
        yield _compare("fixtures", f"gamma(0,{x:g})", ref, lambda x=x: ig.lower_gamma(0, x).value, tol)
    for x, ref in GAMMA_STAR0_FIXTURES:
        yield _compare("fixtures", f"gamma*(0,{x:.6g})", ref, lambda x=x: gs.gamma_star(0, x).value, tol)


def identity_rhs(m: int, x: float) -> float:
    return (-1) ** m / (m * math.factorial(m)) - math.exp(-x) * x ** (-m) / m


def identities(rel_tol: float = 1e-9) -> Iterator[CaseResult]:
    for m in range(1, 7):
        for x in (0.5, 1.0, 2.0, 4.0):
            tol = rel_tol * max(1.0, abs(identity_rhs(m, x)))
            yield _compare("identities", f"gamma(-{m},{x:g})+gamma(-{m - 1},{x:g})/{m}",
                           0.0, lambda m=m, x=x: ig.neg_int_identity_residual(m, x), tol)


def _non_integer(rng: random.Random, lo: float, hi: float, gap: float = 1e-3) -> float:
    while True:
        a = rng.uniform(lo, hi)
        if abs(a - round(a)) > gap:
            return a


def gamma_recurrence_residual(alpha: float, x: float) -> tuple[float, float]:
    g = ig.lower_gamma(alpha, x).value
    g1 = ig.lower_gamma(alpha + 1, x).value
    return g1 - alpha * g + x**alpha * math.exp(-x), g


def star_recurrence_residual(alpha: float, x_minus: float) -> tuple[float, float]:
    g = gs.gamma_star(alpha, -x_minus).value
    g1 = gs.gamma_star(alpha + 1, -x_minus).value
    return g1 + alpha * g + x_minus**alpha * math.exp(x_minus), g


def polygamma_recurrence_residual(n: int, x: float) -> tuple[float, float]:
    p = pg.polygamma_any(n, x).value
    p1 = pg.polygamma_any(n, x + 1).value
    return p1 - p - (-1) ** n * math.factorial(n) / x ** (n + 1), p


def recurrences(rel_tol: float = 1e-10, seed: int = SEED) -> Iterator[CaseResult]:
    rng = random.Random(seed)
    for i in range(50):
        a, x = _non_integer(rng, -4, 4), rng.uniform(0.1, 5)
        res, g = gamma_recurrence_residual(a, x)
        yield _residual_case("recurrences", f"gamma[{i}] a={a:.6f} x={x:.6f}", res, rel_tol * max(1.0, abs(g)))
    for i in range(50):
        a, xm = rng.uniform(0.1, 4), rng.uniform(0.1, 2)
        res, g = star_recurrence_residual(a, xm)
        yield _residual_case("recurrences", f"gamma*[{i}] a={a:.6f} x-={xm:.6f}", res, rel_tol * max(1.0, abs(g)))
    for n in range(4):
        for i in range(20):
            x = rng.uniform(0.1, 5)
            res, p = polygamma_recurrence_residual(n, x)
            yield _residual_case("recurrences", f"psi^({n})[{i}] x={x:.6f}", res, rel_tol * max(1.0, abs(p)))
        for i in range(5):
            x = _non_integer(rng, -4, 0, gap=0.05)
            res, p = polygamma_recurrence_residual(n, x)
            yield _residual_case("recurrences", f"psi^({n})[neg {i}] x={x:.6f}", res, rel_tol * max(1.0, abs(p)))


def _residual_case(suite, name, residual, tol) -> CaseResult:
    return CaseResult(suite, name, 0.0, residual, abs(residual), tol, abs(residual) < tol)


TWO_PATH_ALPHAS = (-0.3, -0.7, -1.5, -2.25, -3.6)
TWO_PATH_X = (0.5, 1.0, 2.0, 3.5, 5.0)


def two_path(rel_tol: float = 1e-8) -> Iterator[CaseResult]:
    for a in TWO_PATH_ALPHAS:
        for x in TWO_PATH_X:
            ref = ig.series_generic(a, x).value
            tol = rel_tol * max(1.0, abs(ref))
            yield _compare("twopath", f"gamma series~quadrature a={a} x={x}", ref,
                           lambda a=a, x=x: ig.regularized_integral(a, x).value, tol)
            steps = math.ceil(-a) + 1
            yield _compare("twopath", f"gamma series~recurrence a={a} x={x}", ref,
                           lambda a=a, x=x, s=steps: ig.recurrence_shift(a, x, s).value, tol)
            sref = gs.star_series_generic(a, -x).value
            yield _compare("twopath", f"gamma* series~quadrature a={a} x={-x}", sref,
                           lambda a=a, x=x: gs.star_regularized(a, -x).value,
                           rel_tol * max(1.0, abs(sref)))
    for m in (1, 2, 3):
        for x in (0.5, 1.0, 2.0):
            ref = gs.star_series_neg_int(m, -x).value
            yield _compare("twopath", f"gamma* neg-int series~quadrature m={m} x={-x}", ref,
                           lambda m=m, x=x: gs.star_neg_int_regularized(m, -x).value,
                           rel_tol * max(1.0, abs(ref)))


def _oracle(name, closed, F, basis, tol, **kw) -> CaseResult:
    rep = verify_case(name, closed, F, basis, tol=tol, **kw)
    return CaseResult("oracle", rep.name, rep.closed_form, rep.fitted, rep.abs_diff, rep.tol,
                      rep.passed, rep.diagnostics)


def _exp_family(power, x, r=0, negative=False):
    """F(eps) for int_eps^x u^power ln^r u e^-u du, or its |u| form on (x, -eps)."""
    if negative:
        return IntegralFamily(lambda u: abs(u) ** power * mp.log(abs(u)) ** r * mp.exp(-u), x, side=-1)
    return IntegralFamily(lambda u: u**power * mp.log(u) ** r * mp.exp(-u), x)


_VANISH = (1, 2, 3, 4)


def oracle_log_moments(tol: float = 1e-6) -> Iterator[CaseResult]:
    for m in (1, 2, 3):
        for n in (1, 2, 3):
            F = IntegralFamily(lambda t, m=m, n=n: t ** (-m - 1) * mp.log(t) ** n, 1)
            yield _oracle(f"log moment m={m} n={n}", log_moment_finite_part(m, n), F,
                          basis_for_integrand([-m], n), tol)


def oracle_polygamma_poles(tol: float = 1e-6) -> Iterator[CaseResult]:
    for n in (1, 2, 3):
        for m in (0, 1, 2, 3):
            F = IntegralFamily(lambda t, m=m, n=n: -t ** (-m - 1) * mp.log(t) ** n / (1 - t), 1,
                               breakpoints=[0.5])
            basis = basis_for_integrand(range(-m, 0), n, vanishing=(1, 2, 3))
            yield _oracle(f"psi^({n})(-{m}) fit", pg.polygamma_neg_int(n, m), F, basis, tol)
            yield _compare("oracle", f"psi^({n})(-{m}) quadrature", pg.polygamma_neg_int(n, m),
                           lambda n=n, m=m: pg.polygamma_neutrix_integral(n, -m).value, tol)


def oracle_digamma(tol: float = 1e-6) -> Iterator[CaseResult]:
    for m in range(5):
        F = IntegralFamily(lambda t, m=m: (1 - t ** (-m - 1)) / (1 - t), 1, scale=1)
        fam = (lambda e, F=F: F(e) - pg.EULER_GAMMA)
        yield _oracle(f"psi(-{m}) fit", pg.psi_neg_int(m), fam, basis_for_integrand(range(-m, 0), 0), tol)
        yield _compare("oracle", f"psi(-{m}) quadrature", pg.psi_neg_int(m),
                       lambda m=m: pg.polygamma_neutrix_integral(0, -m).value, tol)


def oracle_gamma(tol: float = 1e-6) -> Iterator[CaseResult]:
    # plain gamma(alpha, x) on the neutrix definition
    yield _oracle("gamma(0,1) fit vs reference", -0.7966, _exp_family(-1, 1.0),
                  basis_for_integrand([], 0, vanishing=_VANISH), 5e-6)
    yield _oracle("gamma(0,1) fit vs series", ig.series_zero(1.0).value, _exp_family(-1, 1.0),
                  basis_for_integrand([], 0, vanishing=_VANISH), tol)
    yield _oracle("gamma(-2,1) fit", ig.series_neg_int(2, 1.0).value, _exp_family(-3, 1.0),
                  basis_for_integrand([-2, -1], 0, vanishing=_VANISH), tol)
    yield _oracle("gamma(-0.5,1) fit", ig.series_generic(-0.5, 1.0).value, _exp_family(-1.5, 1.0),
                  basis_for_integrand([-0.5], 0, vanishing=(0.5, 1.5, 2.5, 3.5)), tol)
    # alpha-derivatives
    for m, x, r, t in ((1, 1.0, 1, 1e-5), (1, math.e, 1, 1e-5), (2, 0.5, 2, 1e-4)):
        yield _oracle(f"gamma^({r})(-{m},{x:.6g}) fit", ig.deriv_series_neg_int(m, x, r).value,
                      _exp_family(-m - 1, x, r),
                      basis_for_integrand(range(-m, 0), r, vanishing=(1, 2, 3)), t)
    yield _oracle("gamma^(2)(-0.5,1) fit", ig.deriv_series_generic(-0.5, 1.0, 2).value,
                  _exp_family(-1.5, 1.0, 2),
                  basis_for_integrand([-0.5], 2, vanishing=(0.5, 1.5, 2.5)), 1e-5)
    # finite part of int u^alpha ln^r u
    F = IntegralFamily(lambda u: u**-0.5 * mp.log(u) ** 2, 1.3)
    yield _oracle("power-log finite part a=-1/2 r=2 x=1.3", power_log_finite_part(-0.5, 2, 1.3), F,
                  [t for t in basis_for_integrand([], 2, vanishing=(0.5,)) if t.lam > 0], tol)


def oracle_gamma_star(tol: float = 1e-6) -> Iterator[CaseResult]:
    yield _oracle("gamma*(0,-1) fit", gs.star_series_zero(-1.0).value, _exp_family(-1, -1.0, negative=True),
                  basis_for_integrand([], 0, vanishing=_VANISH), tol)
    yield _oracle("gamma*(-2,-0.5) fit", gs.star_series_neg_int(2, -0.5).value,
                  _exp_family(-3, -0.5, negative=True),
                  basis_for_integrand([-2, -1], 0, vanishing=_VANISH), tol)
    yield _oracle("gamma*'(0,-1) fit", gs.star_deriv(0, -1.0, 1).value,
                  _exp_family(-1, -1.0, 1, negative=True),
                  basis_for_integrand([], 1, vanishing=(1, 2, 3)), tol)
    for r in (1, 2):
        for m in (1, 2):
            for x in (-0.5, -1.0):
                yield _oracle(f"gamma*^({r})(-{m},{x:g}) fit", gs.star_deriv(-m, x, r).value,
                              _exp_family(-m - 1, x, r, negative=True),
                              basis_for_integrand(range(-m, 0), r, vanishing=(1, 2, 3)), 1e-5)


def _log1m_series(x: float, n: int, terms: int = 80) -> float:
    # ln(1-t) = -sum_{i>=1} t^i / i
    return math.fsum(-power_log_finite_part(x + i, n, 0.5) / i for i in range(1, terms))


def oracle_log1m_moments(tol: float = 1e-6) -> Iterator[CaseResult]:
    for x, n, r in ((-1.5, 1, 1), (-2.0, 2, 1)):
        F = IntegralFamily(lambda t, x=x, n=n, r=r: t**x * mp.log(t) ** n * mp.log(1 - t) ** r, 0.5)
        powers = [p for p in (x + 1,) if p < 0]
        basis = basis_for_integrand(powers, n, vanishing=[x + 1 + k for k in (1, 2, 3, 4) if x + 1 + k > 0])
        yield _oracle(f"log(1-t) moment x={x} n={n} r={r}", _log1m_series(x, n), F, basis, tol)


def oracle(tol: float | None = None) -> Iterator[CaseResult]:
    for gen in (oracle_log_moments, oracle_polygamma_poles, oracle_digamma, oracle_gamma,
                oracle_gamma_star, oracle_log1m_moments):
        yield from (gen() if tol is None else gen(tol))


SUITES: dict[str, Callable[..., Iterator[CaseResult]]] = {
    "fixtures": fixtures,
    "identities": identities,
    "recurrences": recurrences,
    "twopath": two_path,
    "oracle": oracle,
}


def run_suites(names=None, tol: float | None = None) -> Iterator[CaseResult]:
    """Run the named suites (all by default); ``tol`` replaces every tolerance."""
    for name in names or SUITES:
        gen = SUITES[name]
        yield from (gen() if tol is None else gen(tol))
