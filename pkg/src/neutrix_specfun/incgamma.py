"""Lower incomplete gamma ``gamma(alpha, x)`` for every real alpha and x > 0.

For alpha <= 0 the defining integral diverges at the origin; the value used
here is its neutrix limit, the constant left after discarding the
``eps**lam * ln(eps)**r`` and ``ln(eps)**r`` pieces of
``int_eps^x u**(alpha-1) e**-u du``.  The same convention defines the
alpha-derivatives ``gamma^(r)(alpha, x)`` with an extra ``ln(u)**r`` weight.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from ._series import sum_series
from .errors import DomainError
from .quadrature import (
    DEFAULT_QUAD,
    Evaluation,
    Method,
    QuadratureConfig,
    exp_moment_finite_part,
    integrate,
    power_log_finite_part,
)

__all__ = [
    "ArgKind",
    "ArgClass",
    "EvalConfig",
    "classify",
    "lower_gamma",
    "lower_gamma_deriv",
    "series_generic",
    "series_zero",
    "series_neg_int",
    "regularized_integral",
    "recurrence_shift",
    "neg_int_identity_residual",
    "deriv_series_generic",
    "deriv_series_neg_int",
]


class ArgKind(str, enum.Enum):
    POSITIVE = "positive"
    ZERO = "zero"
    NEGATIVE_NON_INTEGER = "negative_non_integer"
    NEGATIVE_INTEGER = "negative_integer"


@dataclass(frozen=True)
class ArgClass:
    kind: ArgKind
    m: int | None = None  # only set for NEGATIVE_INTEGER, alpha == -m

    @property
    def is_pole(self) -> bool:
        return self.kind in (ArgKind.ZERO, ArgKind.NEGATIVE_INTEGER)


@dataclass(frozen=True)
class EvalConfig:
    """Evaluation knobs shared by the gamma-family modules.

    ``large_x_switch`` is the |x| above which power series give way to
    quadrature; ``integer_tol`` is the snapping distance to a nonpositive
    integer; ``max_deriv`` caps the derivative order.
    """

    series_tol: float = 1e-16
    max_terms: int = 500
    large_x_switch: float = 10.0
    integer_tol: float = 1e-12
    max_deriv: int = 6
    quad: QuadratureConfig = field(default=DEFAULT_QUAD)

    def __post_init__(self):
        if not self.series_tol > 0:
            raise ValueError("series_tol must be positive")
        if self.max_terms < 8:
            raise ValueError("max_terms must be >= 8")
        if not self.large_x_switch > 1:
            raise ValueError("large_x_switch must exceed 1")
        if not 0 <= self.integer_tol <= 1e-9:
            raise ValueError("integer_tol must lie in [0, 1e-9]")


DEFAULT_CONFIG = EvalConfig()


def classify(alpha: float, integer_tol: float = 1e-12) -> ArgClass:
    if not 0 <= integer_tol <= 1e-9:
        raise ValueError("integer_tol must lie in [0, 1e-9]")
    if not math.isfinite(alpha):
        raise DomainError(f"alpha must be finite, got {alpha!r}")
    nearest = round(alpha)
    if nearest <= 0 and abs(alpha - nearest) <= integer_tol:
        if nearest == 0:
            return ArgClass(ArgKind.ZERO)
        return ArgClass(ArgKind.NEGATIVE_INTEGER, -nearest)
    if alpha > 0:
        return ArgClass(ArgKind.POSITIVE)
    return ArgClass(ArgKind.NEGATIVE_NON_INTEGER)


def _inv_factorial(k: int) -> float:
    return 1.0 / math.factorial(k) if k <= 170 else 0.0


def _check_x(x: float) -> None:
    if not (x > 0 and math.isfinite(x)):
        raise DomainError(f"x must be a finite positive number, got {x!r}")


def _check_order(r: int, cfg: EvalConfig, minimum: int = 1) -> None:
    if r < minimum:
        raise DomainError(f"derivative order must be >= {minimum}, got {r}")
    if r > cfg.max_deriv:
        raise DomainError(f"derivative order {r} exceeds max_deriv={cfg.max_deriv}")


def series_generic(alpha: float, x: float, cfg: EvalConfig = DEFAULT_CONFIG) -> Evaluation:
    """Power series ``sum_k (-1)^k x^(alpha+k) / (k! (alpha+k))``.

    Valid for every alpha that is not a nonpositive integer.
    """
    _check_x(x)
    if classify(alpha, cfg.integer_tol).is_pole:
        raise DomainError(f"series_generic needs alpha off the poles 0, -1, -2, ...; got {alpha!r}")

    def term(k):
        return (-1) ** k * x ** (alpha + k) * _inv_factorial(k) / (alpha + k)

    value, err, n = sum_series(term, x, cfg.series_tol, cfg.max_terms)
    return Evaluation(value, err, Method.SERIES, n)


def _neg_int_series(m: int, x: float, cfg: EvalConfig) -> Evaluation:
    def term(k):
        return (-1) ** k * x ** (k - m) * _inv_factorial(k) / (k - m)

    log_part = (-1) ** m * math.log(x) * _inv_factorial(m)
    value, err, n = sum_series(term, x, cfg.series_tol, cfg.max_terms, skip=(m,), extra=(log_part,))
    return Evaluation(value, err, Method.SERIES, n)


def series_zero(x: float, cfg: EvalConfig = DEFAULT_CONFIG) -> Evaluation:
    """``gamma(0, x) = sum_{k>=1} (-x)^k / (k k!) + ln x``."""
    _check_x(x)
    return _neg_int_series(0, x, cfg)


def series_neg_int(m: int, x: float, cfg: EvalConfig = DEFAULT_CONFIG) -> Evaluation:
    """``gamma(-m, x)``: the k = m term of the power series becomes ``(-1)^m ln x / m!``."""
    _check_x(x)
    if m < 1:
        raise DomainError(f"m must be a positive integer, got {m!r}")
    return _neg_int_series(m, x, cfg)


def regularized_integral(alpha: float, x: float, cfg: EvalConfig = DEFAULT_CONFIG) -> Evaluation:
    """Quadrature of ``u^(alpha-1)`` times the Maclaurin remainder of ``e^-u``.

    The subtracted monomials contribute ``(-1)^i x^(alpha+i) / ((alpha+i) i!)``.
    """
    _check_x(x)
    if classify(alpha, cfg.integer_tol).is_pole:
        raise DomainError(f"regularized_integral needs alpha off the poles; got {alpha!r}")
    return exp_moment_finite_part(alpha, x, 0, -1, cfg.quad)


def recurrence_shift(alpha: float, x: float, steps: int, cfg: EvalConfig = DEFAULT_CONFIG) -> Evaluation:
    """Unwind ``gamma(a+1, x) = a gamma(a, x) - x^a e^-x`` from ``alpha + steps`` down to alpha.

    ``gamma(alpha, x) = gamma(alpha+steps, x)/(alpha)_steps
    + e^-x sum_{k<steps} x^(alpha+k)/(alpha)_(k+1)`` with the rising factorial
    ``(alpha)_k``.
    """
    _check_x(x)
    if steps < 1:
        raise DomainError("steps must be a positive integer")
    for j in range(steps):
        if abs(alpha + j) <= cfg.integer_tol:
            raise DomainError(f"recurrence divides by alpha+{j} = 0 (alpha={alpha!r})")
    base = series_generic(alpha + steps, x, cfg)
    poch = 1.0
    tail = []
    for k in range(steps):
        poch *= alpha + k
        tail.append(x ** (alpha + k) / poch)
    e = math.exp(-x)
    value = base.value / poch + e * math.fsum(tail)
    err = base.abs_err_est / abs(poch) + 2 * math.ulp(1.0) * e * math.fsum(abs(t) for t in tail)
    return Evaluation(value, err, Method.RECURRENCE, base.work + steps)


def _split_at_one(alpha: float, x: float, r: int, small: Evaluation, cfg: EvalConfig) -> Evaluation:
    # additivity of the finite part over (eps, 1) and (1, x)
    tail = integrate(lambda u: u ** (alpha - 1) * math.log(u) ** r * math.exp(-u), 1.0, x, cfg.quad)
    return Evaluation(
        small.value + tail.value,
        small.abs_err_est + tail.abs_err_est,
        Method.REGULARIZED_QUADRATURE,
        small.work + tail.work,
    )


def lower_gamma(alpha: float, x: float, cfg: EvalConfig = DEFAULT_CONFIG) -> Evaluation:
    """Neutrix-regularized ``gamma(alpha, x)`` for any real alpha and x > 0."""
    _check_x(x)
    cls = classify(alpha, cfg.integer_tol)
    large = x > cfg.large_x_switch
    if cls.kind in (ArgKind.POSITIVE, ArgKind.NEGATIVE_NON_INTEGER):
        return regularized_integral(alpha, x, cfg) if large else series_generic(alpha, x, cfg)
    m = cls.m or 0
    if large:
        return _split_at_one(-m, x, 0, _neg_int_series(m, 1.0, cfg), cfg)
    return _neg_int_series(m, x, cfg)


def neg_int_identity_residual(m: int, x: float, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """``gamma(-m,x) + gamma(-m+1,x)/m`` minus ``(-1)^m/(m m!) - e^-x x^-m / m``."""
    if m < 1:
        raise DomainError("m must be a positive integer")
    lhs = lower_gamma(-m, x, cfg).value + lower_gamma(-m + 1, x, cfg).value / m
    rhs = (-1) ** m / (m * math.factorial(m)) - math.exp(-x) * x ** (-m) / m
    return lhs - rhs


def deriv_series_generic(alpha: float, x: float, r: int, cfg: EvalConfig = DEFAULT_CONFIG) -> Evaluation:
    """Double series for ``gamma^(r)(alpha, x)``, alpha off the poles.

    Each Maclaurin term of ``e^-u`` contributes the finite part of
    ``int u^(alpha+k-1) ln^r u du`` at x.
    """
    _check_x(x)
    _check_order(r, cfg)
    if classify(alpha, cfg.integer_tol).is_pole:
        raise DomainError(f"deriv_series_generic needs alpha off the poles; got {alpha!r}")

    def term(k):
        return (-1) ** k * _inv_factorial(k) * power_log_finite_part(alpha + k - 1, r, x)

    value, err, n = sum_series(term, x, cfg.series_tol, cfg.max_terms)
    return Evaluation(value, err, Method.SERIES, n)


def _deriv_neg_int(m: int, x: float, r: int, cfg: EvalConfig) -> Evaluation:
    def term(k):
        return (-1) ** k * _inv_factorial(k) * power_log_finite_part(k - m - 1, r, x)

    log_part = (-1) ** m * math.log(x) ** (r + 1) / ((r + 1) * math.factorial(m))
    value, err, n = sum_series(term, x, cfg.series_tol, cfg.max_terms, skip=(m,), extra=(log_part,))
    return Evaluation(value, err, Method.SERIES, n)


def deriv_series_neg_int(m: int, x: float, r: int, cfg: EvalConfig = DEFAULT_CONFIG) -> Evaluation:
    """``gamma^(r)(-m, x)``; the k = m term becomes ``(-1)^m ln^(r+1) x / ((r+1) m!)``."""
    _check_x(x)
    _check_order(r, cfg)
    if m < 1:
        raise DomainError(f"m must be a positive integer, got {m!r}")
    return _deriv_neg_int(m, x, r, cfg)


def lower_gamma_deriv(alpha: float, x: float, r: int, cfg: EvalConfig = DEFAULT_CONFIG) -> Evaluation:
    """``gamma^(r)(alpha, x)`` for any real alpha; ``r = 0`` is ``lower_gamma``."""
    _check_x(x)
    _check_order(r, cfg, minimum=0)
    if r == 0:
        return lower_gamma(alpha, x, cfg)
    cls = classify(alpha, cfg.integer_tol)
    large = x > cfg.large_x_switch
    if cls.is_pole:
        m = cls.m or 0
        if large:
            return _split_at_one(-m, x, r, _deriv_neg_int(m, 1.0, r, cfg), cfg)
        return _deriv_neg_int(m, x, r, cfg)
    if large:
        return _split_at_one(alpha, x, r, deriv_series_generic(alpha, 1.0, r, cfg), cfg)
    return deriv_series_generic(alpha, x, r, cfg)
