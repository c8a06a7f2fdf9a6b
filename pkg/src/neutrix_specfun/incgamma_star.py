"""Incomplete-gamma-type function ``gamma*(alpha, x_-)`` on negative arguments.

For x < 0 write ``X = x_- = -x``.  With the substitution ``v = -u`` the
defining integral becomes

    gamma*(alpha, x_-) = -N-lim int_eps^X v**(alpha-1) e**v dv,

which is what every evaluator below computes, by series or by regularized
quadrature.  Recurrence used throughout:

    gamma*(alpha+1, x_-) = -alpha gamma*(alpha, x_-) - X**alpha e**X.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ._series import sum_series
from .errors import DomainError
from .incgamma import DEFAULT_CONFIG, EvalConfig, classify
from .quadrature import Evaluation, Method, exp_moment_finite_part, integrate, power_log_finite_part

__all__ = [
    "NegativeArgument",
    "gamma_star",
    "gamma_star_deriv",
    "star_series_generic",
    "star_series_zero",
    "star_series_neg_int",
    "star_regularized",
    "star_neg_int_regularized",
    "star_recurrence",
    "star_deriv",
    "star_deriv_series",
]


@dataclass(frozen=True)
class NegativeArgument:
    """A negative real ``x`` together with ``x_minus = -x``."""

    x: float

    def __post_init__(self):
        if not (self.x < 0 and math.isfinite(self.x)):
            raise DomainError(f"gamma* needs a finite negative argument, got x={self.x!r}")

    @property
    def x_minus(self) -> float:
        return -self.x

    @classmethod
    def from_x_minus(cls, x_minus: float) -> "NegativeArgument":
        return cls(-x_minus)


def _arg(arg) -> NegativeArgument:
    return arg if isinstance(arg, NegativeArgument) else NegativeArgument(float(arg))


def _inv_factorial(k: int) -> float:
    return 1.0 / math.factorial(k) if k <= 170 else 0.0


def _negate(ev: Evaluation, method: Method | None = None) -> Evaluation:
    return Evaluation(-ev.value, ev.abs_err_est, method or ev.method, ev.work)


def star_series_generic(alpha: float, arg, cfg: EvalConfig = DEFAULT_CONFIG) -> Evaluation:
    """``-sum_k X^(alpha+k) / ((alpha+k) k!)`` for alpha off the poles."""
    arg = _arg(arg)
    if classify(alpha, cfg.integer_tol).is_pole:
        raise DomainError(f"star_series_generic needs alpha off the poles; got {alpha!r}")
    X = arg.x_minus

    def term(k):
        return -(X ** (alpha + k)) * _inv_factorial(k) / (alpha + k)

    value, err, n = sum_series(term, X, cfg.series_tol, cfg.max_terms)
    return Evaluation(value, err, Method.SERIES, n)


def _star_neg_int_series(m: int, X: float, cfg: EvalConfig) -> Evaluation:
    def term(k):
        return X ** (k - m) * _inv_factorial(k) / (m - k)

    log_part = -math.log(X) * _inv_factorial(m)
    value, err, n = sum_series(term, X, cfg.series_tol, cfg.max_terms, skip=(m,), extra=(log_part,))
    return Evaluation(value, err, Method.SERIES, n)


def star_series_zero(arg, cfg: EvalConfig = DEFAULT_CONFIG) -> Evaluation:
    """``gamma*(0, x_-) = -sum_{k>=1} X^k/(k k!) - ln X``."""
    return _star_neg_int_series(0, _arg(arg).x_minus, cfg)


def star_series_neg_int(m: int, arg, cfg: EvalConfig = DEFAULT_CONFIG) -> Evaluation:
    """``gamma*(-m, x_-) = sum_{k != m} X^(k-m)/((m-k) k!) - ln X / m!``."""
    if m < 1:
        raise DomainError(f"m must be a positive integer, got {m!r}")
    return _star_neg_int_series(m, _arg(arg).x_minus, cfg)


def star_regularized(alpha: float, arg, cfg: EvalConfig = DEFAULT_CONFIG) -> Evaluation:
    """Quadrature of ``v^(alpha-1)`` times the Maclaurin remainder of ``e^v`` on (0, X).

    The subtracted monomials return as ``-X^(alpha+i) / ((alpha+i) i!)``.
    """
    arg = _arg(arg)
    if classify(alpha, cfg.integer_tol).is_pole:
        raise DomainError(f"star_regularized needs alpha off the poles; got {alpha!r}")
    return _negate(exp_moment_finite_part(alpha, arg.x_minus, 0, 1, cfg.quad))


def star_neg_int_regularized(m: int, arg, cfg: EvalConfig = DEFAULT_CONFIG) -> Evaluation:
    """``gamma*(-m, x_-)`` from the order-m regularized integral.

    For X <= 1 the remainder is integrated over all of (0, X) and the
    subtracted terms return as ``+X^(i-m)/((m-i) i!) - ln X / m!``.  For X > 1
    the regularized part stops at 1, leaving the constant
    ``sum_{i<m} 1/((m-i) i!)`` plus a plain integral over (1, X).
    """
    if m < 0:
        raise DomainError(f"m must be a nonnegative integer, got {m!r}")
    X = _arg(arg).x_minus
    return _negate(exp_moment_finite_part(-m, X, 0, 1, cfg.quad, split_at=1.0))


def star_recurrence(alpha: float, arg, cfg: EvalConfig = DEFAULT_CONFIG, value: float | None = None) -> Evaluation:
    """``gamma*(alpha+1, x_-)`` from ``gamma*(alpha, x_-)``.

    ``value`` supplies ``gamma*(alpha, x_-)``; when omitted it is computed
    with :func:`gamma_star`.
    """
    arg = _arg(arg)
    if abs(alpha) <= cfg.integer_tol:
        raise DomainError("star_recurrence divides by alpha; alpha = 0 is excluded")
    X = arg.x_minus
    if value is None:
        base = gamma_star(alpha, arg, cfg)
    else:
        base = Evaluation(value, 0.0, Method.CLOSED_FORM, 0)
    edge = X**alpha * math.exp(X)
    out = -alpha * base.value - edge
    err = abs(alpha) * base.abs_err_est + 2 * math.ulp(1.0) * (abs(alpha * base.value) + edge)
    return Evaluation(out, err, Method.RECURRENCE, base.work + 1)


def gamma_star(alpha: float, arg, cfg: EvalConfig = DEFAULT_CONFIG) -> Evaluation:
    """Neutrix-regularized ``gamma*(alpha, x_-)`` for any real alpha and x < 0."""
    arg = _arg(arg)
    X = arg.x_minus
    cls = classify(alpha, cfg.integer_tol)
    large = X > cfg.large_x_switch
    if cls.is_pole:
        m = cls.m or 0
        if large:
            return star_neg_int_regularized(m, arg, cfg)
        return _star_neg_int_series(m, X, cfg)
    if large:
        return _negate(exp_moment_finite_part(alpha, X, 0, 1, cfg.quad, split_at=1.0))
    return star_series_generic(alpha, arg, cfg)


def star_deriv(alpha: float, arg, r: int, cfg: EvalConfig = DEFAULT_CONFIG) -> Evaluation:
    """``gamma*^(r)(alpha, x_-)`` by regularized quadrature.

    At alpha = -m (m >= 0) the integral is split at |u| = 1: a plain integral
    between -1 and x plus the regularized one on (-1, 0), which brings in the
    constant ``sum_{i<m} r! (m-i)^(-r-1) / i!``.  Elsewhere the
    Maclaurin-subtracted integrand runs over the whole of (0, X) and the
    subtracted terms return through their finite parts.
    """
    arg = _arg(arg)
    if r < 1:
        raise DomainError(f"derivative order must be >= 1, got {r}")
    if r > cfg.max_deriv:
        raise DomainError(f"derivative order {r} exceeds max_deriv={cfg.max_deriv}")
    X = arg.x_minus
    cls = classify(alpha, cfg.integer_tol)
    if cls.is_pole:
        m = cls.m or 0
        return _negate(_split_pole_moment(-m, X, r, cfg))
    split = 1.0 if X > cfg.large_x_switch else None
    return _negate(exp_moment_finite_part(alpha, X, r, 1, cfg.quad, split_at=split))


def _split_pole_moment(beta: float, X: float, r: int, cfg: EvalConfig) -> Evaluation:
    inner = exp_moment_finite_part(beta, 1.0, r, 1, cfg.quad)
    if X == 1.0:
        return inner
    lo, hi, sign = (1.0, X, 1.0) if X > 1.0 else (X, 1.0, -1.0)
    outer = integrate(lambda v: v ** (beta - 1) * math.log(v) ** r * math.exp(v), lo, hi, cfg.quad)
    return Evaluation(
        inner.value + sign * outer.value,
        inner.abs_err_est + outer.abs_err_est,
        Method.REGULARIZED_QUADRATURE,
        inner.work + outer.work,
    )


def star_deriv_series(alpha: float, arg, r: int, cfg: EvalConfig = DEFAULT_CONFIG) -> Evaluation:
    """Term-by-term series for ``gamma*^(r)(alpha, x_-)``, any real alpha.

    Each Maclaurin term ``v^k/k!`` of ``e^v`` contributes minus the finite part
    of ``int v^(alpha+k-1) ln^r v dv`` at X.
    """
    arg = _arg(arg)
    if r < 0:
        raise DomainError(f"derivative order must be >= 0, got {r}")
    X = arg.x_minus
    cls = classify(alpha, cfg.integer_tol)
    a = -(cls.m or 0) if cls.is_pole else alpha

    def term(k):
        return -_inv_factorial(k) * power_log_finite_part(a + k - 1, r, X)

    value, err, n = sum_series(term, X, cfg.series_tol, cfg.max_terms)
    return Evaluation(value, err, Method.SERIES, n)


def gamma_star_deriv(alpha: float, arg, r: int, cfg: EvalConfig = DEFAULT_CONFIG) -> Evaluation:
    """Dispatcher: ``r = 0`` is :func:`gamma_star`, otherwise series for small X."""
    if r == 0:
        return gamma_star(alpha, arg, cfg)
    arg = _arg(arg)
    if r > cfg.max_deriv:
        raise DomainError(f"derivative order {r} exceeds max_deriv={cfg.max_deriv}")
    if arg.x_minus > cfg.large_x_switch:
        return star_deriv(alpha, arg, r, cfg)
    return star_deriv_series(alpha, arg, r, cfg)
