"""Numeric kernel: adaptive double-exponential quadrature and closed finite parts.

The integrator maps each panel through the tanh-sinh substitution, which
clusters nodes at both ends and copes with integrable algebraic endpoint
singularities.  Node positions are carried as distances from the nearer
endpoint so that integrands singular at ``a = 0`` are sampled exactly.
"""

from __future__ import annotations

import enum
import heapq
import math
from dataclasses import dataclass
from typing import Callable

from .errors import ConvergenceFailure, DomainError

__all__ = [
    "Method",
    "Evaluation",
    "QuadratureConfig",
    "integrate",
    "exp_tail_ratio",
    "log_power_antiderivative",
    "power_log_antiderivative",
    "log_moment_finite_part",
    "power_log_finite_part",
    "exp_moment_finite_part",
]


class Method(str, enum.Enum):
    SERIES = "series"
    REGULARIZED_QUADRATURE = "regularized_quadrature"
    RECURRENCE = "recurrence"
    CLOSED_FORM = "closed_form"
    NEUTRIX_FIT = "neutrix_fit"


@dataclass(frozen=True)
class Evaluation:
    """A computed value with an absolute error estimate and provenance.

    ``work`` counts series terms or quadrature panels, depending on ``method``.
    """

    value: float
    abs_err_est: float
    method: Method
    work: int

    def __post_init__(self):
        if not self.abs_err_est >= 0.0:
            raise ValueError(f"abs_err_est must be >= 0, got {self.abs_err_est}")
        if self.work < 0:
            raise ValueError(f"work must be >= 0, got {self.work}")
        object.__setattr__(self, "method", Method(self.method))

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_subdivisions: int = 2000

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")


DEFAULT_QUAD = QuadratureConfig()

# tanh-sinh node tables on [-1, 1], stored per refinement level.  Level 0 uses
# step H0; each later level adds the odd multiples of H0 / 2**level.
_H0 = 0.5
_EPS = math.ulp(1.0)
_T_MAX = 5.0
_MIN_LEVEL = 3
_MAX_LEVEL = 7


def _node(t: float) -> tuple[int, float, float]:
    s = 0.5 * math.pi * math.sinh(t)
    # relative distance to the nearer endpoint and the Jacobian weight
    delta = 1.0 / (1.0 + math.exp(2.0 * abs(s)))
    sech = 2.0 / (math.exp(s) + math.exp(-s))
    weight = 0.25 * math.pi * math.cosh(t) * sech * sech
    side = -1 if t < 0 else (1 if t > 0 else 0)
    return side, delta, weight


def _build_levels() -> tuple[tuple[tuple[int, float, float], ...], ...]:
    levels = []
    k_max = int(_T_MAX / _H0)
    levels.append(tuple(_node(k * _H0) for k in range(-k_max, k_max + 1)))
    for level in range(1, _MAX_LEVEL + 1):
        h = _H0 / 2**level
        n = int(_T_MAX / h)
        levels.append(tuple(_node(k * h) for k in range(-n, n + 1) if k % 2))
    return tuple(levels)


_LEVELS = _build_levels()


def _tanh_sinh_panel(f, a: float, b: float, abs_tol: float, rel_tol: float):
    width = b - a
    mid = 0.5 * (a + b)
    acc = acc_abs = 0.0
    prev = None
    estimate = err = math.inf
    for level, nodes in enumerate(_LEVELS):
        for side, delta, weight in nodes:
            if side < 0:
                u = a + width * delta
            elif side > 0:
                u = b - width * delta
            else:
                u = mid
            if u <= a or u >= b:
                continue
            fu = f(u)
            if not math.isfinite(fu):
                raise ConvergenceFailure(f"integrand is not finite at u={u!r}")
            acc += weight * fu
            acc_abs += abs(weight * fu)
        scale = width * _H0 / 2**level
        estimate = acc * scale
        if prev is not None:
            err = abs(estimate - prev)
            if level >= _MIN_LEVEL and err <= max(abs_tol, rel_tol * abs(estimate)):
                break
        prev = estimate
    # the level difference can vanish exactly; rounding in the sum cannot
    return estimate, max(err, 2 * _EPS * acc_abs * scale)


def integrate(
    f: Callable[[float], float],
    a: float,
    b: float,
    cfg: QuadratureConfig = DEFAULT_QUAD,
) -> Evaluation:
    """Integrate ``f`` over ``(a, b)``.

    Endpoint singularities of the form ``|u - a|**beta`` with ``beta > -1`` are
    handled by the double-exponential node clustering.  The interval is
    bisected (largest error first) until the summed panel error estimate is
    below ``max(abs_tol, rel_tol * |value|)``.

    Raises
    ------
    DomainError
        If ``a >= b``.
    ConvergenceFailure
        If the tolerance is unmet after ``max_subdivisions`` panels.
    """
    if not a < b:
        raise DomainError(f"integrate requires a < b, got a={a!r}, b={b!r}")
    local_rel = 0.5 * cfg.rel_tol
    value, err = _tanh_sinh_panel(f, a, b, cfg.abs_tol, local_rel)
    # heap entries: (-err, a, b, value, err)
    heap = [(-err, a, b, value, err)]
    total, total_err = value, err
    panels = 1
    while total_err > max(cfg.abs_tol, cfg.rel_tol * abs(total)):
        if panels >= cfg.max_subdivisions:
            raise ConvergenceFailure(
                f"quadrature on ({a}, {b}) reached {panels} panels with "
                f"error estimate {total_err:.3g}"
            )
        _, pa, pb, pval, perr = heapq.heappop(heap)
        pm = 0.5 * (pa + pb)
        frac = (pm - pa) / (b - a)
        left = _tanh_sinh_panel(f, pa, pm, cfg.abs_tol * frac, local_rel)
        right = _tanh_sinh_panel(f, pm, pb, cfg.abs_tol * frac, local_rel)
        heapq.heappush(heap, (-left[1], pa, pm, left[0], left[1]))
        heapq.heappush(heap, (-right[1], pm, pb, right[0], right[1]))
        panels += 1
        vals = [item[3] for item in heap]
        total = math.fsum(vals)
        total_err = math.fsum(item[4] for item in heap)
    return Evaluation(total, total_err, Method.REGULARIZED_QUADRATURE, panels)


def exp_tail_ratio(z: float, m: int) -> float:
    """``(e**z - sum_{i<m} z**i / i!) / z**m`` without cancellation near 0."""
    if m == 0:
        return math.exp(z)
    if abs(z) <= 4.0:
        term = 1.0 / math.factorial(m)
        total = term
        j = 0
        while abs(term) > 1e-18 * abs(total):
            j += 1
            term *= z / (m + j)
            total += term
        return total
    head = math.fsum(z**i / math.factorial(i) for i in range(m))
    return (math.exp(z) - head) / z**m


def log_power_antiderivative(u: float, r: int) -> float:
    """Antiderivative of ``ln^r |u|``: sum of ``(-1)^i r!/(r-i)! u ln^{r-i}|u|`` plus ``(-1)^r r! u``."""
    if u == 0:
        raise DomainError("log_power_antiderivative is undefined at u = 0")
    if r < 1:
        raise DomainError("r must be a positive integer")
    lu = math.log(abs(u))
    fr = math.factorial(r)
    terms = [(-1) ** i * fr / math.factorial(r - i) * u * lu ** (r - i) for i in range(r)]
    terms.append((-1) ** r * fr * u)
    return math.fsum(terms)


def power_log_antiderivative(u: float, s: int, r: int) -> float:
    """Antiderivative of ``u^{-s-1} ln^r |u|`` for integer ``s, r >= 1``."""
    if u == 0:
        raise DomainError("power_log_antiderivative is undefined at u = 0")
    if s < 1 or r < 1:
        raise DomainError("s and r must be positive integers")
    lu = math.log(abs(u))
    us = u ** (-s)
    fr = math.factorial(r)
    terms = [-fr / math.factorial(r - i) * s ** (-i - 1) * us * lu ** (r - i) for i in range(r)]
    terms.append(-fr * s ** (-r - 1) * us)
    return math.fsum(terms)


def log_moment_finite_part(m: int, n: int) -> float:
    """Finite part of ``int_eps^1 t^{-m-1} ln^n t dt``, i.e. ``-n!/m^{n+1}``."""
    if m < 1 or n < 1:
        raise DomainError("m and n must be positive integers")
    return -math.factorial(n) / m ** (n + 1)


def power_log_finite_part(alpha: float, r: int, x: float) -> float:
    """Finite part of ``int_eps^x u^alpha ln^r u du`` as ``eps -> 0``.

    ``alpha == -1`` gives ``ln^{r+1} x / (r+1)``; otherwise the value is the
    antiderivative at ``x`` with every ``eps``-dependent piece dropped.
    """
    if not x > 0:
        raise DomainError(f"x must be positive, got {x!r}")
    if r < 0:
        raise DomainError("r must be a nonnegative integer")
    lx = math.log(x)
    if alpha == -1:
        return lx ** (r + 1) / (r + 1)
    p = alpha + 1.0
    xp = x**p
    fr = math.factorial(r)
    terms = [
        (-1) ** k * fr * xp * lx ** (r - k) / (p ** (k + 1) * math.factorial(r - k))
        for k in range(r)
    ]
    terms.append((-1) ** r * fr * xp / p ** (r + 1))
    return math.fsum(terms)


def exp_moment_finite_part(
    beta: float,
    upper: float,
    r: int,
    sign: int,
    cfg: QuadratureConfig = DEFAULT_QUAD,
    split_at: float | None = None,
) -> Evaluation:
    """Finite part of ``int_eps^upper v^{beta-1} ln^r v e^{sign*v} dv``.

    The order-M Maclaurin partial sum of ``e^{sign*v}`` is subtracted so the
    remainder integrand is integrable at 0; the subtracted monomials are put
    back through their closed finite parts.  M is the smallest count with
    ``beta + M >= 1/4``, which keeps the remaining endpoint exponent above
    ``-3/4``.  With ``split_at`` below ``upper`` the regularized piece stops at
    ``split_at`` and the rest is integrated plainly.
    """
    if not upper > 0:
        raise DomainError(f"upper limit must be positive, got {upper!r}")
    if sign not in (-1, 1):
        raise ValueError("sign must be +1 or -1")
    M = max(0, math.ceil(0.25 - beta))
    if beta + M <= 0:
        M += 1
    cut = upper if split_at is None or split_at >= upper else split_at
    scale = float(sign**M)

    def remainder(v):
        return scale * v ** (beta - 1 + M) * math.log(v) ** r * exp_tail_ratio(sign * v, M)

    head = integrate(remainder, 0.0, cut, cfg)
    corr = [sign**i / math.factorial(i) * power_log_finite_part(beta + i - 1, r, cut) for i in range(M)]
    value = head.value + math.fsum(corr)
    err = head.abs_err_est + 4 * math.ulp(1.0) * math.fsum(abs(c) for c in corr)
    panels = head.work
    if cut < upper:
        tail = integrate(
            lambda v: v ** (beta - 1) * math.log(v) ** r * math.exp(sign * v), cut, upper, cfg
        )
        value += tail.value
        err += tail.abs_err_est
        panels += tail.work
    return Evaluation(value, err, Method.REGULARIZED_QUADRATURE, panels)
