"""Digamma and polygamma functions on the whole real line.

At the nonpositive integers the usual poles are replaced by neutrix values:

    psi(-m)       = -euler_gamma + H_m
    psi^(n)(-m)   = sum_{i=1}^m n!/i^(n+1) + (-1)^(n+1) n! zeta(n+1),   n >= 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Mapping

from .errors import ConvergenceFailure, DomainError
from .incgamma import DEFAULT_CONFIG, EvalConfig
from .quadrature import Evaluation, Method, integrate

__all__ = [
    "EULER_GAMMA",
    "MathConstants",
    "CONSTANTS",
    "zeta_int",
    "harmonic",
    "polygamma_positive",
    "polygamma_any",
    "psi_neg_int",
    "polygamma_neg_int",
    "polygamma_neutrix_integral",
]

EULER_GAMMA = 0.57721566490153286061

_EPS = math.ulp(1.0)
_ZETA_TERMS = 32


def _borwein_weights(n: int) -> tuple[float, ...]:
    # d_k = n * sum_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!), exact in integers
    acc = 0
    out = []
    for i in range(n + 1):
        acc += Fraction(math.factorial(n + i - 1) * 4**i, math.factorial(n - i) * math.factorial(2 * i))
        out.append(n * acc)
    return tuple(float(d) for d in out)


_D = _borwein_weights(_ZETA_TERMS)


def _zeta_eta(s: int) -> float:
    # accelerated alternating series for eta(s); error ~ 3 / (3 + sqrt 8)^n
    dn = _D[-1]
    terms = [(-1) ** k * (_D[k] - dn) / (k + 1) ** s for k in range(_ZETA_TERMS)]
    eta = -math.fsum(terms) / dn
    return eta / (1.0 - 2.0 ** (1 - s))


@dataclass(frozen=True)
class MathConstants:
    euler_gamma: float = EULER_GAMMA
    zeta_cache: Mapping[int, float] = field(
        default_factory=lambda: MappingProxyType({s: _zeta_eta(s) for s in range(2, 65)})
    )


CONSTANTS = MathConstants()


def zeta_int(s: int) -> float:
    """Riemann zeta at an integer ``s >= 2``."""
    if s != int(s) or s < 2:
        raise DomainError(f"zeta_int needs an integer s >= 2, got {s!r}")
    s = int(s)
    cached = CONSTANTS.zeta_cache.get(s)
    if cached is not None:
        return cached
    return _zeta_eta(s)


def harmonic(m: int) -> float:
    if m < 0:
        raise DomainError(f"harmonic needs m >= 0, got {m!r}")
    return math.fsum(1.0 / i for i in range(1, m + 1))


def _bernoulli_even(count: int) -> tuple[Fraction, ...]:
    """B_2, B_4, ..., B_{2*count} via the Akiyama-Tanigawa table."""
    size = 2 * count + 1
    row = [Fraction(0)] * (size + 1)
    numbers = []
    for m in range(size + 1):
        row[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            row[j - 1] = j * (row[j - 1] - row[j])
        numbers.append(row[0])
    return tuple(numbers[2 * k] for k in range(1, count + 1))


_B2K = _bernoulli_even(15)
_SHIFT_TO = 10.0


def _asymptotic(n: int, x: float) -> tuple[float, float]:
    if n == 0:
        parts = [math.log(x), -0.5 / x]
        for k, b in enumerate(_B2K, start=1):
            t = -float(b) / (2 * k * x ** (2 * k))
            parts.append(t)
            if abs(t) < _EPS * abs(parts[0]):
                break
        return math.fsum(parts), abs(parts[-1])
    sign = (-1) ** (n + 1)
    parts = [math.factorial(n - 1) / x**n, math.factorial(n) / (2 * x ** (n + 1))]
    for k, b in enumerate(_B2K, start=1):
        t = float(b) * math.factorial(2 * k + n - 1) / (math.factorial(2 * k) * x ** (2 * k + n))
        parts.append(t)
        if abs(t) < _EPS * parts[0]:
            break
    return sign * math.fsum(parts), abs(parts[-1])


def polygamma_positive(n: int, x: float) -> Evaluation:
    """``psi^(n)(x)`` for x > 0.

    The argument is pushed up to at least ``10 + n`` with the recurrence, then
    the Euler-Maclaurin (Stirling) expansion closes the tail.
    """
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n!r}")
    if not (x > 0 and math.isfinite(x)):
        raise DomainError(f"polygamma_positive needs finite x > 0, got {x!r}")
    target = _SHIFT_TO + n
    shift = max(0, math.ceil(target - x))
    head = (-1) ** n * math.factorial(n)
    steps = [head / (x + j) ** (n + 1) for j in range(shift)]
    tail, tail_err = _asymptotic(n, x + shift)
    if tail_err > 1e-13 * max(1.0, abs(tail)):
        raise ConvergenceFailure(f"asymptotic tail for psi^({n}) did not converge at x={x + shift}")
    value = tail - math.fsum(steps)
    err = tail_err + 2 * _EPS * (abs(tail) + math.fsum(abs(s) for s in steps))
    return Evaluation(value, err, Method.SERIES, shift + len(_B2K))


def psi_neg_int(m: int) -> float:
    """Neutrix value ``psi(-m) = -euler_gamma + H_m``."""
    if m < 0:
        raise DomainError(f"m must be >= 0, got {m!r}")
    return -CONSTANTS.euler_gamma + harmonic(m)


def polygamma_neg_int(n: int, m: int) -> float:
    """Neutrix value ``psi^(n)(-m)`` for ``n >= 1``."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n!r}")
    if m < 0:
        raise DomainError(f"m must be >= 0, got {m!r}")
    nf = math.factorial(n)
    parts = [nf / i ** (n + 1) for i in range(1, m + 1)]
    parts.append((-1) ** (n + 1) * nf * zeta_int(n + 1))
    return math.fsum(parts)


def _nonpositive_integer(x: float, tol: float) -> int | None:
    k = round(x)
    if k <= 0 and abs(x - k) <= tol:
        return -k
    return None


def polygamma_any(n: int, x: float, cfg: EvalConfig = DEFAULT_CONFIG) -> Evaluation:
    """``psi^(n)(x)`` for every real x, neutrix values at 0, -1, -2, ..."""
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n!r}")
    if not math.isfinite(x):
        raise DomainError(f"x must be finite, got {x!r}")
    m = _nonpositive_integer(x, cfg.integer_tol)
    if m is not None:
        value = psi_neg_int(m) if n == 0 else polygamma_neg_int(n, m)
        return Evaluation(value, 4 * _EPS * max(1.0, abs(value)), Method.CLOSED_FORM, m + 1)
    if x > 0:
        return polygamma_positive(n, x)
    # -m < x < -m+1: shift into (0, 1) and subtract the recurrence steps
    m = math.ceil(-x)
    base = polygamma_positive(n, x + m)
    head = (-1) ** n * math.factorial(n)
    steps = [head / (x + k) ** (n + 1) for k in range(m)]
    value = base.value - math.fsum(steps)
    err = base.abs_err_est + 2 * _EPS * math.fsum(abs(s) for s in steps)
    return Evaluation(value, err, Method.RECURRENCE, base.work + m)


def polygamma_neutrix_integral(n: int, x: float, cfg: EvalConfig = DEFAULT_CONFIG) -> Evaluation:
    """``psi^(n)(x)`` from the finite part of ``-int_0^1 t^(x-1) ln^n t / (1-t) dt``.

    The first r terms of the geometric expansion of ``1/(1-t)`` are split off
    so the remaining integrand ``t^(x+r-1) ln^n t / (1-t)`` is integrable at 0;
    each split-off monomial contributes its closed finite part
    ``(-1)^n n! / (x+i)^(n+1)``, or 0 when ``x + i = 0``.  For n = 0 the
    ``1 - t^(x-1)`` numerator with the Euler constant is used instead.
    """
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n!r}")
    if not math.isfinite(x):
        raise DomainError(f"x must be finite, got {x!r}")
    m = _nonpositive_integer(x, cfg.integer_tol)
    if m is not None:
        x = float(-m)
    r = max(0, math.ceil(0.25 - x))
    beta = x + r
    if n == 0:
        def f(t):
            return -math.expm1((beta - 1) * math.log(t)) / (1.0 - t)

        parts = [-1.0 / (x + i) for i in range(r) if x + i != 0]
        quad = integrate(f, 0.0, 1.0, cfg.quad)
        parts.append(-CONSTANTS.euler_gamma)
        value = quad.value + math.fsum(parts)
    else:
        def f(t):
            lt = math.log(t)
            return math.exp((beta - 1) * lt) * lt**n / (1.0 - t)

        nf = (-1) ** n * math.factorial(n)
        parts = [nf / (x + i) ** (n + 1) for i in range(r) if x + i != 0]
        quad = integrate(f, 0.0, 1.0, cfg.quad)
        value = -(quad.value + math.fsum(parts))
    err = quad.abs_err_est + 2 * _EPS * math.fsum(abs(p) for p in parts)
    return Evaluation(value, err, Method.REGULARIZED_QUADRATURE, quad.work)
