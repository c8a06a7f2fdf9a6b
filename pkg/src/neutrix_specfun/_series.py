"""Truncated power-series summation shared by the gamma-family evaluators."""

from __future__ import annotations

import math
from typing import Callable, Iterable

from .errors import ConvergenceFailure

_EPS = math.ulp(1.0)


def sum_series(
    term: Callable[[int], float],
    x: float,
    series_tol: float,
    max_terms: int,
    skip: Iterable[int] = (),
    extra: Iterable[float] = (),
) -> tuple[float, float, int]:
    """Sum ``term(k)`` for k = 0, 1, ... with the k > x truncation rule.

    Stops once two consecutive terms past ``k > x`` satisfy
    ``|term(k)| < series_tol * |S_k|``; one small term alone could be an
    isolated zero (e.g. a ``ln x`` factor at x = 1).  Indices in ``skip`` are left out and never trigger the stop.  ``extra``
    holds closed terms added to the sum (e.g. a log term).

    Returns ``(value, abs_err_est, terms_used)``; the error estimate is the
    last term magnitude plus a rounding bound on the summed magnitudes.
    """
    skip = frozenset(skip)
    parts = list(extra)
    running = math.fsum(parts)
    k = 0
    last = 0.0
    small = 0
    while True:
        if k >= max_terms:
            raise ConvergenceFailure(
                f"series not converged after {max_terms} terms (x={x!r})"
            )
        if k in skip:
            k += 1
            continue
        try:
            t = term(k)
        except OverflowError:
            raise ConvergenceFailure(f"series term {k} overflowed (x={x!r}); use the quadrature path") from None
        if not math.isfinite(t):
            raise ConvergenceFailure(f"series term {k} is not finite (x={x!r})")
        parts.append(t)
        running += t
        last = abs(t)
        small = small + 1 if k > x and last < series_tol * abs(running) else 0
        if small == 2:
            break
        k += 1
    value = math.fsum(parts)
    err = last + 2 * _EPS * math.fsum(abs(p) for p in parts)
    return value, err, len(parts)
