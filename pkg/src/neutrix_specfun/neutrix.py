"""Numerical neutrix limits: finite parts of divergent one-parameter families.

Given ``F(eps)`` that blows up like a finite combination of
``eps**lam * ln(eps)**r`` (lam < 0) and ``ln(eps)**r`` as eps -> 0, the
finite part is the constant ``c`` in

    F(eps) ~ c + sum_t a_t * eps**lam_t * ln(eps)**r_t.

The divergent pieces are declared by the caller; terms that vanish as
eps -> 0 (lam > 0) may be declared too so that a grid of moderate eps can be
used.  The least-squares fit runs in mpmath at a working precision chosen
from the size of the basis columns, because the finite part is a small
difference of very large numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence

import mpmath as mp

from .errors import FitRejected, IllConditioned, SpecfunError

__all__ = [
    "NegligibleTerm",
    "NeutrixFit",
    "EpsilonGrid",
    "IntegralFamily",
    "VerifyReport",
    "basis_for_integrand",
    "extract_finite_part",
    "working_precision",
    "verify_case",
]


@dataclass(frozen=True)
class NegligibleTerm:
    """One basis function ``eps**lam * ln(eps)**log_power``.

    ``lam < 0`` and pure logarithms (``lam == 0``) are the divergent members;
    ``lam > 0`` terms vanish at 0 and only absorb the approach to the limit.
    The constant ``(0, 0)`` is the finite part itself and is never a member.
    """

    lam: float
    log_power: int = 0

    def __post_init__(self):
        if self.log_power < 0:
            raise ValueError("log_power must be a nonnegative integer")
        if self.lam == 0 and self.log_power == 0:
            raise ValueError("the constant (0, 0) is the finite part, not a negligible term")

    @property
    def vanishing(self) -> bool:
        return self.lam > 0

    def __call__(self, eps):
        return eps**self.lam * mp.log(eps) ** self.log_power

    def log10_size(self, eps: float) -> float:
        """log10 of ``|term(eps)|``, used to size the working precision."""
        le = abs(math.log(eps))
        out = self.lam * math.log10(eps)
        if self.log_power:
            out += self.log_power * math.log10(le)
        return out


@dataclass(frozen=True)
class EpsilonGrid:
    """Geometric sample points ``eps0 * ratio**j``, ``j < count``."""

    eps0: float = 0.01
    ratio: float = 0.6
    count: int = 16

    def __post_init__(self):
        if not 0 < self.eps0 < 0.5:
            raise ValueError("eps0 must lie in (0, 1/2)")
        if not 0 < self.ratio < 1:
            raise ValueError("ratio must lie in (0, 1)")
        if self.count < 4:
            raise ValueError("count must be at least 4")

    @classmethod
    def for_basis(cls, basis: Sequence[NegligibleTerm], eps0: float = 0.01, ratio: float = 0.6, extra: int = 8):
        return cls(eps0, ratio, len(basis) + extra)

    def points(self) -> list:
        e0, q = mp.mpf(self.eps0), mp.mpf(self.ratio)
        return [e0 * q**j for j in range(self.count)]

    @property
    def smallest(self) -> float:
        return self.eps0 * self.ratio ** (self.count - 1)


@dataclass(frozen=True)
class NeutrixFit:
    finite_part: float
    coefficients: tuple[tuple[NegligibleTerm, float], ...]
    residual_rms: float
    condition_estimate: float
    dps: int = 15

    def __post_init__(self):
        if not self.residual_rms >= 0:
            raise ValueError("residual_rms must be >= 0")
        if not self.condition_estimate >= 1:
            raise ValueError("condition_estimate must be >= 1")


def basis_for_integrand(
    powers: Iterable[float],
    max_log: int,
    vanishing: Iterable[float] = (),
) -> list[NegligibleTerm]:
    """Basis implied by an integrand's small-eps expansion.

    Every exponent in ``powers`` (the lam < 0 values) gets log powers
    ``0..max_log``; the pure logarithms ``1..max_log+1`` are always included.
    Optional ``vanishing`` exponents (lam > 0) get log powers ``0..max_log``.
    """
    out: list[NegligibleTerm] = []
    seen = set()

    def add(lam, r):
        key = (float(lam), int(r))
        if key not in seen and key != (0.0, 0):
            seen.add(key)
            out.append(NegligibleTerm(float(lam), int(r)))

    for lam in powers:
        for r in range(max_log + 1):
            add(lam, r)
    for r in range(1, max_log + 2):
        add(0.0, r)
    for lam in vanishing:
        for r in range(max_log + 1):
            add(lam, r)
    return out


def working_precision(basis: Sequence[NegligibleTerm], grid: EpsilonGrid, guard: int = 30) -> int:
    """Decimal digits needed so the finite part survives the largest column."""
    eps = grid.smallest
    biggest = max((t.log10_size(eps) for t in basis), default=0.0)
    return guard + max(0, math.ceil(biggest))


class IntegralFamily:
    """``F(eps) = scale * int_{side*eps}^{end} f(u) du`` evaluated in mpmath.

    Values are cached per precision; a new eps reuses the nearest larger
    cached eps and only integrates the gap, so descending grids cost one short
    panel per point.  ``f`` must accept and return mpmath numbers.
    """

    def __init__(
        self,
        f: Callable[[Any], Any],
        end: float,
        *,
        side: int = 1,
        scale: float = 1,
        breakpoints: Sequence[float] = (),
    ):
        if side not in (-1, 1):
            raise ValueError("side must be +1 or -1")
        if side * end <= 0:
            raise ValueError("end must lie on the same side of 0 as side*eps")
        self.f = f
        self.end = end
        self.side = side
        self.scale = scale
        self.breakpoints = tuple(sorted(abs(b) for b in breakpoints))
        self._cache: dict[int, dict] = {}

    def _segment(self, lo, hi):
        # |u| from lo to hi (lo < hi), split geometrically for the singular end
        pts = [lo]
        while pts[-1] * 4 < hi:
            pts.append(pts[-1] * 4)
        for b in self.breakpoints:
            if lo < b < hi:
                pts.append(mp.mpf(b))
        pts = sorted(set(pts)) + [hi]
        pts = [self.side * p for p in pts]
        return mp.quad(self.f, pts)

    def __call__(self, eps):
        eps = mp.mpf(eps)
        cache = self._cache.setdefault(mp.mp.prec, {})
        if eps in cache:
            return cache[eps]
        larger = [e for e in cache if e > eps]
        if larger:
            anchor = min(larger)
            value = cache[anchor] + self.scale * self._segment(eps, anchor)
        else:
            value = self.scale * self._segment(eps, mp.mpf(abs(self.end)))
        cache[eps] = value
        return value


def _aitken(values: list):
    """Iterated Aitken delta-squared; returns the limit and its last change.

    A zero second difference with a nonzero first difference means the
    sequence moves linearly (e.g. ``ln eps`` on a geometric grid), which has
    no limit; the spread is then infinite.
    """
    seq = list(values)
    spread = mp.mpf(0)
    while len(seq) >= 3:
        nxt = []
        for a, b, c in zip(seq, seq[1:], seq[2:]):
            den = a - 2 * b + c
            if den == 0:
                if c != b:
                    return c, mp.inf
                nxt.append(c)
            else:
                nxt.append(c - (c - b) ** 2 / den)
        spread = abs(nxt[-1] - seq[-1])
        seq = nxt
    return seq[-1], spread


def extract_finite_part(
    F: Callable[[Any], Any],
    basis: Sequence[NegligibleTerm],
    grid: EpsilonGrid | None = None,
    *,
    dps: int | None = None,
    max_condition: float | None = None,
    reject_rtol: float = 1e-6,
) -> NeutrixFit:
    """Fit ``F(eps_j) = c + sum_t a_t * term_t(eps_j)`` and return ``c``.

    Columns are scaled to unit norm before the QR solve.  With an empty basis
    the limit is taken by iterated Aitken extrapolation along the grid.

    Raises
    ------
    IllConditioned
        If the scaled system's condition number exceeds ``max_condition``
        (default ``10**(dps - 6)``, i.e. ``1e10`` at double precision).
    FitRejected
        If the residual RMS exceeds ``reject_rtol * max_j |F(eps_j)|``.
    """
    basis = list(basis)
    if grid is None:
        grid = EpsilonGrid.for_basis(basis)
    if grid.count < len(basis) + 4:
        raise ValueError(
            f"grid has {grid.count} points; need at least {len(basis) + 4} for {len(basis)} basis terms"
        )
    if dps is None:
        dps = working_precision(basis, grid)
    if max_condition is None:
        max_condition = 10.0 ** (dps - 6)

    with mp.workdps(dps):
        eps = grid.points()
        y = [mp.mpf(F(e)) for e in eps]
        scale_y = max(abs(v) for v in y)
        if not basis:
            first, last = abs(y[1] - y[0]), abs(y[-1] - y[-2])
            if last > 0 and last >= first:
                raise FitRejected("family does not settle along the grid; declare its divergent terms")
            c, spread = _aitken(y)
            if spread > reject_rtol * max(scale_y, 1):
                raise FitRejected(f"Aitken extrapolation did not settle (spread {mp.nstr(spread, 3)})")
            return NeutrixFit(float(c), (), float(spread), 1.0, dps)

        rows, cols = len(eps), len(basis) + 1
        A = mp.matrix(rows, cols)
        for i, e in enumerate(eps):
            A[i, 0] = 1
            for j, term in enumerate(basis, start=1):
                A[i, j] = term(e)
        norms = []
        for j in range(cols):
            nrm = mp.sqrt(mp.fsum(A[i, j] ** 2 for i in range(rows)))
            norms.append(nrm)
            for i in range(rows):
                A[i, j] /= nrm
        sv = mp.svd_r(A, compute_uv=False)
        smax, smin = max(sv), min(sv)
        cond = mp.inf if smin == 0 else smax / smin
        if cond > max_condition:
            raise IllConditioned(
                f"condition estimate {mp.nstr(cond, 3)} exceeds {max_condition:.3g} at {dps} digits"
            )
        sol, _ = mp.qr_solve(A, mp.matrix(y))
        coef = [sol[j] / norms[j] for j in range(cols)]
        resid = [y[i] - mp.fsum(A[i, j] * sol[j] for j in range(cols)) for i in range(rows)]
        rms = mp.sqrt(mp.fsum(r**2 for r in resid) / rows)
        if rms > reject_rtol * scale_y:
            raise FitRejected(
                f"residual rms {mp.nstr(rms, 3)} exceeds {reject_rtol:g} * max|F| = {mp.nstr(reject_rtol * scale_y, 3)}"
            )
        return NeutrixFit(
            float(coef[0]),
            tuple((t, float(a)) for t, a in zip(basis, coef[1:])),
            float(rms),
            max(1.0, float(cond)),
            dps,
        )


@dataclass
class VerifyReport:
    name: str
    closed_form: float
    fitted: float
    abs_diff: float
    tol: float
    passed: bool
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "closed_form": self.closed_form,
            "fitted": self.fitted,
            "abs_diff": self.abs_diff,
            "tol": self.tol,
            "pass": self.passed,
            "diagnostics": self.diagnostics,
        }


def verify_case(
    name: str,
    closed_form: float,
    F: Callable[[Any], Any],
    basis: Sequence[NegligibleTerm],
    grid: EpsilonGrid | None = None,
    tol: float = 1e-6,
    **fit_kwargs,
) -> VerifyReport:
    """Fit the finite part of ``F`` and compare it with ``closed_form``.

    Fit failures are reported as failed cases, never raised.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    try:
        fit = extract_finite_part(F, basis, grid, **fit_kwargs)
    except (SpecfunError, ArithmeticError, ValueError, ZeroDivisionError) as exc:
        return VerifyReport(
            name, float(closed_form), math.nan, math.inf, tol, False,
            {"error": f"{type(exc).__name__}: {exc}"},
        )
    diff = abs(fit.finite_part - closed_form)
    return VerifyReport(
        name,
        float(closed_form),
        fit.finite_part,
        diff,
        tol,
        diff < tol,
        {
            "basis_size": len(basis),
            "residual_rms": fit.residual_rms,
            "condition_estimate": fit.condition_estimate,
            "dps": fit.dps,
        },
    )
