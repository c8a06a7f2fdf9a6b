"""Evaluation requests and output records shared by the command-line tools."""

from __future__ import annotations

import enum
import json
import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from . import incgamma as ig
from . import incgamma_star as gs
from . import polygamma as pg
from .errors import DomainError, SpecfunError
from .incgamma import DEFAULT_CONFIG, EvalConfig
from .quadrature import Evaluation, Method

__all__ = [
    "Function",
    "FunctionRequest",
    "OutputRecord",
    "csv_header",
    "parse_real",
    "run_request",
]

TEXT_DIGITS = 7
MACHINE_DIGITS = 15


class Function(str, enum.Enum):
    INCGAMMA = "incgamma"
    INCGAMMA_DERIV = "incgamma-deriv"
    INCGAMMA_STAR = "incgamma-star"
    INCGAMMA_STAR_DERIV = "incgamma-star-deriv"
    POLYGAMMA = "polygamma"

    @property
    def param_names(self) -> tuple[str, ...]:
        if self is Function.POLYGAMMA:
            return ("n", "x")
        if self in (Function.INCGAMMA_DERIV, Function.INCGAMMA_STAR_DERIV):
            return ("alpha", "x", "r")
        return ("alpha", "x")

    @property
    def negative_x(self) -> bool:
        return self in (Function.INCGAMMA_STAR, Function.INCGAMMA_STAR_DERIV)


def parse_real(text: str) -> float:
    """Parse a decimal or a fraction such as ``-1/3``."""
    try:
        return float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a real number: {text!r}") from exc


@dataclass(frozen=True)
class FunctionRequest:
    function: Function
    alpha_or_n: float
    x: float
    deriv_order: int = 0
    config: EvalConfig = DEFAULT_CONFIG
    allow_zero_branch: bool = False

    def __post_init__(self):
        object.__setattr__(self, "function", Function(self.function))
        if self.function is Function.POLYGAMMA:
            n = self.alpha_or_n
            if n != int(n) or n < 0:
                raise DomainError(f"polygamma order n must be a nonnegative integer, got {n!r}")
            object.__setattr__(self, "alpha_or_n", int(n))
        if self.deriv_order < 0:
            raise DomainError(f"derivative order r must be >= 0, got {self.deriv_order}")
        if self.deriv_order > self.config.max_deriv:
            raise DomainError(
                f"derivative order r={self.deriv_order} exceeds --max-deriv={self.config.max_deriv}"
            )
        if not math.isfinite(self.x):
            raise DomainError(f"x must be finite, got {self.x!r}")
        if self.function in (Function.INCGAMMA, Function.INCGAMMA_DERIV) and not self.x > 0:
            raise DomainError(f"{self.function.value} needs x > 0, got x={self.x!r}")
        if self.function.negative_x and not (self.x < 0 or (self.allow_zero_branch and self.x > 0)):
            raise DomainError(
                f"{self.function.value} needs x < 0, got x={self.x!r}"
                + ("" if self.x == 0 else " (use --allow-zero-branch for the zero value at x > 0)")
            )

    @property
    def params(self) -> dict[str, Any]:
        values = {"alpha": self.alpha_or_n, "n": self.alpha_or_n, "x": self.x, "r": self.deriv_order}
        return {k: values[k] for k in self.function.param_names}

    @classmethod
    def from_record(cls, record: dict, config: EvalConfig = DEFAULT_CONFIG, **kw) -> "FunctionRequest":
        """Rebuild the request behind a JSON record."""
        fn = Function(record["function"])
        p = record["params"]
        first = p["n"] if fn is Function.POLYGAMMA else p["alpha"]
        return cls(fn, first, p["x"], p.get("r", 0), config, **kw)

    def evaluate(self) -> Evaluation:
        a, x, r, cfg = self.alpha_or_n, self.x, self.deriv_order, self.config
        fn = self.function
        if fn.negative_x and x > 0:
            return Evaluation(0.0, 0.0, Method.CLOSED_FORM, 0)
        if fn is Function.INCGAMMA:
            return ig.lower_gamma(a, x, cfg)
        if fn is Function.INCGAMMA_DERIV:
            return ig.lower_gamma_deriv(a, x, r, cfg)
        if fn is Function.INCGAMMA_STAR:
            return gs.gamma_star(a, x, cfg)
        if fn is Function.INCGAMMA_STAR_DERIV:
            return gs.gamma_star_deriv(a, x, r, cfg)
        return pg.polygamma_any(a, x, cfg)


@dataclass
class OutputRecord:
    function: str
    params: dict[str, Any]
    value: float | None = None
    abs_err_est: float | None = None
    method: str | None = None
    terms: int | None = None
    wall_time_ms: float | None = None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None

    def rounded(self, digits: int) -> tuple[str, str]:
        """Value and error at ``digits`` significant figures.

        The error is widened by the rounding of the value so that the printed
        pair still brackets the computed result.
        """
        shown = float(f"{self.value:.{digits}g}")
        return f"{self.value:.{digits}g}", _err_text(self.abs_err_est + abs(shown - self.value))

    def to_dict(self, timing: bool = False, digits: int = MACHINE_DIGITS) -> dict:
        out: dict[str, Any] = {"function": self.function, "params": dict(self.params)}
        if self.ok:
            value, err = self.rounded(digits)
            out.update(value=float(value), abs_err_est=float(err), method=self.method, terms=self.terms)
        else:
            out.update(value=None, abs_err_est=None, method=None, terms=None)
        if timing:
            out["wall_time_ms"] = self.wall_time_ms
        if not self.ok:
            out["error"] = self.error
        return out

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.to_dict(timing), ensure_ascii=False)

    def to_text(self, timing: bool = False) -> str:
        args = " ".join(f"{k}={_fmt_param(v)}" for k, v in self.params.items())
        if not self.ok:
            return f"{self.function} {args}: error: {self.error}"
        value, err = self.rounded(TEXT_DIGITS)
        line = f"{self.function} {args}: {value}  (+/- {err}, {self.method}, {self.terms} terms)"
        if timing:
            line += f"  [{self.wall_time_ms:.3f} ms]"
        return line

    def csv_row(self) -> list[str]:
        row = [self.function] + [_fmt_param(v) for v in self.params.values()]
        if self.ok:
            value, err = self.rounded(MACHINE_DIGITS)
            return row + [value, err, str(self.method), str(self.terms), ""]
        return row + ["", "", "", "", self.error or ""]


def csv_header(function: Function) -> list[str]:
    return ["function", *function.param_names, "value", "abs_err_est", "method", "terms", "error"]


def _err_text(err: float) -> str:
    # three significant figures, rounded up so the bound is never understated
    txt = f"{err:.2e}"
    if float(txt) < err:
        mant, exp = txt.split("e")
        txt = f"{float(f'{float(mant) + 0.01:.2f}e{exp}'):.2e}"
    return txt


def _fmt_param(v) -> str:
    return str(v) if isinstance(v, int) else f"{v:.{MACHINE_DIGITS}g}"


def run_request(request: FunctionRequest) -> OutputRecord:
    """Evaluate and wrap; solver failures become error records."""
    start = time.perf_counter()
    try:
        ev = request.evaluate()
    except (SpecfunError, ArithmeticError, ValueError) as exc:
        return OutputRecord(request.function.value, request.params,
                            wall_time_ms=(time.perf_counter() - start) * 1e3,
                            error=f"{type(exc).__name__}: {exc}")
    elapsed = (time.perf_counter() - start) * 1e3
    if not math.isfinite(ev.value):
        return OutputRecord(request.function.value, request.params, wall_time_ms=elapsed,
                            error="ConvergenceFailure: non-finite result")
    return OutputRecord(request.function.value, request.params, ev.value, ev.abs_err_est,
                        ev.method.value, ev.work, elapsed)

