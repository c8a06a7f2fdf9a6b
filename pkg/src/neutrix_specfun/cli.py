"""``neutrix-specfun``: point evaluation, grid tables and the cross-check suite.

Exit codes: 0 ok, 1 verify failure, 2 usage or domain error, 3 convergence
failure (or any failed row in a table).
"""

from __future__ import annotations

import csv
import itertools
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor

import click

from .errors import DomainError
from .incgamma import EvalConfig
from .records import Function, FunctionRequest, OutputRecord, csv_header, parse_real, run_request
from .verify import SUITES, run_suites

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_CONVERGENCE = 0, 1, 2, 3
MAX_POINTS = 10**6
TOL_ENV = "NEUTRIX_SPECFUN_TOL"

EPILOG = (
    "Exit codes: 0 ok; 1 verify failure; 2 usage or domain error; "
    "3 convergence failure (table: any failed row)."
)


def _config_options(f):
    opts = [
        click.option("--series-tol", type=float, envvar=TOL_ENV, show_envvar=True, default=1e-16,
                     show_default=True, help="Relative size of the last series term kept."),
        click.option("--integer-tol", type=float, default=1e-12, show_default=True,
                     help="Distance at which alpha snaps to a nonpositive integer."),
        click.option("--large-x-switch", type=float, default=10.0, show_default=True,
                     help="|x| above which quadrature replaces the power series."),
        click.option("--max-deriv", type=int, default=6, show_default=True,
                     help="Largest derivative order r accepted."),
        click.option("--allow-zero-branch", is_flag=True,
                     help="Return 0 for the star functions at x > 0 instead of rejecting."),
        click.option("--format", "fmt", type=click.Choice(["text", "csv", "json"]), default="text",
                     show_default=True),
        click.option("--timing", is_flag=True, help="Add wall_time_ms to text and JSON output."),
    ]
    for opt in reversed(opts):
        f = opt(f)
    return f


def _make_config(series_tol, integer_tol, large_x_switch, max_deriv) -> EvalConfig:
    try:
        return EvalConfig(series_tol=series_tol, max_terms=500, large_x_switch=large_x_switch,
                          integer_tol=integer_tol, max_deriv=max_deriv)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc


def _first_param(function: Function, alpha, n):
    if function is Function.POLYGAMMA:
        if alpha is not None:
            raise click.UsageError("polygamma takes --n, not --alpha")
        if n is None:
            raise click.UsageError("polygamma needs --n")
        return n
    if n is not None:
        raise click.UsageError(f"{function.value} takes --alpha, not --n")
    if alpha is None:
        raise click.UsageError(f"{function.value} needs --alpha")
    return alpha


def _check_r(function: Function, r):
    if r is not None and "r" not in function.param_names:
        raise click.UsageError(f"{function.value} takes no --r; use the -deriv variant")


def _emit(records: list[OutputRecord], function: Function, fmt: str, timing: bool) -> None:
    if fmt == "csv":
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(csv_header(function))
        for rec in records:
            w.writerow(rec.csv_row())
    elif fmt == "json":
        for rec in records:
            click.echo(rec.to_json(timing))
    else:
        for rec in records:
            click.echo(rec.to_text(timing))


def _real(ctx, param, value):
    if value is None:
        return None
    try:
        return parse_real(value)
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from exc


@click.group(epilog=EPILOG, context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(package_name="artifact")
def cli():
    """Incomplete gamma, gamma*, polygamma and their neutrix values at the poles."""


FUNCTION_CHOICE = click.Choice([f.value for f in Function])


@cli.command("eval", epilog=EPILOG)
@click.argument("function", type=FUNCTION_CHOICE)
@click.option("--alpha", callback=_real, help="Order alpha (decimal or fraction like -1/3).")
@click.option("--n", "n", type=int, help="Polygamma order n.")
@click.option("--x", "x", callback=_real, required=True, help="Argument x (decimal or fraction).")
@click.option("--r", "r", type=int, help="Derivative order in alpha (deriv variants).")
@_config_options
def eval_cmd(function, alpha, n, x, r, series_tol, integer_tol, large_x_switch, max_deriv,
             allow_zero_branch, fmt, timing):
    """Evaluate FUNCTION at one point."""
    fn = Function(function)
    first = _first_param(fn, alpha, n)
    _check_r(fn, r)
    cfg = _make_config(series_tol, integer_tol, large_x_switch, max_deriv)
    try:
        req = FunctionRequest(fn, first, x, r or 0, cfg, allow_zero_branch)
    except DomainError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_USAGE)
    rec = run_request(req)
    if not rec.ok:
        click.echo(f"error: {rec.error}", err=True)
        sys.exit(EXIT_USAGE if rec.error.startswith("DomainError") else EXIT_CONVERGENCE)
    _emit([rec], fn, fmt, timing)


def parse_values(spec: str, step: float | None, name: str) -> list[float]:
    """``a,b,c`` lists or inclusive ``start:stop`` ranges stepped by ``step``."""
    out: list[float] = []
    for part in spec.split(","):
        part = part.strip()
        if ":" in part:
            lo_txt, hi_txt = part.split(":", 1)
            lo, hi = parse_real(lo_txt), parse_real(hi_txt)
            if not (math.isfinite(lo) and math.isfinite(hi)):
                raise ValueError(f"--{name}: range ends must be finite")
            if step is None or not step > 0:
                raise ValueError(f"--{name}: a range needs --step > 0")
            if hi < lo:
                raise ValueError(f"--{name}: range start exceeds stop")
            count = math.floor((hi - lo) / step * (1 + 1e-12)) + 1
            if count > MAX_POINTS:
                raise ValueError(f"--{name}: {count} points exceed the limit of {MAX_POINTS}")
            out.extend(lo + i * step for i in range(count))
        elif part:
            out.append(parse_real(part))
    if not out:
        raise ValueError(f"--{name}: no values")
    return out


def _request_or_error(fn, first, x, r, cfg, allow_zero) -> FunctionRequest | OutputRecord:
    try:
        return FunctionRequest(fn, first, x, r, cfg, allow_zero)
    except DomainError as exc:
        names = fn.param_names
        values = dict(zip(("n" if fn is Function.POLYGAMMA else "alpha", "x", "r"), (first, x, r)))
        return OutputRecord(fn.value, {k: values[k] for k in names}, error=f"DomainError: {exc}")


@cli.command("table", epilog=EPILOG)
@click.argument("function", type=FUNCTION_CHOICE)
@click.option("--alpha", help="Values of alpha: list 'a,b' and/or ranges 'start:stop'.")
@click.option("--n", "n", help="Values of n (integers).")
@click.option("--x", "x", required=True, help="Values of x: list and/or ranges.")
@click.option("--r", "r", help="Values of r (integers).")
@click.option("--step", type=float, help="Step for every start:stop range.")
@click.option("--jobs", type=click.IntRange(1), default=1, show_default=True,
              help="Worker processes; output order does not depend on it.")
@_config_options
def table_cmd(function, alpha, n, x, r, step, jobs, series_tol, integer_tol, large_x_switch,
              max_deriv, allow_zero_branch, fmt, timing):
    """Evaluate FUNCTION over the grid of all parameter combinations."""
    fn = Function(function)
    first_spec = _first_param(fn, alpha, n)
    _check_r(fn, r)
    cfg = _make_config(series_tol, integer_tol, large_x_switch, max_deriv)
    try:
        firsts = parse_values(first_spec, step, "n" if fn is Function.POLYGAMMA else "alpha")
        xs = parse_values(x, step, "x")
        rs = [int(v) for v in parse_values(r, step, "r")] if r is not None else [0]
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    total = len(firsts) * len(xs) * len(rs)
    if total > MAX_POINTS:
        raise click.UsageError(f"{total} grid points exceed the limit of {MAX_POINTS}")

    # rows sorted by (first parameter, x, r) before evaluation; workers only fill values
    grid = sorted(set(itertools.product(firsts, xs, rs)))
    items = [_request_or_error(fn, a, xv, rv, cfg, allow_zero_branch) for a, xv, rv in grid]
    pending = [(i, it) for i, it in enumerate(items) if isinstance(it, FunctionRequest)]
    records: list[OutputRecord | None] = [it if isinstance(it, OutputRecord) else None for it in items]
    if jobs > 1 and len(pending) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            done = pool.map(run_request, [req for _, req in pending], chunksize=max(1, len(pending) // (4 * jobs)))
            for (i, _), rec in zip(pending, done):
                records[i] = rec
    else:
        for i, req in pending:
            records[i] = run_request(req)
    _emit(records, fn, fmt, timing)
    sys.exit(EXIT_OK if all(rec.ok for rec in records) else EXIT_CONVERGENCE)


def _json_safe(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    return obj


@cli.command("verify", epilog=EPILOG)
@click.option("--suite", "suites", multiple=True, type=click.Choice(list(SUITES)),
              help="Run only these suites (repeatable); default all.")
@click.option("--tol", type=float, help="Replace every case tolerance.")
@click.option("--failures-only", is_flag=True, help="Print only failing cases.")
def verify_cmd(suites, tol, failures_only):
    """Run the cross-check suites and print one JSON line per case."""
    if tol is not None and not tol > 0:
        raise click.UsageError("--tol must be positive")
    passed = failed = 0
    for case in run_suites(suites or None, tol):
        if case.passed:
            passed += 1
        else:
            failed += 1
        if not (failures_only and case.passed):
            click.echo(json.dumps(_json_safe(case.to_dict())))
    click.echo(f"{passed} passed, {failed} failed", err=True)
    sys.exit(EXIT_OK if failed == 0 else EXIT_VERIFY)


def main(argv=None):
    cli.main(args=argv, prog_name="neutrix-specfun")


if __name__ == "__main__":
    main()
