"""The ``widomkit`` command line.

Every subcommand writes a table as CSV (default) or JSON.  With ``--out``
the table goes to that file, written atomically, next to a
``<out>.manifest.json`` recording the parameters, seed and tool version.
Exit codes: 0 success, 1 invalid input, 2 numerical tolerance failure.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field
from typing import Any, Sequence

import click
import numpy as np

from . import __version__, acceptance, asep, distributions
from ._random import DEFAULT_SEED
from .fredholm import IntervalUnion
from .numerics import CONSTANTS, ks_distance
from .rmt_samplers import (
    EnsembleSpec,
    LogGasConfig,
    brownian_lpp,
    metropolis_log_gas,
    quartic_config,
    sample_gaussian_edge,
    sample_lis,
)

EXIT_OK, EXIT_USAGE, EXIT_TOLERANCE = 0, 1, 2


class ToleranceFailure(Exception):
    pass


@dataclass
class RunManifest:
    subcommand: str
    parameters: dict[str, Any]
    seed: int | None
    output_path: str
    tool_version: str = __version__
    argv: list[str] = field(default_factory=list)
    metrics: dict[str, Any] = field(default_factory=dict)


def _fmt(v) -> Any:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    if isinstance(v, (np.integer,)):
        return int(v)
    return v


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, np.ndarray):
        return _jsonable(v.tolist())
    if isinstance(v, (np.floating, float)):
        return float(v) if math.isfinite(v) else str(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.bool_):
        return bool(v)
    return v


def _render(columns: Sequence[str], rows, fmt: str, meta: dict) -> str:
    if fmt == "json":
        doc = {"columns": list(columns), "rows": _jsonable([list(r) for r in rows]), "meta": _jsonable(meta)}
        return json.dumps(doc, indent=1) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in rows:
        writer.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def _atomic_write(path: str, text: str) -> None:
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".widomkit-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit(ctx: click.Context, columns, rows, metrics: dict | None = None, seed: int | None = None) -> None:
    obj = ctx.find_root().obj
    params = {k: v for k, v in ctx.params.items() if k not in ("out", "fmt")}
    metrics = metrics or {}
    text = _render(columns, rows, ctx.params["fmt"], {"parameters": params, "metrics": metrics})
    out = ctx.params.get("out")
    if out is None:
        click.echo(text, nl=False)
        return
    _atomic_write(out, text)
    manifest = RunManifest(ctx.info_name, params, seed, out, argv=list(obj.get("argv", [])), metrics=metrics)
    _atomic_write(out + ".manifest.json", json.dumps(_jsonable(manifest.__dict__), indent=1, sort_keys=True) + "\n")


# --- option helpers --------------------------------------------------------

def _int_list(ctx, param, value):
    if value is None:
        return None
    try:
        return tuple(int(v) for v in value.split(",") if v.strip() != "")
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got {value!r}") from None


def _float_list(ctx, param, value):
    if value is None:
        return None
    try:
        return tuple(float(v) for v in value.split(","))
    except ValueError:
        raise click.BadParameter(f"expected comma-separated numbers, got {value!r}") from None


def _positive(ctx, param, value):
    if value is not None and not value > 0:
        raise click.BadParameter(f"must be positive, got {value}")
    return value


def _nonneg(ctx, param, value):
    if value is not None and not value >= 0:
        raise click.BadParameter(f"must be nonnegative, got {value}")
    return value


def _probability(ctx, param, value):
    if value is not None and not 0 <= value <= 1:
        raise click.BadParameter(f"must lie in [0, 1], got {value}")
    return value


def _domain(ctx, param, value):
    try:
        return IntervalUnion.parse(value)
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from None


def output_options(f):
    f = click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)(f)
    f = click.option("--out", type=click.Path(dir_okay=False), default=None, help="Output file (default stdout).")(f)
    return f


def seed_option(f):
    return click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)(f)


def reps_option(default):
    return click.option("--reps", type=click.IntRange(min=1), default=default, show_default=True)


BETA = click.option("--beta", type=click.Choice(["1", "2", "4"]), default="2", show_default=True)


@click.group()
@click.version_option(__version__, prog_name="widomkit")
@click.pass_context
def cli(ctx):
    """Random-matrix universal distributions and their stochastic models."""
    ctx.ensure_object(dict)


# --- analytic subcommands --------------------------------------------------

@cli.command("tw-table")
@BETA
@click.option("--from", "start", type=float, default=-8.0, show_default=True)
@click.option("--to", "stop", type=float, default=4.0, show_default=True)
@click.option("--step", type=float, default=0.05, show_default=True, callback=_positive)
@click.option("--tol", type=float, default=1e-6, show_default=True, callback=_positive)
@output_options
@click.pass_context
def tw_table(ctx, beta, start, stop, step, tol, out, fmt):
    """Tracy-Widom CDF; for beta=2 both routes and their difference."""
    beta = int(beta)
    if not stop > start:
        raise click.BadParameter("--to must exceed --from", param_hint="--to")
    if start < -15:
        raise click.BadParameter("the table starts at -15 or later", param_hint="--from")
    if stop > 7.5:
        raise click.BadParameter("the Painleve profile covers t <= 7.5", param_hint="--to")
    grid = distributions._grid(start, stop, step)
    if beta == 2:
        det = distributions.f2_det(grid)
        pii = distributions.tw_cdf(2, grid)
        diff = np.abs(det - pii)
        worst = float(diff.max())
        emit(ctx, ["t", "F2_det", "F2_painleve", "abs_diff"], zip(grid, det, pii, diff), {"max_abs_diff": worst})
        if worst > tol:
            raise ToleranceFailure(f"max abs_diff {worst:.3e} exceeds {tol:g}")
        return EXIT_OK
    values = distributions.tw_cdf(beta, grid)
    emit(ctx, ["t", f"F{beta}_painleve"], zip(grid, values))
    return EXIT_OK


@cli.command("sine-gap")
@click.option("--x-from", "start", type=float, default=0.1, show_default=True, callback=_positive)
@click.option("--x-to", "stop", type=float, default=12.0, show_default=True, callback=_positive)
@click.option("--step", type=float, default=0.1, show_default=True, callback=_positive)
@click.option("--domain", default="-1:1", show_default=True, callback=_domain, help="Intervals a:b,c:d.")
@output_options
@click.pass_context
def sine_gap(ctx, start, stop, step, domain, out, fmt):
    """Gap probability P_x of the sine process on an interval union."""
    if not stop > start:
        raise click.BadParameter("--x-to must exceed --x-from", param_hint="--x-to")
    if not domain.is_finite():
        raise click.BadParameter("intervals must be finite", param_hint="--domain")
    grid = distributions._grid(start, stop, step)
    logs = np.array([distributions.log_sine_gap(x, domain) for x in grid])
    ctx.params["domain"] = list(domain.intervals)
    emit(ctx, ["x", "P", "log_P"], zip(grid, np.exp(logs), logs))
    return EXIT_OK


@cli.command("tail-constants")
@click.option("--x", "x", type=float, default=10.0, show_default=True)
@click.option("--t", "t", type=float, default=-10.0, show_default=True)
@click.option("--tol", type=float, default=1e-2, show_default=True, callback=_positive)
@output_options
@click.pass_context
def tail_constants(ctx, x, t, tol, out, fmt):
    """Tail residuals of the sine and Airy gap probabilities and their limits."""
    if x < 4:
        raise click.BadParameter("needs x >= 4", param_hint="--x")
    if not -15 <= t <= -6:
        raise click.BadParameter("needs -15 <= t <= -6", param_hint="--t")
    rows = [
        ("sine", x, distributions.tail_residual_sine(x), CONSTANTS.c0_sine),
        ("airy", t, distributions.tail_residual_airy(t), CONSTANTS.c0_airy),
    ]
    rows = [(k, a, r, c, abs(r - c)) for k, a, r, c in rows]
    emit(ctx, ["kernel", "argument", "residual", "constant", "abs_diff"], rows,
         {"zeta_prime_minus_one": CONSTANTS.zeta_prime_minus_one})
    worst = max(r[-1] for r in rows)
    if worst > tol:
        raise ToleranceFailure(f"residual off its constant by {worst:.3e} > {tol:g}")
    return EXIT_OK


# --- sampling subcommands --------------------------------------------------

@cli.command("sample-gue")
@BETA
@click.option("--n", "n", type=click.IntRange(min=2), default=100, show_default=True)
@reps_option(5000)
@seed_option
@output_options
@click.pass_context
def sample_gue(ctx, beta, n, reps, seed, out, fmt):
    """Edge-scaled largest eigenvalues of a Gaussian ensemble."""
    beta = int(beta)
    batch = sample_gaussian_edge(EnsembleSpec(beta, n), reps, seed)
    metrics = {"mean": batch.mean, "var": batch.var}
    if beta in (1, 2):
        metrics["ks_to_tracy_widom"] = ks_distance(batch.values, distributions.tw_table(beta))
    emit(ctx, ["rep", "scaled_lambda_max"], enumerate(batch.values), metrics, seed)
    return EXIT_OK


@cli.command("sample-loggas")
@BETA
@click.option("--n", "n", type=click.IntRange(min=1), default=2, show_default=True)
@click.option("--coeffs", callback=_float_list, default="0,1", show_default=True,
              help="t_1,...,t_2m of V(x) = sum t_k x^k.")
@click.option("--quartic-t", type=float, default=None, callback=_positive,
              help="Use the quartic x^4/(4t^2) + (1-2/t) x^2 with N V scaling.")
@click.option("--n-scaled/--no-n-scaled", default=False, show_default=True)
@click.option("--sweeps", type=click.IntRange(min=50), default=400, show_default=True)
@reps_option(1000)
@seed_option
@output_options
@click.pass_context
def sample_loggas(ctx, beta, n, coeffs, quartic_t, n_scaled, sweeps, reps, seed, out, fmt):
    """Metropolis samples of a log-gas with a polynomial potential."""
    beta = int(beta)
    try:
        config = quartic_config(quartic_t, n, beta) if quartic_t else LogGasConfig(beta, n, coeffs, n_scaled=n_scaled)
    except ValueError as exc:
        raise click.BadParameter(str(exc), param_hint="--coeffs") from None
    batch = metropolis_log_gas(config, sweeps, reps, seed)
    cols = ["rep"] + [f"lambda_{j + 1}" for j in range(n)]
    emit(ctx, cols, ([i, *row] for i, row in enumerate(batch.values)), batch.meta, seed)
    return EXIT_OK


@cli.command("lis")
@click.option("--n", "n", type=click.IntRange(min=1), default=10_000, show_default=True)
@reps_option(2000)
@seed_option
@output_options
@click.pass_context
def lis(ctx, n, reps, seed, out, fmt):
    """Longest increasing subsequences of uniform random permutations."""
    batch = sample_lis(n, reps, seed)
    metrics = {"mean_over_sqrt_n": batch.mean / math.sqrt(n),
               "ks_to_F2": ks_distance(batch.meta["scaled"], distributions.tw_table(2))}
    emit(ctx, ["rep", "l_n", "scaled"], zip(range(reps), batch.values.astype(int), batch.meta["scaled"]), metrics, seed)
    return EXIT_OK


@cli.command("brownian-lpp")
@click.option("--n", "n", type=click.IntRange(min=1), default=10, show_default=True)
@click.option("--t", "t", type=float, default=1.0, show_default=True, callback=_positive)
@click.option("--steps", type=click.IntRange(min=1000), default=4000, show_default=True)
@reps_option(2000)
@seed_option
@output_options
@click.pass_context
def brownian(ctx, n, t, steps, reps, seed, out, fmt):
    """Last-passage values M / sqrt(t) of N Brownian motions."""
    batch = brownian_lpp(n, t, steps, reps, seed)
    emit(ctx, ["rep", "M_over_sqrt_t"], enumerate(batch.values), {"mean": batch.mean, "var": batch.var}, seed)
    return EXIT_OK


# --- ASEP subcommands ------------------------------------------------------

@cli.command("asep-exact")
@click.option("--p", type=float, required=True, callback=_probability)
@click.option("--y", required=True, callback=_int_list, help="Initial positions, e.g. 0,1.")
@click.option("--x", required=True, callback=_int_list, help="Final positions, e.g. -1,2.")
@click.option("--t", "t", type=float, required=True, callback=_nonneg)
@click.option("--radius", type=float, default=None, callback=_positive)
@click.option("--nodes", type=click.IntRange(min=asep.MIN_NODES), default=None)
@output_options
@click.pass_context
def asep_exact(ctx, p, y, x, t, radius, nodes, out, fmt):
    """Exact transition probability from the permutation-sum formula."""
    if len(x) != len(y) or not y:
        raise click.BadParameter("--x and --y need the same, nonzero length", param_hint="--x")
    if len(y) > 6:
        raise click.BadParameter("at most 6 particles", param_hint="--y")
    for name, v in (("--y", y), ("--x", x)):
        if any(a >= b for a, b in zip(v, v[1:])):
            raise click.BadParameter("positions must be strictly increasing", param_hint=name)
    contour = None
    if radius is not None or nodes is not None:
        base = asep.default_contour(max(p, 1 - p), n_particles=len(y))
        contour = asep.ContourSpec(radius or base.radius, nodes or base.m_nodes)
    res = asep.transition_probability(y, x, t, p, contour=contour)
    metrics = {"imag_residue": res.imag, "method": res.method, "radius": res.contour.radius,
               "m_nodes": res.contour.m_nodes}
    emit(ctx, ["probability", "imag_residue"], [(res.value, res.imag)], metrics)
    if res.imag > asep.IMAG_TOL:
        raise ToleranceFailure(f"imaginary residue {res.imag:.2e} exceeds {asep.IMAG_TOL:g}")
    return EXIT_OK


@cli.command("asep-sim")
@click.option("--p", type=float, required=True, callback=_probability)
@click.option("--y", required=True, callback=_int_list)
@click.option("--t", "t", type=float, required=True, callback=_nonneg)
@reps_option(1000)
@seed_option
@output_options
@click.pass_context
def asep_sim(ctx, p, y, t, reps, seed, out, fmt):
    """Final configurations of independent simulations."""
    try:
        config = asep.AsepConfig(p, asep.Explicit(y))
    except ValueError as exc:
        raise click.BadParameter(str(exc), param_hint="--y") from None
    pos = asep.simulate_positions(config, t, reps, seed)
    cols = ["rep"] + [f"x_{j + 1}" for j in range(len(y))]
    emit(ctx, cols, ([i, *row] for i, row in enumerate(pos.tolist())), None, seed)
    return EXIT_OK


@cli.command("asep-limit")
@click.option("--p", type=float, default=0.0, show_default=True, callback=_probability)
@click.option("--init", "init", type=click.Choice(["step", "bernoulli"]), default="step", show_default=True)
@click.option("--rho", type=float, default=0.5, show_default=True)
@click.option("--sigma", type=float, default=0.25, show_default=True)
@click.option("--t", "t", type=float, default=100.0, show_default=True, callback=_positive)
@click.option("--width", type=int, default=None, help="Initial window (default 4t).")
@reps_option(2000)
@seed_option
@output_options
@click.pass_context
def asep_limit(ctx, p, init, rho, sigma, t, width, reps, seed, out, fmt):
    """Scaled position of the m-th particle, m = sigma t, at time t / (q - p)."""
    if not p < 0.5:
        raise click.BadParameter("the limit law needs p < q", param_hint="--p")
    if not 0 < sigma < 1:
        raise click.BadParameter("sigma must lie in (0, 1)", param_hint="--sigma")
    if not 0 < rho <= 1:
        raise click.BadParameter("rho must lie in (0, 1]", param_hint="--rho")
    width = int(math.ceil(4 * t)) if width is None else width
    if width < 4 * t:
        raise click.BadParameter("the window must be at least 4t wide", param_hint="--width")
    m = max(1, int(round(sigma * t)))
    initial = asep.Step(width) if init == "step" else asep.Bernoulli(rho, width)
    batch = asep.marginal_position_samples(asep.AsepConfig(p, initial), m, t, reps, seed)
    f2, f1 = distributions.tw_table(2), distributions.tw_table(1)
    metrics = {"m": m, "ks_to_F2": ks_distance(batch.values, f2),
               "ks_to_F1_squared": ks_distance(batch.values, lambda s: f1(s) ** 2)}
    emit(ctx, ["rep", "x_m", "scaled"], zip(range(reps), batch.meta["raw"].astype(int), batch.values), metrics, seed)
    return EXIT_OK


@cli.command("selftest")
@click.option("--only", callback=_int_list, default=None, help="Comma-separated criterion numbers.")
@seed_option
@output_options
@click.pass_context
def selftest(ctx, only, seed, out, fmt):
    """Run the acceptance criteria; exit 2 if any fails."""
    if only is not None and any(n not in range(1, 14) for n in only):
        raise click.BadParameter("criteria are numbered 1 to 13", param_hint="--only")
    results = acceptance.run_all(seed, only, echo=lambda s: click.echo(s, err=True))
    rows = [(r.number, r.title, r.passed, r.summary, r.seconds) for r in results]
    emit(ctx, ["criterion", "title", "passed", "summary", "seconds"], rows,
         {"failed": [r.number for r in results if not r.passed]}, seed)
    return EXIT_OK if all(r.passed for r in results) else EXIT_TOLERANCE


def run(argv: Sequence[str] | None = None) -> int:
    """Entry point returning the exit code instead of exiting."""
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        rv = cli.main(args=argv, prog_name="widomkit", standalone_mode=False, obj={"argv": argv})
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.UsageError as exc:
        exc.show()
        return EXIT_USAGE
    except click.Abort:
        return EXIT_USAGE
    except ToleranceFailure as exc:
        click.echo(f"tolerance failure: {exc}", err=True)
        return EXIT_TOLERANCE
    except (ValueError, asep.WindowError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_USAGE
    except ArithmeticError as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        return EXIT_TOLERANCE
    return rv if isinstance(rv, int) else EXIT_OK


def main() -> None:
    sys.exit(run())
