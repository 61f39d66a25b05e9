"""Command-line front end.

Subcommands cover frontier estimation from a returns CSV, the three solvers,
the equivalence mappings, inefficiency probabilities, efficiency tests,
power curves, figure datasets and the Monte Carlo cross-check.  Output is
JSON or CSV with all numbers at 9 significant digits; identical inputs give
byte-identical output.  Exit codes: 0 success, 1 validation error, 2 numeric
failure.
"""

from __future__ import annotations

import csv as _csv
import io
import json
import math
import sys

import click
import numpy as np

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

from . import mc_oracle
from .equivalence import map_m_to_mvu, map_qu_to_mvu
from .errors import NumericError, ParseError, SampleTooSmallError, ValidationError
from .estimation import EstimatedFrontier, ReturnSample, estimate_frontier, sample_moments
from .inference import (
    lambda_m,
    lambda_qu,
    power_lambda,
    prob_inefficient_lambda,
    test_m_efficiency,
    test_qu_efficiency,
)
from .moments import FrontierParams
from .reference import FIGURE_SLOPES, ILLUSTRATION_FRONTIER, MSCI_FRONTIER
from .solvers import gmv_weights, solve_markowitz, solve_mvu, solve_qu

DEFAULT_SEED = 20_240_801
SEED_ENV_VAR = "MVEQUIV_SEED"


# ---------------------------------------------------------------------------
# input handling


def ingest_returns(path: str) -> ReturnSample:
    """Read a returns CSV: header of asset names, one period per row,
    decimal returns (0.014 = 1.4%)."""
    sample, _ = ingest_returns_with_names(path)
    return sample


def ingest_returns_with_names(path: str) -> tuple[ReturnSample, list[str]]:
    """Like :func:`ingest_returns` but also returns the header asset names."""
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            reader = _csv.reader(fh)
            rows = list(reader)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise ParseError("empty file")
    header = [cell.strip() for cell in rows[0]]
    k = len(header)
    if k < 2:
        raise ParseError("header must name at least two assets", row=1)
    data = np.empty((len(rows) - 1, k))
    for i, row in enumerate(rows[1:], start=2):
        if len(row) != k:
            raise ParseError(f"expected {k} cells, found {len(row)}", row=i)
        for j, cell in enumerate(row):
            try:
                data[i - 2, j] = float(cell)
            except ValueError:
                raise ParseError(f"non-numeric cell {cell!r}", row=i, column=j + 1) from None
    if data.shape[0] <= k:
        raise SampleTooSmallError(
            f"need more observations than assets: n={data.shape[0]}, k={k}"
        )
    sample = ReturnSample(data)
    return sample, header


# ---------------------------------------------------------------------------
# output handling


def _sig9(value):
    """Round floats to 9 significant digits for stable serialization."""
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        return value
    if isinstance(value, int):
        return value
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if math.isnan(value):
        return "nan"
    return float(f"{value:.9g}")


def _round_rows(rows):
    return [{key: _sig9(val) for key, val in row.items()} for row in rows]


def emit(command: str, params: dict, rows: list[dict], fmt: str, output: str | None):
    payload = {
        "command": command,
        "params": {key: _sig9(val) for key, val in params.items()},
        "results": _round_rows(rows),
    }
    if fmt == "json":
        text = json.dumps(payload, indent=2) + "\n"
    else:
        buf = io.StringIO()
        fieldnames: list[str] = []
        for row in payload["results"]:
            for key in row:
                if key not in fieldnames:
                    fieldnames.append(key)
        writer = _csv.DictWriter(buf, fieldnames=fieldnames, lineterminator="\n")
        writer.writeheader()
        writer.writerows(payload["results"])
        text = buf.getvalue()
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


# ---------------------------------------------------------------------------
# option plumbing


def _load_config_defaults(path: str) -> dict:
    """TOML config: top-level scalars apply to every subcommand, tables named
    after a subcommand apply to it alone."""
    with open(path, "rb") as fh:
        raw = tomllib.load(fh)
    # click matches default_map entries by parameter name, not flag name
    renames = {"n": "n_obs", "k": "k_assets", "mu0": "mu0s", "alpha_tilde": "alpha_tildes"}

    def translate(table: dict) -> dict:
        return {renames.get(key, key): val for key, val in table.items()}

    common = translate({key: val for key, val in raw.items() if not isinstance(val, dict)})
    default_map = {}
    commands = [
        "frontier", "solve", "map", "prob-inefficient",
        "test-efficiency", "power", "emit-figure", "mc-validate",
    ]
    for name in commands:
        default_map[name] = dict(common)
        default_map[name].update(translate(raw.get(name, {})))
    return default_map


_output_options = [
    click.option("--output", type=click.Path(dir_okay=False), default=None,
                 help="Write to this file instead of stdout."),
    click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json",
                 show_default=True, help="Output format."),
]

_frontier_options = [
    click.option("--r-gmv", type=float, default=None, help="Vertex expected return."),
    click.option("--v-gmv", type=float, default=None, help="Vertex variance."),
    click.option("--s-slope", type=float, default=None, help="Frontier slope parameter."),
    click.option("--n", "n_obs", type=int, default=None, help="Sample size behind the estimates."),
    click.option("--k", "k_assets", type=int, default=None, help="Number of assets."),
]


def _add_options(options):
    def wrap(fn):
        for option in reversed(options):
            fn = option(fn)
        return fn

    return wrap


def _estimated_frontier(input_path, r_gmv, v_gmv, s_slope, n_obs, k_assets) -> EstimatedFrontier:
    if input_path is not None:
        return estimate_frontier(ingest_returns(input_path))
    missing = [name for name, val in (
        ("--r-gmv", r_gmv), ("--v-gmv", v_gmv), ("--s-slope", s_slope),
        ("--n", n_obs), ("--k", k_assets),
    ) if val is None]
    if missing:
        raise ValidationError(
            "provide --input or all frontier flags; missing: " + ", ".join(missing)
        )
    return EstimatedFrontier(r_hat=r_gmv, v_hat=v_gmv, s_hat=s_slope, n=n_obs, k=k_assets)


def _frontier_params_only(r_gmv, v_gmv, s_slope) -> FrontierParams:
    if r_gmv is None or v_gmv is None or s_slope is None:
        raise ValidationError("provide --r-gmv, --v-gmv and --s-slope")
    return FrontierParams(r_gmv=r_gmv, v_gmv=v_gmv, s=s_slope)


# ---------------------------------------------------------------------------
# commands


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="TOML file supplying default flag values.")
@click.pass_context
def cli(ctx, config_path):
    """Quadratic portfolio optimizers and exact efficiency inference.

    Returns are decimal throughout (0.014 means 1.4% per period).
    """
    if config_path:
        ctx.default_map = _load_config_defaults(config_path)


@cli.command("frontier")
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False),
              required=True, help="Returns CSV (header row, decimal returns).")
@_add_options(_output_options)
def frontier_cmd(input_path, output, fmt):
    """Estimate the frontier parameters from a returns CSV."""
    ef = _estimated_frontier(input_path, None, None, None, None, None)
    rows = [{"r_gmv": ef.r_hat, "v_gmv": ef.v_hat, "s": ef.s_hat, "n": ef.n, "k": ef.k}]
    emit("frontier", {"input": input_path}, rows, fmt, output)


@cli.command("solve")
@click.option("--problem", type=click.Choice(["m", "mvu", "qu", "gmv"]), required=True)
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False),
              required=True, help="Returns CSV to estimate the moments from.")
@click.option("--mu0", type=float, default=None, help="Return target (problem m).")
@click.option("--alpha", type=float, default=None, help="Risk slope (problem mvu).")
@click.option("--alpha-tilde", type=float, default=None, help="Quadratic-utility coefficient (problem qu).")
@_add_options(_output_options)
def solve_cmd(problem, input_path, mu0, alpha, alpha_tilde, output, fmt):
    """Solve one of the three problems at moments estimated from a CSV."""
    sample, names = ingest_returns_with_names(input_path)
    m = sample_moments(sample)
    if problem == "m":
        if mu0 is None:
            raise ValidationError("--mu0 is required for problem m")
        pw = solve_markowitz(m, mu0)
    elif problem == "mvu":
        if alpha is None:
            raise ValidationError("--alpha is required for problem mvu")
        pw = solve_mvu(m, alpha)
    elif problem == "qu":
        if alpha_tilde is None:
            raise ValidationError("--alpha-tilde is required for problem qu")
        pw = solve_qu(m, alpha_tilde)
    else:
        pw = gmv_weights(m)
    rows = [
        {"asset": name, "weight": float(w),
         "expected_return": pw.expected_return, "variance": pw.variance}
        for name, w in zip(names, pw.w)
    ]
    params = {"problem": problem, "input": input_path}
    for key, val in (("mu0", mu0), ("alpha", alpha), ("alpha_tilde", alpha_tilde)):
        if val is not None:
            params[key] = val
    emit("solve", params, rows, fmt, output)


@cli.command("map")
@_add_options(_frontier_options[:3])
@click.option("--mu0", type=float, default=None)
@click.option("--alpha-tilde", type=float, default=None)
@_add_options(_output_options)
def map_cmd(r_gmv, v_gmv, s_slope, mu0, alpha_tilde, output, fmt):
    """Map a target-return or quadratic-utility problem to its risk slope."""
    f = _frontier_params_only(r_gmv, v_gmv, s_slope)
    if (mu0 is None) == (alpha_tilde is None):
        raise ValidationError("provide exactly one of --mu0 or --alpha-tilde")
    rows = []
    if mu0 is not None:
        res = map_m_to_mvu(f, mu0)
        rows.append({"problem": "m", "target": mu0, "alpha_inv": res.alpha_inv,
                     "alpha": res.alpha, "lambda": res.lam, "efficient": res.efficient})
    else:
        res = map_qu_to_mvu(f, alpha_tilde)
        rows.append({"problem": "qu", "target": alpha_tilde, "alpha_inv": res.alpha_inv,
                     "alpha": res.alpha, "lambda": res.lam, "efficient": res.efficient})
    params = {"r_gmv": f.r_gmv, "v_gmv": f.v_gmv, "s": f.s}
    emit("map", params, rows, fmt, output)


@cli.command("prob-inefficient")
@_add_options(_frontier_options)
@click.option("--mu0", "mu0s", type=float, multiple=True)
@click.option("--alpha-tilde", "alpha_tildes", type=float, multiple=True)
@_add_options(_output_options)
def prob_cmd(r_gmv, v_gmv, s_slope, n_obs, k_assets, mu0s, alpha_tildes, output, fmt):
    """Exact probability that an estimated solution is inefficient."""
    f = _frontier_params_only(r_gmv, v_gmv, s_slope)
    if n_obs is None or k_assets is None:
        raise ValidationError("provide --n and --k")
    if not mu0s and not alpha_tildes:
        raise ValidationError("provide at least one --mu0 or --alpha-tilde")
    rows = []
    for mu0 in mu0s:
        lam = lambda_m(f, mu0)
        rows.append({"problem": "m", "target": mu0, "lambda": lam,
                     "probability": prob_inefficient_lambda(lam, f.s, n_obs, k_assets)})
    for at in alpha_tildes:
        lam = lambda_qu(f, at)
        rows.append({"problem": "qu", "target": at, "lambda": lam,
                     "probability": prob_inefficient_lambda(lam, f.s, n_obs, k_assets)})
    params = {"r_gmv": f.r_gmv, "v_gmv": f.v_gmv, "s": f.s, "n": n_obs, "k": k_assets}
    emit("prob-inefficient", params, rows, fmt, output)


def run_efficiency_procedure(ef: EstimatedFrontier, mu0_grid, alpha_tilde_grid, beta):
    """Test every grid value against the estimated frontier at level beta."""
    rows = []
    for mu0 in mu0_grid:
        res = test_m_efficiency(ef, mu0, beta)
        rows.append({
            "problem": "m", "target": float(mu0), "statistic": res.statistic,
            "critical_value": res.critical_value, "p_value": res.p_value,
            "accept_efficiency": res.accept_efficiency,
        })
    for at in alpha_tilde_grid:
        res = test_qu_efficiency(ef, at, beta)
        rows.append({
            "problem": "qu", "target": float(at), "statistic": res.statistic,
            "critical_value": res.critical_value, "p_value": res.p_value,
            "accept_efficiency": res.accept_efficiency,
        })
    return rows


@cli.command("test-efficiency")
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="Returns CSV; alternative to the frontier flags.")
@_add_options(_frontier_options)
@click.option("--mu0", "mu0s", type=float, multiple=True)
@click.option("--alpha-tilde", "alpha_tildes", type=float, multiple=True)
@click.option("--beta", type=float, default=0.05, show_default=True,
              help="Significance level.")
@_add_options(_output_options)
def test_cmd(input_path, r_gmv, v_gmv, s_slope, n_obs, k_assets, mu0s, alpha_tildes,
             beta, output, fmt):
    """Exact one-sided efficiency tests over grids of targets."""
    ef = _estimated_frontier(input_path, r_gmv, v_gmv, s_slope, n_obs, k_assets)
    if not mu0s and not alpha_tildes:
        raise ValidationError("provide at least one --mu0 or --alpha-tilde")
    rows = run_efficiency_procedure(ef, mu0s, alpha_tildes, beta)
    params = {"r_gmv": ef.r_hat, "v_gmv": ef.v_hat, "s": ef.s_hat,
              "n": ef.n, "k": ef.k, "beta": beta}
    emit("test-efficiency", params, rows, fmt, output)


@cli.command("power")
@_add_options(_frontier_options)
@click.option("--mu0", "mu0s", type=float, multiple=True, required=True)
@click.option("--beta", type=float, default=0.05, show_default=True)
@_add_options(_output_options)
def power_cmd(r_gmv, v_gmv, s_slope, n_obs, k_assets, mu0s, beta, output, fmt):
    """Exact power of the efficiency test at given return targets."""
    f = _frontier_params_only(r_gmv, v_gmv, s_slope)
    if n_obs is None or k_assets is None:
        raise ValidationError("provide --n and --k")
    rows = []
    for mu0 in mu0s:
        lam = lambda_m(f, mu0)
        rows.append({"mu0": mu0, "lambda": lam,
                     "power": power_lambda(lam, f.s, n_obs, k_assets, beta)})
    params = {"r_gmv": f.r_gmv, "v_gmv": f.v_gmv, "s": f.s,
              "n": n_obs, "k": k_assets, "beta": beta}
    emit("power", params, rows, fmt, output)


# ---------------------------------------------------------------------------
# figure datasets


def _parabola_variance(f_r, f_v, f_s, ret):
    return f_v + (ret - f_r) ** 2 / f_s


def emit_figure_data(figure: int, f: FrontierParams | None = None,
                     ef: EstimatedFrontier | None = None,
                     n: int = 60, k: int = 5, beta: float = 0.05,
                     points: int = 41) -> list[dict]:
    """Plot-ready (x, y, series) rows for the four standard figures."""
    if figure == 1:
        f = f or ILLUSTRATION_FRONTIER
        rows = []
        ret_max = f.r_gmv + 3.0 * math.sqrt(f.s * f.v_gmv)
        for mu0 in np.linspace(0.0, ret_max, points):
            rows.append({"x": _parabola_variance(f.r_gmv, f.v_gmv, f.s, mu0),
                         "y": float(mu0), "series": "m_solution"})
        for at in np.linspace(0.90, 1.10, points):
            ret = f.r_gmv + (1.0 / at - 1.0 - f.r_gmv) * f.s / (1.0 + f.s)
            rows.append({"x": _parabola_variance(f.r_gmv, f.v_gmv, f.s, ret),
                         "y": float(ret), "series": "qu_solution"})
        for ret in np.linspace(f.r_gmv, ret_max, points):
            rows.append({"x": _parabola_variance(f.r_gmv, f.v_gmv, f.s, ret),
                         "y": float(ret), "series": "mvu_solution"})
        return rows
    if figure == 2:
        rows = []
        for s in FIGURE_SLOPES:
            for lam in np.linspace(-0.5, 0.5, points):
                rows.append({"x": float(lam),
                             "y": prob_inefficient_lambda(float(lam), s, n, k),
                             "series": f"s={s:g}"})
        return rows
    if figure == 3:
        rows = []
        for s in FIGURE_SLOPES:
            for lam in np.linspace(-1.0, 3.0, points):
                rows.append({"x": float(lam),
                             "y": power_lambda(float(lam), s, n, k, beta),
                             "series": f"s={s:g}"})
        return rows
    if figure == 4:
        ef = ef or MSCI_FRONTIER
        rows = []
        ret_max = ef.r_hat + 3.0 * math.sqrt(ef.s_hat * ef.v_hat)
        for mu0 in np.linspace(0.0, ret_max, points):
            res = test_m_efficiency(ef, float(mu0), beta)
            series = "m_accepted" if res.accept_efficiency else "m_frontier"
            rows.append({"x": _parabola_variance(ef.r_hat, ef.v_hat, ef.s_hat, mu0),
                         "y": float(mu0), "series": series})
        for at in np.linspace(0.90, 1.10, points):
            res = test_qu_efficiency(ef, float(at), beta)
            ret = ef.r_hat + (1.0 / at - 1.0 - ef.r_hat) * ef.s_hat / (1.0 + ef.s_hat)
            series = "qu_accepted" if res.accept_efficiency else "qu_frontier"
            rows.append({"x": _parabola_variance(ef.r_hat, ef.v_hat, ef.s_hat, ret),
                         "y": float(ret), "series": series})
        return rows
    raise ValidationError(f"figure must be 1, 2, 3 or 4, got {figure}")


@cli.command("emit-figure")
@click.option("--figure", type=click.IntRange(1, 4), required=True)
@_add_options(_frontier_options)
@click.option("--beta", type=float, default=0.05, show_default=True)
@click.option("--points", type=int, default=41, show_default=True,
              help="Grid points per series.")
@_add_options(_output_options)
def figure_cmd(figure, r_gmv, v_gmv, s_slope, n_obs, k_assets, beta, points, output, fmt):
    """Emit the dataset behind one of the standard figures (data, not images)."""
    f = None
    ef = None
    if r_gmv is not None and v_gmv is not None and s_slope is not None:
        if figure == 4:
            ef = EstimatedFrontier(r_hat=r_gmv, v_hat=v_gmv, s_hat=s_slope,
                                   n=n_obs or 60, k=k_assets or 5)
        else:
            f = FrontierParams(r_gmv=r_gmv, v_gmv=v_gmv, s=s_slope)
    rows = emit_figure_data(figure, f=f, ef=ef, n=n_obs or 60, k=k_assets or 5,
                            beta=beta, points=points)
    params = {"figure": figure, "beta": beta, "points": points,
              "n": n_obs or 60, "k": k_assets or 5}
    emit("emit-figure", params, rows, fmt, output)


@cli.command("mc-validate")
@_add_options(_frontier_options)
@click.option("--mu0", "mu0s", type=float, multiple=True, required=True)
@click.option("--reps", type=int, default=10_000, show_default=True)
@click.option("--seed", type=int, envvar=SEED_ENV_VAR, default=DEFAULT_SEED,
              show_default=True, help=f"RNG seed (env {SEED_ENV_VAR}).")
@_add_options(_output_options)
def mc_cmd(r_gmv, v_gmv, s_slope, n_obs, k_assets, mu0s, reps, seed, output, fmt):
    """Cross-check the quadrature probabilities against brute-force simulation."""
    f = _frontier_params_only(r_gmv, v_gmv, s_slope)
    if n_obs is None or k_assets is None:
        raise ValidationError("provide --n and --k")
    truth = mc_oracle.synthesize_moments(f, k_assets, seed)
    cfg = mc_oracle.McConfig(n=n_obs, k=k_assets, reps=reps, seed=seed, truth=truth)
    rows = []
    for mu0 in mu0s:
        lam = lambda_m(f, mu0)
        analytic = prob_inefficient_lambda(lam, f.s, n_obs, k_assets)
        summary = mc_oracle.empirical_prob_inefficient(cfg, mu0=mu0)
        rows.append({
            "mu0": mu0, "lambda": lam, "analytic": analytic,
            "mc_estimate": summary.estimate, "mc_std_error": summary.std_error,
            "mc_failures": summary.failures,
            "within_3se": abs(analytic - summary.estimate) <= 3.0 * summary.std_error,
        })
    params = {"r_gmv": f.r_gmv, "v_gmv": f.v_gmv, "s": f.s,
              "n": n_obs, "k": k_assets, "reps": reps, "seed": seed}
    emit("mc-validate", params, rows, fmt, output)


# ---------------------------------------------------------------------------
# entry points


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except (click.ClickException,) as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        return 1
    except ValidationError as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    except NumericError as exc:
        click.echo(f"numeric failure: {exc}", err=True)
        return 2
    return 0


def run():  # console-script shim
    sys.exit(main())


if __name__ == "__main__":
    run()
