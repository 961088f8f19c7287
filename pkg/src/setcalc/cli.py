import signal
import sys

# Handle Ctrl+C gracefully before any other imports
signal.signal(signal.SIGINT, lambda *_: sys.exit(130))

import click
import typer

from . import catalog
from . import expr as algebra
from . import verify as verify_suites
from .classes import value_at
from .completion import DEFAULT_DEPTH, LipschitzTower, density_approx, embed, from_class, rho_tilde, rho_tilde_tail
from .config import RunConfig, load_config, parse_grid, parse_schedule, set_config_path
from .context import operation
from .envelope import lip_lower_envelope, lip_upper_envelope
from .errors import BadConfig, NotConverged, SetcalcError
from .formatting import format_float, format_interval
from .gradient import clarke_gradient, closure_gradient, gradient_tolerance
from .handler import configure_logging
from .hausdorff import graph_hausdorff
from .io import (
	class_to_dict,
	envelope_rows,
	field_to_dict,
	gradient_plot_rows,
	json_text,
	plot_csv,
	tower_to_json,
	write_text,
)
from .metric import KINDS, class_distance

app = typer.Typer()

GRAD_MODES = ("clarke", "closure", "algebra")

# Common options for commands - these can be placed anywhere in the command line
ENV_OPTION = typer.Option(None, "--env", help="Path to .env file to load")
GRID_OPTION = typer.Option(None, "--grid", help="Domain grid 'a,b,n' (e.g. -1,1,401)")
N_OPTION = typer.Option(None, "--n", help="Node count, keeping the configured interval")
KS_OPTION = typer.Option(None, "--ks", help="k-schedule: comma list or 'geom:<max_exp>'")
DIRS_OPTION = typer.Option(None, "--dirs", help="Direction count for vector metrics")
TOL_OPTION = typer.Option(None, "--tol", help="Tolerance override (otherwise scaled from lip and h)")
OUT_OPTION = typer.Option(None, "--out", "-o", help="Write output to this file instead of stdout")
FORMAT_OPTION = typer.Option(None, "--format", help="Output format: csv or json")
SEED_OPTION = typer.Option(None, "--seed", help="Seed for random families")

# Log settings given to the callback win over the configured ones
_log_override = {"level": None, "format": None}


def _apply_common_options(env: str = None):
	"""Apply common options (--env) before configuration is loaded."""
	if env:
		set_config_path(env)


@app.callback(invoke_without_command=True)
def main_callback(
	ctx: typer.Context,
	env: str = ENV_OPTION,
	log_level: str = typer.Option(None, "--log-level", help="debug, info, warning, error or critical"),
	log_format: str = typer.Option(None, "--log-format", help="json or text log lines on stderr"),
):
	"""setcalc - set-valued classes, Lipschitz envelopes and generalized gradients."""
	_apply_common_options(env)
	_log_override["level"] = log_level
	_log_override["format"] = log_format


def _run_config(
	grid: str = None,
	n: int = None,
	ks: str = None,
	dirs: int = None,
	tol: float = None,
	fmt: str = None,
	seed: int = None,
) -> RunConfig:
	"""Load the configuration, apply command-line overrides and set up logging."""
	cfg = load_config()
	configure_logging(
		_log_override["level"] or cfg.log_level,
		(_log_override["format"] or cfg.log_format).strip().lower(),
	)
	g = parse_grid(grid) if grid else None
	if n is not None:
		base = g or cfg.grid
		g = parse_grid(f"{base.a!r},{base.b!r},{n}")
	if tol is not None and not tol > 0:
		raise BadConfig(f"--tol must be positive, got {tol}")
	return cfg.with_overrides(
		grid=g,
		ks=parse_schedule(ks) if ks else None,
		dirs=dirs,
		tol_rep=tol,
		tol_grad=tol,
		format=fmt.strip().lower() if fmt else None,
		seed=seed,
	)


def _fail(exc: SetcalcError):
	typer.echo(typer.style(f"Error [{exc.subcode}]: {exc.message}", fg=typer.colors.RED), err=True)
	raise typer.Exit(exc.exit_code)


def _emit(text: str, out: str = None):
	if out:
		write_text(out, text)
	else:
		typer.echo(text, nl=False)


def _comments(values: dict):
	return [f"{key}={_text(value)}" for key, value in values.items()]


def _text(value) -> str:
	if isinstance(value, float):
		return format_float(value)
	return str(value)


@app.command()
def envelope(
	fn: str = typer.Option(..., "--fn", help="Catalog name or algebra expression"),
	k: float = typer.Option(..., "--k", help="Lipschitz modulus (positive)"),
	grid: str = GRID_OPTION,
	n: int = N_OPTION,
	tol: float = TOL_OPTION,
	out: str = OUT_OPTION,
	fmt: str = FORMAT_OPTION,
	env: str = ENV_OPTION,
):
	"""Lower and upper k-Lipschitz envelopes of a function, with their graph gap."""
	_apply_common_options(env)
	with operation(area="envelope"):
		try:
			cfg = _run_config(grid=grid, n=n, tol=tol, fmt=fmt)
			f = algebra.evaluate(algebra.parse(fn), cfg.grid)
			lower = lip_lower_envelope(f.lower, k)
			upper = lip_upper_envelope(f.upper, k)
			gap = graph_hausdorff(lower, upper)
		except SetcalcError as e:
			_fail(e)
		tol_rep = cfg.tol_rep if cfg.tol_rep is not None else f.tol_rep
		header = ("x", "f_lower", "f_upper", "env_lower", "env_upper")
		rows = envelope_rows(f, lower, upper)
		if cfg.format == "csv":
			meta = {"fn": fn, "k": float(k), "gap": gap, "tol_rep": tol_rep}
			_emit(plot_csv(rows, header, _comments(meta)), out)
		else:
			doc = {
				"fn": fn,
				"k": float(k),
				"gap": gap,
				"grid": cfg.grid.to_dict(),
				"tolerances": {"tol_rep": tol_rep},
				"rows": [dict(zip(header, (float(v) for v in row))) for row in rows],
			}
			_emit(json_text(doc), out)


@app.command()
def metric(
	fn1: str = typer.Argument(..., help="First function (catalog name or expression)"),
	fn2: str = typer.Argument(..., help="Second function"),
	which: str = typer.Option("s", "--which", help="Metric: s (graph distance) or r (adds the L1 term)"),
	grid: str = GRID_OPTION,
	n: int = N_OPTION,
	ks: str = KS_OPTION,
	tol: float = TOL_OPTION,
	out: str = OUT_OPTION,
	fmt: str = FORMAT_OPTION,
	env: str = ENV_OPTION,
):
	"""Distance between two classes in the s or r metric, with the per-k table."""
	_apply_common_options(env)
	with operation(area="metric"):
		try:
			if which not in KINDS:
				raise BadConfig(f"Unknown metric '{which}'. Expected one of: {', '.join(KINDS)}")
			cfg = _run_config(grid=grid, n=n, ks=ks, tol=tol, fmt=fmt)
			f = algebra.evaluate(algebra.parse(fn1), cfg.grid)
			g = algebra.evaluate(algebra.parse(fn2), cfg.grid)
			report = class_distance(which, f, g, cfg.ks)
		except SetcalcError as e:
			_fail(e)
		tolerances = dict(report.tolerances)
		if cfg.tol_rep is not None:
			tolerances["tol_rep"] = cfg.tol_rep
		if cfg.format == "csv":
			meta = {
				"kind": report.kind,
				"value": report.value,
				"truncation_bound": report.truncation_bound,
				**tolerances,
			}
			rows = [(format_float(k), format_float(lo), format_float(up)) for k, lo, up in report.per_k]
			_emit(plot_csv(rows, ("k", "lower", "upper"), _comments(meta)), out)
		else:
			doc = {"fn1": fn1, "fn2": fn2, "grid": cfg.grid.to_dict(), **report.to_dict()}
			doc["tolerances"] = tolerances
			_emit(json_text(doc), out)


@app.command()
def value(
	fn: str = typer.Argument(..., help="Catalog name or algebra expression"),
	x: float = typer.Argument(..., help="Point of the domain"),
	grid: str = GRID_OPTION,
	n: int = N_OPTION,
	out: str = OUT_OPTION,
	fmt: str = FORMAT_OPTION,
	env: str = ENV_OPTION,
):
	"""Set-valued value [f^-(x), f^+(x)] of a class."""
	_apply_common_options(env)
	with operation(area="value"):
		try:
			cfg = _run_config(grid=grid, n=n, fmt=fmt)
			f = algebra.evaluate(algebra.parse(fn), cfg.grid)
			v = value_at(f, x)
		except SetcalcError as e:
			_fail(e)
		if cfg.format == "csv":
			_emit(plot_csv([(format_float(x), format_float(v.lo), format_float(v.hi))], ("x", "lower", "upper")), out)
		else:
			doc = {
				"fn": fn,
				"x": float(x),
				"value": v.to_list(),
				"text": format_interval(v),
				"tolerances": {"tol_rep": f.tol_rep},
			}
			_emit(json_text(doc), out)


@app.command()
def grad(
	fn: str = typer.Argument(..., help="Catalog name or algebra expression"),
	mode: str = typer.Option("clarke", "--mode", help="clarke, closure or algebra"),
	grid: str = GRID_OPTION,
	n: int = N_OPTION,
	ks: str = KS_OPTION,
	tol: float = TOL_OPTION,
	out: str = OUT_OPTION,
	fmt: str = FORMAT_OPTION,
	env: str = ENV_OPTION,
):
	"""Gradient field of a function as a class, with plot rows (x, lower, upper).

	Closure runs also report their Cauchy diagnostic; when they do not
	converge the diagnostic is still written and the exit code is 4.
	"""
	_apply_common_options(env)
	with operation(area="grad"):
		diagnostic = None
		try:
			if mode not in GRAD_MODES:
				raise BadConfig(f"Unknown gradient mode '{mode}'. Expected one of: {', '.join(GRAD_MODES)}")
			cfg = _run_config(grid=grid, n=n, ks=ks, tol=tol, fmt=fmt)
			node = algebra.parse(fn)
			if mode == "algebra":
				f, field = algebra.gradient(node, cfg.grid)
			else:
				f = algebra.evaluate(node, cfg.grid)
				if mode == "clarke":
					field = clarke_gradient(f)
				else:
					field, diagnostic = closure_gradient(f, cfg.smoothing_schedule(), cfg.ks, cfg.tol_grad)
		except NotConverged as e:
			if cfg.format == "csv":
				_emit(plot_csv([], ("x", "lower", "upper"), _comments(_diagnostic_meta(e.diagnostic))), out)
			else:
				doc = {"fn": fn, "mode": mode, "grid": cfg.grid.to_dict(), "error": e.to_dict()}
				_emit(json_text(doc), out)
			_fail(e)
		except SetcalcError as e:
			_fail(e)
		tolerances = {
			"tol_rep": cfg.tol_rep if cfg.tol_rep is not None else field.first.tol_rep,
			"tol_grad": cfg.tol_grad if cfg.tol_grad is not None else gradient_tolerance(f),
		}
		if cfg.format == "csv":
			meta = {"fn": fn, "mode": mode, **tolerances}
			if diagnostic is not None:
				meta.update(_diagnostic_meta(diagnostic))
			_emit(plot_csv(gradient_plot_rows(field), ("x", "lower", "upper"), _comments(meta)), out)
		else:
			doc = {
				"fn": fn,
				"mode": mode,
				"grid": cfg.grid.to_dict(),
				"function": class_to_dict(f),
				"field": field_to_dict(field),
				"tolerances": tolerances,
			}
			if diagnostic is not None:
				doc["diagnostic"] = diagnostic.to_dict()
			_emit(json_text(doc), out)


def _diagnostic_meta(diagnostic) -> dict:
	if diagnostic is None:
		return {}
	d = diagnostic.to_dict()
	return {
		"converged": d["converged"],
		"gaps": " ".join(format_float(g) for g in d["gaps"]),
		"tol_grad": d["tol_grad"],
	}


@app.command()
def complete(
	fn: str = typer.Argument(..., help="Catalog name or algebra expression"),
	depth: int = typer.Option(DEFAULT_DEPTH, "--depth", help="Number of tower levels"),
	eps: float = typer.Option(None, "--eps", help="Find a base element within eps of the image"),
	other: str = typer.Option(None, "--with", help="Second function to measure rho_tilde against"),
	grid: str = GRID_OPTION,
	n: int = N_OPTION,
	out: str = OUT_OPTION,
	env: str = ENV_OPTION,
):
	"""Image of a class in the completed Lipschitz tower, as JSON with a payload bundle."""
	_apply_common_options(env)
	with operation(area="complete"):
		try:
			cfg = _run_config(grid=grid, n=n)
			if depth < 1:
				raise BadConfig(f"--depth must be at least 1, got {depth}")
			tower = LipschitzTower(cfg.grid)
			f = algebra.evaluate(algebra.parse(fn), cfg.grid)
			x = from_class(tower, f, depth)
			doc, bundle = tower_to_json(x)
			result = {
				"fn": fn,
				"grid": cfg.grid.to_dict(),
				"tolerance": tower.tolerance,
				"element": doc,
				"bundle": bundle,
			}
			if other:
				g = algebra.evaluate(algebra.parse(other), cfg.grid)
				y = from_class(tower, g, depth)
				result["distance"] = {
					"fn": other,
					"rho_tilde": rho_tilde(tower, x, y),
					"tail_bound": rho_tilde_tail(tower, x, y),
				}
			if eps is not None:
				candidate = density_approx(tower, x, eps)
				image = embed(tower, candidate, depth)
				result["density"] = {
					"eps": eps,
					"level": tower.level_of(candidate),
					"distance": rho_tilde(tower, image, x) + rho_tilde_tail(tower, image, x),
				}
		except SetcalcError as e:
			_fail(e)
		_emit(json_text(result), out)


@app.command()
def verify(
	suite: str = typer.Option("all", "--suite", help="core, envelope, metric, gradient, completion, plane or all"),
	grid: str = GRID_OPTION,
	n: int = N_OPTION,
	ks: str = KS_OPTION,
	dirs: int = DIRS_OPTION,
	tol: float = TOL_OPTION,
	seed: int = SEED_OPTION,
	out: str = OUT_OPTION,
	env: str = ENV_OPTION,
):
	"""Run the property suites; exit 0 only when every check passes."""
	_apply_common_options(env)
	with operation(area="verify"):
		try:
			cfg = _run_config(grid=grid, n=n, ks=ks, dirs=dirs, tol=tol, seed=seed)
			report = verify_suites.run(cfg, suite)
		except SetcalcError as e:
			_fail(e)
		_emit(json_text(report.to_dict()), out)
		failures = report.failures()
		if failures:
			for check in failures:
				typer.echo(typer.style(f"FAILED {check.suite}: {check.name} {check.detail}".rstrip(), fg=typer.colors.RED), err=True)
			raise typer.Exit(1)
		typer.echo(typer.style(f"All {len(report.checks)} checks passed.", fg=typer.colors.GREEN), err=True)


@app.command("catalog")
def catalog_cmd(
	fmt: str = FORMAT_OPTION,
	env: str = ENV_OPTION,
):
	"""List the function catalog."""
	_apply_common_options(env)
	with operation(area="catalog"):
		try:
			cfg = _run_config(fmt=fmt)
		except SetcalcError as e:
			_fail(e)
		entries = catalog.list_entries()
		if cfg.format == "json":
			_emit(json_text([e.to_dict() for e in entries]))
			return
		rows = [(e.name, e.description, str(int(e.smooth)), str(int(e.has_gradient))) for e in entries]
		_emit(plot_csv(rows, ("name", "description", "smooth", "has_gradient")))


def main():
	if len(sys.argv) == 1:
		# No arguments: show help
		command = typer.main.get_command(app)
		ctx = click.Context(command)
		typer.echo(command.get_help(ctx), err=True)
		return 0
	try:
		app()
	except typer.Exit:
		raise
	except Exception as e:
		typer.echo(typer.style(
			f"Fatal error: {type(e).__name__}: {e}",
			fg=typer.colors.RED
		), err=True)
		sys.exit(1)

if __name__ == "__main__":
	main()
