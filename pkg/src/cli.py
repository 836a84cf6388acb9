#!/usr/bin/env python3
"""
MapForge CLI - Local Regression Map Estimators
Fit and query local map estimators, simulate random tree cells, evaluate
deviation bounds and run the Monte Carlo verification harness.
"""
import json
import logging
import math
import os
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import typer
import yaml
from rich import box
from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel
from rich.progress import (
    BarColumn,
    Progress,
    SpinnerColumn,
    TaskProgressColumn,
    TextColumn,
    TimeElapsedColumn,
)
from rich.table import Table

# Add src to path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from bounds import (  # noqa: E402
    BoundSpec,
    cart_bound,
    cart_min_leaf_threshold,
    empirical_mass_bounds,
    knn_bound,
    knn_min_neighbors_threshold,
    large_sample_threshold,
    log_sauer,
    optimal_rate_bound,
    pointwise_bound,
    sauer_binomial_sum,
    sauer_bound,
    sup_statistic_bound,
    tree_deviations,
    vapnik_mass_upper,
    variance_term,
    volume_bound,
)
from estimators import EstimatorFactory, shape_profile  # noqa: E402
from experiments import ExperimentConfig, run_experiment  # noqa: E402
from experiments.report import FAIL, PASS  # noqa: E402
from formatters.csv_formatter import (  # noqa: E402
    load_csv,
    load_queries,
    save_csv,
    save_predictions,
    save_raw_rows,
)
from formatters.json_formatter import (  # noqa: E402
    dumps,
    load_model,
    load_partition_tree,
    save_model,
    write_json,
)
from generators.random_trees import (  # noqa: E402
    MondrianParams,
    grow_path,
    mondrian_path,
    volume_invariance_check,
)
from generators.sample_generator import CovariateLaw, NoiseModel, builtin_g, generate  # noqa: E402
from geometry import beta_to_gamma, diameter, gamma_to_beta, shape_ratio, volume  # noqa: E402

# Initialize CLI app and console
app = typer.Typer(
    name="mapforge",
    help="MapForge - local regression map estimators and their Monte Carlo verification",
    add_completion=False,
)
console = Console()
err_console = Console(stderr=True)

logger = logging.getLogger("mapforge")

EXIT_OK = 0
EXIT_VERDICT = 1
EXIT_USAGE = 2


def setup_logging(verbose: bool) -> None:
    """Route library logs through rich on stderr."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=err_console, show_path=False)],
        force=True,
    )


def usage_error(message: str) -> typer.Exit:
    err_console.print(f"[red]Error:[/red] {message}")
    return typer.Exit(EXIT_USAGE)


def load_config(config_path: str) -> dict:
    """Load an experiment configuration from a YAML or JSON file"""
    try:
        with open(config_path, "r", encoding="utf-8") as f:
            cfg = yaml.safe_load(f) or {}
    except (OSError, yaml.YAMLError) as e:
        raise usage_error(f"cannot load config file: {e}")
    if not isinstance(cfg, dict):
        raise usage_error(f"config file {config_path} must hold a mapping")
    return cfg


def parse_floats(text: Optional[str], name: str) -> Optional[List[float]]:
    if text is None:
        return None
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise usage_error(f"{name} must be a comma-separated list of numbers, got '{text}'")


def display_banner():
    """Display MapForge banner"""
    banner = """
[bold cyan]
╔═══════════════════════════════════════════════════════════╗
║                                                           ║
║                        MapForge                           ║
║                                                           ║
║          Local Regression Map Estimators v0.1             ║
║                                                           ║
╚═══════════════════════════════════════════════════════════╝
[/bold cyan]
"""
    err_console.print(banner)


def display_report(report) -> None:
    """Summarize an experiment report as a table"""
    table = Table(title=f"Experiment: {report.experiment}", box=box.ROUNDED)
    table.add_column("Result", style="cyan")
    table.add_column("Statistic", justify="right", style="magenta")
    table.add_column("SE", justify="right")
    table.add_column("Bound / Target", justify="right", style="yellow")
    table.add_column("Verdict", justify="center")
    table.add_column("Rule")

    def fmt(value: Optional[float]) -> str:
        return "-" if value is None else f"{value:.6g}"

    for row in report.results:
        colour = {PASS: "green", FAIL: "red"}.get(row.verdict, "blue")
        table.add_row(
            row.name,
            f"{row.statistic} {fmt(row.value)}",
            fmt(row.se),
            fmt(row.reference),
            f"[{colour}]{row.verdict}[/{colour}]",
            row.rule,
        )
    err_console.print(table)


@app.callback()
def main_options(
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Show debug logs on stderr"),
):
    """MapForge - local regression map estimators and their Monte Carlo verification"""
    setup_logging(verbose)


@app.command()
def sample(
    d: int = typer.Option(1, "--d", help="Covariate dimension"),
    n: int = typer.Option(1000, "--n", help="Sample size"),
    g: str = typer.Option("sum_coords", "--g", help="Regression function: sum_coords, constant_c, sine_product"),
    constant: float = typer.Option(3.0, "--c", help="Value of constant_c"),
    noise: str = typer.Option("gaussian", "--noise", help="gaussian, bounded-uniform, heteroscedastic-gaussian"),
    sigma2: float = typer.Option(0.25, "--sigma2", help="Sub-Gaussian noise parameter"),
    law: str = typer.Option("uniform-cube", "--law", help="Covariate law: uniform-cube or density-floor"),
    floor: float = typer.Option(1.0, "--floor", help="Density floor b of the density-floor law"),
    seed: Optional[int] = typer.Option(None, "--seed", "-s", help="Random seed (required)"),
    output: str = typer.Option("sample.csv", "--output", "-o", help="CSV file to write"),
):
    """
    Draw a synthetic regression sample Y = g(X) + noise on [0,1]^d and write it as CSV.

    Example:

        mapforge sample --d 2 --n 5000 --sigma2 0.25 --seed 7 -o data.csv
    """
    if seed is None:
        raise usage_error("--seed is required")
    try:
        ds = generate(CovariateLaw(law, d, floor), builtin_g(g, d, constant), NoiseModel(noise, sigma2), n, seed)
    except (ValueError, KeyError) as e:
        raise usage_error(str(e))
    path = save_csv(ds, output)
    err_console.print(f"[bold green]Wrote[/bold green] n={ds.n} d={ds.d} to {path}")


@app.command()
def fit(
    data: str = typer.Option(..., "--data", help="Training CSV with header x1..xd,y"),
    d: int = typer.Option(..., "--d", help="Covariate dimension"),
    estimator: str = typer.Option("cart", "--estimator", "-e", help="knn, grid or cart"),
    k: Optional[int] = typer.Option(None, "--k", help="Neighbor count of the k-NN ball"),
    m: Optional[int] = typer.Option(None, "--m", help="Minimal points per child of the CART-like tree"),
    beta: float = typer.Option(2.0, "--beta", help="Shape-regularity constant (>= 2) of the CART-like tree"),
    cells_per_axis: Optional[int] = typer.Option(None, "--cells-per-axis", help="Fixed grid resolution"),
    literal_fallback: bool = typer.Option(False, "--literal-fallback", help="Halve the largest side when no admissible split exists"),
    output: str = typer.Option("model.json", "--output", "-o", help="Model JSON to write"),
):
    """
    Fit a local map estimator (k-NN ball, fixed grid, or beta-shape-regular CART-like tree) and save it as JSON.
    """
    params: Dict[str, Any]
    if estimator == "knn":
        params = {"k": k}
    elif estimator == "cart":
        params = {"m": m, "beta": beta, "literal_fallback": literal_fallback}
    elif estimator == "grid":
        params = {"cells_per_axis": cells_per_axis}
    else:
        raise usage_error(
            f"Unknown estimator: '{estimator}'. Available estimators: {', '.join(EstimatorFactory.get_all_estimators())}"
        )
    missing = [key for key, value in params.items() if value is None]
    if missing:
        raise usage_error(f"{estimator} needs --{missing[0].replace('_', '-')}")
    try:
        ds = load_csv(data, d)
        model = EstimatorFactory.get_estimator(estimator, **params).fit(ds)
    except OSError as e:
        raise usage_error(f"cannot read {data}: {e}")
    except ValueError as e:
        raise usage_error(str(e))
    path = save_model(model, output)
    summary = f"[bold]Estimator:[/bold] {estimator}\n[bold]Parameters:[/bold] {model.params()}\n[bold]n:[/bold] {ds.n}  [bold]d:[/bold] {ds.d}"
    if estimator == "cart":
        summary += f"\n[bold]Leaves:[/bold] {len(model.tree.leaves())}  [bold]Depth:[/bold] {model.tree.depth}"
    err_console.print(Panel(summary, title="[bold]Fitted Model[/bold]", border_style="green"))
    err_console.print(f"[bold green]Model:[/bold green] {path}")


@app.command()
def predict(
    model: str = typer.Option(..., "--model", help="Model JSON written by fit"),
    queries: str = typer.Option(..., "--queries", help="CSV of query points with header x1..xd"),
    output: Optional[str] = typer.Option(None, "--output", "-o", help="CSV to write (prints to stdout otherwise)"),
):
    """
    Evaluate the local average of a fitted model at query points (0 for an empty cell).
    """
    try:
        estimator = load_model(model)
        X = load_queries(queries, estimator.dataset.d)
        values = estimator.predict(X)
    except OSError as e:
        raise usage_error(f"cannot read input: {e}")
    except (ValueError, KeyError) as e:
        raise usage_error(str(e))
    if output:
        save_predictions(X, values, output)
        err_console.print(f"[bold green]Predictions:[/bold green] {output}")
        return
    for row, value in zip(X, values):
        console.print(",".join(format(float(v), ".17g") for v in [*row, value]), highlight=False, markup=False, soft_wrap=True)


@app.command("simulate-tree")
def simulate_tree(
    kind: str = typer.Option("uniform", "--kind", help="uniform, centered or mondrian"),
    d: int = typer.Option(2, "--d", help="Dimension"),
    depth: int = typer.Option(10, "--N", "--depth", help="Number of splits (uniform and centered trees)"),
    lifetime: float = typer.Option(1.0, "--lifetime", help="Mondrian lifetime"),
    x: Optional[str] = typer.Option(None, "--x", help="Query point as comma-separated coordinates (default: cube center)"),
    seed: Optional[int] = typer.Option(None, "--seed", "-s", help="Random seed (required)"),
    output: Optional[str] = typer.Option(None, "--output", "-o", help="JSON file to write (prints otherwise)"),
):
    """
    Follow a purely random tree (uniform, centered, Mondrian) along the path to x; emit the split sequence and the volume invariance check.
    """
    if seed is None:
        raise usage_error("--seed is required")
    point = parse_floats(x, "--x") or [0.5] * d
    try:
        if kind == "mondrian":
            cell, seq = mondrian_path(MondrianParams(lifetime, d), point, seed)
        else:
            cell, seq = grow_path(kind, point, d, depth, seed)
    except (ValueError, KeyError) as e:
        raise usage_error(str(e))
    payload = {
        "kind": kind,
        "d": d,
        "x": point,
        "seed": seed,
        "N": len(seq),
        "cell": {**cell.to_dict(), "widths": list(cell.widths)},
        "volume": volume(cell),
        "diameter": diameter(cell),
        "shape_ratio": shape_ratio(cell) if min(cell.widths) > 0 else None,
        "volume_invariance": volume_invariance_check(cell, seq),
        "splits": seq.to_dict(),
    }
    if kind == "mondrian":
        payload["lifetime"] = lifetime
    else:
        payload["depth"] = depth
    if output:
        write_json(payload, output)
        err_console.print(f"[bold green]Split sequence:[/bold green] {output}")
    else:
        console.print(dumps(payload), end="", highlight=False, markup=False, soft_wrap=True)


@app.command()
def shapecheck(
    model: str = typer.Option(..., "--model", help="CART-like model JSON or bare tree JSON"),
    beta: Optional[float] = typer.Option(None, "--beta", help="Shape constant to audit against (default: the tree's)"),
    output: Optional[str] = typer.Option(None, "--output", "-o", help="JSON file for the profile"),
):
    """
    Audit the beta-shape-regularity (h+/h-) and gamma-shape-regularity (diam^d/volume) profile of a partition tree.
    """
    try:
        tree = load_partition_tree(model)
        profile = shape_profile(tree, beta)
    except OSError as e:
        raise usage_error(f"cannot read {model}: {e}")
    except ValueError as e:
        raise usage_error(str(e))
    table = Table(title="Leaf Shape Profile", box=box.ROUNDED)
    table.add_column("Ratio", style="cyan")
    table.add_column("Min", justify="right")
    table.add_column("Median", justify="right")
    table.add_column("Max", justify="right")
    table.add_row("beta (h+/h-)", f"{profile.beta_min:.6g}", f"{profile.beta_median:.6g}", f"{profile.beta_max:.6g}")
    table.add_row("gamma (diam^d/vol)", f"{profile.gamma_min:.6g}", f"{profile.gamma_median:.6g}", f"{profile.gamma_max:.6g}")
    console.print(table)
    audited = tree.beta if beta is None else beta
    console.print(f"leaves={profile.leaves} beta={audited:g} all_beta_sr={profile.all_beta_sr}", highlight=False, markup=False, soft_wrap=True)
    if output:
        write_json(profile.to_dict(), output)
    if not profile.all_beta_sr:
        raise typer.Exit(EXIT_VERDICT)


BOUND_FORMULAS: Dict[str, Callable[[Dict[str, Any]], Any]] = {
    "sauer": lambda p: sauer_bound(p["n"], p["v"]),
    "log-sauer": lambda p: log_sauer(p["n"], p["v"]),
    "sauer-sum": lambda p: sauer_binomial_sum(p["n"], p["v"]),
    "variance": lambda p: variance_term(p["spec"](), p["count"]),
    "large-sample": lambda p: large_sample_threshold(p["n"], p["v"], p["delta"]),
    "cart-min-leaf": lambda p: cart_min_leaf_threshold(p["n"], p["d"], p["delta"]),
    "knn-min-k": lambda p: knn_min_neighbors_threshold(p["n"], p["d"], p["delta"]),
    "mass": lambda p: empirical_mass_bounds(p["n"], p["p"], p["delta"], p["shatter_log"]).to_dict(),
    "vapnik-upper": lambda p: vapnik_mass_upper(p["n"], p["mass"], p["delta"], p["shatter_log"]),
    "sup-statistic": lambda p: sup_statistic_bound(p["sigma2"], p["shatter_log"], p["delta"]),
    "pointwise": lambda p: pointwise_bound(p["spec"](), p["count"], p["diam"]),
    "volume": lambda p: volume_bound(p["spec"](), p["density"], p["volume"], p["diam"]),
    "optimal-rate": lambda p: optimal_rate_bound(p["spec"](), p["gamma"]),
    "knn": lambda p: knn_bound(p["spec"](), p["k"], p["density"]),
    "cart": lambda p: cart_bound(p["spec"](), p["m"], p["beta"], p["density"]),
    "beta-to-gamma": lambda p: beta_to_gamma(p["beta"], p["d"]),
    "gamma-to-beta": lambda p: gamma_to_beta(p["gamma"]),
    "uniform-diam-upper": lambda p: tree_deviations.uniform_diameter_upper(p["d"], p["depth"], p["spread"]).to_dict(),
    "uniform-diam-lower": lambda p: tree_deviations.uniform_diameter_lower(p["d"], p["depth"], p["spread"]).to_dict(),
    "uniform-volume-lower": lambda p: tree_deviations.uniform_volume_lower(p["depth"], p["alpha"]).to_dict(),
    "uniform-volume-upper": lambda p: tree_deviations.uniform_volume_upper(p["depth"], p["alpha"]).to_dict(),
    "centered-diam-upper": lambda p: tree_deviations.centered_diameter_upper(p["d"], p["depth"], p["alpha"]).to_dict(),
    "centered-diam-lower": lambda p: tree_deviations.centered_diameter_lower(p["d"], p["depth"], p["alpha"]).to_dict(),
    "centered-volume": lambda p: tree_deviations.centered_volume(p["depth"], p["alpha"]).to_dict(),
    "not-shape-regular": lambda p: tree_deviations.not_shape_regular(p["kind"], p["d"], p["depth"]).to_dict(),
    "mondrian-ratio": lambda p: tree_deviations.mondrian_ratio(p["d"], p["delta"]).to_dict(),
}


@app.command()
def bounds(
    formula: str = typer.Option(..., "--formula", "-f", help=f"One of: {', '.join(BOUND_FORMULAS)}"),
    n: int = typer.Option(1000, "--n", help="Sample size"),
    v: int = typer.Option(1, "--v", help="VC dimension"),
    d: int = typer.Option(1, "--d", help="Dimension"),
    delta: float = typer.Option(0.05, "--delta", help="Confidence level"),
    sigma2: float = typer.Option(1.0, "--sigma2", help="Noise parameter"),
    kappa: float = typer.Option(1.0, "--kappa", help="Minimal-mass constant"),
    density: float = typer.Option(1.0, "--density", help="Covariate density (or its floor b)"),
    lipschitz: float = typer.Option(0.0, "--lipschitz", help="Lipschitz constant L"),
    count: int = typer.Option(1, "--count", help="Points in the cell, n P_n(V)"),
    diam: float = typer.Option(0.0, "--diam", help="Cell diameter"),
    cell_volume: float = typer.Option(1.0, "--volume", help="Cell volume"),
    k: int = typer.Option(1, "--k", help="Neighbor count"),
    m: int = typer.Option(1, "--m", help="Leaf size"),
    beta: float = typer.Option(2.0, "--beta", help="Shape constant beta"),
    gamma: float = typer.Option(1.0, "--gamma", help="Shape constant gamma"),
    p: float = typer.Option(0.5, "--p", help="True mass of a set"),
    mass: float = typer.Option(0.5, "--mass", help="Empirical mass of a set"),
    shatter_log: float = typer.Option(0.0, "--shatter-log", help="log of a shattering coefficient"),
    depth: int = typer.Option(10, "--N", "--depth", help="Tree depth"),
    alpha: float = typer.Option(2.0, "--alpha", help="Exponent alpha of tree tail events"),
    spread: float = typer.Option(0.4, "--spread", help="Exponent beta of uniform-tree diameter events"),
    kind: str = typer.Option("uniform", "--kind", help="Tree kind for not-shape-regular"),
):
    """
    Evaluate a deviation or complexity bound: Sauer, variance envelope, (delta,n)-large threshold, mass envelopes, k-NN / CART / volume / optimal-rate bounds, random-tree tails.
    """
    if formula not in BOUND_FORMULAS:
        raise usage_error(f"Unknown formula: '{formula}'. Available formulas: {', '.join(BOUND_FORMULAS)}")
    params = dict(locals())
    params["volume"] = cell_volume
    params["spec"] = lambda: BoundSpec(
        n=n, delta=delta, v=v, sigma2=sigma2, kappa=kappa, density_floor=density, lipschitz=lipschitz, d=d
    )
    try:
        value = BOUND_FORMULAS[formula](params)
    except (ValueError, KeyError) as e:
        raise usage_error(str(e))
    if isinstance(value, dict):
        console.print(json.dumps(value, sort_keys=True), highlight=False, markup=False, soft_wrap=True)
    elif isinstance(value, float) and math.isfinite(value) and value == int(value) and abs(value) < 2 ** 53:
        console.print(str(int(value)), highlight=False, markup=False, soft_wrap=True)
    else:
        console.print(f"{value:.12g}" if isinstance(value, float) else str(value), highlight=False, markup=False, soft_wrap=True)


def build_config(cli_values: Dict[str, Any], config_path: Optional[str]) -> ExperimentConfig:
    """Merge a config file with explicit flags; flags win."""
    merged: Dict[str, Any] = load_config(config_path) if config_path else {}
    merged.update({key: value for key, value in cli_values.items() if value is not None})
    if merged.get("seed") is None:
        raise usage_error("a seed is required: pass --seed or set 'seed' in the config file")
    try:
        return ExperimentConfig.from_dict(merged)
    except (ValueError, TypeError) as e:
        raise usage_error(str(e))


def run_and_write(
    cfg: ExperimentConfig,
    threads: int,
    output: Optional[str],
    raw: Optional[str],
    timing: bool,
) -> None:
    with Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        TaskProgressColumn(),
        TimeElapsedColumn(),
        console=err_console,
        transient=True,
    ) as progress:
        task = progress.add_task(f"[cyan]{cfg.experiment} ({threads} worker(s))...", total=None)
        try:
            report = run_experiment(cfg, threads=threads, progress=lambda done: progress.advance(task, done), timing=timing)
        except (ValueError, KeyError) as e:
            raise usage_error(str(e))

    display_report(report)
    path = Path(output or f"{cfg.experiment}-report.json")
    write_json(report.to_dict(), path)
    err_console.print(f"[bold green]Report:[/bold green] {path}")
    if raw:
        save_raw_rows(report.raw, raw)
        err_console.print(f"[bold green]Raw statistics:[/bold green] {raw}")
    if not report.passed:
        raise typer.Exit(EXIT_VERDICT)


@app.command()
def verify(
    experiment: Optional[str] = typer.Option(
        None, "--experiment", "-x",
        help="volume-invariance, deviation, not-shape-regular, mondrian-ratio, rate-curve, lower-bound-probe, envelope",
    ),
    config: Optional[str] = typer.Option(None, "--config", help="YAML or JSON experiment config; flags override it"),
    seed: Optional[int] = typer.Option(None, "--seed", "-s", help="Master seed (required)"),
    d: Optional[int] = typer.Option(None, "--d", help="Dimension"),
    n: Optional[str] = typer.Option(None, "--n", help="Sample size, or comma-separated sizes"),
    replicates: Optional[int] = typer.Option(None, "--R", "--replicates", help="Monte Carlo replicates"),
    event: Optional[str] = typer.Option(None, "--event", help="Tail event of the deviation experiment"),
    tree_kind: Optional[str] = typer.Option(None, "--tree-kind", help="uniform, centered or mondrian"),
    depth: Optional[int] = typer.Option(None, "--N", "--depth", help="Tree depth"),
    alpha: Optional[float] = typer.Option(None, "--alpha", help="Volume / centered-diameter exponent"),
    spread: Optional[float] = typer.Option(None, "--spread", help="Uniform-tree diameter exponent beta"),
    lifetime: Optional[float] = typer.Option(None, "--lifetime", help="Mondrian lifetime"),
    delta: Optional[float] = typer.Option(None, "--delta", help="Confidence level"),
    sigma2: Optional[float] = typer.Option(None, "--sigma2", help="Noise parameter"),
    g: Optional[str] = typer.Option(None, "--g", help="Regression function"),
    noise: Optional[str] = typer.Option(None, "--noise", help="Noise kind"),
    estimator: Optional[str] = typer.Option(None, "--estimator", "-e", help="knn, grid or cart"),
    k: Optional[int] = typer.Option(None, "--k", help="Neighbor count"),
    m: Optional[int] = typer.Option(None, "--m", help="Minimal leaf size"),
    beta: Optional[float] = typer.Option(None, "--beta", help="CART-like shape constant"),
    cells_per_axis: Optional[int] = typer.Option(None, "--cells-per-axis", help="Grid resolution"),
    gamma_targets: Optional[str] = typer.Option(None, "--gamma", help="Comma-separated cell shape ratios"),
    cell_volume: Optional[float] = typer.Option(None, "--cell-volume", help="Volume of the probed cell"),
    class_size: Optional[int] = typer.Option(None, "--class-size", help="Rectangles in the finite class"),
    target: Optional[str] = typer.Option(None, "--target", help="sup-statistic or pointwise"),
    tolerance: Optional[float] = typer.Option(None, "--tolerance", help="Slope tolerance"),
    lattice_per_axis: Optional[int] = typer.Option(None, "--lattice", help="Evaluation lattice points per axis"),
    threads: int = typer.Option(1, "--threads", "-t", help="Worker processes; results do not depend on it"),
    output: Optional[str] = typer.Option(None, "--output", "-o", help="Report JSON path"),
    raw: Optional[str] = typer.Option(None, "--raw", help="Also write per-replicate statistics to this CSV"),
    timing: bool = typer.Option(False, "--timing", help="Record wall-clock seconds in the report"),
):
    """
    Run a Monte Carlo check: random-tree volume invariance and tail bounds, shape-ratio floors, Mondrian shape bound, rate exponents, elongated-cell probe, or noise envelopes.

    Examples:

        mapforge verify --experiment not-shape-regular --tree-kind uniform --d 2 --N 50 --R 10000 --seed 7

        mapforge verify --config config/example.yaml --threads 8
    """
    n_grid = parse_floats(n, "--n")
    gammas = parse_floats(gamma_targets, "--gamma")
    cli_values = {
        "experiment": experiment, "seed": seed, "d": d,
        "n_grid": None if n_grid is None else [int(v) for v in n_grid],
        "replicates": replicates, "event": event, "tree_kind": tree_kind, "depth": depth,
        "alpha": alpha, "spread": spread, "lifetime": lifetime, "delta": delta, "sigma2": sigma2,
        "g": g, "noise": noise, "estimator": estimator, "k": k, "m": m, "beta": beta,
        "cells_per_axis": cells_per_axis, "gamma_targets": gammas, "cell_volume": cell_volume,
        "class_size": class_size, "target": target, "tolerance": tolerance,
        "lattice_per_axis": lattice_per_axis,
    }
    if experiment is None and config is None:
        raise usage_error("pass --experiment or --config")
    cfg = build_config(cli_values, config)
    run_and_write(cfg, threads, output, raw, timing)


@app.command()
def rates(
    estimator: Optional[str] = typer.Option(None, "--estimator", "-e", help="knn, grid or cart [default: knn]"),
    config: Optional[str] = typer.Option(None, "--config", help="YAML or JSON experiment config; flags override it"),
    seed: Optional[int] = typer.Option(None, "--seed", "-s", help="Master seed (required)"),
    d: Optional[int] = typer.Option(None, "--d", help="Dimension (at most 6)"),
    n: Optional[str] = typer.Option(None, "--n", help="Comma-separated, strictly increasing sample sizes (>= 4)"),
    replicates: Optional[int] = typer.Option(None, "--R", "--replicates", help="Replicates per sample size"),
    sigma2: Optional[float] = typer.Option(None, "--sigma2", help="Noise parameter"),
    g: Optional[str] = typer.Option(None, "--g", help="Regression function"),
    beta: Optional[float] = typer.Option(None, "--beta", help="CART-like shape constant"),
    tolerance: Optional[float] = typer.Option(None, "--tolerance", help="Slope tolerance"),
    lattice_per_axis: Optional[int] = typer.Option(None, "--lattice", help="Evaluation lattice points per axis"),
    threads: int = typer.Option(1, "--threads", "-t", help="Worker processes; results do not depend on it"),
    output: Optional[str] = typer.Option(None, "--output", "-o", help="Report JSON path"),
    raw: Optional[str] = typer.Option(None, "--raw", help="Also write per-replicate errors to this CSV"),
    timing: bool = typer.Option(False, "--timing", help="Record wall-clock seconds in the report"),
):
    """
    Fit the log-log slope of the median sup-norm error of k-NN, fixed grid or CART-like estimates against the n^(-1/(d+2)) rate.
    """
    n_grid = parse_floats(n, "--n")
    cli_values = {
        "experiment": "rate-curve", "estimator": estimator, "seed": seed, "d": d,
        "n_grid": None if n_grid is None else [int(v) for v in n_grid],
        "replicates": replicates, "sigma2": sigma2, "g": g, "beta": beta,
        "tolerance": tolerance, "lattice_per_axis": lattice_per_axis,
    }
    cfg = build_config(cli_values, config)
    run_and_write(cfg, threads, output, raw, timing)


@app.command()
def version():
    """Show MapForge version information"""
    display_banner()
    console.print("[bold]Version:[/bold] 0.1.0")
    console.print("[bold]Python:[/bold] " + sys.version.split()[0])
    console.print("[bold]Estimators:[/bold] " + ", ".join(EstimatorFactory.get_all_estimators()))


def main():
    """Main entry point"""
    app()


if __name__ == "__main__":
    main()
