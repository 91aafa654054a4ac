"""
#### qrac command-line interface

One subcommand per operation. Results go to standard output, diagnostics to
standard error (verbosity from the `QRAC_LOG` environment variable), files are
written atomically.

Exit codes: 0 success, 1 infeasible or insufficient-statistics result, 2 usage
or configuration error.
"""

import functools
import json
import logging
import os
from pathlib import Path
from typing import Any, Callable, Dict, Optional

import typer
from rich import box
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from . import __version__
from .certifier import (
    dump_witness,
    entropy_curve,
    guessing_probability,
    positivity_threshold,
    write_curve_csv,
)
from .classical import classical_max_T
from .config import load_certifier_config, load_seesaw_config, read_config_file
from .exceptions import (
    ConfigurationError,
    DomainError,
    InsufficientStatisticsError,
)
from .protocol3 import build_protocol3, verify_protocol3
from .seesaw import seesaw_optimize
from .simulator import (
    certify_rate,
    estimate_witness,
    load_transcript,
    run_protocol,
    save_transcript,
)
from .strategy import Strategy, load_strategy, save_strategy
from .survey import survey, write_survey_csv
from .utils import write_atomic


LOG_ENV = "QRAC_LOG"
LOG_LEVELS = {
    "error": logging.ERROR,
    "warning": logging.WARNING,
    "info": logging.INFO,
    "debug": logging.DEBUG,
}

app = typer.Typer(
    name="qrac",
    help="Bounds, certified min-entropy and protocol simulation for n→1 quantum random access codes.",
    add_completion=False,
    no_args_is_help=True,
)
console = Console(highlight=False)
err_console = Console(stderr=True, highlight=False)
logger = logging.getLogger("qrac_entropy")


def configure_logging() -> None:
    """Send package diagnostics to standard error at the level named by `QRAC_LOG`."""
    name = os.environ.get(LOG_ENV, "warning").strip().lower()
    level = LOG_LEVELS.get(name, logging.WARNING)
    logger.handlers[:] = [
        RichHandler(console=err_console, show_time=False, show_path=False)
    ]
    logger.setLevel(level)
    logger.propagate = False
    if name not in LOG_LEVELS:
        logger.warning("Unknown %s value %r, using 'warning'", LOG_ENV, name)


def handle_errors(command: Callable[..., Any]) -> Callable[..., Any]:
    """Map package errors raised by a command to diagnostics and exit codes."""

    @functools.wraps(command)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return command(*args, **kwargs)
        except InsufficientStatisticsError as exc:
            err_console.print(f"Insufficient statistics: {exc}")
            raise typer.Exit(code=1)
        except (ConfigurationError, DomainError) as exc:
            err_console.print(f"Error: {exc}")
            raise typer.Exit(code=2)

    return wrapper


def _config_mapping(path: Optional[Path]) -> Dict[str, Any]:
    return read_config_file(path) if path else {}


def _write_json(path: Path, mapping: Dict[str, Any]) -> None:
    write_atomic(path, json.dumps(mapping, indent=2) + "\n")


def _print_version(value: bool) -> None:
    if value:
        console.print(__version__)
        raise typer.Exit()


@app.callback()
def main(
    version: bool = typer.Option(
        False,
        "--version",
        callback=_print_version,
        is_eager=True,
        help="Print the version and exit.",
    ),
) -> None:
    configure_logging()


@app.command()
@handle_errors
def classical(n: int = typer.Option(..., "--n", help="Number of encoded bits.")) -> None:
    """Exact classical bound on the witness."""
    result = classical_max_T(n)
    console.print(f"T_classical = {result.t_max:g}")
    strategy = result.witness_strategy
    console.print(f"encoder = {''.join(map(str, strategy.encoder))}")
    console.print(
        "decoders = " + " ".join(f"{d0}{d1}" for d0, d1 in strategy.decoders)
    )


@app.command()
@handle_errors
def quantum(
    n: int = typer.Option(..., "--n", help="Number of encoded bits."),
    starts: Optional[int] = typer.Option(None, "--starts", help="Random initializations."),
    seed: Optional[int] = typer.Option(None, "--seed", help="Master seed."),
    config: Optional[Path] = typer.Option(None, "--config", help="JSON see-saw config."),
    out: Optional[Path] = typer.Option(None, "--out", help="Write the optimal strategy JSON here."),
) -> None:
    """Qubit bound on the witness by multi-start see-saw."""
    settings = load_seesaw_config(_config_mapping(config), starts=starts, seed=seed)
    result = seesaw_optimize(n, settings)
    console.print(f"T_quantum = {result.t_quantum:.9f}")
    console.print(f"sweeps = {result.sweeps_used}, start = {result.start_index}")
    if out:
        save_strategy(result.strategy, out)


@app.command()
@handle_errors
def entropy(
    n: int = typer.Option(..., "--n", help="Number of encoded bits."),
    t: float = typer.Option(..., "--t", help="Observed witness value."),
    starts: Optional[int] = typer.Option(None, "--starts", help="Starts per candidate position."),
    seed: Optional[int] = typer.Option(None, "--seed", help="Master seed."),
    config: Optional[Path] = typer.Option(None, "--config", help="JSON certifier config."),
    witness_dir: Optional[Path] = typer.Option(None, "--witness-dir", help="Dump the witness strategy here."),
) -> None:
    """Certified min-entropy at one witness value."""
    settings = load_certifier_config(_config_mapping(config), starts=starts, seed=seed)
    point = guessing_probability(n, t, settings)
    if not point.feasible:
        console.print(f"T = {t:.9f} is not reachable by a qubit strategy for n={n}")
        raise typer.Exit(code=1)

    console.print(f"p_guess = {point.p_guess:.9f}")
    console.print(f"H_min = {point.h_min:.9f}")
    console.print(f"constraint_residual = {point.constraint_residual:.3e}")
    if witness_dir:
        dump_witness(point, witness_dir)


@app.command()
@handle_errors
def curve(
    n: int = typer.Option(..., "--n", help="Number of encoded bits."),
    t_min: float = typer.Option(..., "--t-min", help="First witness value."),
    t_max: float = typer.Option(..., "--t-max", help="Last witness value."),
    steps: int = typer.Option(..., "--steps", help="Number of grid points."),
    starts: Optional[int] = typer.Option(None, "--starts", help="Starts per candidate position."),
    seed: Optional[int] = typer.Option(None, "--seed", help="Master seed."),
    config: Optional[Path] = typer.Option(None, "--config", help="JSON certifier config."),
    out: Optional[Path] = typer.Option(None, "--out", help="Write the curve CSV here."),
    witness_dir: Optional[Path] = typer.Option(None, "--witness-dir", help="Dump witness strategies here."),
) -> None:
    """Certified min-entropy on a uniform grid of witness values."""
    settings = load_certifier_config(_config_mapping(config), starts=starts, seed=seed)
    points = entropy_curve(n, t_min, t_max, steps, settings)

    table = Table(box=box.SIMPLE)
    for column in ("t_target", "p_guess", "h_min"):
        table.add_column(column, justify="right")
    for point in points:
        table.add_row(
            f"{point.t_target:.6f}",
            "-" if point.p_guess is None else f"{point.p_guess:.6f}",
            "-" if point.h_min is None else f"{point.h_min:.6f}",
        )
    console.print(table)

    if out:
        write_curve_csv(points, out)
    if witness_dir:
        for point in points:
            dump_witness(point, witness_dir)
    if not all(point.feasible for point in points):
        raise typer.Exit(code=1)


@app.command()
@handle_errors
def threshold(
    n: int = typer.Option(..., "--n", help="Number of encoded bits."),
    starts: Optional[int] = typer.Option(None, "--starts", help="Starts per candidate position."),
    seed: Optional[int] = typer.Option(None, "--seed", help="Master seed."),
    config: Optional[Path] = typer.Option(None, "--config", help="JSON certifier config."),
) -> None:
    """Smallest witness value certifying positive randomness."""
    settings = load_certifier_config(_config_mapping(config), starts=starts, seed=seed)
    console.print(f"T_threshold = {positivity_threshold(n, settings):.6f}")


@app.command("verify-qrac3")
@handle_errors
def verify_qrac3(
    out: Optional[Path] = typer.Option(None, "--out", help="Write the report JSON here."),
) -> None:
    """Evaluate the explicit optimal 3→1 code."""
    report = verify_protocol3()
    table = Table(box=None, show_header=False)
    table.add_column("field")
    table.add_column("value", justify="right")
    table.add_row("xi", f"{report.xi:.12f}")
    table.add_row("t3", f"{report.t3:.12f}")
    table.add_row("s3", f"{report.s3:.12f}")
    table.add_row("h_min", f"{report.h_min:.12f}")
    table.add_row("all_correct_equal", str(report.all_correct_equal).lower())
    console.print(table)
    if out:
        _write_json(out, report.to_dict())


def _resolve_strategy(name: str, n: Optional[int], seed: int) -> Strategy:
    if name == "qrac3":
        return build_protocol3()
    if name == "optimal":
        if n is None:
            raise DomainError("--n is required with --strategy optimal")
        return seesaw_optimize(n, load_seesaw_config(seed=seed)).strategy
    return load_strategy(name)


@app.command()
@handle_errors
def simulate(
    strategy: str = typer.Option("qrac3", "--strategy", help="optimal, qrac3 or a strategy JSON path."),
    n: Optional[int] = typer.Option(None, "--n", help="Number of encoded bits for --strategy optimal."),
    rounds: int = typer.Option(..., "--rounds", help="Number of protocol rounds."),
    seed: int = typer.Option(0, "--seed", help="Seed of the run."),
    out: Optional[Path] = typer.Option(None, "--out", help="Write the transcript JSON here."),
) -> None:
    """Simulate honest devices and estimate the witness."""
    transcript = run_protocol(_resolve_strategy(strategy, n, seed), rounds, seed)
    t_hat, t_std_err = estimate_witness(transcript)
    console.print(f"T_hat = {t_hat:.9f}")
    console.print(f"T_std_err = {t_std_err:.9f}")
    if out:
        save_transcript(transcript, out)


@app.command()
@handle_errors
def certify(
    transcript: Path = typer.Option(..., "--transcript", help="Transcript JSON written by simulate."),
    confidence: float = typer.Option(0.95, "--confidence", help="One-sided confidence level."),
    starts: Optional[int] = typer.Option(None, "--starts", help="Starts per candidate position."),
    seed: Optional[int] = typer.Option(None, "--seed", help="Master seed of the bound search."),
    config: Optional[Path] = typer.Option(None, "--config", help="JSON certifier config."),
    out: Optional[Path] = typer.Option(None, "--out", help="Write the certified rate JSON here."),
) -> None:
    """Certified min-entropy rate from a transcript."""
    settings = load_certifier_config(_config_mapping(config), starts=starts, seed=seed)
    record = load_transcript(transcript)
    t_hat, t_std_err = estimate_witness(record)
    rate = certify_rate(t_hat, t_std_err, record.n, confidence, settings)
    console.print(f"T_hat = {rate.t_hat:.9f} ± {rate.t_std_err:.9f}")
    console.print(f"T_lower = {rate.t_lower:.9f} (confidence {rate.confidence:g})")
    console.print(f"H_min_rate = {rate.h_min_rate:.9f}")
    if out:
        _write_json(
            out,
            {
                "t_hat": rate.t_hat,
                "t_std_err": rate.t_std_err,
                "confidence": rate.confidence,
                "t_lower": rate.t_lower,
                "h_min_rate": rate.h_min_rate,
            },
        )


@app.command("survey")
@handle_errors
def survey_command(
    n_max: int = typer.Option(5, "--n-max", help="Largest n to tabulate."),
    skip_entropy: bool = typer.Option(False, "--skip-entropy", help="Leave out the min-entropy column."),
    starts: Optional[int] = typer.Option(None, "--starts", help="Starts of both searches."),
    seed: Optional[int] = typer.Option(None, "--seed", help="Master seed."),
    seesaw_config: Optional[Path] = typer.Option(None, "--seesaw-config", help="JSON see-saw config."),
    certifier_config: Optional[Path] = typer.Option(
        None, "--certifier-config", help="JSON certifier config."
    ),
    out: Optional[Path] = typer.Option(None, "--out", help="Write the survey CSV here."),
) -> None:
    """Bounds and certified randomness for n = 1..n-max."""
    rows = survey(
        range(1, n_max + 1),
        load_seesaw_config(_config_mapping(seesaw_config), starts=starts, seed=seed),
        load_certifier_config(_config_mapping(certifier_config), starts=starts, seed=seed),
        with_entropy=not skip_entropy,
    )
    table = Table(box=box.SIMPLE)
    for column in ("n", "T_classical", "T_quantum", "ratio", "S_quantum", "H_min", "alignment"):
        table.add_column(column, justify="right")
    for row in rows:
        table.add_row(
            str(row.n),
            f"{row.t_classical:g}",
            f"{row.t_quantum:.6f}",
            f"{row.ratio:.6f}",
            f"{row.s_quantum:.6f}",
            "-" if row.h_min is None else f"{row.h_min:.4f}",
            f"{row.alignment:.6f}",
        )
    console.print(table)
    if out:
        write_survey_csv(rows, out)
