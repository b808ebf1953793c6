"""
Command-line entry point: constants tables, profile exports and the
verification suites, with CSV or JSON reports.

Exit codes: 0 all asserted checks pass, 1 a check failed, 2 usage error,
3 the report could not be written.
"""
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import typer
from pydantic import ValidationError

from src.core.config import configure, get_settings
from src.core.helpers import parse_float_list
from src.core.logging import get_logger, setup_logging
from src.models.profile import ProfileKind
from src.models.reports import CheckResult
from src.models.run_config import Command, OutputFormat, RunConfig
from src.services.verification import VerificationService
from src.utils.formatting import reports_to_csv, reports_to_json, write_output

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_IO = 3

app = typer.Typer(
    name="hardy-verify",
    help="Numerical verification of sharp fractional Hardy constants on the half space.",
    no_args_is_help=True,
    add_completion=False,
)

S_OPTION = typer.Option("0.5", "--s", help="Orders: list '0.3,0.5' or range 'start:stop:count'")
N_OPTION = typer.Option(2, "--n", min=1, help="Space dimension")
FORMAT_OPTION = typer.Option(OutputFormat.JSON, "--format", help="Report format")
OUT_OPTION = typer.Option(None, "--out", help="Report file; standard output when omitted")
SEED_OPTION = typer.Option(0, "--seed", help="Seed of the random test functions")
THREADS_OPTION = typer.Option(1, "--threads", min=1, help="Worker threads")
QUICK_OPTION = typer.Option(False, "--quick", help="Halved levels and grids, doubled tolerances")


def build_config(command: Command, s: str, n: int, fmt: OutputFormat, out: Optional[Path], seed: int,
                 threads: int, quick: bool, **options: Any) -> RunConfig:
    """RunConfig from the shared flags; invalid values are usage errors."""
    try:
        s_grid = parse_float_list(s)
    except ValueError as e:
        raise typer.BadParameter(str(e), param_hint="--s")
    try:
        return RunConfig(
            command=command, s_grid=s_grid, n=n, output_format=fmt, output_path=out, seed=seed,
            threads=threads, quick=quick, options={k: str(v) for k, v in options.items() if v is not None},
        )
    except ValidationError as e:
        raise typer.BadParameter(e.errors()[0]["msg"], param_hint="--s")


def render(config: RunConfig, results: List[CheckResult], tables: Optional[List[Dict[str, Any]]] = None) -> str:
    if OutputFormat(config.output_format) == OutputFormat.CSV:
        if tables is not None:
            return reports_to_csv(tables)
        return reports_to_csv(_csv_rows(config, results))
    return reports_to_json(results, config.model_dump())


def _csv_rows(config: RunConfig, results: List[CheckResult]) -> List[Dict[str, Any]]:
    """Check rows; lemma scans expand to one row per (parameters, bump) pair."""
    if Command(config.command) != Command.LEMMAS:
        return [r.model_dump() for r in results]
    rows: List[Dict[str, Any]] = []
    for r in results:
        rows.extend(r.report.get("rows", []))
    return rows


def execute(config: RunConfig, t_max: float = 10.0) -> int:
    """Run one command and write its report; returns the exit code."""
    previous = get_settings()
    settings = configure(previous.quick() if config.quick else previous)
    try:
        service = VerificationService(settings)
        results = service.run(config)
        tables = None
        if Command(config.command) == Command.PROFILE:
            kind = ProfileKind(config.options.get("kind", ProfileKind.A.value))
            frame = service.profile_table(kind, config.s_grid, t_max)
            tables = frame.to_dict(orient="records")
            for r in results:
                r.report["table"] = frame[frame["s"] == r.s].drop(columns="s").to_dict(orient="records")
        text = render(config, results, tables)
    finally:
        configure(previous)

    try:
        write_output(text, config.output_path)
    except OSError as e:
        logger.error(f"Cannot write report: {e}")
        return EXIT_IO

    to_stderr = config.output_path is None
    for r in results:
        typer.echo(r.summary_line(), err=to_stderr)
    failed = [r for r in results if r.failed]
    typer.echo(f"{len(results) - len(failed)}/{len(results)} checks passed", err=to_stderr)
    return EXIT_FAILED if failed else EXIT_OK


@app.callback()
def main(log_level: str = typer.Option(None, "--log-level", help="Logging level (default from settings)")):
    """Logs go to standard error so that reports can be piped."""
    setup_logging(log_level or get_settings().log_level, stream=sys.stderr)


@app.command()
def constants(s: str = S_OPTION, n: int = N_OPTION, fmt: OutputFormat = FORMAT_OPTION,
              out: Optional[Path] = OUT_OPTION, seed: int = SEED_OPTION, threads: int = THREADS_OPTION,
              quick: bool = QUICK_OPTION):
    """Sharp constants and their identity residuals."""
    config = build_config(Command.CONSTANTS, s, n, fmt, out, seed, threads, quick)
    raise typer.Exit(execute(config))


@app.command()
def profile(kind: ProfileKind = typer.Option(ProfileKind.A, "--kind", help="Profile A, B or T"),
            t_max: float = typer.Option(10.0, "--t-max", min=0.05, help="Largest t of the table"),
            s: str = S_OPTION, n: int = N_OPTION, fmt: OutputFormat = FORMAT_OPTION,
            out: Optional[Path] = OUT_OPTION, seed: int = SEED_OPTION, threads: int = THREADS_OPTION,
            quick: bool = QUICK_OPTION):
    """(t, value, derivative) tables of a profile, with its limit and energy checks."""
    config = build_config(Command.PROFILE, s, n, fmt, out, seed, threads, quick, kind=kind.value, t_max=t_max)
    raise typer.Exit(execute(config, t_max))


@app.command()
def rayleigh(s: str = S_OPTION, n: int = N_OPTION, fmt: OutputFormat = FORMAT_OPTION,
             out: Optional[Path] = OUT_OPTION, seed: int = SEED_OPTION, threads: int = THREADS_OPTION,
             quick: bool = QUICK_OPTION):
    """Extremizing sequences, the discrete lower bound and HSM deficits."""
    config = build_config(Command.RAYLEIGH, s, n, fmt, out, seed, threads, quick)
    raise typer.Exit(execute(config))


@app.command()
def fracops(s: str = S_OPTION, n: int = N_OPTION, fmt: OutputFormat = FORMAT_OPTION,
            out: Optional[Path] = OUT_OPTION, seed: int = SEED_OPTION, threads: int = THREADS_OPTION,
            quick: bool = QUICK_OPTION):
    """Spectral and Dirichlet Hardy quotients and the energy identities."""
    config = build_config(Command.FRACOPS, s, n, fmt, out, seed, threads, quick)
    raise typer.Exit(execute(config))


@app.command()
def lemmas(samples: int = typer.Option(50, "--samples", min=1, help="Random parameter sets per lemma"),
           bumps: int = typer.Option(5, "--bumps", min=1, help="Random bumps per parameter set"),
           s: str = S_OPTION, n: int = N_OPTION, fmt: OutputFormat = FORMAT_OPTION,
           out: Optional[Path] = OUT_OPTION, seed: int = SEED_OPTION, threads: int = THREADS_OPTION,
           quick: bool = QUICK_OPTION):
    """Weighted Hardy lemma examples and random scans."""
    config = build_config(Command.LEMMAS, s, n, fmt, out, seed, threads, quick, samples=samples, bumps=bumps)
    raise typer.Exit(execute(config))


@app.command("verify-all")
def verify_all(s: str = S_OPTION, n: int = N_OPTION, fmt: OutputFormat = FORMAT_OPTION,
               out: Optional[Path] = OUT_OPTION, seed: int = SEED_OPTION, threads: int = THREADS_OPTION,
               quick: bool = QUICK_OPTION):
    """Every module's acceptance checks."""
    config = build_config(Command.VERIFY_ALL, s, n, fmt, out, seed, threads, quick)
    raise typer.Exit(execute(config))


if __name__ == "__main__":
    app()
