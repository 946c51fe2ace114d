"""CLI interface for mahler-sums."""

import asyncio
import json
import logging
import sys
from pathlib import Path
from typing import Annotated, Callable, Optional

import typer
from dotenv import load_dotenv
from pydantic import ValidationError
from rich.console import Console

from mahler_sums.application.use_cases import (
    ClassifyUseCase,
    EvalNumberUseCase,
    EvalSeriesUseCase,
    MinpolyUseCase,
    RadixUseCase,
    RelationsUseCase,
    TabulateUseCase,
    VerifyUseCase,
)
from mahler_sums.application.verification_workflow.suites import default_bits
from mahler_sums.domain.entities import (
    ConstantSpec,
    GeometricCoefficients,
    LucasPairParams,
    NumberFamily,
    NumberSeriesSpec,
    OutputFormat,
    RunConfig,
    RunReport,
    SeriesKind,
    SeriesSpec,
    Suite,
    TheoremId,
)
from mahler_sums.domain.errors import InvalidParameters, MahlerError
from mahler_sums.domain.numerics import PrecisionContext
from mahler_sums.domain.presets import get_preset
from mahler_sums.infrastructure.repositories import JSONInputRepository, get_report_repository
from mahler_sums.infrastructure.settings import get_settings
from mahler_sums.logger import log_run_config, logger, run_log, set_console_level
from mahler_sums.presentation.render import render_text

# Load environment variables
load_dotenv()

app = typer.Typer(help="mahler-sums - certified reciprocal sums, Mahler-type series and their case tables")
console = Console(stderr=True)

# Family letters that pick a preset when neither --preset nor --params is given
IMPLICIT_PRESETS = {"F": "fibonacci", "L": "lucas", "q": "fibonacci"}

Bits = Annotated[Optional[int], typer.Option("--bits", help="Working precision P in bits")]
GuardBits = Annotated[Optional[int], typer.Option("--guard-bits", help="Guard bits g (certified to P - g bits)")]
Format = Annotated[OutputFormat, typer.Option("--format", "-f", help="Report format: json, csv or text")]
Seed = Annotated[Optional[int], typer.Option("--seed", help="Seed recorded in the report (and used by verify)")]
Output = Annotated[Optional[Path], typer.Option("--output", "-o", help="Write the report here instead of stdout")]
LogDir = Annotated[Optional[Path], typer.Option("--log-dir", help="Also write a run.log into this directory")]
Preset = Annotated[Optional[str], typer.Option("--preset", help="fibonacci, lucas or fibonacci-lucas")]
ParamsFile = Annotated[Optional[Path], typer.Option("--params", help="JSON file with a Lucas-pair tuple")]
Coeffs = Annotated[str, typer.Option("--coeffs", help='Periodic coefficients as a JSON list, e.g. "[1, -1]"')]


@app.callback()
def main(
    quiet: Annotated[bool, typer.Option("--quiet", "-q", help="Only log warnings to stderr")] = False,
    verbose: Annotated[bool, typer.Option("--verbose", "-v", help="Log debug details to stderr")] = False,
) -> None:
    """Evaluate, classify and verify reciprocal sums of binary recurrences."""
    if verbose:
        set_console_level(logging.DEBUG)
    elif quiet:
        set_console_level(logging.WARNING)
    else:
        set_console_level(logging.INFO)


def _fail(error: dict[str, object], exit_code: int) -> None:
    typer.echo(json.dumps(error, ensure_ascii=False))
    sys.exit(exit_code)


def _emit(report: RunReport, output: Optional[Path]) -> None:
    if report.config.output_format is OutputFormat.TEXT:
        text = render_text(report)
        if output is None:
            typer.echo(text, nl=False)
        else:
            output.parent.mkdir(parents=True, exist_ok=True)
            output.write_text(text, encoding="utf-8")
        return
    repository = get_report_repository(report.config.output_format)
    if output is None:
        typer.echo(repository.render(report), nl=False)
    else:
        repository.save_report(report, output)


def _run(
    command: str,
    inputs: dict[str, object],
    action: Callable[[RunConfig, PrecisionContext], RunReport],
    bits: Optional[int],
    guard_bits: Optional[int],
    output_format: OutputFormat,
    seed: Optional[int],
    output: Optional[Path],
    log_dir: Optional[Path],
    fallback_bits: Optional[int] = None,
) -> RunReport:
    """Resolve configuration, run one command and write its report.

    Errors become a JSON error object on stdout and the mapped exit code.
    """
    with run_log(log_dir):
        try:
            settings = get_settings()
            config = RunConfig(
                command=command,
                bits=bits if bits is not None else (fallback_bits or settings.default_bits),
                guard_bits=guard_bits if guard_bits is not None else settings.default_guard_bits,
                output_format=OutputFormat(output_format),
                seed=seed if seed is not None else settings.default_seed,
                inputs={key: str(value) if isinstance(value, Path) else value for key, value in inputs.items()},
            )
            log_run_config(config)
            ctx = PrecisionContext(config.bits, config.guard_bits)
            report = action(config, ctx)
            _emit(report, output)
            return report
        except MahlerError as e:
            logger.error("%s failed: %s: %s", command, type(e).__name__, e)
            _fail(e.to_dict(), e.exit_code)
        except (ValidationError, FileNotFoundError) as e:
            logger.error("%s failed: %s: %s", command, type(e).__name__, e)
            _fail({"error": type(e).__name__, "message": str(e), "exit_code": 2}, 2)
        except Exception as e:
            import traceback
            tb_str = traceback.format_exc()

            logger.error("%s failed: %s: %s", command, type(e).__name__, e)
            logger.error("Traceback:\n%s", tb_str)
            _fail({"error": type(e).__name__, "message": str(e), "exit_code": 1}, 1)


def _resolve_pair(
    input_repo: JSONInputRepository,
    preset: Optional[str],
    params_file: Optional[Path],
) -> LucasPairParams:
    if preset is not None and params_file is not None:
        raise InvalidParameters("give --preset or --params, not both")
    if params_file is not None:
        return input_repo.load_params(params_file)
    if preset is None:
        raise InvalidParameters("a Lucas pair is needed: give --preset or --params")
    return get_preset(preset)


def _resolve_family(
    input_repo: JSONInputRepository,
    letter: str,
    preset: Optional[str],
    params_file: Optional[Path],
) -> tuple[LucasPairParams, NumberFamily]:
    """Map a family letter through the pair's labels (F -> R of fibonacci, ...)."""
    letter = letter.strip()
    if preset is None and params_file is None:
        preset = IMPLICIT_PRESETS.get(letter, "fibonacci")
    params = _resolve_pair(input_repo, preset, params_file)
    for family in (NumberFamily.R, NumberFamily.S, NumberFamily.Q):
        if params.label_for(family) == letter:
            return params, family
    try:
        return params, NumberFamily(letter.upper())
    except ValueError:
        raise InvalidParameters(
            f"unknown family {letter!r} for {params.name}; use R, S, Q or "
            f"{params.r_label}, {params.s_label}, {params.q_label}"
        ) from None


@app.command("eval")
def eval_series_command(
    z: Annotated[str, typer.Option("--z", help='Evaluation point, e.g. "1/2" or a typed JSON value')],
    spec_file: Annotated[Optional[Path], typer.Option("--spec", help="JSON file with a series specification")] = None,
    kind: Annotated[Optional[SeriesKind], typer.Option("--kind", help="gamma, phi or lambda")] = None,
    r: Annotated[int, typer.Option("--r", help="Radix r >= 2")] = 2,
    coeffs: Annotated[Optional[str], typer.Option("--coeffs", help="Periodic coefficients as a JSON list")] = None,
    geometric: Annotated[Optional[str], typer.Option("--geometric", help="Geometric coefficients a^h")] = None,
    mu: Annotated[Optional[int], typer.Option("--mu", help="Exponent 1 <= mu <= r-1 (gamma)")] = None,
    pole: Annotated[Optional[str], typer.Option("--pole", help="Pole parameter (phi, lambda)")] = None,
    start_index: Annotated[int, typer.Option("--start-index", help="First summation index h0")] = 0,
    feq: Annotated[bool, typer.Option("--feq", help="Also report the functional-equation residual")] = False,
    bits: Bits = None,
    guard_bits: GuardBits = None,
    output_format: Format = OutputFormat.JSON,
    seed: Seed = None,
    output: Output = None,
    log_dir: LogDir = None,
) -> None:
    """Evaluate Gamma, Phi or Lambda at a point of the unit disk."""
    input_repo = JSONInputRepository()

    def action(config: RunConfig, ctx: PrecisionContext) -> RunReport:
        spec = None
        if spec_file is None:
            if kind is None:
                raise InvalidParameters("give --spec or --kind")
            if (coeffs is None) == (geometric is None):
                raise InvalidParameters("give exactly one of --coeffs or --geometric")
            sequence = (
                input_repo.parse_sequence(coeffs)
                if coeffs is not None
                else GeometricCoefficients(input_repo.parse_value(geometric))
            )
            spec = SeriesSpec(
                kind=kind,
                r=r,
                coeffs=sequence,
                mu=mu,
                pole_param=input_repo.parse_value(pole) if pole is not None else None,
                start_index=start_index,
            )
        use_case = EvalSeriesUseCase(input_repository=input_repo)
        return use_case.execute(config, ctx, input_repo.parse_value(z), spec=spec, spec_path=spec_file, check_feq=feq)

    inputs = {
        "z": z, "spec": spec_file, "kind": kind.value if kind else None, "r": r, "coeffs": coeffs,
        "geometric": geometric, "mu": mu, "pole": pole, "start_index": start_index, "feq": feq,
    }
    _run("eval", inputs, action, bits, guard_bits, output_format, seed, output, log_dir)


@app.command("eval-number")
def eval_number_command(
    family: Annotated[str, typer.Option("--family", help="R, S, Q or a preset label such as F, L, q")],
    k: Annotated[int, typer.Option("--k", help="k >= 1")] = 1,
    r: Annotated[int, typer.Option("--r", help="Radix r >= 2")] = 2,
    ell: Annotated[int, typer.Option("--ell", help="Index shift l (R, S)")] = 0,
    mu: Annotated[Optional[int], typer.Option("--mu", help="Exponent 1 <= mu <= r-1 (Q)")] = None,
    coeffs: Coeffs = "[1]",
    start_index: Annotated[int, typer.Option("--start-index", help="First summation index")] = 0,
    bridge: Annotated[bool, typer.Option("--bridge", help="Also check the value against the function side")] = False,
    preset: Preset = None,
    params_file: ParamsFile = None,
    bits: Bits = None,
    guard_bits: GuardBits = None,
    output_format: Format = OutputFormat.JSON,
    seed: Seed = None,
    output: Output = None,
    log_dir: LogDir = None,
) -> None:
    """Evaluate a reciprocal sum such as F_{0,2} = sum 1/F_{2^h}."""
    input_repo = JSONInputRepository()

    def action(config: RunConfig, ctx: PrecisionContext) -> RunReport:
        params, number_family = _resolve_family(input_repo, family, preset, params_file)
        spec = NumberSeriesSpec(
            number_family, k, r, input_repo.parse_sequence(coeffs), ell=ell, mu=mu, start_index=start_index
        )
        return EvalNumberUseCase().execute(config, ctx, params, spec, bridge=bridge)

    inputs = {
        "family": family, "k": k, "r": r, "ell": ell, "mu": mu, "coeffs": coeffs, "start_index": start_index,
        "bridge": bridge, "preset": preset, "params": params_file,
    }
    _run("eval-number", inputs, action, bits, guard_bits, output_format, seed, output, log_dir)


@app.command()
def classify(
    theorem: Annotated[TheoremId, typer.Option("--theorem", "-t", help="T2 numbers, T3 functions, L3/R3 rationality")] = TheoremId.T2,
    b: Annotated[Optional[str], typer.Option("--b", help="Coefficients of the R family (JSON list)")] = None,
    c: Annotated[Optional[str], typer.Option("--c", help="Coefficients of the S family (JSON list)")] = None,
    bound: Annotated[int, typer.Option("--bound", help="Search bound for l0")] = 64,
    k: Annotated[int, typer.Option("--k", help="k for induced poles (T3)")] = 1,
    r: Annotated[int, typer.Option("--r", help="r for induced poles (T3)")] = 2,
    window: Annotated[int, typer.Option("--window", help="|l| window for induced poles (T3)")] = 2,
    input_file: Annotated[Optional[Path], typer.Option("--input", "-i", help="Pole families (T3) or g0 parameters (L3, R3)")] = None,
    preset: Preset = None,
    params_file: ParamsFile = None,
    bits: Bits = None,
    guard_bits: GuardBits = None,
    output_format: Format = OutputFormat.JSON,
    seed: Seed = None,
    output: Output = None,
    log_dir: LogDir = None,
) -> None:
    """Report which exceptional cases a parameter set falls into."""
    input_repo = JSONInputRepository()

    def action(config: RunConfig, ctx: PrecisionContext) -> RunReport:
        params = None
        if preset is not None or params_file is not None:
            params = _resolve_pair(input_repo, preset, params_file)
        use_case = ClassifyUseCase(input_repository=input_repo)
        return use_case.execute(
            config,
            ctx,
            theorem,
            params=params,
            b=input_repo.parse_sequence(b) if b is not None else None,
            c=input_repo.parse_sequence(c) if c is not None else None,
            search_bound=bound,
            k=k,
            r=r,
            window=window,
            input_path=input_file,
        )

    inputs = {
        "theorem": theorem.value, "b": b, "c": c, "bound": bound, "k": k, "r": r, "window": window,
        "input": input_file, "preset": preset, "params": params_file,
    }
    _run("classify", inputs, action, bits, guard_bits, output_format, seed, output, log_dir)


@app.command()
def relations(
    values_file: Annotated[Path, typer.Option("--values", help="JSON file with named constants")],
    height: Annotated[int, typer.Option("--height", help="Coefficient height bound H")] = 2**20,
    degree: Annotated[int, typer.Option("--degree", help="Monomial degree (0 = linear relation)")] = 0,
    bits: Bits = None,
    guard_bits: GuardBits = None,
    output_format: Format = OutputFormat.JSON,
    seed: Seed = None,
    output: Output = None,
    log_dir: LogDir = None,
) -> None:
    """Search for an integer relation among constants, bounded by height."""
    input_repo = JSONInputRepository()

    def action(config: RunConfig, ctx: PrecisionContext) -> RunReport:
        use_case = RelationsUseCase(input_repository=input_repo)
        return use_case.execute(config, ctx, values_file, height, monomial_degree=degree)

    inputs = {"values": values_file, "height": height, "degree": degree}
    _run("relations", inputs, action, bits, guard_bits, output_format, seed, output, log_dir)


@app.command()
def minpoly(
    value: Annotated[Optional[str], typer.Option("--value", help="Constants file or an inline value")] = None,
    name: Annotated[Optional[str], typer.Option("--name", help="Constant to use from a constants file")] = None,
    family: Annotated[Optional[str], typer.Option("--family", help="Reciprocal sum instead of --value")] = None,
    k: Annotated[int, typer.Option("--k")] = 1,
    r: Annotated[int, typer.Option("--r")] = 2,
    ell: Annotated[int, typer.Option("--ell")] = 0,
    mu: Annotated[Optional[int], typer.Option("--mu")] = None,
    coeffs: Coeffs = "[1]",
    maxdeg: Annotated[int, typer.Option("--maxdeg", help="Largest degree tried")] = 8,
    height: Annotated[int, typer.Option("--height", help="Coefficient height bound")] = 10**6,
    preset: Preset = None,
    params_file: ParamsFile = None,
    bits: Bits = None,
    guard_bits: GuardBits = None,
    output_format: Format = OutputFormat.JSON,
    seed: Seed = None,
    output: Output = None,
    log_dir: LogDir = None,
) -> None:
    """Find the minimal integer polynomial of a constant, if it has small height."""
    input_repo = JSONInputRepository()

    def resolve_constant() -> ConstantSpec:
        if (value is None) == (family is None):
            raise InvalidParameters("give exactly one of --value or --family")
        if family is not None:
            params, number_family = _resolve_family(input_repo, family, preset, params_file)
            spec = NumberSeriesSpec(number_family, k, r, input_repo.parse_sequence(coeffs), ell=ell, mu=mu)
            return ConstantSpec(spec.label(params), params=params, number=spec)
        path = Path(value)
        if not path.is_file():
            return ConstantSpec("x", value=input_repo.parse_value(value))
        constants = input_repo.load_constants(path)
        if name is not None:
            matches = [constant for constant in constants if constant.name == name]
            if not matches:
                raise InvalidParameters(f"no constant named {name!r} in {path}")
            return matches[0]
        if len(constants) != 1:
            raise InvalidParameters(f"{path} holds {len(constants)} constants; choose one with --name")
        return constants[0]

    def action(config: RunConfig, ctx: PrecisionContext) -> RunReport:
        return MinpolyUseCase().execute(config, ctx, resolve_constant(), maxdeg, height)

    inputs = {
        "value": value, "name": name, "family": family, "k": k, "r": r, "ell": ell, "mu": mu, "coeffs": coeffs,
        "maxdeg": maxdeg, "height": height, "preset": preset, "params": params_file,
    }
    _run("minpoly", inputs, action, bits, guard_bits, output_format, seed, output, log_dir)


@app.command()
def radix(
    radices: Annotated[list[int], typer.Argument(help="Integers r >= 2")],
    bits: Bits = None,
    guard_bits: GuardBits = None,
    output_format: Format = OutputFormat.JSON,
    seed: Seed = None,
    output: Output = None,
    log_dir: LogDir = None,
) -> None:
    """Write r = d^j with d not a perfect power; several radices are grouped by d."""

    def action(config: RunConfig, ctx: PrecisionContext) -> RunReport:
        return RadixUseCase().execute(config, radices)

    _run("radix", {"radices": list(radices)}, action, bits, guard_bits, output_format, seed, output, log_dir)


@app.command()
def tabulate(
    family: Annotated[str, typer.Option("--family", help="R, S, Q or a preset label such as F, L, q")],
    ks: Annotated[Optional[list[int]], typer.Option("--k", help="Values of k (repeatable)")] = None,
    rs: Annotated[Optional[list[int]], typer.Option("--r", help="Values of r (repeatable)")] = None,
    ells: Annotated[Optional[list[int]], typer.Option("--ell", help="Values of l, or mu for Q (repeatable)")] = None,
    coeffs: Coeffs = "[1]",
    preset: Preset = None,
    params_file: ParamsFile = None,
    bits: Bits = None,
    guard_bits: GuardBits = None,
    output_format: Format = OutputFormat.CSV,
    seed: Seed = None,
    output: Output = None,
    log_dir: LogDir = None,
) -> None:
    """Tabulate a reciprocal-sum family over a grid of (k, r, l)."""
    input_repo = JSONInputRepository()
    k_values = ks or [1]
    r_values = rs or [2]

    def action(config: RunConfig, ctx: PrecisionContext) -> RunReport:
        params, number_family = _resolve_family(input_repo, family, preset, params_file)
        third = ells or ([1] if number_family is NumberFamily.Q else [0])
        return TabulateUseCase().execute(
            config, ctx, params, number_family, k_values, r_values, third, input_repo.parse_sequence(coeffs)
        )

    inputs = {
        "family": family, "k": k_values, "r": r_values, "ell": ells, "coeffs": coeffs,
        "preset": preset, "params": params_file,
    }
    _run("tabulate", inputs, action, bits, guard_bits, output_format, seed, output, log_dir)


@app.command()
def verify(
    suite: Annotated[Suite, typer.Option("--suite", "-s", help="feq, remark2, bridge, transforms, theorem1 or lemma3-table")],
    bits: Bits = None,
    guard_bits: GuardBits = None,
    output_format: Format = OutputFormat.JSON,
    seed: Seed = None,
    output: Output = None,
    log_dir: LogDir = None,
) -> None:
    """Run a bundled verification suite; exits 1 if any item fails."""

    completed = 0

    def progress_callback(suite_name: str, current: int, total: int) -> None:
        """Print progress to console; items may finish in any order, so count completions."""
        nonlocal completed
        completed += 1
        if completed == total:
            console.print(f"[bold green]* {suite_name} suite complete[/bold green] ({total}/{total})")
        elif completed == 1 or completed % 10 == 0:
            console.print(f"  [cyan]{suite_name}[/cyan] {completed}/{total} (last: item {current})")

    def action(config: RunConfig, ctx: PrecisionContext) -> RunReport:
        console.print(f"\n[bold yellow]> {suite.value} suite[/bold yellow] (bits={ctx.working_bits}, seed={config.seed})")
        return asyncio.run(
            VerifyUseCase().execute(config, ctx, suite, config.seed, progress_callback=progress_callback)
        )

    report = _run(
        "verify", {"suite": suite.value}, action, bits, guard_bits, output_format, seed, output, log_dir,
        fallback_bits=default_bits(suite),
    )
    if not report.result["passed"]:
        console.print(f"[red]Failed items:[/red] {', '.join(report.result['failures'])}")
        sys.exit(1)


if __name__ == "__main__":
    app()
