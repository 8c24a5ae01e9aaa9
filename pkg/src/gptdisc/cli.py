"""Command-line front end.

Subcommands: ``solve`` (ensemble file -> solution JSON with KKT and
geometry reports), ``polygon`` (emit a polygon model file), ``demo``
(the three worked examples), ``verify`` (re-check an untrusted solution
certificate), and ``export-vertices`` (CSV plot data).

Exit codes: 0 success, 1 invalid model/ensemble/arguments, 2 numerical
failure, 3 oracle disagreement beyond 1e-6 (with ``--oracle``), 4 failed
verification.  Reading or writing ``-`` means standard input/output.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from pathlib import Path

import click
import numpy as np

from . import polygon as polygon_mod
from .discrimination import solve_discrimination, verify_kkt
from .errors import (
    GptDiscError,
    InternalInconsistencyError,
    InvalidInputError,
    NumericalFailureError,
)
from .geometry import congruence_check
from .model import validate_ensemble, validate_model
from .oracle import dual_vertex_enumeration
from .serialize import (
    dumps,
    ensemble_from_dict,
    format_real,
    load_ensemble,
    load_model,
    model_to_dict,
    solution_from_dict,
    solution_to_dict,
)

ORACLE_AGREEMENT_TOL = 1e-6

EXIT_INVALID_INPUT = 1
EXIT_NUMERICAL_FAILURE = 2
EXIT_ORACLE_DISAGREEMENT = 3
EXIT_VERIFICATION_FAILED = 4


class OracleDisagreementError(GptDiscError):
    """Solver and vertex-enumeration oracle disagree beyond tolerance."""


class VerificationFailedError(GptDiscError):
    """A KKT or congruence check failed during re-verification."""


@dataclass(frozen=True)
class CliConfig:
    """Shared command options."""

    tolerance: float = 1e-9
    output_format: str = "json"
    oracle: bool = False
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.tolerance <= 1e-3:
            raise InvalidInputError("tolerance must lie in (0, 1e-3]")
        if self.output_format not in ("json", "csv"):
            raise InvalidInputError(f"unknown output format {self.output_format!r}")


def _write_out(out: str, text: str) -> None:
    if out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _read_json_source(source: str):
    import json

    if source == "-":
        text = sys.stdin.read()
        try:
            return json.loads(text), None
        except json.JSONDecodeError as exc:
            raise InvalidInputError(f"standard input is not valid JSON: {exc}") from exc
    return None, Path(source)


def _load_ensemble_arg(source: str):
    data, path = _read_json_source(source)
    if path is not None:
        return load_ensemble(path)
    return ensemble_from_dict(data)


def _validated_ensemble(source: str, tol: float):
    ensemble = _load_ensemble_arg(source)
    model_report = validate_model(ensemble.model, tol)
    if not model_report.valid:
        raise InvalidInputError("; ".join(model_report.issues))
    for warning in model_report.warnings:
        click.echo(f"warning: {warning}", err=True)
    if model_report.unrestricted_effects is False:
        click.echo(
            "warning: supplied effect cone is restricted; the solver uses it as given",
            err=True,
        )
    ensemble_report = validate_ensemble(ensemble, tol)
    if not ensemble_report.valid:
        raise InvalidInputError("; ".join(ensemble_report.issues))
    return ensemble


def _solve_payload(ensemble, config: CliConfig):
    solution = solve_discrimination(ensemble, tol=config.tolerance)
    kkt = verify_kkt(ensemble, solution, tol=config.tolerance)
    congruence = congruence_check(solution, tol=config.tolerance)
    oracle_result = None
    if config.oracle:
        oracle_result = dual_vertex_enumeration(ensemble)
        if abs(oracle_result.p_guess - solution.p_guess) > ORACLE_AGREEMENT_TOL:
            raise OracleDisagreementError(
                f"solver p_guess {solution.p_guess!r} vs oracle {oracle_result.p_guess!r}"
            )
    return solution, solution_to_dict(solution, kkt, congruence, oracle_result)


def _config_options(func):
    func = click.option("--tol", "tolerance", type=float, default=1e-9, show_default=True, help="Numeric tolerance.")(func)
    func = click.option("--format", "output_format", type=click.Choice(["json", "csv"]), default="json", show_default=True, help="Structured output format.")(func)
    func = click.option("--oracle", is_flag=True, help="Cross-check against the vertex-enumeration oracle.")(func)
    func = click.option("--seed", type=int, default=0, show_default=True, help="Seed for randomized components.")(func)
    func = click.option("--out", default="-", show_default=True, help="Output file, '-' for stdout.")(func)
    return func


@click.group()
def cli():
    """Optimal state discrimination in finitely generated GPT models."""


@cli.command("solve")
@click.argument("ensemble_file")
@_config_options
def cmd_solve(ensemble_file, tolerance, output_format, oracle, seed, out):
    """Solve the discrimination instance in ENSEMBLE_FILE."""
    config = CliConfig(tolerance=tolerance, output_format=output_format, oracle=oracle, seed=seed)
    ensemble = _validated_ensemble(ensemble_file, config.tolerance)
    _, payload = _solve_payload(ensemble, config)
    _write_out(out, dumps(payload))


@cli.command("polygon")
@click.option("--n", "order", type=int, required=True, help="Polygon order (>= 3).")
@click.option("--out", default="-", show_default=True, help="Output file, '-' for stdout.")
def cmd_polygon(order, out):
    """Emit the order-n polygon model as model JSON."""
    model = polygon_mod.polygon_model(order)
    _write_out(out, dumps(model_to_dict(model)))


@cli.command("demo")
@click.argument("name", type=click.Choice(["n3", "n4", "no-measurement"]))
@_config_options
def cmd_demo(name, tolerance, output_format, oracle, seed, out):
    """Run a worked example: n3, n4, or no-measurement."""
    config = CliConfig(tolerance=tolerance, output_format=output_format, oracle=True, seed=seed)
    if name == "n3":
        solution = polygon_mod.demo_n3()
        payload = _demo_solution_payload(solution, config)
        _write_out(out, dumps(payload))
        return
    if name == "n4":
        result = polygon_mod.demo_n4()
        payload = _demo_solution_payload(result.solution, config)
        payload["alternates"] = [
            {
                "name": alt_name,
                "measurement": measurement.effects,
                "kkt": _kkt_pass_dict(report, config.tolerance),
            }
            for alt_name, measurement, report in result.alternates
        ]
        _write_out(out, dumps(payload))
        return
    _demo_no_measurement(config, out)


def _kkt_pass_dict(report, tol):
    from .serialize import kkt_to_dict

    data = kkt_to_dict(report)
    data["passed"] = report.passes(tol)
    return data


def _demo_solution_payload(solution, config: CliConfig):
    ensemble = solution.ensemble
    kkt = verify_kkt(ensemble, solution, tol=config.tolerance)
    congruence = congruence_check(solution, tol=config.tolerance)
    oracle_result = dual_vertex_enumeration(ensemble)
    if abs(oracle_result.p_guess - solution.p_guess) > ORACLE_AGREEMENT_TOL:
        raise OracleDisagreementError(
            f"solver p_guess {solution.p_guess!r} vs oracle {oracle_result.p_guess!r}"
        )
    return solution_to_dict(solution, kkt, congruence, oracle_result)


def _demo_no_measurement(config: CliConfig, out: str) -> None:
    grid = [round(0.05 * k, 2) for k in range(21)]
    scan = polygon_mod.threshold_scan(grid, tol=config.tolerance)
    for p, p_guess, _ in scan.rows:
        oracle_result = dual_vertex_enumeration(polygon_mod.no_measurement_ensemble(p))
        if abs(oracle_result.p_guess - p_guess) > ORACLE_AGREEMENT_TOL:
            raise OracleDisagreementError(
                f"at p={p:g}: solver {p_guess!r} vs oracle {oracle_result.p_guess!r}"
            )
    lines = ["p,p_guess,no_measurement_optimal"]
    for p, p_guess, flag in scan.rows:
        lines.append(f"{format_real(p)},{format_real(p_guess)},{str(flag).lower()}")
    _write_out(out, "\n".join(lines) + "\n")
    click.echo(f"measured no-measurement threshold p* = {format_real(scan.p_star)}", err=True)
    click.echo(
        f"closed-form dual-feasibility bound = {format_real(polygon_mod.AXIS_FEASIBILITY_THRESHOLD)}",
        err=True,
    )
    click.echo(
        f"quantum-analogue threshold = {format_real(polygon_mod.QUANTUM_ANALOGUE_THRESHOLD)}",
        err=True,
    )


@cli.command("verify")
@click.argument("ensemble_file")
@click.argument("solution_file")
@_config_options
def cmd_verify(ensemble_file, solution_file, tolerance, output_format, oracle, seed, out):
    """Re-verify a solution certificate against its ensemble."""
    config = CliConfig(tolerance=tolerance, output_format=output_format, oracle=oracle, seed=seed)
    ensemble = _validated_ensemble(ensemble_file, config.tolerance)
    data, path = _read_json_source(solution_file)
    if path is not None:
        from .serialize import _load_json

        data = _load_json(path)
    solution = solution_from_dict(data, ensemble)
    kkt = verify_kkt(ensemble, solution, tol=config.tolerance)
    congruence = congruence_check(solution, tol=config.tolerance)
    failures = []
    if not kkt.passes(config.tolerance):
        failures.append(
            "KKT check failed: "
            f"stability {np.max(kkt.stability_residuals):g}, "
            f"orthogonality {np.max(kkt.orthogonality_residuals):g}, "
            f"measurement residual {kkt.measurement_residual:g}, gap {kkt.gap:g}, "
            f"positivity {list(kkt.positivity_ok)}, effects-in-cone {list(kkt.effects_in_cone)}"
        )
    if congruence.max_residual > config.tolerance:
        failures.append(f"congruence residual {congruence.max_residual:g} exceeds tolerance")
    if failures:
        raise VerificationFailedError("; ".join(failures))
    click.echo("verification passed")


@cli.command("export-vertices")
@click.argument("model_file")
@click.option("--out", default="-", show_default=True, help="Output file, '-' for stdout.")
def cmd_export_vertices(model_file, out):
    """Write state and effect generators of a model file as CSV plot data."""
    data, path = _read_json_source(model_file)
    if path is not None:
        model = load_model(path)
    else:
        from .serialize import model_from_dict

        model = model_from_dict(data)
    header = "kind,index," + ",".join(["x", "y", "z"] if model.dim == 3 else [f"c{i}" for i in range(model.dim)])
    lines = [header]
    for kind, rows in (("state", model.state_gens), ("effect", model.effect_gens)):
        for index, row in enumerate(rows):
            coords = ",".join(format_real(v) for v in row)
            lines.append(f"{kind},{index},{coords}")
    _write_out(out, "\n".join(lines) + "\n")


def main(argv=None) -> int:
    """Entry point with the documented exit-code mapping."""
    try:
        cli.main(args=argv, standalone_mode=False)
    except (click.UsageError, InvalidInputError) as exc:
        click.echo(f"error: {_message(exc)}", err=True)
        return EXIT_INVALID_INPUT
    except (NumericalFailureError, InternalInconsistencyError) as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        return EXIT_NUMERICAL_FAILURE
    except OracleDisagreementError as exc:
        click.echo(f"oracle disagreement: {exc}", err=True)
        return EXIT_ORACLE_DISAGREEMENT
    except VerificationFailedError as exc:
        click.echo(f"verification failed: {exc}", err=True)
        return EXIT_VERIFICATION_FAILED
    except click.exceptions.Exit as exc:  # --help and friends
        return int(exc.exit_code)
    except GptDiscError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_INVALID_INPUT
    return 0


def _message(exc) -> str:
    if isinstance(exc, click.UsageError):
        return exc.format_message()
    return str(exc)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
