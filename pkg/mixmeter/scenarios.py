"""Scenario orchestration: build one sweep, export it, optionally add a plot script.

Run flow:
1. Resolve the kind's parameters from the spec, falling back to ``AppConfig``.
2. Evaluate the closed forms, oracles or time series for every grid point.
3. Export a CSV (header row, 17 significant digits, LF line endings).
4. With ``gnuplot`` set, write ``<csv>.gp`` next to it.

Identical specs produce byte-identical CSV files.
"""
from __future__ import annotations

import logging
import math
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field
from enum import StrEnum
from pathlib import Path
from typing import Any

from .config import AppConfig
from .density_file import read_density_file
from .dynamics import damped_timeseries, jcm_timeseries, time_grid
from .errors import InvalidParameterError
from .mixedness import (
    entropy_variance,
    mixedness_parameter,
    report,
    von_neumann_entropy,
)
from .models import Cat3Mode, DampedConfig, FockConfig, JcmConfig
from .qmatrix import validate_density
from .reporting import Cell, export_rows_csv, write_gnuplot_script
from .states import (
    cat2_closed_form,
    cat2_mixture,
    cat3_spectrum,
    default_truncation,
    ledger_states,
    mixture_density,
    thermal_closed_form,
    two_level_closed_form,
)

logger = logging.getLogger(__name__)

LN2 = math.log(2.0)
LN3 = math.log(3.0)


class ScenarioKind(StrEnum):
    TWO_LEVEL = "two-level"
    CAT2 = "cat2"
    CAT3 = "cat3"
    THERMAL = "thermal"
    JCM = "jcm"
    DAMPED = "damped"
    ANALYZE = "analyze"
    LEDGER = "ledger"


@dataclass(slots=True)
class ScenarioSpec:
    """One requested sweep.

    Attributes:
        kind: Which system to evaluate.
        parameters: Kind-specific overrides (``steps``, ``alpha``, ``alpha_max``,
            ``beta``, ``gamma``, ``nbar_max``, ``tmax``, ``dt``, ``truncation``,
            ``mode``, ``path``, ``ref_dim``). Missing keys use config defaults.
        output_path: CSV destination; defaults to ``<output_dir>/<kind>.csv``.
        gnuplot: Also write a gnuplot script next to the CSV.
    """

    kind: ScenarioKind
    parameters: dict[str, Any] = field(default_factory=dict)
    output_path: Path | None = None
    gnuplot: bool = False


@dataclass(slots=True)
class ScenarioTable:
    columns: list[str]
    rows: list[list[Cell]]
    plot_columns: list[str] = field(default_factory=list)
    title: str = ""


@dataclass(slots=True)
class ScenarioResult:
    """Structured outcome of one scenario run.

    Attributes:
        kind: Scenario that ran.
        rows: Number of data rows written (header excluded).
        csv_path: CSV destination.
        script_path: Gnuplot script path, or None when not requested or not applicable.
        table: The columns and rows that were written.
    """

    kind: ScenarioKind
    rows: int
    csv_path: Path
    script_path: Path | None
    table: ScenarioTable


def _param(params: Mapping[str, Any], key: str, default: Any, cast: Callable[[Any], Any]) -> Any:
    value = params.get(key)
    if value is None:
        return default
    return cast(value)


def _positive_steps(params: Mapping[str, Any], default: int) -> int:
    steps = _param(params, "steps", default, int)
    if steps < 1:
        raise InvalidParameterError(f"steps must be at least 1, got {steps}")
    return steps


def _non_negative(name: str, value: float) -> float:
    if value < 0.0:
        raise InvalidParameterError(f"{name} must be non-negative, got {value}")
    return value


def _two_level(params: Mapping[str, Any], config: AppConfig) -> ScenarioTable:
    steps = _positive_steps(params, 400)
    rows: list[list[Cell]] = []
    for i in range(steps + 1):
        phi = math.pi * i / (2 * steps)
        s, ds, q_s = two_level_closed_form(phi)
        rows.append([phi, s, s / LN2, ds, q_s])
    return ScenarioTable(
        columns=["phi", "S", "S_over_ln2", "dS", "q_s"],
        rows=rows,
        plot_columns=["S_over_ln2", "q_s"],
        title="two-level atom",
    )


def _amplitude_grid(params: Mapping[str, Any], default_max: float) -> list[float]:
    alpha_max = _non_negative("alpha_max", _param(params, "alpha_max", default_max, float))
    steps = _positive_steps(params, 60)
    return [alpha_max * i / steps for i in range(steps + 1)]


def _cat2(params: Mapping[str, Any], config: AppConfig) -> ScenarioTable:
    grid = _amplitude_grid(params, 3.0)
    truncation = (
        _param(params, "truncation", None, int)
        or config.truncation_override
        or default_truncation(grid[-1])
    )
    fock = FockConfig(truncation_n=truncation)
    logger.debug("cat2 oracle truncation N=%d", truncation)
    rows: list[list[Cell]] = []
    for alpha_abs in grid:
        s, ds, q_s = cat2_closed_form(alpha_abs)
        oracle = report(
            mixture_density(
                cat2_mixture(alpha_abs, fock),
                method=config.eigen_method,
                eigen_tol=config.eigen_tol,
            )
        )
        rows.append([alpha_abs, s, s / LN2, ds, q_s, oracle.entropy_s, oracle.q_s])
    return ScenarioTable(
        columns=["alpha_abs", "S", "S_over_ln2", "dS", "q_s", "oracle_S", "oracle_q_s"],
        rows=rows,
        plot_columns=["S_over_ln2", "q_s"],
        title="two coherent states",
    )


def _cat3(params: Mapping[str, Any], config: AppConfig) -> ScenarioTable:
    grid = _amplitude_grid(params, 3.0)
    mode = Cat3Mode(_param(params, "mode", config.cat3_mode, str))
    rows: list[list[Cell]] = []
    for alpha_abs in grid:
        spectrum = cat3_spectrum(alpha_abs, mode=mode, method=config.eigen_method)
        s = von_neumann_entropy(spectrum)
        rows.append(
            [
                alpha_abs,
                s,
                s / LN3,
                math.sqrt(entropy_variance(spectrum)),
                mixedness_parameter(spectrum),
                mode.value,
            ]
        )
    return ScenarioTable(
        columns=["alpha_abs", "S", "S_over_ln3", "dS", "q_s", "mode"],
        rows=rows,
        plot_columns=["S_over_ln3", "q_s"],
        title=f"three coherent states ({mode.value})",
    )


def _thermal(params: Mapping[str, Any], config: AppConfig) -> ScenarioTable:
    nbar_max = _non_negative("nbar_max", _param(params, "nbar_max", 10.0, float))
    steps = _positive_steps(params, 100)
    rows: list[list[Cell]] = []
    for i in range(steps + 1):
        nbar = nbar_max * i / steps
        s, ds, q_s = thermal_closed_form(nbar, tail_tol=config.thermal_tail_tol)
        rows.append([nbar, s, ds, q_s])
    return ScenarioTable(
        columns=["nbar", "S", "dS", "q_s"],
        rows=rows,
        plot_columns=["S", "q_s"],
        title="thermal field",
    )


def _jcm(params: Mapping[str, Any], config: AppConfig) -> ScenarioTable:
    settings = config.jcm
    alpha = _param(params, "alpha", settings.alpha, float)
    truncation = (
        _param(params, "truncation", None, int)
        or config.truncation_override
        or max(settings.truncation, default_truncation(alpha))
    )
    grid = time_grid(_param(params, "tmax", settings.tmax, float), _param(params, "dt", settings.dt, float))
    cfg = JcmConfig(
        alpha=alpha,
        coupling_lambda=1.0,
        time_grid=grid,
        fock=FockConfig(truncation_n=truncation),
    )
    rows: list[list[Cell]] = []
    for snap in jcm_timeseries(
        cfg, workers=config.workers, method=config.eigen_method, eigen_tol=config.eigen_tol
    ):
        rows.append(
            [
                snap.lambda_t,
                snap.s_atom,
                snap.s_atom / LN2,
                snap.ds_atom,
                snap.q_s_atom,
                snap.s_field,
                snap.branch_norm_sum,
            ]
        )
    return ScenarioTable(
        columns=["lambda_t", "S_atom", "S_over_ln2", "dS", "q_s", "S_field", "norm_check"],
        rows=rows,
        plot_columns=["S_over_ln2", "q_s"],
        title=f"atom-field interaction, alpha={alpha:g}",
    )


def _damped(params: Mapping[str, Any], config: AppConfig) -> ScenarioTable:
    settings = config.damped
    gamma = _param(params, "gamma", settings.gamma, float)
    if not gamma > 0.0:
        raise InvalidParameterError(f"gamma must be positive, got {gamma}")
    times = time_grid(_param(params, "tmax", settings.tmax, float), _param(params, "dt", settings.dt, float))
    cfg = DampedConfig(
        alpha=_param(params, "alpha", settings.alpha, float),
        beta=_param(params, "beta", settings.beta, float),
        gamma=gamma,
        time_grid=tuple(gamma * t for t in times),
    )
    rows: list[list[Cell]] = []
    for snap in damped_timeseries(cfg, workers=config.workers):
        rows.append(
            [
                snap.gamma_t,
                snap.lambda_plus,
                snap.s,
                snap.s / LN2,
                snap.ds,
                snap.q_s,
                snap.trace_check,
            ]
        )
    return ScenarioTable(
        columns=["gamma_t", "lambda_plus", "S", "S_over_ln2", "dS", "q_s", "trace_check"],
        rows=rows,
        plot_columns=["S_over_ln2", "q_s"],
        title=f"decaying superposition, alpha={cfg.alpha:g}, beta={cfg.beta:g}",
    )


def _analyze(params: Mapping[str, Any], config: AppConfig) -> ScenarioTable:
    path = params.get("path")
    if path is None:
        raise InvalidParameterError("analyze needs a density matrix file")
    ref_dim = _param(params, "ref_dim", None, int)
    density = validate_density(
        read_density_file(Path(path)), eigen_tol=config.eigen_tol, method=config.eigen_method
    )
    summary = report(density, reference_dim=ref_dim)
    columns = ["dim", "S", "xi", "dS2", "q_s"]
    row: list[Cell] = [
        summary.dimension,
        summary.entropy_s,
        summary.linear_entropy_xi,
        summary.entropy_variance,
        summary.q_s,
    ]
    if ref_dim is not None:
        columns += ["S_normalized", "xi_normalized"]
        row += [summary.normalized_entropy, summary.normalized_linear_entropy]
    return ScenarioTable(columns=columns, rows=[row])


def _ledger(params: Mapping[str, Any], config: AppConfig) -> ScenarioTable:
    rows: list[list[Cell]] = []
    for name, density in ledger_states().items():
        summary = report(density, reference_dim=density.dim)
        rows.append(
            [
                name,
                summary.dimension,
                summary.entropy_s,
                summary.linear_entropy_xi,
                summary.normalized_linear_entropy,
                summary.entropy_variance,
                summary.q_s,
            ]
        )
    return ScenarioTable(columns=["name", "dim", "S", "xi", "xi_normalized", "dS2", "q_s"], rows=rows)


_BUILDERS: dict[ScenarioKind, Callable[[Mapping[str, Any], AppConfig], ScenarioTable]] = {
    ScenarioKind.TWO_LEVEL: _two_level,
    ScenarioKind.CAT2: _cat2,
    ScenarioKind.CAT3: _cat3,
    ScenarioKind.THERMAL: _thermal,
    ScenarioKind.JCM: _jcm,
    ScenarioKind.DAMPED: _damped,
    ScenarioKind.ANALYZE: _analyze,
    ScenarioKind.LEDGER: _ledger,
}


def build_table(spec: ScenarioSpec, config: AppConfig) -> ScenarioTable:
    return _BUILDERS[ScenarioKind(spec.kind)](spec.parameters, config)


def run_scenario(spec: ScenarioSpec, config: AppConfig) -> ScenarioResult:
    """Evaluate one scenario and write its CSV (and gnuplot script when asked).

    Returns:
        ``ScenarioResult`` with the written paths and the table itself.

    Raises:
        ValidationError: A parameter or input file is invalid.
        ConvergenceError: The eigensolver hit its sweep cap.
        OSError: The CSV or script could not be written.
    """

    kind = ScenarioKind(spec.kind)
    table = build_table(spec, config)
    csv_path = spec.output_path or config.output_dir / f"{kind.value}.csv"
    export_rows_csv(table.columns, table.rows, csv_path)
    logger.info("Wrote %d rows for %s to %s", len(table.rows), kind.value, csv_path)

    script_path: Path | None = None
    if spec.gnuplot:
        if table.plot_columns:
            script_path = write_gnuplot_script(csv_path, table.columns, table.plot_columns, table.title)
        else:
            logger.warning("No plot script for single-table kind %s", kind.value)
    return ScenarioResult(
        kind=kind, rows=len(table.rows), csv_path=csv_path, script_path=script_path, table=table
    )
