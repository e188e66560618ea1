"""Modeling -> simulation -> optimization workflow and its output files."""

from __future__ import annotations

import csv
import io
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import Experiment, ScenarioConfig
from .errors import NonFiniteState, WeatherError, ZeroProduction
from .household import ConsumptionTrace, simulate_house_day
from .optimizer import (
    OPTIMAL,
    LPProblem,
    LPSolution,
    ValidationReport,
    build_lp,
    certify,
    dual_objective,
    scale_factors_csv,
    solve_simplex,
    validate_solution,
)
from .pv import M2_TO_FT2, ProductionTrace, simulate_unit_panel_day
from .scenario import (
    LOCAL_DAY,
    ScenarioMatrices,
    build_matrices,
    fmt6,
    household_warnings,
    hourly_totals,
    hourly_totals_csv,
)
from .storage import StorageEstimate, estimate_storage
from .weather import read_tmy3, slice_day, utc_window

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_WEATHER = 3
EXIT_INFEASIBLE = 4
EXIT_VALIDATION = 5
EXIT_SOLVER = 6

STORAGE_HEADER = ("location", "daily_consumption_gwh", "required_storage_gwh", "local_area_m2")

ASSUMPTIONS = (
    "Each location is one representative house scaled by its household count.",
    "Household count defaults to population / 3 when not given explicitly.",
    "Nominal voltage everywhere (ZIP v_ratio = 1); transmission losses ignored.",
    "Two-node air/mass thermal model, 60 forward-Euler sub-steps per hour.",
    "Initial air and mass temperature equal the first hour's heating setpoint.",
    "Water heater standby losses use the indoor air temperature.",
    "Isotropic-sky transposition, NOAA solar position at mid-hour, fixed albedo.",
    "NOCT cell temperature model; no inverter, wiring or soiling losses.",
    "Unit panel area is the same at every location.",
    "Storage: production sized locally to daily demand, lossless battery, "
    "capacity = cyclic maximum drawdown of hourly net energy.",
)


@dataclass
class ExperimentRun:
    experiment: Experiment
    problem: LPProblem
    solution: LPSolution
    validation: ValidationReport | None = None
    certified: bool = False

    @property
    def label(self) -> str:
        return self.experiment.label


@dataclass
class PipelineResult:
    config: ScenarioConfig
    exit_code: int = EXIT_OK
    message: str = ""
    matrices: ScenarioMatrices | None = None
    consumption_traces: list = field(default_factory=list)
    production_traces: list = field(default_factory=list)
    runs: list = field(default_factory=list)
    storage: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    totals_source: str = ""
    files: dict = field(default_factory=dict)


def simulate_location(cfg: ScenarioConfig, index: int) -> tuple[ConsumptionTrace, ProductionTrace]:
    loc = cfg.locations[index]
    path = cfg.weather_path(loc)
    try:
        year = read_tmy3(path)
        if cfg.alignment == LOCAL_DAY:
            day = slice_day(year, cfg.month, cfg.day, loc.name)
        else:
            day = utc_window(year, cfg.month, cfg.day, loc.geometry.tz_offset, loc.name)
    except WeatherError as exc:
        raise type(exc)(f"{loc.name} ({path}): {exc}") from None
    house, heater, zip_load, schedule = cfg.components(loc)
    try:
        cons = simulate_house_day(house, heater, zip_load, schedule, day, loc.geometry, cfg.albedo)
    except NonFiniteState as exc:
        raise NonFiniteState(f"{loc.name}: {exc}", hour=exc.hour) from None
    prod = simulate_unit_panel_day(cfg.panel, day, loc.geometry, cfg.albedo)
    return cons, prod


def simulate_all(cfg: ScenarioConfig):
    indices = range(len(cfg.locations))
    if cfg.workers > 1 and len(cfg.locations) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            return list(pool.map(simulate_location, [cfg] * len(indices), indices))
    return [simulate_location(cfg, i) for i in indices]


def solve_experiment(m: ScenarioMatrices, exp: Experiment, unit_area: float) -> ExperimentRun:
    problem = build_lp(m, exp.policy, unit_area)
    solution = solve_simplex(problem)
    run = ExperimentRun(exp, problem, solution)
    if solution.status == OPTIMAL:
        run.validation = validate_solution(m, solution, exp.policy)
        run.certified = certify(problem, solution)
    return run


def local_storage(m: ScenarioMatrices) -> tuple[list[StorageEstimate], list[str]]:
    out, warnings = [], []
    for i, name in enumerate(m.names):
        cons = m.consumption[:, i]
        try:
            area, storage = estimate_storage(cons, m.production[:, i])
        except ZeroProduction:
            warnings.append(f"{name}: no solar production on the simulated day; "
                            f"off-grid storage cannot be sized")
            area = storage = math.nan
        out.append(StorageEstimate(name, float(cons.sum()), storage, area))
    return out, warnings


def storage_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(STORAGE_HEADER)
    for r in rows:
        writer.writerow([r.location, fmt6(r.daily_consumption_gwh),
                         fmt6(r.required_storage_gwh), fmt6(r.local_area_m2)])
    return buf.getvalue()


def run_pipeline(cfg: ScenarioConfig, experiments=None, out_dir=None, write=True) -> PipelineResult:
    """Simulate every location, solve the selected experiments and write outputs.

    Returns a PipelineResult whose ``exit_code`` is 0 only when every
    experiment is optimal and passes validation.
    """
    result = PipelineResult(cfg)
    experiments = tuple(cfg.experiments if experiments is None else experiments)
    try:
        traces = simulate_all(cfg)
    except WeatherError as exc:
        result.exit_code, result.message = EXIT_WEATHER, f"weather error: {exc}"
        return result
    except NonFiniteState as exc:
        result.exit_code, result.message = EXIT_CONFIG, f"unstable house model: {exc}"
        return result

    result.consumption_traces = [c for c, _ in traces]
    result.production_traces = [p for _, p in traces]
    m = build_matrices(cfg.locations, traces)
    result.matrices = m
    result.warnings.extend(household_warnings(cfg.locations))

    for exp in experiments:
        run = solve_experiment(m, exp, cfg.panel.unit_area)
        result.runs.append(run)
        log.info("%s: %s after %d pivots", exp.label, run.solution.status,
                 run.solution.iterations)

    result.storage, storage_warnings = local_storage(m)
    result.warnings.extend(storage_warnings)

    areas = np.zeros(m.n)
    result.totals_source = "no experiment solved; production shown with zero panel area"
    for run in result.runs:
        if run.solution.status == OPTIMAL:
            areas = np.clip(run.solution.scale_factors, 0.0, None)
            result.totals_source = f"panel areas from {run.label}"
            break

    for run in result.runs:
        sol = run.solution
        if sol.status != OPTIMAL:
            code = EXIT_INFEASIBLE if sol.status == "infeasible" else EXIT_SOLVER
            result.exit_code = result.exit_code or code
            result.message = result.message or f"{run.label}: {sol.status}: {sol.diagnosis}"
        elif not run.validation.passed:
            result.exit_code = result.exit_code or EXIT_VALIDATION
            result.message = result.message or (
                f"{run.label}: validation failed: {run.validation.violations[0]}")
    if not result.message:
        result.message = "ok" if result.runs else "no experiments selected"

    outputs = {"hourly_totals.csv": hourly_totals_csv(hourly_totals(m, areas))}
    for run in result.runs:
        if run.solution.status == OPTIMAL:
            outputs[f"scale_factors_{run.label}.csv"] = scale_factors_csv(
                m, run.solution.scale_factors, run.validation.shares, cfg.panel.unit_area)
    outputs["storage_report.csv"] = storage_csv(result.storage)
    outputs["run_report.txt"] = report_summary(result, areas)

    if write:
        target = Path(out_dir) if out_dir is not None else cfg.output_dir
        target.mkdir(parents=True, exist_ok=True)
        for name, text in outputs.items():
            path = target / name
            with open(path, "w", newline="\n", encoding="utf-8") as fh:
                fh.write(text)
            result.files[name] = path
    else:
        result.files = dict(outputs)
    return result


def area_per_household_ft2(m: ScenarioMatrices, areas, unit_area: float = 1.0) -> float:
    households = sum(m.households)
    if households == 0:
        return math.nan
    return float(np.sum(areas)) * unit_area * M2_TO_FT2 / households


def report_summary(result: PipelineResult, areas=None) -> str:
    cfg, m = result.config, result.matrices
    lines = ["solargrid run report", "=" * 20, ""]
    lines.append(f"simulation day: {cfg.month:02d}/{cfg.day:02d} ({cfg.alignment})")
    lines.append(f"locations: {len(cfg.locations)}")
    lines.append(f"panel: efficiency {cfg.panel.efficiency:g}, temp_coeff "
                 f"{cfg.panel.temp_coeff:g}/C, NOCT {cfg.panel.noct:g} C, "
                 f"unit area {cfg.panel.unit_area:g} m2")
    lines.append("")

    lines.append("Assumptions")
    lines.extend(f"  - {a}" for a in ASSUMPTIONS)
    lines.append("")
    lines.append("Warnings")
    lines.extend(f"  - {w}" for w in result.warnings) if result.warnings else lines.append("  none")
    lines.append("")

    if m is not None:
        lines.append("Daily consumption")
        for i, name in enumerate(m.names):
            per_house = result.consumption_traces[i].daily_kwh if result.consumption_traces else math.nan
            lines.append(f"  {name:<16} {fmt6(m.consumption[:, i].sum() / 1000.0):>10} GWh  "
                         f"households {m.households[i]:>9}  per house {fmt6(per_house)} kWh")
        lines.append(f"  {'total':<16} {fmt6(m.consumption.sum() / 1000.0):>10} GWh")
        lines.append("")

    lines.append("Experiments")
    if not result.runs:
        lines.append("  no experiments selected")
    for run in result.runs:
        sol = run.solution
        lines.append(f"  {run.label}: {run.experiment.policy.describe()}")
        lines.append(f"    status {sol.status}, {sol.iterations} pivots, "
                     f"{run.problem.n_rows} rows x {run.problem.n_vars} variables")
        if sol.status != OPTIMAL:
            lines.append(f"    diagnosis: {sol.diagnosis}")
            continue
        v = run.validation
        total_ft2 = sol.objective_value * M2_TO_FT2
        lines.append(f"    total panel area {fmt6(sol.objective_value)} m2 "
                     f"({fmt6(total_ft2)} ft2)")
        lines.append(f"    dual objective {fmt6(dual_objective(run.problem, sol))}, "
                     f"certificate {'ok' if run.certified else 'FAILED'}")
        lines.append(f"    area per household {fmt6(area_per_household_ft2(m, sol.scale_factors, cfg.panel.unit_area))} ft2")
        nonzero = int(np.sum(sol.scale_factors > 1e-9))
        lines.append(f"    locations with panels: {nonzero} of {m.n}")
        lines.append(f"    min slack hour {v.min_slack_hour} ({fmt6(v.min_slack)} MWh)")
        lines.append(f"    validation {'passed' if v.passed else 'FAILED'}")
        for msg in v.violations:
            lines.append(f"      {msg}")
    lines.append("")

    if m is not None:
        lines.append(f"Hourly totals ({result.totals_source})")
        lines.append("  hour  consumption_mwh  production_mwh  surplus_mwh")
        use = np.zeros(m.n) if areas is None else np.asarray(areas)
        for row in hourly_totals(m, use):
            lines.append(f"  {row.hour:>4}  {fmt6(row.consumption):>15}  "
                         f"{fmt6(row.production):>14}  {fmt6(row.surplus):>11}")
        lines.append("")

    if result.storage:
        lines.append("Off-grid storage")
        for r in result.storage:
            lines.append(f"  {r.location:<16} consumption {fmt6(r.daily_consumption_gwh)} GWh, "
                         f"storage {fmt6(r.required_storage_gwh)} GWh, "
                         f"local area {fmt6(r.local_area_m2)} m2")
        lines.append("")

    lines.append(f"result: {result.message}")
    return "\n".join(lines) + "\n"
