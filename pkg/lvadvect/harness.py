"""Presets, parameter sweeps and result persistence.

This module builds scenarios for the named systems, expands sweep plans
into runs executed on a process pool, compares the outcome with the
boundedness criteria and writes run and sweep artifacts to disk.
"""

import logging
import time
from collections.abc import Mapping
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import pandas as pd
from pydantic import BaseModel, ValidationError

from lvadvect.diagnostics import history_frame
from lvadvect.exceptions import LVAdvectError, PresetError, SweepCapError
from lvadvect.fields import write_field_csv
from lvadvect.models.control import MonitorConfig, StepControl
from lvadvect.models.mesh import Grid
from lvadvect.models.reports import TheoremId
from lvadvect.models.results import (
    AgreementClass,
    AgreementTable,
    RunSummary,
    RunVerdict,
    SweepResult,
    SweepRow,
)
from lvadvect.models.scenario import (
    BumpInitial,
    InitialData,
    Preset,
    RandomUniformInitial,
    Scenario,
    SweepAxis,
    SweepPlan,
    preset_violations,
)
from lvadvect.models.spec import (
    AffineDiffusion,
    CosineResource,
    KineticsMode,
    LinearSensitivity,
    ModelSpec,
    PowerLawDiffusion,
    PowerLawSensitivity,
    SKTCrossDiffusion,
)
from lvadvect.stepper import RunState, run_detailed
from lvadvect.svg import category_heatmap, field_heatmap, line_plot
from lvadvect.theory import classify, guarantees_boundedness
from lvadvect.utils import describe_validation_error

logger = logging.getLogger(__name__)

DEFAULT_SWEEP_CAP = 10_000

# Edge length of the grid a sweep switches to along the dim axis.
SQUARE_CELLS = 64

PRESET_DESCRIPTIONS: dict[Preset, tuple[str, str]] = {
    Preset.CLASSICAL_LV: (
        "D1 grad u (constant D1, no taxis)",
        "(a1 - b1 u - c1 v) u, (a2 - b2 u - c2 v) v",
    ),
    Preset.ADVECTIVE_LV: (
        "D1 grad u + chi u grad v",
        "(a1 - b1 u - c1 v) u, (a2 - b2 u - c2 v) v",
    ),
    Preset.SKT_REDUCED: (
        "(d1 + 2 rho11 u + rho12 v) grad u + rho12 u grad v",
        "(a1 - b1 u - c1 v) u, (a2 - b2 u - c2 v) v",
    ),
    Preset.IDEAL_FREE: (
        "(d1 + chi u) grad u + chi u grad v - chi u grad m",
        "(m - u - v) u, r (m - u - v) v",
    ),
    Preset.CUSTOM: (
        "D1(u) grad u +/- chi phi(u) grad v",
        "(a1 - b1 u^alpha - c1 v) u, (a2 - b2 u - c2 v) v",
    ),
}


# ==================== Presets ====================


def _rebuild(model: BaseModel, **changes: Any) -> Any:
    """Validated copy of a pydantic model with changed fields."""
    return type(model).model_validate({**dict(model), **changes})


def _preset_spec(preset: Preset, overrides: Mapping[str, Any]) -> ModelSpec:
    if preset is Preset.CUSTOM:
        return ModelSpec.model_validate(dict(overrides))

    chi = float(overrides.get("chi", 0.0 if preset is Preset.CLASSICAL_LV else 1.0))
    base: dict[str, Any] = {"chi": chi}

    if preset is Preset.CLASSICAL_LV:
        base["diffusion_law"] = PowerLawDiffusion(M1=1.0, m1=0.0)
    elif preset is Preset.ADVECTIVE_LV:
        base["diffusion_law"] = PowerLawDiffusion(M1=1.0, m1=0.0)
        base["sensitivity_law"] = LinearSensitivity()
    elif preset is Preset.SKT_REDUCED:
        base["diffusion_law"] = SKTCrossDiffusion(d1=1.0, rho11=0.5, rho12=chi)
        base["sensitivity_law"] = LinearSensitivity()
    elif preset is Preset.IDEAL_FREE:
        base["diffusion_law"] = AffineDiffusion(d1=1.0, rho11=chi / 2.0)
        base["sensitivity_law"] = LinearSensitivity()
        base["kinetics"] = KineticsMode.IDEAL_FREE
        base["resource_field"] = CosineResource()

    return ModelSpec.model_validate({**base, **overrides})


def build_preset(
    preset: Preset | str,
    overrides: Mapping[str, Any] | None = None,
    *,
    name: str | None = None,
    grid: Grid | None = None,
    initial_data: InitialData | None = None,
    ctrl: StepControl | None = None,
    monitors: MonitorConfig | None = None,
) -> Scenario:
    """Build a scenario for a named system.

    Overrides are ModelSpec fields. The SKTReduced preset keeps rho12 equal
    to chi and the IdealFree preset keeps 2 rho11 equal to chi unless a
    diffusion law is overridden explicitly. Custom starts from the ModelSpec
    defaults.

    Args:
        preset: Preset name
        overrides: ModelSpec field values replacing the preset defaults
        name: Scenario name (defaults to the preset name)
        grid: Mesh (defaults to 128 cells on [0, 1])
        initial_data: Initial data (defaults to random uniform data)
        ctrl: Time stepping settings
        monitors: Diagnostics settings

    Returns:
        Validated Scenario

    Raises:
        PresetError: If an override breaks the preset or is not a valid field

    Example:
        >>> build_preset(Preset.CLASSICAL_LV).spec.chi
        0.0
        >>> build_preset(Preset.CLASSICAL_LV, {"chi": 1.0})  # Raises PresetError
    """
    try:
        preset = Preset(preset)
    except ValueError as e:
        raise PresetError(f"unknown preset: {preset}") from e

    overrides = dict(overrides or {})
    try:
        spec = _preset_spec(preset, overrides)
    except ValidationError as e:
        raise PresetError(
            f"invalid model for {preset.value}: {describe_validation_error(e, 'model')}",
            preset=preset.value,
        ) from e

    problems = preset_violations(preset, spec)
    if problems:
        raise PresetError("; ".join(problems), preset=preset.value)

    return Scenario(
        name=name or preset.value,
        preset=preset,
        spec=spec,
        grid=grid or Grid(),
        initial_data=initial_data or RandomUniformInitial(),
        ctrl=ctrl or StepControl(),
        monitors=monitors or MonitorConfig(),
    )


# ==================== Sweep Points ====================


def _axis_changes(spec: ModelSpec, axis: SweepAxis, value: Any) -> dict[str, Any]:
    match axis:
        case SweepAxis.M1:
            law = spec.diffusion_law
            m_coef = law.M1 if isinstance(law, PowerLawDiffusion) else 1.0
            return {"diffusion_law": PowerLawDiffusion(M1=m_coef, m1=float(value))}
        case SweepAxis.M2:
            sens = spec.sensitivity_law
            m_coef = sens.M2 if isinstance(sens, PowerLawSensitivity) else 1.0
            return {"sensitivity_law": PowerLawSensitivity(M2=m_coef, m2=float(value))}
        case SweepAxis.ALPHA:
            return {"alpha": float(value)}
        case SweepAxis.CHI:
            return {"chi": float(value)}
        case SweepAxis.TAXIS_SIGN:
            return {"taxis_sign": value}
        case SweepAxis.V_DYNAMICS:
            return {"v_dynamics": value}
    return {}


def _coupled_law(spec: ModelSpec, changes: dict[str, Any]) -> dict[str, Any]:
    """Keep rho12 = chi (SKT) and 2 rho11 = chi (affine, ideal-free) when chi moves."""
    if "chi" not in changes or "diffusion_law" in changes:
        return changes
    chi = changes["chi"]
    law = spec.diffusion_law
    if isinstance(law, SKTCrossDiffusion) and law.rho12 == spec.chi:
        changes["diffusion_law"] = law.model_copy(update={"rho12": chi})
    elif (
        isinstance(law, AffineDiffusion)
        and spec.kinetics is KineticsMode.IDEAL_FREE
        and 2.0 * law.rho11 == spec.chi
    ):
        changes["diffusion_law"] = law.model_copy(update={"rho11": chi / 2.0})
    return changes


def _grid_for_dim(grid: Grid, dim: int) -> Grid:
    if dim == grid.dim:
        return grid
    if dim == 1:
        return Grid.line(grid.cells[0], grid.lengths[0])
    if dim == 2:
        length = grid.lengths[0]
        return Grid.rectangle(SQUARE_CELLS, SQUARE_CELLS, length, length)
    raise PresetError(f"dim must be 1 or 2, got {dim}")


def _initial_for_grid(initial: InitialData, grid: Grid) -> InitialData:
    if isinstance(initial, BumpInitial) and len(initial.center) != grid.dim:
        center = tuple(initial.center[0] for _ in range(grid.dim))
        return initial.model_copy(update={"center": center})
    return initial


def apply_axes(base: Scenario, point: Mapping[str, Any], name: str | None = None) -> Scenario:
    """Scenario for one sweep point.

    A point that breaks the structural constraints of the base preset is
    run as a Custom scenario.

    Raises:
        ValidationError: If the point yields invalid coefficients
    """
    changes: dict[str, Any] = {}
    grid = base.grid
    for key, value in point.items():
        axis = SweepAxis(key)
        if axis is SweepAxis.DIM:
            grid = _grid_for_dim(grid, int(value))
        else:
            changes.update(_axis_changes(base.spec, axis, value))
    spec = _rebuild(base.spec, **_coupled_law(base.spec, changes))

    preset = base.preset
    if preset_violations(preset, spec):
        logger.debug(f"Sweep point {dict(point)} leaves preset {preset.value}; running as Custom")
        preset = Preset.CUSTOM

    return _rebuild(
        base,
        name=name or base.name,
        preset=preset,
        spec=spec,
        grid=grid,
        initial_data=_initial_for_grid(base.initial_data, grid),
    )


def scenario_with_seed(scenario: Scenario, seed: int) -> Scenario:
    """Replace the generator seed of random initial data; other data is unchanged."""
    initial = scenario.initial_data
    if isinstance(initial, RandomUniformInitial):
        return scenario.model_copy(
            update={"initial_data": initial.model_copy(update={"rng_seed": seed})}
        )
    return scenario


def classify_agreement(guaranteed: bool, verdict: RunVerdict) -> AgreementClass:
    """Agreement class of one point; only a guaranteed unbounded run is an anomaly."""
    if verdict is RunVerdict.FAILED:
        return AgreementClass.FAILED
    if guaranteed:
        return AgreementClass.AGREE if verdict.is_bounded else AgreementClass.ANOMALY
    if verdict.is_bounded:
        return AgreementClass.NO_GUARANTEE_BOUNDED
    return AgreementClass.CONSISTENT_UNBOUNDED


# ==================== Sweeps ====================


@dataclass(frozen=True)
class _SweepJob:
    base: Scenario
    point_id: int
    point: dict[str, Any]
    seed: int
    record_runtime: bool


def _point_scenario(
    base: Scenario, point: Mapping[str, Any], seed: int, name: str | None = None
) -> Scenario:
    return scenario_with_seed(apply_axes(base, point, name=name), seed)


def _run_point(job: _SweepJob) -> tuple[SweepRow, RunSummary | None]:
    """Run one point; every failure becomes a Failed row."""
    started = time.perf_counter()
    row: dict[str, Any] = {
        "point_id": job.point_id,
        "seed": job.seed,
        "axis_values": job.point,
    }
    try:
        name = f"{job.base.name}-p{job.point_id}"
        scenario = _point_scenario(job.base, job.point, job.seed, name)
        reports = classify(scenario.spec, scenario.grid.dim)
        row["theory"] = {r.theorem_id.value: r.verdict.value for r in reports}
        row["guaranteed"] = guarantees_boundedness(reports)
        summary, _ = run_detailed(scenario)
    except (LVAdvectError, ValidationError, ValueError) as e:
        logger.warning(f"Sweep point {job.point_id} (seed {job.seed}) failed: {e}")
        runtime = time.perf_counter() - started
        return (
            SweepRow(
                **row,
                verdict=RunVerdict.FAILED,
                agreement=AgreementClass.FAILED,
                runtime_s=runtime if job.record_runtime else None,
                error=str(e),
            ),
            None,
        )

    runtime = time.perf_counter() - started
    sweep_row = SweepRow(
        **row,
        verdict=summary.verdict,
        agreement=classify_agreement(row["guaranteed"], summary.verdict),
        max_linf_u=summary.max_linf_u,
        runtime_s=runtime if job.record_runtime else None,
    )
    return sweep_row, summary


def run_sweep(
    plan: SweepPlan, worker_count: int = 1, cap: int = DEFAULT_SWEEP_CAP
) -> SweepResult:
    """Run every point of a plan for every replicate seed.

    Args:
        plan: Base scenario, axes and seeds
        worker_count: Worker processes; 1 runs in this process
        cap: Largest number of runs allowed

    Returns:
        SweepResult with rows in plan order (point-major, then seed)

    Raises:
        SweepCapError: If the plan expands to more than cap runs

    Example:
        >>> plan = SweepPlan(base=build_preset("AdvectiveLV"), axes={"m2": (0.5, 1.0, 3.0)})
        >>> len(run_sweep(plan, worker_count=3).rows)
        3
    """
    if plan.size > cap:
        raise SweepCapError(cap, plan.size)

    points = plan.points() or [{}]
    jobs = [
        _SweepJob(plan.base, point_id, point, seed, plan.record_runtime)
        for point_id, point in enumerate(points)
        for seed in plan.replicate_seeds
    ]
    logger.info(
        f"Starting sweep over {len(points)} points x {len(plan.replicate_seeds)} seeds",
        extra={"runs": len(jobs), "workers": worker_count},
    )

    if worker_count <= 1 or len(jobs) == 1:
        outcomes = [_run_point(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=worker_count) as executor:
            outcomes = list(executor.map(_run_point, jobs))

    rows = tuple(row for row, _ in outcomes)
    guaranteed = [row for row in rows if row.guaranteed]
    fraction = (
        sum(row.verdict.is_bounded for row in guaranteed) / len(guaranteed) if guaranteed else None
    )
    failed = sum(row.verdict is RunVerdict.FAILED for row in rows)
    logger.info(f"Sweep finished: {len(rows)} rows, {failed} failed")

    return SweepResult(
        rows=rows,
        satisfied_bounded_fraction=fraction,
        summaries=tuple(summary for _, summary in outcomes),
    )


def compare_theory(result: SweepResult) -> AgreementTable:
    """Cross-tabulate the theory guarantee against the numerical verdict.

    Returns:
        AgreementTable with counts keyed by "guaranteed"/"no_guarantee" and
        verdict, counts per agreement class, the row indices flagged as
        anomalies and the bounded fraction of guaranteed, non-failed rows
    """
    if not result.rows:
        return AgreementTable(crosstab={}, class_counts={})

    frame = pd.DataFrame(
        {
            "theory": ["guaranteed" if r.guaranteed else "no_guarantee" for r in result.rows],
            "verdict": [r.verdict.value for r in result.rows],
            "agreement": [r.agreement.value for r in result.rows],
        }
    )
    table = pd.crosstab(frame["theory"], frame["verdict"])
    crosstab = {
        str(theory): {str(verdict): int(count) for verdict, count in counts.items()}
        for theory, counts in table.to_dict(orient="index").items()
    }
    counts = frame["agreement"].value_counts().sort_index()
    class_counts = {str(k): int(v) for k, v in counts.items()}

    anomalies = tuple(i for i, r in enumerate(result.rows) if r.agreement is AgreementClass.ANOMALY)
    judged = [r for r in result.rows if r.guaranteed and r.verdict is not RunVerdict.FAILED]
    fraction = sum(r.verdict.is_bounded for r in judged) / len(judged) if judged else None
    if anomalies:
        logger.warning(
            f"{len(anomalies)} guaranteed points grew or blew up; "
            "refine the grid before reading them as counterexamples"
        )
    return AgreementTable(
        crosstab=crosstab,
        class_counts=class_counts,
        anomalies=anomalies,
        agreement_fraction=fraction,
    )


# ==================== Persistence ====================


def _theorem_columns(rows: tuple[SweepRow, ...]) -> list[str]:
    present = {key for row in rows for key in row.theory}
    return [t.value for t in TheoremId if t.value in present]


def rows_frame(result: SweepResult, plan: SweepPlan) -> pd.DataFrame:
    """rows.csv layout: ids, axis values, theory verdicts, outcome."""
    axis_names = [axis.value for axis in plan.axes]
    theorems = _theorem_columns(result.rows)
    records = []
    for row in result.rows:
        record: dict[str, Any] = {"point_id": row.point_id, "seed": row.seed}
        record.update({name: row.axis_values.get(name) for name in axis_names})
        record.update({theorem: row.theory.get(theorem, "") for theorem in theorems})
        record["verdict"] = row.verdict.value
        record["agreement"] = row.agreement.value
        record["max_linf_u"] = row.max_linf_u
        if plan.record_runtime:
            record["runtime_s"] = row.runtime_s
        records.append(record)

    columns = ["point_id", "seed", *axis_names, *theorems, "verdict", "agreement", "max_linf_u"]
    if plan.record_runtime:
        columns.append("runtime_s")
    return pd.DataFrame(records, columns=columns)


def write_sweep(
    result: SweepResult, plan: SweepPlan, out_dir: Path | str, float_format: str = "%.12g"
) -> Path:
    """Write plan.json, rows.csv, summaries/*.json and agreement.svg.

    A sweep of a single run also gets the run artifacts of that run
    (timeseries.csv, summary.json, final fields and plots) in the same
    directory; the run is repeated to recover its final state.

    Returns:
        The sweep directory
    """
    out = Path(out_dir)
    (out / "summaries").mkdir(parents=True, exist_ok=True)
    (out / "plan.json").write_text(plan.model_dump_json(indent=2) + "\n", encoding="utf-8")
    rows_frame(result, plan).to_csv(out / "rows.csv", index=False, float_format=float_format)

    for row, summary in zip(result.rows, result.summaries, strict=True):
        if summary is None:
            continue
        target = out / "summaries" / f"point-{row.point_id:04d}-seed-{row.seed}.json"
        target.write_text(summary.model_dump_json(indent=2) + "\n", encoding="utf-8")

    if len(result.rows) == 1 and result.summaries[0] is not None:
        row = result.rows[0]
        scenario = _point_scenario(plan.base, row.axis_values, row.seed)
        summary, state = run_detailed(scenario)
        write_run_artifacts(summary, state, scenario, out, float_format=float_format)

    write_agreement_plot(result, plan, out / "agreement.svg")
    logger.info(f"Wrote sweep artifacts to {out}")
    return out


def write_agreement_plot(result: SweepResult, plan: SweepPlan, path: Path) -> Path | None:
    """Heatmap of agreement classes over two axes (first seed per cell wins)."""
    axes = list(plan.heatmap_axes or tuple(plan.axes)[:2])
    if not axes:
        return None
    x_axis = axes[0].value
    y_axis = axes[1].value if len(axes) > 1 else None

    x_values = [str(v) for v in plan.axes[axes[0]]]
    y_values = [str(v) for v in plan.axes[axes[1]]] if y_axis else [""]
    cells: dict[tuple[str, str], str] = {}
    for row in result.rows:
        key = (
            str(row.axis_values.get(x_axis)),
            str(row.axis_values.get(y_axis)) if y_axis else "",
        )
        cells.setdefault(key, row.agreement.value)

    return category_heatmap(cells, x_values, y_values, path, xlabel=x_axis, ylabel=y_axis or "")


def write_run_artifacts(
    summary: RunSummary,
    state: RunState,
    scenario: Scenario,
    out_dir: Path | str,
    float_format: str = "%.12g",
) -> Path:
    """Write timeseries.csv, summary.json, final fields and plots/*.svg.

    Returns:
        The run directory
    """
    out = Path(out_dir)
    plots = out / "plots"
    plots.mkdir(parents=True, exist_ok=True)

    frame = history_frame(summary.history, scenario.monitors)
    frame.to_csv(out / "timeseries.csv", index=False, float_format=float_format)
    (out / "summary.json").write_text(summary.model_dump_json(indent=2) + "\n", encoding="utf-8")
    write_field_csv(state.u, out / "u_final.csv")
    write_field_csv(state.v, out / "v_final.csv")

    t = frame["t"].tolist()
    for column in ("mass_u", "linf_u", "linf_v", "l2_grad_v"):
        line_plot(
            {column: (t, frame[column].tolist())},
            plots / f"{column}.svg",
            title=f"{scenario.name}: {column}",
            xlabel="t",
            ylabel=column,
        )

    grid = scenario.grid
    if grid.dim == 1:
        x = grid.centers()[0].tolist()
        line_plot(
            {"u": (x, state.u.values.tolist()), "v": (x, state.v.values.tolist())},
            plots / "profiles.svg",
            title=f"{scenario.name}: t = {summary.t_final:.6g}",
            xlabel="x",
        )
    else:
        field_heatmap(state.u.values, plots / "u_final.svg", title="u")
        field_heatmap(state.v.values, plots / "v_final.svg", title="v")

    logger.info(f"Wrote run artifacts to {out}")
    return out
