"""Runtime diagnostics and boundedness verdicts.

This module measures the monitored norms of a state, checks the a-priori
bounds of the standard kinetics against a recorded history and turns the
history into a windowed boundedness verdict.
"""

import logging
from collections.abc import Sequence

import numpy as np
import pandas as pd

from lvadvect.exceptions import DomainError, InsufficientDataError, NotApplicableError
from lvadvect.grid import ScalarField, face_gradient
from lvadvect.models.control import MonitorConfig
from lvadvect.models.mesh import Grid
from lvadvect.models.results import BoundCheck, DiagnosticsRecord, WindowVerdict
from lvadvect.models.spec import KineticsMode, ModelSpec
from lvadvect.utils import exponent_key

logger = logging.getLogger(__name__)

# Monitors compared window against window for the Bounded verdict.
WINDOW_MONITORS = ("linf_u", "linf_v", "mass_u")


# ==================== Measurement ====================


def measure(
    u: ScalarField,
    v: ScalarField,
    grid: Grid,
    cfg: MonitorConfig,
    spec: ModelSpec | None = None,
    t: float = 0.0,
    dt: float = 0.0,
) -> DiagnosticsRecord:
    """Compute every monitored quantity of (u, v).

    Integrals are cell-volume-weighted sums; the gradient norm of v sums
    the squared face gradients over interior faces.

    Args:
        u: Density of u
        v: Density of v
        grid: Mesh both fields live on
        cfg: Monitor settings (Lp exponents)
        spec: Coefficients for the energy-like functional; without them, or
            outside standard kinetics, energy_like is None
        t: Time of the record
        dt: Step that produced the record

    Returns:
        DiagnosticsRecord

    Raises:
        DomainError: If u or v does not live on grid

    Example:
        >>> grid = Grid.line(4, 1.0)
        >>> u, v = ScalarField(grid, [0, 1, 2, 1]), ScalarField.constant(grid, 0)
        >>> record = measure(u, v, grid, MonitorConfig())
        >>> record.mass_u
        1.0
    """
    if u.grid != grid or v.grid != grid:
        raise DomainError("fields must live on the measured grid", field="grid")

    volume = grid.cell_volume
    values = u.values
    mass = float(values.sum() * volume)
    lp = {
        exponent_key(p): float(np.power(np.power(values, p).sum() * volume, 1.0 / p))
        for p in cfg.lp_exponents
    }
    grad_sq = sum(float(np.square(g).sum()) for g in face_gradient(v))
    l2_grad_v = float(np.sqrt(grad_sq * volume))
    linf_v = v.max()

    energy = None
    if spec is not None and spec.kinetics is KineticsMode.STANDARD:
        mu = spec.b2**2 * linf_v**2 / (2.0 * spec.D2)
        energy = (2.0 * mu / spec.b1) * mass + 0.5 * l2_grad_v**2

    return DiagnosticsRecord(
        t=t,
        dt=dt,
        mass_u=mass,
        lp_u=lp,
        linf_u=u.max(),
        linf_v=linf_v,
        l2_grad_v=l2_grad_v,
        energy_like=energy,
    )


def history_frame(history: Sequence[DiagnosticsRecord], cfg: MonitorConfig) -> pd.DataFrame:
    """Tabulate a history in timeseries.csv column order."""
    keys = [exponent_key(p) for p in cfg.lp_exponents]
    rows = [
        {
            "t": record.t,
            "dt": record.dt,
            "mass_u": record.mass_u,
            "linf_u": record.linf_u,
            "linf_v": record.linf_v,
            "l2_grad_v": record.l2_grad_v,
            **{f"lp_u_{key}": record.lp_u.get(key, np.nan) for key in keys},
            "energy_like": np.nan if record.energy_like is None else record.energy_like,
        }
        for record in history
    ]
    columns = ["t", "dt", "mass_u", "linf_u", "linf_v", "l2_grad_v"]
    columns += [f"lp_u_{key}" for key in keys] + ["energy_like"]
    return pd.DataFrame(rows, columns=columns)


# ==================== Bound Checks ====================


def _require_standard(spec: ModelSpec, operation: str) -> None:
    if spec.kinetics is not KineticsMode.STANDARD:
        raise NotApplicableError(
            f"{operation} needs standard Lotka-Volterra kinetics, got {spec.kinetics.value}",
            operation=operation,
        )


def _bound_check(name: str, values: Sequence[float], bound: float, tol: float) -> BoundCheck:
    worst = max(values) if values else 0.0
    passed = worst <= bound * (1.0 + tol)
    if not passed:
        logger.warning(f"{name} violated: {worst:.6g} > {bound:.6g}")
    return BoundCheck(name=name, passed=passed, bound=bound, worst=worst, margin=bound - worst)


def check_v_bound(
    history: Sequence[DiagnosticsRecord], spec: ModelSpec, v0_linf: float, tol: float = 1e-6
) -> BoundCheck:
    """Check sup v <= max(a2/c2, sup v0) on every record.

    Raises:
        NotApplicableError: Outside standard kinetics

    Example:
        >>> check_v_bound(history, ModelSpec(a2=2, c2=2), v0_linf=0.5).bound
        1.0
    """
    _require_standard(spec, "check_v_bound")
    bound = max(spec.a2 / spec.c2, v0_linf)
    return _bound_check("v_bound", [record.linf_v for record in history], bound, tol)


def check_mass_bound(
    history: Sequence[DiagnosticsRecord],
    spec: ModelSpec,
    grid: Grid,
    u0_mass: float,
    tol: float = 1e-6,
) -> BoundCheck:
    """Check int u <= max(int u0, |domain| (a1/b1)^(1/alpha)) on every record.

    The bound follows from Jensen's inequality applied to the integrated
    u-equation, which turns it into a logistic differential inequality.

    Raises:
        NotApplicableError: Outside standard kinetics
    """
    _require_standard(spec, "check_mass_bound")
    capacity = grid.volume * (spec.a1 / spec.b1) ** (1.0 / spec.alpha)
    bound = max(u0_mass, capacity)
    return _bound_check("mass_bound", [record.mass_u for record in history], bound, tol)


def _window_pair(values: Sequence[float], window: int) -> tuple[float, float] | None:
    if len(values) < 2 * window:
        return None
    previous = max(values[-2 * window : -window])
    last = max(values[-window:])
    return previous, last


def check_grad_v_trend(
    history: Sequence[DiagnosticsRecord], spec: ModelSpec, monitors: MonitorConfig
) -> BoundCheck:
    """Compare the gradient norm of v over the last two windows.

    Armed only for alpha >= 1 and at least two windows of records; an
    unarmed check passes with a note.
    """
    name = "grad_v_trend"
    if spec.alpha < 1:
        return BoundCheck(name=name, armed=False, passed=True, note="alpha < 1")

    pair = _window_pair([record.l2_grad_v for record in history], monitors.window)
    if pair is None:
        return BoundCheck(
            name=name,
            armed=False,
            passed=True,
            note=f"fewer than {2 * monitors.window} records",
        )
    previous, last = pair
    passed = last <= previous * (1.0 + monitors.window_tol)
    return BoundCheck(name=name, passed=passed, bound=previous, worst=last, margin=previous - last)


def energy_trend(history: Sequence[DiagnosticsRecord], monitors: MonitorConfig) -> BoundCheck:
    """Soft monitor of the energy-like functional; reported, never enforced."""
    name = "energy_like"
    values = [record.energy_like for record in history]
    if any(value is None for value in values):
        return BoundCheck(name=name, armed=False, passed=True, note="not recorded")

    pair = _window_pair([float(value) for value in values if value is not None], monitors.window)
    if pair is None:
        return BoundCheck(
            name=name,
            armed=False,
            passed=True,
            note=f"fewer than {2 * monitors.window} records",
        )
    previous, last = pair
    passed = last <= previous * (1.0 + monitors.window_tol)
    note = "" if passed else "energy-like functional still increasing over the last window"
    return BoundCheck(
        name=name, passed=passed, bound=previous, worst=last, margin=previous - last, note=note
    )


# ==================== Verdicts ====================


def boundedness_verdict(
    history: Sequence[DiagnosticsRecord], cfg: MonitorConfig
) -> WindowVerdict:
    """Judge boundedness from the last two windows of a history.

    Bounded: every monitor's maximum over the last window stays within
    window_tol of its maximum over the previous window. Growing: sup u at
    the end is at least growth_factor times its value half-way through,
    with a positive least-squares slope over the final half. Otherwise
    Inconclusive.

    Args:
        history: Records in time order
        cfg: Window length and tolerances

    Returns:
        WindowVerdict.BOUNDED, GROWING or INCONCLUSIVE

    Raises:
        InsufficientDataError: If fewer than 2 * cfg.window records are given
    """
    required = 2 * cfg.window
    if len(history) < required:
        raise InsufficientDataError(required, len(history))

    columns = ["t", *WINDOW_MONITORS]
    frame = pd.DataFrame([[getattr(r, name) for name in columns] for r in history], columns=columns)
    if not np.isfinite(frame.to_numpy()).all():
        return WindowVerdict.INCONCLUSIVE

    previous = frame.iloc[-required : -cfg.window].max()
    last = frame.iloc[-cfg.window :].max()
    if all(last[name] <= previous[name] * (1.0 + cfg.window_tol) for name in WINDOW_MONITORS):
        return WindowVerdict.BOUNDED

    half = frame.iloc[len(frame) // 2 :]
    start, end = float(half["linf_u"].iloc[0]), float(half["linf_u"].iloc[-1])
    if end >= cfg.growth_factor * start and len(half) >= 2:
        slope = np.polyfit(half["t"].to_numpy(), half["linf_u"].to_numpy(), 1)[0]
        if slope > 0:
            return WindowVerdict.GROWING

    return WindowVerdict.INCONCLUSIVE
