"""Pytest configuration and fixtures for lvadvect tests.

This module provides common fixtures and configuration for all tests.
"""

from collections.abc import Callable
from pathlib import Path

import numpy as np
import pytest

from lvadvect import Grid, ModelSpec, MonitorConfig, Scenario, StepControl
from lvadvect.grid import ScalarField
from lvadvect.models import ConstantInitial, PowerLawDiffusion, Preset
from lvadvect.models.results import DiagnosticsRecord

# ==================== Model Fixtures ====================


@pytest.fixture
def weak_spec() -> ModelSpec:
    """Weak-competition coefficients (3, 2, 1, 2, 1, 2) without taxis.

    Returns:
        ModelSpec with coexistence state (4/3, 1/3)
    """
    return ModelSpec(a1=3.0, b1=2.0, c1=1.0, a2=2.0, b2=1.0, c2=2.0, chi=0.0)


@pytest.fixture
def taxis_spec() -> ModelSpec:
    """Weak-competition coefficients with linear repulsive taxis.

    Returns:
        ModelSpec with chi = 1 and constant D1
    """
    return ModelSpec(chi=1.0, diffusion_law=PowerLawDiffusion(M1=1.0, m1=0.0))


# ==================== Grid Fixtures ====================


@pytest.fixture
def line_grid() -> Grid:
    """Small 1D grid.

    Returns:
        Grid with 16 cells on [0, 1]
    """
    return Grid.line(16, 1.0)


@pytest.fixture
def square_grid() -> Grid:
    """Small 2D grid.

    Returns:
        Grid with 8 x 6 cells on [0, 1] x [0, 0.75]
    """
    return Grid.rectangle(8, 6, 1.0, 0.75)


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator for reproducible random fields."""
    return np.random.default_rng(1234)


@pytest.fixture
def random_fields(
    line_grid: Grid, rng: np.random.Generator
) -> tuple[ScalarField, ScalarField]:
    """Random positive (u, v) on the 1D grid.

    Returns:
        Tuple of fields with values in [0.1, 1.5]
    """
    u = ScalarField(line_grid, rng.uniform(0.1, 1.5, line_grid.shape))
    v = ScalarField(line_grid, rng.uniform(0.1, 1.5, line_grid.shape))
    return u, v


# ==================== Scenario Fixtures ====================


@pytest.fixture
def short_ctrl() -> StepControl:
    """Step control for runs that finish in well under a second.

    Returns:
        StepControl with t_end = 0.5
    """
    return StepControl(dt_init=1e-3, dt_max=0.05, t_end=0.5, steady_window=10)


@pytest.fixture
def small_monitors() -> MonitorConfig:
    """Monitor settings with a short verdict window.

    Returns:
        MonitorConfig with window = 5
    """
    return MonitorConfig(window=5)


@pytest.fixture
def short_scenario(
    weak_spec: ModelSpec,
    line_grid: Grid,
    short_ctrl: StepControl,
    small_monitors: MonitorConfig,
) -> Scenario:
    """ClassicalLV scenario on a small grid with a short horizon.

    Returns:
        Scenario with constant initial data (1, 1)
    """
    return Scenario(
        name="short",
        preset=Preset.CLASSICAL_LV,
        spec=weak_spec,
        grid=line_grid,
        initial_data=ConstantInitial(u0=1.0, v0=1.0),
        ctrl=short_ctrl,
        monitors=small_monitors,
    )


# ==================== Diagnostics Fixtures ====================


def _make_history(
    linf_u: list[float],
    linf_v: list[float] | None = None,
    mass_u: list[float] | None = None,
    l2_grad_v: list[float] | None = None,
    energy: list[float] | None = None,
) -> list[DiagnosticsRecord]:
    n = len(linf_u)
    linf_v = linf_v if linf_v is not None else [1.0] * n
    mass_u = mass_u if mass_u is not None else [1.0] * n
    l2_grad_v = l2_grad_v if l2_grad_v is not None else [0.0] * n
    return [
        DiagnosticsRecord(
            t=float(i),
            dt=1.0 if i else 0.0,
            mass_u=mass_u[i],
            lp_u={"1": mass_u[i]},
            linf_u=linf_u[i],
            linf_v=linf_v[i],
            l2_grad_v=l2_grad_v[i],
            energy_like=None if energy is None else energy[i],
        )
        for i in range(n)
    ]


@pytest.fixture
def make_history() -> Callable[..., list[DiagnosticsRecord]]:
    """Factory for synthetic histories with t = 0, 1, 2, ...

    Returns:
        Function taking per-record lists of linf_u (required), linf_v,
        mass_u, l2_grad_v and energy
    """
    return _make_history


# ==================== File Fixtures ====================


@pytest.fixture
def config_text() -> str:
    """Minimal ClassicalLV scenario file.

    Returns:
        YAML text
    """
    return (
        "name: tiny\n"
        "preset: ClassicalLV\n"
        "model:\n"
        "  a1: 3.0\n"
        "grid:\n"
        "  cells: [16]\n"
        "  lengths: [1.0]\n"
        "initial:\n"
        "  kind: constant\n"
        "  u0: 1.0\n"
        "  v0: 1.0\n"
        "control:\n"
        "  t_end: 0.2\n"
        "  dt_max: 0.05\n"
        "monitors:\n"
        "  window: 5\n"
    )


@pytest.fixture
def config_path(tmp_path: Path, config_text: str) -> Path:
    """config_text written to a temporary file."""
    path = tmp_path / "scenario.yaml"
    path.write_text(config_text, encoding="utf-8")
    return path
