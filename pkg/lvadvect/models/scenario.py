"""Scenario and sweep plan models.

This module contains Scenario (preset + model + grid + initial data +
solver settings), the initial-data variants and SweepPlan.
"""

import itertools
import math
from enum import StrEnum
from pathlib import Path
from typing import Annotated, Any, Literal

from pydantic import Field, field_validator, model_validator

from lvadvect.models.common import FrozenModel
from lvadvect.models.control import MonitorConfig, StepControl
from lvadvect.models.mesh import Grid
from lvadvect.models.spec import (
    AffineDiffusion,
    KineticsMode,
    LinearSensitivity,
    ModelSpec,
    PowerLawDiffusion,
    SKTCrossDiffusion,
    TaxisSign,
)


class Preset(StrEnum):
    """Named systems with fixed structural constraints."""

    CLASSICAL_LV = "ClassicalLV"
    ADVECTIVE_LV = "AdvectiveLV"
    SKT_REDUCED = "SKTReduced"
    IDEAL_FREE = "IdealFree"
    CUSTOM = "Custom"


# ==================== Initial Data ====================


class ConstantInitial(FrozenModel):
    """u = u0, v = v0 everywhere."""

    kind: Literal["constant"] = "constant"
    u0: float = Field(default=1.0, ge=0, description="Initial u level")
    v0: float = Field(default=1.0, ge=0, description="Initial v level")


class BumpInitial(FrozenModel):
    """Gaussian bump in u over a background; v starts constant.

    u = background + amplitude * exp(-|x - center|^2 / (2 width^2))
    """

    kind: Literal["bump"] = "bump"
    center: tuple[float, ...] = Field(default=(0.5,), description="Bump center per axis")
    width: float = Field(default=0.1, gt=0, description="Bump standard deviation")
    amplitude: float = Field(default=1.0, ge=0, description="Bump height")
    background: float = Field(default=0.0, ge=0, description="Level away from the bump")
    v0: float = Field(default=0.5, ge=0, description="Initial v level")


class RandomUniformInitial(FrozenModel):
    """u and v drawn independently per cell from U(lo, hi)."""

    kind: Literal["random_uniform"] = "random_uniform"
    lo: float = Field(default=0.1, ge=0, description="Lower bound")
    hi: float = Field(default=1.0, ge=0, description="Upper bound")
    rng_seed: int = Field(default=0, ge=0, description="Generator seed")

    @model_validator(mode="after")
    def _check_range(self) -> "RandomUniformInitial":
        if self.hi < self.lo:
            raise ValueError(f"hi ({self.hi}) must not be below lo ({self.lo})")
        return self


class FileInitial(FrozenModel):
    """u (and optionally v) read from field CSV files; v defaults to v0."""

    kind: Literal["file"] = "file"
    u_path: Path = Field(..., description="Field CSV for u")
    v_path: Path | None = Field(default=None, description="Field CSV for v")
    v0: float = Field(default=0.0, ge=0, description="v level when v_path is absent")


InitialData = Annotated[
    ConstantInitial | BumpInitial | RandomUniformInitial | FileInitial,
    Field(discriminator="kind"),
]


# ==================== Scenario ====================


def _same(a: float, b: float) -> bool:
    return math.isclose(a, b, rel_tol=1e-12, abs_tol=1e-15)


def preset_violations(preset: Preset, spec: ModelSpec) -> list[str]:
    """List the structural constraints of a preset that spec breaks.

    Args:
        preset: Preset to check against
        spec: Model coefficients

    Returns:
        Human-readable violations; empty when spec fits the preset

    Example:
        >>> preset_violations(Preset.CLASSICAL_LV, ModelSpec(chi=1.0))
        ['ClassicalLV requires chi = 0, got 1.0']
    """
    problems: list[str] = []
    name = preset.value
    law = spec.diffusion_law

    if preset is Preset.CLASSICAL_LV:
        if spec.chi != 0:
            problems.append(f"{name} requires chi = 0, got {spec.chi}")
        if spec.alpha != 1:
            problems.append(f"{name} requires alpha = 1, got {spec.alpha}")
        if not (isinstance(law, PowerLawDiffusion) and law.m1 == 0):
            problems.append(f"{name} requires a constant power-law diffusion (m1 = 0)")
        if spec.kinetics is not KineticsMode.STANDARD:
            problems.append(f"{name} requires standard kinetics")

    elif preset is Preset.ADVECTIVE_LV:
        if spec.alpha != 1:
            problems.append(f"{name} requires alpha = 1, got {spec.alpha}")
        if not isinstance(spec.sensitivity_law, LinearSensitivity):
            problems.append(f"{name} requires the linear sensitivity phi(u) = u")
        if spec.kinetics is not KineticsMode.STANDARD:
            problems.append(f"{name} requires standard kinetics")

    elif preset is Preset.SKT_REDUCED:
        if not isinstance(law, SKTCrossDiffusion):
            problems.append(f"{name} requires the skt_cross diffusion law")
        elif not _same(law.rho12, spec.chi):
            problems.append(f"{name} requires chi = rho12, got chi={spec.chi}, rho12={law.rho12}")
        if not isinstance(spec.sensitivity_law, LinearSensitivity):
            problems.append(f"{name} requires the linear sensitivity phi(u) = u")
        if spec.alpha != 1:
            problems.append(f"{name} requires alpha = 1, got {spec.alpha}")
        if spec.taxis_sign is not TaxisSign.REPULSION:
            problems.append(f"{name} requires repulsion")
        if spec.kinetics is not KineticsMode.STANDARD:
            problems.append(f"{name} requires standard kinetics")

    elif preset is Preset.IDEAL_FREE:
        if spec.kinetics is not KineticsMode.IDEAL_FREE:
            problems.append(f"{name} requires ideal_free kinetics with a resource field")
        if not isinstance(law, AffineDiffusion):
            problems.append(f"{name} requires the affine diffusion law")
        elif not _same(2.0 * law.rho11, spec.chi):
            problems.append(f"{name} requires chi = 2 rho11, got chi={spec.chi}, rho11={law.rho11}")
        if not isinstance(spec.sensitivity_law, LinearSensitivity):
            problems.append(f"{name} requires the linear sensitivity phi(u) = u")
        if spec.taxis_sign is not TaxisSign.REPULSION:
            problems.append(f"{name} requires repulsion")

    return problems


class Scenario(FrozenModel):
    """One fully specified simulation.

    Attributes:
        name: Label used in artifacts
        preset: Named system the spec must conform to (Custom: no constraints)
        spec: Model coefficients
        grid: Mesh
        initial_data: Initial u and v
        ctrl: Time stepping settings
        monitors: Diagnostics settings
    """

    name: str = Field(default="scenario", min_length=1, description="Scenario label")
    preset: Preset = Field(default=Preset.CUSTOM, description="Preset tag")
    spec: ModelSpec = Field(default_factory=ModelSpec)
    grid: Grid = Field(default_factory=Grid)
    initial_data: InitialData = Field(default_factory=RandomUniformInitial)
    ctrl: StepControl = Field(default_factory=StepControl)
    monitors: MonitorConfig = Field(default_factory=MonitorConfig)

    @model_validator(mode="after")
    def _check_preset(self) -> "Scenario":
        problems = preset_violations(self.preset, self.spec)
        if problems:
            raise ValueError("; ".join(problems))
        initial = self.initial_data
        if isinstance(initial, BumpInitial) and len(initial.center) != self.grid.dim:
            raise ValueError(
                f"bump center has {len(self.initial_data.center)} coordinates "
                f"but the grid is {self.grid.dim}D"
            )
        return self


# ==================== Sweeps ====================


class SweepAxis(StrEnum):
    M1 = "m1"
    M2 = "m2"
    ALPHA = "alpha"
    CHI = "chi"
    TAXIS_SIGN = "taxis_sign"
    V_DYNAMICS = "v_dynamics"
    DIM = "dim"


AxisValue = float | str


class SweepSettings(FrozenModel):
    """Sweep section of a config file: axes, seeds and output options.

    Attributes:
        axes: Axis name to list of values, expanded as a Cartesian product in
            insertion order
        replicate_seeds: Seeds run for every point
        record_runtime: Add a runtime column to rows.csv (breaks byte equality
            between reruns)
        heatmap_axes: Axes of the agreement heatmap; defaults to the first two
    """

    axes: dict[SweepAxis, tuple[AxisValue, ...]] = Field(default_factory=dict)
    replicate_seeds: tuple[int, ...] = Field(default=(0,), description="Seeds per point")
    record_runtime: bool = Field(default=False, description="Record wall time per run")
    heatmap_axes: tuple[SweepAxis, SweepAxis] | None = Field(default=None)

    @field_validator("axes")
    @classmethod
    def _check_axes(
        cls, value: dict[SweepAxis, tuple[AxisValue, ...]]
    ) -> dict[SweepAxis, tuple[AxisValue, ...]]:
        for axis, values in value.items():
            if not values:
                raise ValueError(f"axis {axis.value} has no values")
        return value

    @field_validator("replicate_seeds")
    @classmethod
    def _check_seeds(cls, value: tuple[int, ...]) -> tuple[int, ...]:
        if not value:
            raise ValueError("replicate_seeds must not be empty")
        return value

    @model_validator(mode="after")
    def _check_heatmap(self) -> "SweepSettings":
        if self.heatmap_axes is not None:
            missing = [a.value for a in self.heatmap_axes if a not in self.axes]
            if missing:
                raise ValueError(f"heatmap_axes not among the sweep axes: {missing}")
        return self

    @property
    def point_count(self) -> int:
        return math.prod(len(values) for values in self.axes.values())

    @property
    def size(self) -> int:
        """Number of runs: Cartesian points times seeds."""
        return self.point_count * len(self.replicate_seeds)

    def points(self) -> list[dict[str, Any]]:
        """Cartesian product of the axes, first axis varying slowest."""
        names = [axis.value for axis in self.axes]
        return [
            dict(zip(names, combo, strict=True))
            for combo in itertools.product(*self.axes.values())
        ]


class SweepPlan(SweepSettings):
    """A base scenario plus sweep settings.

    Example:
        >>> plan = SweepPlan(base=scenario, axes={"m2": (0.5, 1.0, 3.0)}, replicate_seeds=(0, 1))
        >>> plan.size
        6
    """

    base: Scenario = Field(..., description="Scenario every point starts from")
