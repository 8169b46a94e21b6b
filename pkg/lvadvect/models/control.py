"""Solver and monitor settings.

This module contains StepControl (time stepping, linear and nonlinear
solver tolerances) and MonitorConfig (diagnostics and verdict windows).
"""

from pydantic import Field, field_validator, model_validator

from lvadvect.models.common import FrozenModel


class StepControl(FrozenModel):
    """Time integration and solver settings.

    Attributes:
        dt_init: First step size
        dt_min: Underflow limit; falling below it suggests blow-up
        dt_max: Largest step size
        dt_growth: Step growth factor after an accepted step
        cfl_adv: Advective CFL number in (0, 1]
        blowup_linf: sup-norm of u above which the run is flagged as blowing up
        t_end: Final time
        newton_tol: Residual sup-norm target of the elliptic solve
        newton_max_iter: Newton iteration budget of the elliptic solve
        picard_max_iter: Picard fallback budget of the elliptic solve
        linear_tol: Relative tolerance of the conjugate-gradient solves
        negativity_tol: Negative values above -negativity_tol * max(1, sup-norm)
            are treated as round-off and clipped to zero
        steady_tol: Rate below which a step counts as stationary
        steady_window: Consecutive stationary steps that end a run

    Example:
        >>> StepControl(dt_init=1e-3, dt_min=1e-2)  # Raises ValidationError
    """

    dt_init: float = Field(default=1e-3, gt=0, description="Initial step size")
    dt_min: float = Field(default=1e-10, gt=0, description="Minimum step size")
    dt_max: float = Field(default=0.1, gt=0, description="Maximum step size")
    dt_growth: float = Field(default=1.5, ge=1, description="Step growth factor")
    cfl_adv: float = Field(default=0.5, gt=0, le=1, description="Advective CFL number")
    blowup_linf: float = Field(default=1e8, gt=0, description="Blow-up threshold on sup u")
    t_end: float = Field(default=100.0, gt=0, description="Final time")
    newton_tol: float = Field(default=1e-10, gt=0, description="Elliptic residual tolerance")
    newton_max_iter: int = Field(default=50, ge=1, description="Newton iteration budget")
    picard_max_iter: int = Field(default=2000, ge=1, description="Picard fallback budget")
    linear_tol: float = Field(default=1e-12, gt=0, description="CG relative tolerance")
    negativity_tol: float = Field(default=1e-10, ge=0, description="Round-off negativity")
    steady_tol: float = Field(default=1e-8, gt=0, description="Stationarity threshold")
    steady_window: int = Field(default=50, ge=1, description="Stationary steps to stop")

    @model_validator(mode="after")
    def _check_step_bounds(self) -> "StepControl":
        if not self.dt_min < self.dt_init:
            raise ValueError(
                f"dt_min ({self.dt_min}) must be smaller than dt_init ({self.dt_init})"
            )
        if not self.dt_init <= self.dt_max:
            raise ValueError(f"dt_init ({self.dt_init}) must not exceed dt_max ({self.dt_max})")
        return self


class MonitorConfig(FrozenModel):
    """Diagnostics settings.

    Attributes:
        lp_exponents: Exponents p >= 1 of the tracked Lp norms of u
        window: Steps per verdict window (at least 2)
        bound_tol: Relative slack of the v and mass bound checks
        window_tol: Relative slack of the window comparison
        growth_factor: Increase of sup u over the final half of the run that
            counts as growth
    """

    lp_exponents: tuple[float, ...] = Field(default=(1.0, 2.0, 4.0), description="Lp exponents")
    window: int = Field(default=200, ge=2, description="Verdict window in steps")
    bound_tol: float = Field(default=1e-6, ge=0, description="Bound check tolerance")
    window_tol: float = Field(default=1e-2, ge=0, description="Window comparison tolerance")
    growth_factor: float = Field(default=2.0, gt=1, description="Growth detection factor")

    @field_validator("lp_exponents")
    @classmethod
    def _check_exponents(cls, value: tuple[float, ...]) -> tuple[float, ...]:
        if not value:
            raise ValueError("lp_exponents must not be empty")
        if any(p < 1 for p in value):
            raise ValueError(f"lp_exponents must all be >= 1, got {value}")
        return value
