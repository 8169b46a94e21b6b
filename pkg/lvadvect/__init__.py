"""lvadvect - numerical lab for competition systems with nonlinear diffusion and taxis.

The lab classifies a two-species Lotka-Volterra model with density-dependent
diffusion and taxis against a set of boundedness criteria, integrates it
with a positivity-preserving finite-volume scheme and compares both across
parameter sweeps.

Quick Start:
    >>> from lvadvect import Preset, build_preset, classify, run
    >>>
    >>> scenario = build_preset(Preset.ADVECTIVE_LV, {"chi": 2.0})
    >>> for report in classify(scenario.spec, scenario.grid.dim):
    ...     print(report.format_line())
    >>>
    >>> summary = run(scenario)
    >>> print(f"Verdict: {summary.verdict.value}")
"""

__version__ = "1.0.0"

from lvadvect.config import LabConfig
from lvadvect.exceptions import (
    ConfigurationError,
    DomainError,
    DtUnderflowError,
    InsufficientDataError,
    LinearSolveError,
    LVAdvectError,
    NoConvergenceError,
    NotApplicableError,
    PresetError,
    StepRejected,
    SweepCapError,
)
from lvadvect.grid import ScalarField, div_total_flux, face_gradient, neumann_laplacian_matrix
from lvadvect.harness import build_preset, compare_theory, run_sweep
from lvadvect.kinetics import eval_diffusion, eval_kinetics, eval_sensitivity
from lvadvect.models import (
    Grid,
    ModelSpec,
    MonitorConfig,
    Preset,
    RegimeReport,
    RegimeVerdict,
    RunSummary,
    RunVerdict,
    Scenario,
    StepControl,
    SweepPlan,
    SweepResult,
    TheoremId,
)
from lvadvect.stepper import (
    RunState,
    run,
    solve_elliptic_v,
    step_parabolic,
    step_parabolic_elliptic,
)
from lvadvect.theory import classify, coexistence_steady_state, competition_type

__all__ = [
    # Version
    "__version__",
    # Config
    "LabConfig",
    # Exceptions
    "LVAdvectError",
    "ConfigurationError",
    "PresetError",
    "SweepCapError",
    "DomainError",
    "NotApplicableError",
    "StepRejected",
    "DtUnderflowError",
    "LinearSolveError",
    "NoConvergenceError",
    "InsufficientDataError",
    # Models
    "ModelSpec",
    "Grid",
    "StepControl",
    "MonitorConfig",
    "Scenario",
    "Preset",
    "SweepPlan",
    "SweepResult",
    "RegimeReport",
    "RegimeVerdict",
    "TheoremId",
    "RunSummary",
    "RunVerdict",
    # Theory
    "classify",
    "competition_type",
    "coexistence_steady_state",
    # Operators
    "eval_diffusion",
    "eval_sensitivity",
    "eval_kinetics",
    "ScalarField",
    "face_gradient",
    "div_total_flux",
    "neumann_laplacian_matrix",
    # Time stepping
    "RunState",
    "step_parabolic",
    "step_parabolic_elliptic",
    "solve_elliptic_v",
    "run",
    # Harness
    "build_preset",
    "run_sweep",
    "compare_theory",
]
