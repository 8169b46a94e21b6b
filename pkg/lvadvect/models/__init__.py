"""Data models for lvadvect.

This package contains all pydantic models used across the lab.
"""

from lvadvect.models.common import FrozenModel
from lvadvect.models.control import MonitorConfig, StepControl
from lvadvect.models.mesh import Grid
from lvadvect.models.reports import (
    CompetitionKind,
    CompetitionType,
    RegimeReport,
    RegimeVerdict,
    TheoremId,
)
from lvadvect.models.results import (
    AgreementClass,
    AgreementTable,
    BoundCheck,
    DiagnosticsRecord,
    DiagnosticsSummary,
    NewtonStats,
    RunSummary,
    RunVerdict,
    SweepResult,
    SweepRow,
    WindowVerdict,
)
from lvadvect.models.scenario import (
    BumpInitial,
    ConstantInitial,
    FileInitial,
    InitialData,
    Preset,
    RandomUniformInitial,
    Scenario,
    SweepAxis,
    SweepPlan,
    SweepSettings,
    preset_violations,
)
from lvadvect.models.spec import (
    AffineDiffusion,
    ConstantResource,
    CosineResource,
    DiffusionLaw,
    FileResource,
    KineticsMode,
    LinearSensitivity,
    ModelSpec,
    PowerLawDiffusion,
    PowerLawSensitivity,
    ResourceField,
    SensitivityLaw,
    SKTCrossDiffusion,
    TaxisSign,
    VDynamics,
)

__all__ = [
    # Common
    "FrozenModel",
    # Model coefficients and laws
    "ModelSpec",
    "TaxisSign",
    "VDynamics",
    "KineticsMode",
    "DiffusionLaw",
    "PowerLawDiffusion",
    "AffineDiffusion",
    "SKTCrossDiffusion",
    "SensitivityLaw",
    "PowerLawSensitivity",
    "LinearSensitivity",
    "ResourceField",
    "ConstantResource",
    "CosineResource",
    "FileResource",
    # Mesh and control
    "Grid",
    "StepControl",
    "MonitorConfig",
    # Reports
    "TheoremId",
    "RegimeVerdict",
    "RegimeReport",
    "CompetitionKind",
    "CompetitionType",
    # Scenarios
    "Preset",
    "Scenario",
    "InitialData",
    "ConstantInitial",
    "BumpInitial",
    "RandomUniformInitial",
    "FileInitial",
    "SweepAxis",
    "SweepSettings",
    "SweepPlan",
    "preset_violations",
    # Results
    "RunVerdict",
    "WindowVerdict",
    "DiagnosticsRecord",
    "BoundCheck",
    "NewtonStats",
    "DiagnosticsSummary",
    "RunSummary",
    "AgreementClass",
    "SweepRow",
    "SweepResult",
    "AgreementTable",
]
