"""Run and sweep result models.

This module contains the diagnostic record written every accepted step,
bound-check outcomes, RunSummary and the sweep result rows.
"""

from enum import StrEnum

from pydantic import Field

from lvadvect.models.common import FrozenModel


class RunVerdict(StrEnum):
    BOUNDED = "Bounded"
    CONVERGED = "ConvergedToSteadyState"
    GROWING = "Growing"
    BLOW_UP_SUSPECTED = "BlowUpSuspected"
    FAILED = "Failed"

    @property
    def is_bounded(self) -> bool:
        return self in (RunVerdict.BOUNDED, RunVerdict.CONVERGED)

    @property
    def is_unbounded(self) -> bool:
        return self in (RunVerdict.GROWING, RunVerdict.BLOW_UP_SUSPECTED)


class WindowVerdict(StrEnum):
    BOUNDED = "Bounded"
    GROWING = "Growing"
    INCONCLUSIVE = "Inconclusive"
    INSUFFICIENT_DATA = "InsufficientData"


class DiagnosticsRecord(FrozenModel):
    """Monitored quantities at one accepted time level.

    Attributes:
        t: Time
        dt: Step that produced this level (0 for the initial record)
        mass_u: Integral of u
        lp_u: Lp norm of u keyed by exponent ("1", "2", "4")
        linf_u: sup-norm of u
        linf_v: sup-norm of v
        l2_grad_v: L2 norm of grad v
        energy_like: (2 mu / b1) int u + 1/2 int |grad v|^2 with
            mu = b2^2 |v|_inf^2 / (2 D2); None when no coefficients were given
    """

    t: float
    dt: float = 0.0
    mass_u: float
    lp_u: dict[str, float] = Field(default_factory=dict)
    linf_u: float
    linf_v: float
    l2_grad_v: float
    energy_like: float | None = None


class BoundCheck(FrozenModel):
    """Outcome of a runtime bound check.

    Attributes:
        name: Monitor name
        armed: False when the hypothesis of the bound does not hold; the
            check then passes vacuously
        passed: Whether every recorded value stayed within the bound
        bound: Bound value (None for trend checks)
        worst: Largest recorded value
        margin: bound - worst (positive means slack)
        note: Context
    """

    name: str
    armed: bool = True
    passed: bool
    bound: float | None = None
    worst: float | None = None
    margin: float | None = None
    note: str = ""


class NewtonStats(FrozenModel):
    """Elliptic solver counters accumulated over a run."""

    solves: int = 0
    newton_iterations: int = 0
    picard_iterations: int = 0
    picard_fallbacks: int = 0
    trivial_solutions: int = 0

    def merged(self, other: "NewtonStats") -> "NewtonStats":
        return NewtonStats(
            solves=self.solves + other.solves,
            newton_iterations=self.newton_iterations + other.newton_iterations,
            picard_iterations=self.picard_iterations + other.picard_iterations,
            picard_fallbacks=self.picard_fallbacks + other.picard_fallbacks,
            trivial_solutions=self.trivial_solutions + other.trivial_solutions,
        )


class DiagnosticsSummary(FrozenModel):
    """Bound checks and window verdict attached to a RunSummary."""

    window_verdict: WindowVerdict
    v_bound: BoundCheck | None = None
    mass_bound: BoundCheck | None = None
    grad_v_trend: BoundCheck | None = None
    energy_like: BoundCheck | None = None


class RunSummary(FrozenModel):
    """Final verdict of a run with its diagnostics.

    The full time series is kept in ``history`` for plotting and CSV export
    but left out of the JSON summary.
    """

    scenario: str
    verdict: RunVerdict
    t_final: float
    steps: int
    rejected_steps: int
    max_linf_u: float
    final: DiagnosticsRecord
    newton: NewtonStats = Field(default_factory=NewtonStats)
    notes: tuple[str, ...] = ()
    diagnostics: DiagnosticsSummary
    history: tuple[DiagnosticsRecord, ...] = Field(default=(), exclude=True)


class AgreementClass(StrEnum):
    """Theory versus numerics for one sweep point.

    The criteria are sufficient conditions, so only a guaranteed point that
    grows or blows up counts as an anomaly.
    """

    AGREE = "agree"
    ANOMALY = "anomaly"
    NO_GUARANTEE_BOUNDED = "no_guarantee_bounded"
    CONSISTENT_UNBOUNDED = "consistent_unbounded"
    FAILED = "failed"


class SweepRow(FrozenModel):
    """One sweep point and seed."""

    point_id: int
    seed: int
    axis_values: dict[str, float | str]
    theory: dict[str, str] = Field(default_factory=dict, description="Theorem id to verdict")
    guaranteed: bool = False
    verdict: RunVerdict
    agreement: AgreementClass
    max_linf_u: float | None = None
    runtime_s: float | None = None
    error: str | None = None


class SweepResult(FrozenModel):
    """All rows of a sweep in plan order with aggregate agreement."""

    rows: tuple[SweepRow, ...]
    satisfied_bounded_fraction: float | None = Field(
        default=None,
        description="Fraction of theory-guaranteed points with a bounded verdict",
    )
    summaries: tuple[RunSummary | None, ...] = Field(default=(), exclude=True)


class AgreementTable(FrozenModel):
    """Cross-tabulation of theory guarantee against numerical verdict."""

    crosstab: dict[str, dict[str, int]]
    class_counts: dict[str, int]
    anomalies: tuple[int, ...] = ()
    agreement_fraction: float | None = None
