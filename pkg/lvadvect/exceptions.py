"""Exception hierarchy for lvadvect.

This module defines all custom exceptions raised by the lab.
All exceptions inherit from LVAdvectError for easy catching.
"""


class LVAdvectError(Exception):
    """Base exception for all lab errors.

    Example:
        >>> try:
        ...     run(scenario)
        ... except LVAdvectError as e:
        ...     print(f"lvadvect error: {e}")
    """


class ConfigurationError(LVAdvectError):
    """Invalid configuration error.

    Raised when a scenario, config file or LabConfig is malformed, such as:
    - Unknown or missing keys in a config file
    - Values outside their physical range
    - Environment variables that cannot be parsed

    Example:
        >>> LabConfig(sweep_cap=0)
        ... # Raises: ConfigurationError("sweep_cap must be positive, got: 0")
    """


class PresetError(ConfigurationError):
    """Override incompatible with the selected preset.

    Attributes:
        preset: Name of the preset whose constraints were broken

    Example:
        >>> build_preset(Preset.CLASSICAL_LV, {"chi": 1.0})
        ... # Raises: PresetError("ClassicalLV requires chi = 0, got 1.0")
    """

    def __init__(self, message: str, preset: str | None = None) -> None:
        """Initialize preset error.

        Args:
            message: Error message
            preset: Preset name
        """
        super().__init__(message)
        self.preset = preset


class SweepCapError(ConfigurationError):
    """Sweep plan larger than the configured cap.

    Attributes:
        cap: Maximum number of runs allowed
        requested: Number of runs the plan expands to
    """

    def __init__(self, cap: int, requested: int) -> None:
        """Initialize sweep cap error.

        Args:
            cap: Configured cap
            requested: Requested sweep size
        """
        super().__init__(f"sweep size {requested} exceeds the cap of {cap} runs")
        self.cap = cap
        self.requested = requested


class DomainError(LVAdvectError):
    """Operator input outside its mathematical domain.

    Raised for negative densities, non-finite field values, nonpositive
    matrix coefficients or a missing resource value in ideal-free mode.

    Attributes:
        field: Name of the offending argument

    Example:
        >>> eval_diffusion(PowerLawDiffusion(M1=1.0, m1=1.0), -1.0)
        ... # Raises: DomainError("u must be nonnegative", field="u")
    """

    def __init__(self, message: str, field: str | None = None) -> None:
        """Initialize domain error.

        Args:
            message: Error message
            field: Optional argument name
        """
        super().__init__(message)
        self.field = field


class NotApplicableError(LVAdvectError):
    """Operation only defined for standard Lotka-Volterra kinetics.

    Attributes:
        operation: Name of the refused operation
    """

    def __init__(self, message: str, operation: str | None = None) -> None:
        super().__init__(message)
        self.operation = operation


class StepRejected(LVAdvectError):
    """A time step produced negative or non-finite values.

    The caller halves dt and retries.

    Attributes:
        reason: Short description of the failure
        dt: Step size that was rejected
    """

    def __init__(self, reason: str, dt: float) -> None:
        super().__init__(f"step rejected at dt={dt:.3e}: {reason}")
        self.reason = reason
        self.dt = dt


class DtUnderflowError(LVAdvectError):
    """Step size fell below dt_min.

    Attributes:
        dt: Step size that would have been attempted
        dt_min: Configured lower limit
    """

    def __init__(self, dt: float, dt_min: float) -> None:
        super().__init__(f"dt={dt:.3e} fell below dt_min={dt_min:.3e}")
        self.dt = dt
        self.dt_min = dt_min


class LinearSolveError(LVAdvectError):
    """Sparse linear solve did not converge.

    Attributes:
        info: Solver status code (iteration count when positive)
    """

    def __init__(self, message: str, info: int) -> None:
        super().__init__(message)
        self.info = info


class NoConvergenceError(LVAdvectError):
    """Nonlinear elliptic solve failed in both Newton and Picard phases.

    Attributes:
        iterations: Total iterations spent
        residual: Final residual sup-norm
    """

    def __init__(self, iterations: int, residual: float) -> None:
        super().__init__(
            f"elliptic solve did not converge after {iterations} iterations "
            f"(residual {residual:.3e})"
        )
        self.iterations = iterations
        self.residual = residual


class InsufficientDataError(LVAdvectError):
    """Too few diagnostic records for a windowed verdict.

    Attributes:
        required: Records needed
        available: Records supplied
    """

    def __init__(self, required: int, available: int) -> None:
        super().__init__(f"need at least {required} records, got {available}")
        self.required = required
        self.available = available
