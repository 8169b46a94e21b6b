"""Unit tests for lab exceptions.

This module tests the custom exception classes.
"""

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


class TestExceptionHierarchy:
    """Tests for exception class hierarchy."""

    def test_all_exceptions_inherit_from_base(self) -> None:
        """Test that all exceptions inherit from LVAdvectError."""
        exceptions = [
            ConfigurationError,
            PresetError,
            SweepCapError,
            DomainError,
            NotApplicableError,
            StepRejected,
            DtUnderflowError,
            LinearSolveError,
            NoConvergenceError,
            InsufficientDataError,
        ]

        for exc_class in exceptions:
            assert issubclass(exc_class, LVAdvectError)
            assert issubclass(exc_class, Exception)

    def test_config_errors_share_a_parent(self) -> None:
        """Test that preset and cap errors are configuration errors."""
        assert issubclass(PresetError, ConfigurationError)
        assert issubclass(SweepCapError, ConfigurationError)


class TestDomainError:
    """Tests for DomainError."""

    def test_domain_error_basic(self) -> None:
        """Test basic domain error."""
        error = DomainError("u must be nonnegative")
        assert str(error) == "u must be nonnegative"
        assert error.field is None

    def test_domain_error_with_field(self) -> None:
        """Test domain error with field."""
        error = DomainError("u must be nonnegative", field="u")
        assert error.field == "u"


class TestPresetError:
    """Tests for PresetError."""

    def test_preset_error(self) -> None:
        """Test preset error carries the preset name."""
        error = PresetError("ClassicalLV requires chi = 0, got 1.0", preset="ClassicalLV")
        assert "chi = 0" in str(error)
        assert error.preset == "ClassicalLV"


class TestSweepCapError:
    """Tests for SweepCapError."""

    def test_sweep_cap_error(self) -> None:
        """Test that the message states the cap and the requested size."""
        error = SweepCapError(cap=100, requested=250)
        assert error.cap == 100
        assert error.requested == 250
        assert str(error) == "sweep size 250 exceeds the cap of 100 runs"


class TestStepErrors:
    """Tests for the time-stepping errors."""

    def test_step_rejected(self) -> None:
        """Test step rejection message and attributes."""
        error = StepRejected("negative values in u", dt=0.01)
        assert error.reason == "negative values in u"
        assert error.dt == 0.01
        assert "dt=1.000e-02" in str(error)

    def test_dt_underflow(self) -> None:
        """Test dt underflow attributes."""
        error = DtUnderflowError(dt=1e-12, dt_min=1e-10)
        assert error.dt == 1e-12
        assert error.dt_min == 1e-10
        assert "fell below dt_min" in str(error)

    def test_linear_solve_error(self) -> None:
        """Test linear solve error keeps the solver status."""
        error = LinearSolveError("conjugate gradients stopped", info=500)
        assert error.info == 500

    def test_no_convergence_error(self) -> None:
        """Test no convergence error message."""
        error = NoConvergenceError(iterations=2050, residual=3e-6)
        assert error.iterations == 2050
        assert error.residual == 3e-6
        assert "2050 iterations" in str(error)


class TestInsufficientDataError:
    """Tests for InsufficientDataError."""

    def test_insufficient_data_error(self) -> None:
        """Test insufficient data message."""
        error = InsufficientDataError(required=400, available=12)
        assert error.required == 400
        assert error.available == 12
        assert str(error) == "need at least 400 records, got 12"


class TestNotApplicableError:
    """Tests for NotApplicableError."""

    def test_not_applicable_error(self) -> None:
        """Test not applicable error keeps the operation."""
        error = NotApplicableError("ideal-free kinetics", operation="competition_type")
        assert error.operation == "competition_type"
