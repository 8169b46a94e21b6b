"""Unit tests for time stepping and the elliptic solve."""

from dataclasses import replace

import numpy as np
import pytest

from lvadvect.exceptions import DomainError
from lvadvect.grid import ScalarField, neumann_laplacian_matrix
from lvadvect.kinetics import patankar_split
from lvadvect.models import (
    ConstantInitial,
    Grid,
    KineticsMode,
    ModelSpec,
    PowerLawSensitivity,
    Preset,
    RandomUniformInitial,
    RunVerdict,
    Scenario,
    StepControl,
    TaxisSign,
    VDynamics,
)
from lvadvect.stepper import (
    RunState,
    advective_dt_limit,
    initial_state,
    run,
    run_detailed,
    solve_elliptic_v,
    step_parabolic,
    step_parabolic_elliptic,
)


def _state(u: ScalarField, v: ScalarField, dt: float) -> RunState:
    return RunState(t=0.0, u=u, v=v, dt=dt)


class TestStepParabolic:
    """Tests for step_parabolic."""

    def test_zero_state_stays_zero(self, weak_spec: ModelSpec, line_grid: Grid) -> None:
        """Test that (0, 0) is an exact fixed point."""
        zero = ScalarField.constant(line_grid, 0.0)
        new = step_parabolic(_state(zero, zero, 0.01), weak_spec, StepControl())

        assert new.u.max() == 0.0
        assert new.v.max() == 0.0
        assert new.t == 0.01
        assert new.step_count == 1

    def test_constant_state_follows_patankar_ode(
        self, weak_spec: ModelSpec, line_grid: Grid
    ) -> None:
        """Test that a constant state evolves like the cellwise Patankar update."""
        dt = 0.05
        u = ScalarField.constant(line_grid, 1.0)
        v = ScalarField.constant(line_grid, 1.0)
        split = patankar_split(weak_spec, np.array([1.0]), np.array([1.0]))

        new = step_parabolic(_state(u, v, dt), weak_spec, StepControl())

        expected_u = (1.0 + dt * split.gain_u[0]) / (1.0 + dt * split.loss_u[0])
        expected_v = (1.0 + dt * split.gain_v[0]) / (1.0 + dt * split.loss_v[0])
        np.testing.assert_allclose(new.u.values, expected_u, rtol=1e-10)
        np.testing.assert_allclose(new.v.values, expected_v, rtol=1e-10)

    @pytest.mark.parametrize("chi", [0.0, 1.0])
    def test_mass_conserved_without_kinetics(
        self, chi: float, random_fields: tuple[ScalarField, ScalarField]
    ) -> None:
        """Test that transport alone conserves the integral of u and v."""
        u, v = random_fields
        spec = ModelSpec(chi=chi, kinetics=KineticsMode.OFF)
        state = _state(u, v, 1e-4)
        ctrl = StepControl()

        for _ in range(5):
            state = step_parabolic(state, spec, ctrl)

        assert state.u.integral() == pytest.approx(u.integral(), rel=1e-9)
        assert state.v.integral() == pytest.approx(v.integral(), rel=1e-9)

    def test_positivity_under_strong_attraction(self, line_grid: Grid) -> None:
        """Test that steps at the advective limit keep u nonnegative."""
        centers = line_grid.centers()[0]
        u = ScalarField(line_grid, np.where(centers < 0.3, 1.0, 0.0))
        v = ScalarField(line_grid, centers)
        spec = ModelSpec(chi=5.0, taxis_sign=TaxisSign.ATTRACTION)
        ctrl = StepControl()
        state = _state(u, v, 0.0)

        for _ in range(10):
            limit = advective_dt_limit(state.u.values, state.v.values, spec, line_grid, ctrl)
            state = step_parabolic(replace(state, dt=min(limit, 0.01)), spec, ctrl)
            assert state.u.min() >= 0.0
            assert state.v.min() >= 0.0

    def test_requires_parabolic(self, weak_spec: ModelSpec, line_grid: Grid) -> None:
        """Test that an elliptic spec is refused."""
        one = ScalarField.constant(line_grid, 1.0)
        spec = weak_spec.model_copy(update={"v_dynamics": VDynamics.ELLIPTIC})
        with pytest.raises(DomainError, match="parabolic v dynamics"):
            step_parabolic(_state(one, one, 0.01), spec, StepControl())


class TestAdvectiveLimit:
    """Tests for advective_dt_limit."""

    def test_no_taxis(self, weak_spec: ModelSpec, random_fields: tuple[ScalarField, ...]) -> None:
        """Test that chi = 0 imposes no limit."""
        u, v = random_fields
        limit = advective_dt_limit(u.values, v.values, weak_spec, u.grid, StepControl())
        assert limit == float("inf")

    def test_flat_v(self, taxis_spec: ModelSpec, line_grid: Grid) -> None:
        """Test that a constant v imposes no limit."""
        u = ScalarField.constant(line_grid, 1.0)
        v = ScalarField.constant(line_grid, 2.0)
        limit = advective_dt_limit(u.values, v.values, taxis_spec, line_grid, StepControl())
        assert limit == float("inf")

    def test_scales_with_chi(self, random_fields: tuple[ScalarField, ScalarField]) -> None:
        """Test that doubling chi halves the limit."""
        u, v = random_fields
        ctrl = StepControl()
        one = advective_dt_limit(u.values, v.values, ModelSpec(chi=1.0), u.grid, ctrl)
        two = advective_dt_limit(u.values, v.values, ModelSpec(chi=2.0), u.grid, ctrl)

        assert 0.0 < one < float("inf")
        assert two == pytest.approx(one / 2.0)

    def test_sublinear_sensitivity_near_empty_cells(self, line_grid: Grid) -> None:
        """Test that m2 < 1 on a nearly empty tail keeps a usable limit and a nonnegative step."""
        x = line_grid.centers()[0]
        u = ScalarField(line_grid, np.where(x < 0.5, 1.0, 1e-14))
        v = ScalarField(line_grid, x)
        spec = ModelSpec(chi=1.0, sensitivity_law=PowerLawSensitivity(M2=1.0, m2=0.5))
        ctrl = StepControl()

        limit = advective_dt_limit(u.values, v.values, spec, line_grid, ctrl)

        # Drift -1 on every interior face; the tail ratio is capped at the density floor.
        floor = ctrl.negativity_tol / ctrl.cfl_adv
        assert limit == pytest.approx(ctrl.cfl_adv * line_grid.spacing[0] * np.sqrt(floor))
        new = step_parabolic(_state(u, v, limit), spec, ctrl)
        assert new.u.min() >= 0.0

    def test_nonlinear_sensitivity(self, random_fields: tuple[ScalarField, ScalarField]) -> None:
        """Test that phi(u)/u enters the limit."""
        u, v = random_fields
        ctrl = StepControl()
        spec = ModelSpec(chi=1.0, sensitivity_law=PowerLawSensitivity(M2=1.0, m2=2.0))
        linear = advective_dt_limit(u.values, v.values, ModelSpec(chi=1.0), u.grid, ctrl)
        quadratic = advective_dt_limit(u.values, v.values, spec, u.grid, ctrl)

        assert quadratic != linear


class TestSolveEllipticV:
    """Tests for solve_elliptic_v."""

    @pytest.fixture
    def elliptic_spec(self, weak_spec: ModelSpec) -> ModelSpec:
        """weak_spec with v slaved to u."""
        return weak_spec.model_copy(update={"v_dynamics": VDynamics.ELLIPTIC})

    def test_no_competitor(self, elliptic_spec: ModelSpec, line_grid: Grid) -> None:
        """Test that u = 0 gives v = a2/c2."""
        zero = ScalarField.constant(line_grid, 0.0)
        guess = ScalarField.constant(line_grid, 0.3)

        v = solve_elliptic_v(zero, elliptic_spec, guess, StepControl())

        np.testing.assert_allclose(v.values, elliptic_spec.a2 / elliptic_spec.c2, atol=1e-9)

    def test_saturating_competitor(self, elliptic_spec: ModelSpec, line_grid: Grid) -> None:
        """Test that u = a2/b2 drives v to zero."""
        u = ScalarField.constant(line_grid, elliptic_spec.a2 / elliptic_spec.b2)
        guess = ScalarField.constant(line_grid, 1.0)

        v = solve_elliptic_v(u, elliptic_spec, guess, StepControl())

        assert v.max() < 1e-4
        assert v.min() >= 0.0

    def test_residual_contract(
        self, elliptic_spec: ModelSpec, square_grid: Grid, rng: np.random.Generator
    ) -> None:
        """Test the discrete residual and the range of the solution."""
        u = ScalarField(square_grid, rng.uniform(0.0, 1.5, square_grid.shape))
        guess = ScalarField.constant(square_grid, 1.0)
        ctrl = StepControl()
        spec = elliptic_spec

        v = solve_elliptic_v(u, spec, guess, ctrl)

        laplacian = neumann_laplacian_matrix(square_grid, 1.0)
        flat_v = v.flat
        growth = spec.a2 - spec.b2 * u.flat - spec.c2 * flat_v
        residual = spec.D2 * (laplacian @ flat_v) + growth * flat_v
        assert float(np.abs(residual).max()) < ctrl.newton_tol
        assert v.min() >= 0.0
        assert v.max() <= spec.a2 / spec.c2
        assert v.max() > 0.0

    def test_requires_elliptic(self, weak_spec: ModelSpec, line_grid: Grid) -> None:
        """Test that step_parabolic_elliptic refuses a parabolic spec."""
        one = ScalarField.constant(line_grid, 1.0)
        with pytest.raises(DomainError, match="elliptic v dynamics"):
            step_parabolic_elliptic(_state(one, one, 0.01), weak_spec, StepControl())

    def test_elliptic_step(self, elliptic_spec: ModelSpec, line_grid: Grid) -> None:
        """Test that an elliptic step counts its solves."""
        u = ScalarField.constant(line_grid, 1.0)
        v = ScalarField.constant(line_grid, 1.0)

        new = step_parabolic_elliptic(_state(u, v, 0.01), elliptic_spec, StepControl())

        assert new.newton_stats.solves == 2
        # u = 1 gives v = (a2 - b2) / c2 = 0.5.
        np.testing.assert_allclose(new.v.values, 0.5, atol=1e-9)

    def test_elliptic_step_pairs_new_fields(
        self, elliptic_spec: ModelSpec, line_grid: Grid
    ) -> None:
        """Test that the returned v solves the elliptic problem for the returned u."""
        ctrl = StepControl()
        x = line_grid.centers()[0]
        u = ScalarField(line_grid, 1.0 + 0.5 * np.cos(np.pi * x))
        v = solve_elliptic_v(u, elliptic_spec, ScalarField.constant(line_grid, 1.0), ctrl)

        new = step_parabolic_elliptic(_state(u, v, 0.05), elliptic_spec, ctrl)

        assert not np.array_equal(new.u.values, u.values)
        expected = solve_elliptic_v(new.u, elliptic_spec, v, ctrl)
        np.testing.assert_allclose(new.v.values, expected.values, atol=1e-9)
        # v was already solved for u, so only the solve for the new u counts.
        assert new.newton_stats.solves == 1


class TestRun:
    """Tests for initial_state, run and run_detailed."""

    def test_initial_state_elliptic(self, short_scenario: Scenario) -> None:
        """Test that the elliptic v0 is solved from u0."""
        spec = short_scenario.spec.model_copy(update={"v_dynamics": VDynamics.ELLIPTIC})
        scenario = short_scenario.model_copy(update={"spec": spec})

        state = initial_state(scenario)

        np.testing.assert_allclose(state.v.values, 0.5, atol=1e-9)
        assert state.newton_stats.solves == 1

    def test_short_run(self, short_scenario: Scenario) -> None:
        """Test a short ClassicalLV run."""
        summary = run(short_scenario)

        assert summary.verdict is RunVerdict.BOUNDED
        assert summary.t_final == pytest.approx(0.5)
        assert len(summary.history) == summary.steps + 1
        assert summary.diagnostics.v_bound is not None
        assert summary.diagnostics.v_bound.passed
        assert summary.diagnostics.mass_bound is not None
        assert summary.diagnostics.mass_bound.passed

    def test_zero_data_is_bounded(self, short_scenario: Scenario) -> None:
        """Test that zero initial data stays at zero."""
        scenario = short_scenario.model_copy(
            update={"initial_data": ConstantInitial(u0=0.0, v0=0.0)}
        )

        summary = run(scenario)

        assert summary.verdict is RunVerdict.BOUNDED
        assert summary.max_linf_u == 0.0

    def test_deterministic(self, short_scenario: Scenario) -> None:
        """Test that identical inputs give identical histories."""
        scenario = short_scenario.model_copy(
            update={"initial_data": RandomUniformInitial(rng_seed=5)}
        )

        first = run(scenario)
        second = run(scenario)

        assert first.model_dump() == second.model_dump()
        assert [r.linf_u for r in first.history] == [r.linf_u for r in second.history]

    def test_seed_changes_initial_data(self, short_scenario: Scenario) -> None:
        """Test that run_detailed forwards the replicate seed."""
        scenario = short_scenario.model_copy(
            update={"initial_data": RandomUniformInitial(rng_seed=5)}
        )

        first, _ = run_detailed(scenario, seed=1)
        second, _ = run_detailed(scenario, seed=2)

        assert first.history[0].mass_u != second.history[0].mass_u

    def test_dt_underflow_is_blow_up(self, line_grid: Grid) -> None:
        """Test that an advective limit below dt_min ends the run."""
        scenario = Scenario(
            name="stiff",
            preset=Preset.CUSTOM,
            spec=ModelSpec(chi=1e6),
            grid=line_grid,
            initial_data=RandomUniformInitial(rng_seed=3),
            ctrl=StepControl(dt_init=1e-3, dt_min=1e-6, t_end=1.0),
        )

        summary = run(scenario)

        assert summary.verdict is RunVerdict.BLOW_UP_SUSPECTED
        assert any("dt_min" in note for note in summary.notes)

    def test_elliptic_run(self, short_scenario: Scenario) -> None:
        """Test a short parabolic-elliptic run."""
        spec = short_scenario.spec.model_copy(update={"v_dynamics": VDynamics.ELLIPTIC})
        scenario = short_scenario.model_copy(update={"spec": spec})

        summary, state = run_detailed(scenario)

        assert summary.verdict is RunVerdict.BOUNDED
        assert summary.newton.solves == summary.steps + 1
        assert summary.diagnostics.v_bound is None
        assert state.v.max() <= spec.a2 / spec.c2
