"""Time integration of the competition system.

This module advances (u, v) with a positivity-preserving IMEX scheme:
diffusion implicit with coefficients lagged at the old level, taxis explicit
and upwinded, reaction gains explicit and losses implicit (Patankar form).
Each species update is one symmetric linear solve

    (I + dt diag(loss) - dt A) w_new = w (1 + dt gain) - dt div(taxis)

solved by Jacobi-preconditioned conjugate gradients. In the
parabolic-elliptic case v is slaved to u through a damped Newton solve
with a Picard fallback.
"""

import logging
import warnings
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import MatrixRankWarning, cg, spsolve

from lvadvect.diagnostics import (
    boundedness_verdict,
    check_grad_v_trend,
    check_mass_bound,
    check_v_bound,
    energy_trend,
    measure,
)
from lvadvect.exceptions import (
    DomainError,
    DtUnderflowError,
    InsufficientDataError,
    LinearSolveError,
    NoConvergenceError,
    StepRejected,
)
from lvadvect.fields import realize_initial, realize_resource
from lvadvect.grid import (
    ScalarField,
    constant_laplacian,
    divergence,
    face_diffusivity,
    interior_faces,
    neumann_laplacian_matrix,
    taxis_drift,
    taxis_face_flux,
)
from lvadvect.kinetics import patankar_split, sensitivity_ratio
from lvadvect.models.control import StepControl
from lvadvect.models.mesh import Grid
from lvadvect.models.results import (
    DiagnosticsRecord,
    DiagnosticsSummary,
    NewtonStats,
    RunSummary,
    RunVerdict,
    WindowVerdict,
)
from lvadvect.models.scenario import Scenario
from lvadvect.models.spec import KineticsMode, ModelSpec, VDynamics
from lvadvect.theory import classify, guarantees_boundedness
from lvadvect.utils import FloatArray

logger = logging.getLogger(__name__)

# Values of v below this count as the trivial elliptic branch.
TRIVIAL_V = 1e-12


@dataclass(frozen=True)
class RunState:
    """Time-stepping state; u and v are nonnegative at every accepted step."""

    t: float
    u: ScalarField
    v: ScalarField
    dt: float
    step_count: int = 0
    newton_stats: NewtonStats = field(default_factory=NewtonStats)

    @property
    def grid(self) -> Grid:
        return self.u.grid


# ==================== Building Blocks ====================


def _resource(spec: ModelSpec, grid: Grid) -> FloatArray | None:
    if spec.kinetics is not KineticsMode.IDEAL_FREE or spec.resource_field is None:
        return None
    return realize_resource(spec.resource_field, grid).values


def _implicit_solve(
    operator: sparse.csr_matrix,
    loss: FloatArray,
    rhs: FloatArray,
    dt: float,
    guess: FloatArray,
    ctrl: StepControl,
) -> FloatArray:
    """Solve (I + dt diag(loss) - dt A) x = rhs with Jacobi-preconditioned CG."""
    flat_rhs = rhs.ravel()
    if not np.isfinite(flat_rhs).all():
        raise StepRejected("non-finite right-hand side", dt)
    if not flat_rhs.any():
        return np.zeros(rhs.shape)

    n = flat_rhs.size
    identity = sparse.identity(n, format="csr")
    system = (identity + sparse.diags(dt * loss.ravel()) - dt * operator).tocsr()
    jacobi = sparse.diags(1.0 / system.diagonal())
    solution, info = cg(
        system,
        flat_rhs,
        x0=guess.ravel().copy(),
        rtol=ctrl.linear_tol,
        atol=0.0,
        maxiter=max(100, 10 * n),
        M=jacobi,
    )
    if info != 0:
        raise LinearSolveError(f"conjugate gradients stopped with info={info}", info=info)
    return np.asarray(solution, dtype=np.float64).reshape(rhs.shape)


def _admissible(values: FloatArray, name: str, dt: float, ctrl: StepControl) -> FloatArray:
    """Reject NaN or clearly negative output; clip round-off negatives to zero."""
    if not np.isfinite(values).all():
        raise StepRejected(f"non-finite values in {name}", dt)
    floor = -ctrl.negativity_tol * max(1.0, float(np.abs(values).max()))
    lowest = float(values.min())
    if lowest < floor:
        raise StepRejected(f"negative values in {name} (min {lowest:.3e})", dt)
    return np.maximum(values, 0.0)


def advective_dt_limit(
    u: FloatArray, v: FloatArray, spec: ModelSpec, grid: Grid, ctrl: StepControl
) -> float:
    """Largest dt keeping the explicit upwind outflow of every cell below cfl_adv of its mass.

    Densities are floored at negativity_tol * max(1, sup u) / cfl_adv when
    forming phi(u) / u. A cell below that level can overshoot by at most the
    round-off negativity that the step clips.
    """
    if spec.chi == 0:
        return float("inf")
    drift = taxis_drift(v, spec, grid, _resource(spec, grid))
    rate = np.zeros(grid.shape)
    for axis, (c, h) in enumerate(zip(drift, grid.spacing, strict=True)):
        n = grid.shape[axis]
        right = np.take(c, np.arange(1, n + 1), axis=axis)
        left = np.take(c, np.arange(n), axis=axis)
        rate += (np.maximum(right, 0.0) + np.maximum(-left, 0.0)) / h
    peak = float(u.max())
    if peak <= 0:
        return float("inf")
    floor = max(ctrl.negativity_tol * max(1.0, peak) / ctrl.cfl_adv, 1e-12 * peak)
    rate *= sensitivity_ratio(spec.sensitivity_law, u, floor=floor)
    rate[u <= 0] = 0.0
    worst = float(rate.max())
    return float("inf") if worst <= 0 else ctrl.cfl_adv / worst


def _update_u(
    state: RunState, v: FloatArray, spec: ModelSpec, ctrl: StepControl, m: FloatArray | None
) -> FloatArray:
    grid = state.grid
    dt = state.dt
    u = state.u.values
    split = patankar_split(spec, u, v, m)

    diffusivity = face_diffusivity(u, v, spec)
    inner = tuple(interior_faces(d, axis) for axis, d in enumerate(diffusivity))
    operator = neumann_laplacian_matrix(grid, inner)

    taxis = divergence(taxis_face_flux(u, v, spec, grid, m), grid) if spec.chi > 0 else 0.0
    rhs = u * (1.0 + dt * split.gain_u) - dt * taxis
    new_u = _implicit_solve(operator, split.loss_u, rhs, dt, u, ctrl)
    return _admissible(new_u, "u", dt, ctrl)


# ==================== Steps ====================


def step_parabolic(state: RunState, spec: ModelSpec, ctrl: StepControl) -> RunState:
    """Advance the fully parabolic system by state.dt.

    Args:
        state: Current state
        spec: Model coefficients (v_dynamics must be parabolic)
        ctrl: Solver settings

    Returns:
        New state at t + dt with step_count incremented

    Raises:
        StepRejected: Negative or non-finite values were produced
        LinearSolveError: A conjugate-gradient solve failed
        DomainError: spec is not parabolic
    """
    if spec.v_dynamics is not VDynamics.PARABOLIC:
        raise DomainError("step_parabolic requires parabolic v dynamics", field="v_dynamics")

    grid = state.grid
    dt = state.dt
    m = _resource(spec, grid)
    u = state.u.values
    v = state.v.values

    new_u = _update_u(state, v, spec, ctrl, m)

    split = patankar_split(spec, u, v, m)
    operator = constant_laplacian(grid, spec.D2)
    rhs = v * (1.0 + dt * split.gain_v)
    new_v = _admissible(_implicit_solve(operator, split.loss_v, rhs, dt, v, ctrl), "v", dt, ctrl)

    return replace(
        state,
        t=state.t + dt,
        u=ScalarField(grid, new_u),
        v=ScalarField(grid, new_v),
        step_count=state.step_count + 1,
    )


def step_parabolic_elliptic(state: RunState, spec: ModelSpec, ctrl: StepControl) -> RunState:
    """Solve for v at the current u, then advance u by state.dt with that v.

    v is solved once more for the new u so the returned state pairs fields
    of the same time. Inside a run the first solve then starts from a
    converged iterate and costs no iterations; such a solve is not counted.

    Raises:
        StepRejected: Negative or non-finite u was produced
        NoConvergenceError: The elliptic solve failed
        LinearSolveError: The u solve failed
    """
    if spec.v_dynamics is not VDynamics.ELLIPTIC:
        raise DomainError(
            "step_parabolic_elliptic requires elliptic v dynamics", field="v_dynamics"
        )

    grid = state.grid
    v_field, stats = _solve_elliptic(state.u, spec, state.v, ctrl)
    if stats.newton_iterations == 0 and stats.picard_iterations == 0:
        stats = NewtonStats()
    new_u = ScalarField(grid, _update_u(state, v_field.values, spec, ctrl, _resource(spec, grid)))
    new_v, new_stats = _solve_elliptic(new_u, spec, v_field, ctrl)

    return replace(
        state,
        t=state.t + state.dt,
        u=new_u,
        v=new_v,
        step_count=state.step_count + 1,
        newton_stats=state.newton_stats.merged(stats).merged(new_stats),
    )


# ==================== Elliptic Solve ====================


@dataclass(frozen=True)
class _EllipticProblem:
    """0 = D2 L v + (gain - uptake - q v) v.

    Standard kinetics: gain a2, uptake b2 u, q = c2.
    Ideal-free kinetics: gain r m, uptake r u, q = r.
    """

    laplacian: sparse.csr_matrix
    D2: float
    gain: FloatArray
    uptake: FloatArray
    q: float
    ceiling: float

    @property
    def growth(self) -> FloatArray:
        return self.gain - self.uptake

    def residual(self, v: FloatArray) -> FloatArray:
        return np.asarray(self.D2 * (self.laplacian @ v) + (self.growth - self.q * v) * v)

    def jacobian(self, v: FloatArray) -> sparse.csc_matrix:
        return (self.D2 * self.laplacian + sparse.diags(self.growth - 2.0 * self.q * v)).tocsc()

    def picard_operator(self, v: FloatArray) -> sparse.csc_matrix:
        return (-self.D2 * self.laplacian + sparse.diags(self.uptake + self.q * v)).tocsc()

    def project(self, v: FloatArray) -> FloatArray:
        return np.clip(v, 0.0, self.ceiling)


def _elliptic_problem(u: ScalarField, spec: ModelSpec) -> _EllipticProblem:
    grid = u.grid
    laplacian = constant_laplacian(grid, 1.0)
    flat_u = u.flat
    if spec.kinetics is KineticsMode.IDEAL_FREE:
        m = _resource(spec, grid)
        assert m is not None
        flat_m = m.ravel()
        return _EllipticProblem(
            laplacian=laplacian,
            D2=spec.D2,
            gain=spec.rate * flat_m,
            uptake=spec.rate * flat_u,
            q=spec.rate,
            ceiling=float(flat_m.max()),
        )
    return _EllipticProblem(
        laplacian=laplacian,
        D2=spec.D2,
        gain=np.full(grid.size, spec.a2),
        uptake=spec.b2 * flat_u,
        q=spec.c2,
        ceiling=spec.v_ceiling,
    )


def solve_elliptic_v(
    u: ScalarField, spec: ModelSpec, guess: ScalarField, ctrl: StepControl
) -> ScalarField:
    """Solve 0 = D2 lap v + (a2 - b2 u - c2 v) v for v >= 0.

    Damped Newton on the discrete system with iterates projected to
    [0, a2/c2]; Picard sweeps (-D2 L + diag(b2 u + c2 v_k)) v_{k+1} = a2 v_k
    take over when Newton stagnates.

    Args:
        u: Density of u (nonnegative)
        spec: Model coefficients
        guess: Starting iterate; a positive guess selects the positive branch
        ctrl: newton_tol, newton_max_iter and picard_max_iter are used

    Returns:
        v with residual sup-norm below newton_tol and 0 <= v <= a2/c2

    Raises:
        NoConvergenceError: If both phases exhaust their budgets

    Example:
        >>> spec = ModelSpec(v_dynamics=VDynamics.ELLIPTIC)
        >>> ctrl = StepControl()
        >>> grid = Grid.line(8)
        >>> zero, one = ScalarField.constant(grid, 0.0), ScalarField.constant(grid, 1.0)
        >>> v = solve_elliptic_v(zero, spec, one, ctrl)
        >>> abs(v.max() - spec.a2 / spec.c2) < 1e-10
        True
    """
    solution, _ = _solve_elliptic(u, spec, guess, ctrl)
    return solution


def _solve_elliptic(
    u: ScalarField, spec: ModelSpec, guess: ScalarField, ctrl: StepControl
) -> tuple[ScalarField, NewtonStats]:
    grid = u.grid
    if spec.kinetics is KineticsMode.OFF:
        # Without reactions the solutions are the constants; keep the guess mean.
        value = float(np.mean(guess.values))
        return ScalarField.constant(grid, value), NewtonStats(solves=1)

    problem = _elliptic_problem(u, spec)
    v = problem.project(guess.flat.copy())
    if not v.any():
        v = np.full(grid.size, problem.ceiling)

    v, norm, newton_iters = _newton(problem, v, ctrl)
    picard_iters = 0
    fallbacks = 0
    if norm >= ctrl.newton_tol:
        fallbacks = 1
        logger.warning(
            f"Newton stagnated at residual {norm:.3e}; falling back to Picard iteration",
            extra={"newton_iterations": newton_iters},
        )
        v, norm, picard_iters = _picard(problem, v, ctrl)
        if norm >= ctrl.newton_tol:
            raise NoConvergenceError(newton_iters + picard_iters, norm)

    trivial = 0
    if float(v.max()) < TRIVIAL_V and bool((problem.growth > 0).any()):
        trivial = 1
        logger.warning("Elliptic solve landed on the trivial branch v = 0")

    stats = NewtonStats(
        solves=1,
        newton_iterations=newton_iters,
        picard_iterations=picard_iters,
        picard_fallbacks=fallbacks,
        trivial_solutions=trivial,
    )
    return ScalarField(grid, v), stats


def _newton(
    problem: _EllipticProblem, v: FloatArray, ctrl: StepControl
) -> tuple[FloatArray, float, int]:
    residual = problem.residual(v)
    norm = float(np.abs(residual).max())
    iterations = 0
    while norm >= ctrl.newton_tol and iterations < ctrl.newton_max_iter:
        iterations += 1
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", MatrixRankWarning)
            delta = spsolve(problem.jacobian(v), -residual)
        if not np.isfinite(delta).all():
            break

        damping = 1.0
        accepted = False
        while damping >= 1.0 / 64.0:
            trial = problem.project(v + damping * delta)
            trial_residual = problem.residual(trial)
            trial_norm = float(np.abs(trial_residual).max())
            if trial_norm < norm:
                v, residual, norm = trial, trial_residual, trial_norm
                accepted = True
                break
            damping *= 0.5
        if not accepted:
            break
        logger.debug(f"Newton iteration {iterations}: residual {norm:.3e}, damping {damping}")
    return v, norm, iterations


def _picard(
    problem: _EllipticProblem, v: FloatArray, ctrl: StepControl
) -> tuple[FloatArray, float, int]:
    """Fixed point (-D2 L + diag(uptake + q v_k)) v_{k+1} = gain v_k."""
    norm = float(np.abs(problem.residual(v)).max())
    iterations = 0
    while norm >= ctrl.newton_tol and iterations < ctrl.picard_max_iter:
        iterations += 1
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", MatrixRankWarning)
            new_v = spsolve(problem.picard_operator(v), problem.gain * v)
        if not np.isfinite(new_v).all():
            break
        v = problem.project(new_v)
        norm = float(np.abs(problem.residual(v)).max())
    return v, norm, iterations


# ==================== Driver ====================


def initial_state(scenario: Scenario, seed: int | None = None) -> RunState:
    """Realize the initial data; in the elliptic case v is solved from u0.

    Raises:
        NoConvergenceError: If the first elliptic solve fails
    """
    spec = scenario.spec
    grid = scenario.grid
    u0, v0 = realize_initial(scenario.initial_data, grid, seed)
    stats = NewtonStats()
    if spec.v_dynamics is VDynamics.ELLIPTIC:
        ceiling = _elliptic_problem(u0, spec).ceiling
        v0, stats = _solve_elliptic(u0, spec, ScalarField.constant(grid, ceiling), scenario.ctrl)
    return RunState(t=0.0, u=u0, v=v0, dt=scenario.ctrl.dt_init, newton_stats=stats)


def run(scenario: Scenario) -> RunSummary:
    """Integrate a scenario to t_end or an earlier verdict.

    Numerical failure is reported as a verdict, never raised.

    Args:
        scenario: Scenario to run

    Returns:
        RunSummary with verdict Bounded, ConvergedToSteadyState, Growing,
        BlowUpSuspected or Failed and the diagnostic history attached

    Example:
        >>> summary = run(build_preset(Preset.CLASSICAL_LV))
        >>> summary.verdict
        <RunVerdict.CONVERGED: 'ConvergedToSteadyState'>
    """
    summary, _ = run_detailed(scenario)
    return summary


def run_detailed(scenario: Scenario, seed: int | None = None) -> tuple[RunSummary, RunState]:
    """Like run, also returning the final state (for profiles and plots)."""
    spec = scenario.spec
    grid = scenario.grid
    ctrl = scenario.ctrl
    monitors = scenario.monitors
    notes: list[str] = []

    logger.info(
        f"Starting run '{scenario.name}' ({scenario.preset.value}, {grid.dim}D {grid.cells})",
        extra={"scenario": scenario.name, "t_end": ctrl.t_end},
    )

    try:
        state = initial_state(scenario, seed)
    except (NoConvergenceError, LinearSolveError) as e:
        logger.warning(f"Run '{scenario.name}' failed during setup: {e}")
        u0, v0 = realize_initial(scenario.initial_data, grid, seed)
        state = RunState(t=0.0, u=u0, v=v0, dt=ctrl.dt_init)
        history = [measure(u0, v0, grid, monitors, spec=spec)]
        return _summarize(scenario, state, history, RunVerdict.FAILED, 0, [str(e)]), state

    parabolic = spec.v_dynamics is VDynamics.PARABOLIC
    advance = step_parabolic if parabolic else step_parabolic_elliptic
    history: list[DiagnosticsRecord] = [measure(state.u, state.v, grid, monitors, spec=spec)]
    u0_mass = history[0].mass_u
    v0_linf = history[0].linf_v

    nonzero = state.u.max() > 0 or state.v.max() > 0
    steady_armed = spec.kinetics is not KineticsMode.OFF and nonzero
    steady_count = 0
    rejected = 0
    verdict: RunVerdict | None = None

    try:
        while state.t < ctrl.t_end * (1.0 - 1e-12):
            dt = min(state.dt, advective_dt_limit(state.u.values, state.v.values, spec, grid, ctrl))
            if dt < ctrl.dt_min:
                raise DtUnderflowError(dt, ctrl.dt_min)
            dt = min(dt, ctrl.t_end - state.t)

            try:
                new_state = advance(replace(state, dt=dt), spec, ctrl)
            except StepRejected as e:
                rejected += 1
                logger.debug(f"{e}; halving")
                if 0.5 * dt < ctrl.dt_min:
                    raise DtUnderflowError(0.5 * dt, ctrl.dt_min) from e
                state = replace(state, dt=0.5 * dt)
                continue

            record = measure(
                new_state.u, new_state.v, grid, monitors, spec=spec, t=new_state.t, dt=dt
            )
            history.append(record)

            if record.linf_u > ctrl.blowup_linf:
                notes.append(
                    f"sup u = {record.linf_u:.3e} exceeded blowup_linf at t={new_state.t:.6g}"
                )
                state = new_state
                verdict = RunVerdict.BLOW_UP_SUSPECTED
                break

            if steady_armed:
                rate_u = float(np.abs(new_state.u.values - state.u.values).max()) / dt
                rate_v = float(np.abs(new_state.v.values - state.v.values).max()) / dt
                steady_count = steady_count + 1 if max(rate_u, rate_v) < ctrl.steady_tol else 0

            state = replace(new_state, dt=min(dt * ctrl.dt_growth, ctrl.dt_max))
            if steady_armed and steady_count >= ctrl.steady_window:
                verdict = RunVerdict.CONVERGED
                break

    except DtUnderflowError as e:
        notes.append(str(e))
        verdict = RunVerdict.BLOW_UP_SUSPECTED
    except (LinearSolveError, NoConvergenceError) as e:
        notes.append(str(e))
        verdict = RunVerdict.FAILED

    if verdict is None:
        try:
            window = boundedness_verdict(history, monitors)
        except InsufficientDataError:
            window = WindowVerdict.INSUFFICIENT_DATA
        verdict = RunVerdict.GROWING if window is WindowVerdict.GROWING else RunVerdict.BOUNDED

    if state.newton_stats.trivial_solutions:
        notes.append(
            f"elliptic solve returned the trivial branch v=0 in "
            f"{state.newton_stats.trivial_solutions} of {state.newton_stats.solves} solves"
        )

    summary = _summarize(
        scenario, state, history, verdict, rejected, notes, u0_mass=u0_mass, v0_linf=v0_linf
    )
    logger.info(
        f"Run '{scenario.name}' finished: {summary.verdict.value} at t={summary.t_final:.6g} "
        f"after {summary.steps} steps ({rejected} rejected)"
    )
    return summary, state


def _summarize(
    scenario: Scenario,
    state: RunState,
    history: list[DiagnosticsRecord],
    verdict: RunVerdict,
    rejected: int,
    notes: list[str],
    u0_mass: float | None = None,
    v0_linf: float | None = None,
) -> RunSummary:
    spec = scenario.spec
    monitors = scenario.monitors
    try:
        window = boundedness_verdict(history, monitors)
    except InsufficientDataError:
        window = WindowVerdict.INSUFFICIENT_DATA

    u0_mass = history[0].mass_u if u0_mass is None else u0_mass
    v0_linf = history[0].linf_v if v0_linf is None else v0_linf

    standard = spec.kinetics is KineticsMode.STANDARD
    parabolic = spec.v_dynamics is VDynamics.PARABOLIC
    guaranteed = parabolic and guarantees_boundedness(classify(spec, scenario.grid.dim))

    diagnostics = DiagnosticsSummary(
        window_verdict=window,
        v_bound=(
            check_v_bound(history, spec, v0_linf, tol=monitors.bound_tol)
            if standard and parabolic
            else None
        ),
        mass_bound=(
            check_mass_bound(history, spec, scenario.grid, u0_mass, tol=monitors.bound_tol)
            if standard
            else None
        ),
        grad_v_trend=check_grad_v_trend(history, spec, monitors),
        energy_like=energy_trend(history, monitors) if guaranteed else None,
    )

    return RunSummary(
        scenario=scenario.name,
        verdict=verdict,
        t_final=state.t,
        steps=state.step_count,
        rejected_steps=rejected,
        max_linf_u=max(record.linf_u for record in history),
        final=history[-1],
        newton=state.newton_stats,
        notes=tuple(notes),
        diagnostics=diagnostics,
        history=tuple(history),
    )
