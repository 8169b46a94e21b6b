"""Regime classification and algebraic steady states.

This module evaluates the boundedness criteria for a ModelSpec in a given
space dimension, classifies competition strength and finds the positive
coexistence state of the Lotka-Volterra kinetics.
"""

import logging

import numpy as np
from scipy.optimize import bisect

from lvadvect.exceptions import DomainError, NotApplicableError
from lvadvect.models.reports import (
    CompetitionKind,
    CompetitionType,
    RegimeReport,
    RegimeVerdict,
    TheoremId,
)
from lvadvect.models.spec import KineticsMode, ModelSpec, SKTCrossDiffusion, TaxisSign, VDynamics
from lvadvect.utils import nearly_equal

logger = logging.getLogger(__name__)

# Scan resolution for bracketing steady-state roots when alpha != 1.
ROOT_SCAN_POINTS = 4001
ROOT_XTOL = 1e-12


def effective_exponents(spec: ModelSpec) -> tuple[float, float]:
    """Growth exponents (m1, m2) the criteria are evaluated with."""
    _, m1 = spec.diffusion_law.growth_bound()
    _, m2 = spec.sensitivity_law.growth_bound()
    return m1, m2


def classify(spec: ModelSpec, dimension: int) -> list[RegimeReport]:
    """Evaluate every boundedness criterion that applies to spec.

    Fully parabolic systems get Thm1_1 and Thm1_2; parabolic-elliptic
    repulsion gets Thm4_1, Thm4_2 and their relaxed equality forms
    Remark4_1 and Remark4_2; parabolic-elliptic attraction gets Thm4_3.

    Args:
        spec: Model coefficients
        dimension: Space dimension N >= 1

    Returns:
        One RegimeReport per applicable criterion

    Raises:
        DomainError: If dimension < 1

    Example:
        >>> spec = ModelSpec(diffusion_law=PowerLawDiffusion(m1=1.0), alpha=1.0)
        >>> [r.verdict.value for r in classify(spec, 2)]
        ['Satisfied', 'Satisfied']
    """
    if dimension < 1:
        raise DomainError(f"dimension must be >= 1, got {dimension}", field="dimension")

    m1, m2 = effective_exponents(spec)
    caveats = _caveats(spec)

    if spec.v_dynamics is VDynamics.PARABOLIC:
        reports = _parabolic_reports(spec, m1, m2, dimension)
    elif spec.taxis_sign is TaxisSign.REPULSION:
        reports = _elliptic_repulsion_reports(spec, m1, m2)
    else:
        reports = [_attraction_report(spec, m1, m2)]

    if caveats:
        reports = [_with_note(report, caveats) for report in reports]
    return reports


def any_satisfied(reports: list[RegimeReport]) -> bool:
    return any(r.verdict is RegimeVerdict.SATISFIED for r in reports)


def guarantees_boundedness(reports: list[RegimeReport]) -> bool:
    """True when at least one criterion holds, strictly or in a relaxed form."""
    return any(r.guarantees_boundedness for r in reports)


def _caveats(spec: ModelSpec) -> list[str]:
    notes = []
    if spec.chi == 0:
        notes.append("chi=0: no taxis term")
    law = spec.diffusion_law
    if isinstance(law, SKTCrossDiffusion) and law.rho12 > 0:
        notes.append(
            "caveat: D1 depends on v (rho12 > 0); coverage by the criteria is not established"
        )
    return notes


def _with_note(report: RegimeReport, extra: list[str]) -> RegimeReport:
    parts = [report.note, *extra] if report.note else extra
    return report.model_copy(update={"note": "; ".join(parts)})


def _strict(
    theorem: TheoremId, lhs: float, rhs: float, note: str
) -> RegimeReport:
    """Strict inequality lhs < rhs with no relaxation of the equality case."""
    if nearly_equal(lhs, rhs):
        verdict = RegimeVerdict.VIOLATED
        note = f"{note}; equality case, strict inequality required"
    elif lhs < rhs:
        verdict = RegimeVerdict.SATISFIED
    else:
        verdict = RegimeVerdict.VIOLATED
    return RegimeReport(theorem_id=theorem, verdict=verdict, lhs=lhs, rhs=rhs, note=note)


def _parabolic_reports(
    spec: ModelSpec, m1: float, m2: float, dimension: int
) -> list[RegimeReport]:
    n = float(dimension)
    alpha = spec.alpha
    if alpha < 1:
        branch = "alpha<1 branch"
        rhs_11 = 2.0 / n
        rhs_12 = max(alpha, m1) + 2.0 / n
    else:
        branch = "alpha>=1 branch"
        rhs_11 = (3.0 * n + 2.0) / (n * (n + 2.0))
        rhs_12 = max(alpha, m1) + 4.0 / (n + 2.0)
    lhs_11 = m2 - m1
    lhs_12 = 2.0 * m2 - m1

    if spec.taxis_sign is TaxisSign.ATTRACTION:
        branch += (
            "; attraction: criterion bounds |taxis|, fully parabolic attraction is exploratory"
        )

    if dimension == 1:
        note = f"N=1: bounded by Moser-Alikakos iteration; {branch}"
        return [
            RegimeReport(
                theorem_id=TheoremId.THM1_1,
                verdict=RegimeVerdict.SATISFIED,
                lhs=lhs_11,
                rhs=rhs_11,
                note=note,
            ),
            RegimeReport(
                theorem_id=TheoremId.THM1_2,
                verdict=RegimeVerdict.SATISFIED,
                lhs=lhs_12,
                rhs=rhs_12,
                note=note,
            ),
        ]

    return [
        _strict(TheoremId.THM1_1, lhs_11, rhs_11, f"m2-m1 vs critical gap; {branch}"),
        _strict(TheoremId.THM1_2, lhs_12, rhs_12, f"2m2-m1 vs max(alpha,m1)+gap; {branch}"),
    ]


def _relaxable(
    theorem: TheoremId,
    lhs: float,
    rhs: float,
    relaxed: bool,
    hypothesis: str,
) -> RegimeReport:
    """Strict inequality whose equality case is accepted when relaxed holds."""
    if nearly_equal(lhs, rhs):
        if relaxed:
            return RegimeReport(
                theorem_id=theorem,
                verdict=RegimeVerdict.CONDITIONALLY_SATISFIED,
                lhs=lhs,
                rhs=rhs,
                note=f"equality case relaxed: {hypothesis}",
            )
        return RegimeReport(
            theorem_id=theorem,
            verdict=RegimeVerdict.VIOLATED,
            lhs=lhs,
            rhs=rhs,
            note=f"equality case without relaxation hypothesis ({hypothesis} fails)",
        )
    verdict = RegimeVerdict.SATISFIED if lhs < rhs else RegimeVerdict.VIOLATED
    return RegimeReport(theorem_id=theorem, verdict=verdict, lhs=lhs, rhs=rhs)


def _remark(
    theorem: TheoremId, lhs: float, rhs: float, relaxed: bool, hypothesis: str
) -> RegimeReport:
    """Relaxed criterion lhs <= rhs, applicable only under its hypothesis."""
    if not relaxed:
        return RegimeReport(
            theorem_id=theorem,
            verdict=RegimeVerdict.NOT_APPLICABLE,
            lhs=lhs,
            rhs=rhs,
            note=f"requires {hypothesis}",
        )
    if nearly_equal(lhs, rhs):
        verdict = RegimeVerdict.CONDITIONALLY_SATISFIED
    elif lhs < rhs:
        verdict = RegimeVerdict.SATISFIED
    else:
        verdict = RegimeVerdict.VIOLATED
    return RegimeReport(
        theorem_id=theorem, verdict=verdict, lhs=lhs, rhs=rhs, note=f"under {hypothesis}"
    )


def _elliptic_repulsion_reports(spec: ModelSpec, m1: float, m2: float) -> list[RegimeReport]:
    alpha = spec.alpha
    top = max(alpha, m1)
    b1_large = spec.assume_b1_large

    relax_41 = m1 >= alpha or b1_large
    hyp_41 = "m1>=alpha or b1 large"
    relax_42 = m1 > alpha or b1_large
    hyp_42 = "m1>alpha or b1 large"

    lhs_41, rhs_41 = 2.0 * m2 - m1, top + 1.0
    lhs_42, rhs_42 = m2, top

    return [
        _relaxable(TheoremId.THM4_1, lhs_41, rhs_41, relax_41, hyp_41),
        _relaxable(TheoremId.THM4_2, lhs_42, rhs_42, relax_42, hyp_42),
        _remark(TheoremId.REMARK4_1, lhs_41, rhs_41, relax_41, hyp_41),
        _remark(TheoremId.REMARK4_2, lhs_42, rhs_42, relax_42, hyp_42),
    ]


def _attraction_report(spec: ModelSpec, m1: float, m2: float) -> RegimeReport:
    top = max(m1, m2, spec.alpha)
    verdict = RegimeVerdict.SATISFIED if top >= 0 else RegimeVerdict.VIOLATED
    return RegimeReport(
        theorem_id=TheoremId.THM4_3,
        verdict=verdict,
        lhs=0.0,
        rhs=top,
        note="max(m1,m2,alpha) >= 0",
    )


def competition_type(spec: ModelSpec) -> CompetitionType:
    """Classify competition strength by the ratio chain.

    Raises:
        NotApplicableError: For non Lotka-Volterra kinetics

    Example:
        >>> competition_type(ModelSpec(a1=3, b1=2, c1=1, a2=2, b2=1, c2=2)).kind
        <CompetitionKind.WEAK: 'Weak'>
    """
    _require_standard(spec, "competition_type")
    rb = spec.b1 / spec.b2
    ra = spec.a1 / spec.a2
    rc = spec.c1 / spec.c2
    if rb > ra > rc:
        kind = CompetitionKind.WEAK
    elif rb < ra < rc:
        kind = CompetitionKind.STRONG
    else:
        kind = CompetitionKind.MIXED
    return CompetitionType(kind=kind, ratios=(rb, ra, rc))


def coexistence_steady_state(spec: ModelSpec) -> tuple[float, float] | None:
    """Positive constant solution of a1 - b1 u^alpha - c1 v = 0, a2 - b2 u - c2 v = 0.

    Returns:
        (u_bar, v_bar) in the open positive quadrant, or None if there is none;
        the smallest root in u is returned when several exist

    Raises:
        NotApplicableError: For non Lotka-Volterra kinetics

    Example:
        >>> coexistence_steady_state(ModelSpec(a1=3, b1=2, c1=1, a2=2, b2=1, c2=2))
        (1.3333333333333333, 0.3333333333333333)
    """
    _require_standard(spec, "coexistence_steady_state")
    return solve_coexistence(spec.a1, spec.b1, spec.c1, spec.a2, spec.b2, spec.c2, spec.alpha)


def solve_coexistence(
    a1: float, b1: float, c1: float, a2: float, b2: float, c2: float, alpha: float
) -> tuple[float, float] | None:
    """Coexistence state for raw coefficients; c1 and b2 may be zero."""
    roots = coexistence_roots(a1, b1, c1, a2, b2, c2, alpha)
    if not roots:
        return None
    if len(roots) > 1:
        logger.warning(
            f"{len(roots)} positive coexistence states found; returning the smallest",
            extra={"roots": roots},
        )
    return roots[0]


def coexistence_roots(
    a1: float, b1: float, c1: float, a2: float, b2: float, c2: float, alpha: float
) -> list[tuple[float, float]]:
    """All positive coexistence states, ordered by u.

    alpha = 1 is solved in closed form. Otherwise v = (a2 - b2 u) / c2 is
    substituted and h(u) = a1 - b1 u^alpha - c1 v(u) is scanned on
    (0, min((a1/b1)^(1/alpha), a2/b2)] and every sign change bisected.
    """
    if alpha == 1.0:
        det = b1 * c2 - b2 * c1
        if det == 0:
            return []
        u_bar = (a1 * c2 - a2 * c1) / det
        v_bar = (a2 * b1 - a1 * b2) / det
        if u_bar > 0 and v_bar > 0:
            return [(u_bar, v_bar)]
        return []

    def v_of(u: float) -> float:
        return (a2 - b2 * u) / c2

    def h(u: float) -> float:
        return a1 - b1 * u**alpha - c1 * v_of(u)

    upper = (a1 / b1) ** (1.0 / alpha)
    if b2 > 0:
        upper = min(upper, a2 / b2)

    grid = np.linspace(0.0, upper, ROOT_SCAN_POINTS)
    values = [h(float(x)) for x in grid]
    candidates: list[float] = []
    for i in range(1, len(grid)):
        lo, hi = float(grid[i - 1]), float(grid[i])
        h_lo, h_hi = values[i - 1], values[i]
        if h_hi == 0.0 or (i == len(grid) - 1 and abs(h_hi) <= ROOT_XTOL * max(1.0, a1)):
            candidates.append(hi)
        elif h_lo != 0.0 and np.sign(h_lo) != np.sign(h_hi):
            candidates.append(float(bisect(h, lo, hi, xtol=ROOT_XTOL)))

    roots = []
    for u_bar in candidates:
        v_bar = v_of(u_bar)
        if u_bar > 0 and v_bar > 0 and not any(abs(u_bar - r[0]) <= 10 * ROOT_XTOL for r in roots):
            roots.append((u_bar, v_bar))
    return roots


def _require_standard(spec: ModelSpec, operation: str) -> None:
    if spec.kinetics is not KineticsMode.STANDARD:
        raise NotApplicableError(
            f"{operation} requires standard Lotka-Volterra kinetics, got {spec.kinetics.value}",
            operation=operation,
        )
