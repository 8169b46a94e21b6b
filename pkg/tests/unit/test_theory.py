"""Unit tests for regime classification and steady states."""

import math

import pytest

from lvadvect.exceptions import DomainError, NotApplicableError
from lvadvect.kinetics import eval_kinetics
from lvadvect.models import (
    AffineDiffusion,
    CompetitionKind,
    ConstantResource,
    KineticsMode,
    ModelSpec,
    PowerLawDiffusion,
    PowerLawSensitivity,
    RegimeVerdict,
    SKTCrossDiffusion,
    TaxisSign,
    TheoremId,
    VDynamics,
)
from lvadvect.theory import (
    any_satisfied,
    classify,
    coexistence_roots,
    coexistence_steady_state,
    competition_type,
    effective_exponents,
    guarantees_boundedness,
    solve_coexistence,
)


def _spec(
    m1: float = 1.0,
    m2: float = 1.0,
    alpha: float = 1.0,
    v_dynamics: VDynamics = VDynamics.PARABOLIC,
    taxis_sign: TaxisSign = TaxisSign.REPULSION,
    assume_b1_large: bool = False,
) -> ModelSpec:
    return ModelSpec(
        alpha=alpha,
        chi=1.0,
        diffusion_law=PowerLawDiffusion(m1=m1),
        sensitivity_law=PowerLawSensitivity(m2=m2),
        v_dynamics=v_dynamics,
        taxis_sign=taxis_sign,
        assume_b1_large=assume_b1_large,
    )


def _verdicts(spec: ModelSpec, dimension: int = 2) -> dict[TheoremId, RegimeVerdict]:
    return {r.theorem_id: r.verdict for r in classify(spec, dimension)}


class TestClassifyParabolic:
    """Tests for the fully parabolic criteria."""

    def test_all_exponents_one(self) -> None:
        """Test m1 = m2 = alpha = 1, N = 2: both criteria hold."""
        assert _verdicts(_spec()) == {
            TheoremId.THM1_1: RegimeVerdict.SATISFIED,
            TheoremId.THM1_2: RegimeVerdict.SATISFIED,
        }

    def test_strong_sensitivity_violates_both(self) -> None:
        """Test m2 = 2.6: lhs 1.6 >= 1 and 4.2 >= 2."""
        reports = classify(_spec(m2=2.6), 2)

        assert [r.verdict for r in reports] == [RegimeVerdict.VIOLATED] * 2
        assert reports[0].lhs == pytest.approx(1.6)
        assert reports[0].rhs == pytest.approx(1.0)
        assert reports[1].lhs == pytest.approx(4.2)
        assert reports[1].rhs == pytest.approx(2.0)
        assert not any_satisfied(reports)

    def test_default_model_sits_on_the_boundary(self) -> None:
        """Test that constant diffusion with linear sensitivity gives lhs = rhs in 2D."""
        boundary = classify(ModelSpec(), 2)[0]
        linear = classify(ModelSpec(diffusion_law=PowerLawDiffusion(m1=1.0)), 2)[0]

        assert boundary.verdict is RegimeVerdict.VIOLATED
        assert (boundary.lhs, boundary.rhs) == pytest.approx((1.0, 1.0))
        assert linear.report_dict()["verdict"] == "Satisfied"
        assert (linear.lhs, linear.rhs) == pytest.approx((0.0, 1.0))

    @pytest.mark.parametrize("dimension", [2, 3, 5])
    def test_equal_exponents_small_alpha(self, dimension: int) -> None:
        """Test m1 = m2 with alpha < 1: lhs 0 < 2/N."""
        reports = classify(_spec(m1=0.5, m2=0.5, alpha=0.5), dimension)
        assert reports[0].verdict is RegimeVerdict.SATISFIED
        assert reports[0].rhs == pytest.approx(2.0 / dimension)
        assert "alpha<1 branch" in reports[0].note

    def test_equality_is_violated(self) -> None:
        """Test that lhs = rhs fails the strict inequality."""
        # N = 2, alpha >= 1: rhs of the first criterion is 1, so m2 - m1 = 1 sits on it.
        report = classify(_spec(m1=1.0, m2=2.0), 2)[0]
        assert report.verdict is RegimeVerdict.VIOLATED
        assert "equality case" in report.note

    def test_one_dimension_short_circuit(self) -> None:
        """Test that N = 1 is always satisfied."""
        reports = classify(_spec(m2=10.0), 1)
        assert all(r.verdict is RegimeVerdict.SATISFIED for r in reports)
        assert all(r.note.startswith("N=1") for r in reports)

    def test_monotone_in_m2(self) -> None:
        """Test that raising m2 never turns Violated into Satisfied."""
        previous = _verdicts(_spec(m2=0.5))
        for m2 in (1.0, 1.5, 2.0, 2.5, 3.0, 4.0):
            current = _verdicts(_spec(m2=m2))
            for theorem, verdict in current.items():
                if previous[theorem] is RegimeVerdict.VIOLATED:
                    assert verdict is not RegimeVerdict.SATISFIED
            previous = current

    def test_skt_reduced_obviously_holds(self) -> None:
        """Test the SKT form: effective m1 = m2 = alpha = 1 in 2D."""
        spec = ModelSpec(
            chi=1.0, diffusion_law=SKTCrossDiffusion(d1=1.0, rho11=0.5, rho12=1.0)
        )
        reports = classify(spec, 2)

        assert effective_exponents(spec) == (1.0, 1.0)
        assert all(r.verdict is RegimeVerdict.SATISFIED for r in reports)
        assert all("caveat: D1 depends on v" in r.note for r in reports)

    def test_no_taxis_note(self) -> None:
        """Test that chi = 0 is noted."""
        reports = classify(ModelSpec(), 2)
        assert all("chi=0" in r.note for r in reports)

    def test_attraction_is_exploratory(self) -> None:
        """Test the note on fully parabolic attraction."""
        reports = classify(_spec(taxis_sign=TaxisSign.ATTRACTION), 2)
        assert all("exploratory" in r.note for r in reports)

    def test_invalid_dimension(self) -> None:
        """Test that N < 1 is a domain error."""
        with pytest.raises(DomainError, match="dimension must be >= 1"):
            classify(ModelSpec(), 0)


class TestClassifyElliptic:
    """Tests for the parabolic-elliptic criteria."""

    def test_repulsion_reports(self) -> None:
        """Test that repulsion yields two criteria and two relaxed forms."""
        reports = classify(_spec(v_dynamics=VDynamics.ELLIPTIC), 2)
        assert [r.theorem_id for r in reports] == [
            TheoremId.THM4_1,
            TheoremId.THM4_2,
            TheoremId.REMARK4_1,
            TheoremId.REMARK4_2,
        ]

    def test_satisfied_implies_inequality(self) -> None:
        """Test that Satisfied verdicts re-evaluate as strict inequalities."""
        for m1, m2, alpha in [(1.0, 0.5, 1.0), (2.0, 1.0, 0.5), (0.5, 0.4, 1.5)]:
            spec = _spec(m1=m1, m2=m2, alpha=alpha, v_dynamics=VDynamics.ELLIPTIC)
            verdicts = _verdicts(spec)
            top = max(alpha, m1)
            if verdicts[TheoremId.THM4_1] is RegimeVerdict.SATISFIED:
                assert 2 * m2 - m1 < top + 1
            if verdicts[TheoremId.THM4_2] is RegimeVerdict.SATISFIED:
                assert m2 < top

    def test_equality_relaxed_when_m1_dominates(self) -> None:
        """Test 2 m2 - m1 = max(alpha, m1) + 1 with m1 >= alpha."""
        # m1 = 1, alpha = 1, m2 = 1.5: lhs 2 = rhs 2.
        verdicts = _verdicts(_spec(m2=1.5, v_dynamics=VDynamics.ELLIPTIC))
        assert verdicts[TheoremId.THM4_1] is RegimeVerdict.CONDITIONALLY_SATISFIED
        assert verdicts[TheoremId.REMARK4_1] is RegimeVerdict.CONDITIONALLY_SATISFIED

    def test_equality_without_hypothesis(self) -> None:
        """Test the equality case with m1 < alpha and no b1 assumption."""
        # m1 = 0, alpha = 1, m2 = 1: lhs 2 = rhs 2 but m1 < alpha.
        spec = _spec(m1=0.0, m2=1.0, v_dynamics=VDynamics.ELLIPTIC)
        verdicts = _verdicts(spec)

        assert verdicts[TheoremId.THM4_1] is RegimeVerdict.VIOLATED
        assert verdicts[TheoremId.REMARK4_1] is RegimeVerdict.NOT_APPLICABLE

    def test_equality_with_b1_large(self) -> None:
        """Test that assume_b1_large relaxes the equality case."""
        spec = _spec(m1=0.0, m2=1.0, v_dynamics=VDynamics.ELLIPTIC, assume_b1_large=True)
        verdicts = _verdicts(spec)

        assert verdicts[TheoremId.THM4_1] is RegimeVerdict.CONDITIONALLY_SATISFIED
        assert guarantees_boundedness(classify(spec, 2))

    def test_attraction(self) -> None:
        """Test that elliptic attraction always satisfies its criterion."""
        spec = _spec(
            m1=0.5,
            m2=0.5,
            alpha=0.5,
            v_dynamics=VDynamics.ELLIPTIC,
            taxis_sign=TaxisSign.ATTRACTION,
        )
        reports = classify(spec, 2)

        assert len(reports) == 1
        assert reports[0].theorem_id is TheoremId.THM4_3
        assert reports[0].verdict is RegimeVerdict.SATISFIED


class TestEffectiveExponents:
    """Tests for effective_exponents."""

    def test_affine_law(self) -> None:
        """Test that self-diffusion gives m1 = 1."""
        spec = ModelSpec(diffusion_law=AffineDiffusion(d1=1.0, rho11=0.5))
        assert effective_exponents(spec) == (1.0, 1.0)


class TestCompetitionType:
    """Tests for competition_type."""

    def test_weak(self, weak_spec: ModelSpec) -> None:
        """Test 2 > 1.5 > 0.5."""
        result = competition_type(weak_spec)
        assert result.kind is CompetitionKind.WEAK
        assert result.ratios == (2.0, 1.5, 0.5)

    def test_mixed(self) -> None:
        """Test that equal ratios are Mixed."""
        spec = ModelSpec(a1=1, b1=1, c1=1, a2=1, b2=1, c2=1)
        assert competition_type(spec).kind is CompetitionKind.MIXED

    def test_strong(self) -> None:
        """Test 1 < 2 < 3."""
        spec = ModelSpec(a1=2, a2=1, b1=1, b2=1, c1=3, c2=1)
        assert competition_type(spec).kind is CompetitionKind.STRONG

    def test_ideal_free_not_applicable(self) -> None:
        """Test that ideal-free kinetics are refused."""
        spec = ModelSpec(kinetics=KineticsMode.IDEAL_FREE, resource_field=ConstantResource())
        with pytest.raises(NotApplicableError) as exc_info:
            competition_type(spec)
        assert exc_info.value.operation == "competition_type"


class TestCoexistence:
    """Tests for the positive constant steady state."""

    def test_weak_competition(self, weak_spec: ModelSpec) -> None:
        """Test (4/3, 1/3) in closed form."""
        u_bar, v_bar = coexistence_steady_state(weak_spec) or (math.nan, math.nan)
        assert u_bar == pytest.approx(4.0 / 3.0, rel=1e-15)
        assert v_bar == pytest.approx(1.0 / 3.0, rel=1e-15)

    def test_decoupled(self) -> None:
        """Test c1 = b2 = 0: ((a1/b1)^(1/alpha), a2/c2)."""
        root = solve_coexistence(4.0, 1.0, 0.0, 3.0, 0.0, 2.0, alpha=2.0)
        assert root is not None
        assert root[0] == pytest.approx(2.0, abs=1e-10)
        assert root[1] == pytest.approx(1.5)

    def test_alpha_two(self) -> None:
        """Test 2u^2 - u - 2 = 0: u = (1 + sqrt 17) / 4, v = (2 - u) / 2."""
        spec = ModelSpec(a1=2, b1=1, c1=1, a2=2, b2=1, c2=2, alpha=2.0)
        root = coexistence_steady_state(spec)

        assert root is not None
        u_expected = (1.0 + math.sqrt(17.0)) / 4.0
        assert root[0] == pytest.approx(u_expected, abs=1e-10)
        assert root[1] == pytest.approx((2.0 - u_expected) / 2.0, abs=1e-10)

    def test_no_positive_root(self) -> None:
        """Test u^2 - u - 1 = 0: v = 1 - u is negative at the root."""
        spec = ModelSpec(a1=2, b1=1, c1=1, a2=1, b2=1, c2=1, alpha=2.0)
        assert coexistence_steady_state(spec) is None

    def test_strong_competition_closed_form(self) -> None:
        """Test that a strong-competition state is still found."""
        assert coexistence_roots(2, 1, 3, 1, 1, 1, 1.0) == [(0.5, 0.5)]

    def test_singular_linear_system(self) -> None:
        """Test that a degenerate 2x2 system has no state."""
        assert solve_coexistence(1, 1, 1, 1, 1, 1, 1.0) is None

    @pytest.mark.parametrize("alpha", [1.0, 1.5, 2.0, 3.0])
    def test_root_annihilates_kinetics(self, alpha: float) -> None:
        """Test that the returned state zeroes both reaction rates."""
        spec = ModelSpec(a1=3, b1=2, c1=1, a2=2, b2=1, c2=2, alpha=alpha)
        root = coexistence_steady_state(spec)

        assert root is not None
        f, g = eval_kinetics(spec, root[0], root[1])
        assert abs(f) + abs(g) < 1e-10
