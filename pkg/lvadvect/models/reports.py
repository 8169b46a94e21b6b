"""Regime classification models.

This module contains the per-theorem verdict reports produced by the
classifier and the competition-strength classification.
"""

from enum import StrEnum
from typing import Any

from pydantic import Field

from lvadvect.models.common import FrozenModel


class TheoremId(StrEnum):
    """Boundedness criteria the classifier evaluates."""

    THM1_1 = "Thm1_1"
    THM1_2 = "Thm1_2"
    THM4_1 = "Thm4_1"
    THM4_2 = "Thm4_2"
    THM4_3 = "Thm4_3"
    REMARK4_1 = "Remark4_1"
    REMARK4_2 = "Remark4_2"


class RegimeVerdict(StrEnum):
    SATISFIED = "Satisfied"
    CONDITIONALLY_SATISFIED = "ConditionallySatisfied"
    VIOLATED = "Violated"
    NOT_APPLICABLE = "NotApplicable"


class RegimeReport(FrozenModel):
    """Outcome of one boundedness criterion.

    Attributes:
        theorem_id: Which criterion was evaluated
        verdict: Satisfied (lhs < rhs), ConditionallySatisfied (lhs = rhs under a
            relaxation hypothesis), Violated or NotApplicable
        lhs: Left-hand side of the evaluated inequality
        rhs: Right-hand side of the evaluated inequality
        note: Branch taken and caveats

    Example:
        >>> spec = ModelSpec(diffusion_law=PowerLawDiffusion(m1=1.0))
        >>> report = classify(spec, 2)[0]
        >>> report.report_dict()
        {'theorem': 'Thm1_1', 'verdict': 'Satisfied', 'lhs': 0.0, 'rhs': 1.0, 'note': '...'}
    """

    theorem_id: TheoremId = Field(..., description="Evaluated criterion")
    verdict: RegimeVerdict = Field(..., description="Classification outcome")
    lhs: float = Field(..., description="Left-hand side value")
    rhs: float = Field(..., description="Right-hand side value")
    note: str = Field(default="", description="Branch and caveats")

    @property
    def guarantees_boundedness(self) -> bool:
        return self.verdict in (
            RegimeVerdict.SATISFIED,
            RegimeVerdict.CONDITIONALLY_SATISFIED,
        )

    def report_dict(self) -> dict[str, Any]:
        """JSON report object {theorem, verdict, lhs, rhs, note}."""
        return {
            "theorem": self.theorem_id.value,
            "verdict": self.verdict.value,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "note": self.note,
        }

    def format_line(self) -> str:
        """One-line text rendering used by the command line."""
        line = (
            f"{self.theorem_id.value:<10} {self.verdict.value:<22} "
            f"lhs={self.lhs:.6g} rhs={self.rhs:.6g}"
        )
        if self.note:
            line += f"  {self.note}"
        return line


class CompetitionKind(StrEnum):
    WEAK = "Weak"
    STRONG = "Strong"
    MIXED = "Mixed"


class CompetitionType(FrozenModel):
    """Competition strength from the ratio chain b1/b2, a1/a2, c1/c2.

    Attributes:
        kind: Weak iff b1/b2 > a1/a2 > c1/c2, Strong iff the chain is reversed
        ratios: (b1/b2, a1/a2, c1/c2)
    """

    kind: CompetitionKind
    ratios: tuple[float, float, float]
