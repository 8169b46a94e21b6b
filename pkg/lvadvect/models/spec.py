"""PDE coefficient models.

This module contains ModelSpec and the law families it selects from:
nonlinear diffusion D1, taxis sensitivity phi and the resource field m(x)
used by ideal-free kinetics.
"""

from enum import StrEnum
from pathlib import Path
from typing import Annotated, Literal

from pydantic import Field, model_validator

from lvadvect.models.common import FrozenModel


class TaxisSign(StrEnum):
    """Orientation of the taxis flux; repulsion drives u down the v gradient."""

    REPULSION = "repulsion"
    ATTRACTION = "attraction"


class VDynamics(StrEnum):
    """Whether v evolves in time or is slaved to u through an elliptic problem."""

    PARABOLIC = "parabolic"
    ELLIPTIC = "elliptic"


class KineticsMode(StrEnum):
    """Reaction terms: Lotka-Volterra, resource-matching (ideal free) or none."""

    STANDARD = "standard"
    IDEAL_FREE = "ideal_free"
    OFF = "off"


# ==================== Diffusion Laws ====================


class PowerLawDiffusion(FrozenModel):
    """D1(u) = M1 * (1 + u)**m1.

    Satisfies the growth hypothesis D1(u) >= M1 (1+u)^m1 with its own constants.

    Example:
        >>> law = PowerLawDiffusion(M1=2.0, m1=2.0)
        >>> law.growth_bound()
        (2.0, 2.0)
    """

    kind: Literal["power_law"] = "power_law"
    M1: float = Field(default=1.0, gt=0, description="Diffusion prefactor")
    m1: float = Field(default=0.0, description="Diffusion growth exponent")

    def growth_bound(self) -> tuple[float, float]:
        """Constants (M1, m1) of the lower growth bound."""
        return self.M1, self.m1


class AffineDiffusion(FrozenModel):
    """D1(u) = d1 + 2 * rho11 * u (self-diffusion of the reduced SKT form)."""

    kind: Literal["affine"] = "affine"
    d1: float = Field(default=1.0, gt=0, description="Baseline diffusion rate")
    rho11: float = Field(default=0.0, ge=0, description="Self-diffusion pressure")

    def growth_bound(self) -> tuple[float, float]:
        """Constants (M1, m1) of the lower growth bound.

        d1 + 2 rho11 u >= min(d1, 2 rho11) (1 + u), so rho11 > 0 gives m1 = 1;
        without self-diffusion the law is constant and m1 = 0.
        """
        if self.rho11 > 0:
            return min(self.d1, 2.0 * self.rho11), 1.0
        return self.d1, 0.0


class SKTCrossDiffusion(FrozenModel):
    """D1(u, v) = d1 + 2 * rho11 * u + rho12 * v."""

    kind: Literal["skt_cross"] = "skt_cross"
    d1: float = Field(default=1.0, gt=0, description="Baseline diffusion rate")
    rho11: float = Field(default=0.0, ge=0, description="Self-diffusion pressure")
    rho12: float = Field(default=0.0, ge=0, description="Cross-diffusion pressure from v")

    def growth_bound(self) -> tuple[float, float]:
        """Constants (M1, m1) of the lower growth bound; v only raises D1."""
        if self.rho11 > 0:
            return min(self.d1, 2.0 * self.rho11), 1.0
        return self.d1, 0.0


DiffusionLaw = Annotated[
    PowerLawDiffusion | AffineDiffusion | SKTCrossDiffusion, Field(discriminator="kind")
]


# ==================== Sensitivity Laws ====================


class PowerLawSensitivity(FrozenModel):
    """phi(u) = M2 * u**m2."""

    kind: Literal["power_law"] = "power_law"
    M2: float = Field(default=1.0, gt=0, description="Sensitivity prefactor")
    m2: float = Field(default=1.0, gt=0, description="Sensitivity growth exponent")

    def growth_bound(self) -> tuple[float, float]:
        return self.M2, self.m2


class LinearSensitivity(FrozenModel):
    """phi(u) = u."""

    kind: Literal["linear"] = "linear"

    def growth_bound(self) -> tuple[float, float]:
        return 1.0, 1.0


SensitivityLaw = Annotated[PowerLawSensitivity | LinearSensitivity, Field(discriminator="kind")]


# ==================== Resource Fields ====================


class ConstantResource(FrozenModel):
    """m(x) = value."""

    kind: Literal["constant"] = "constant"
    value: float = Field(default=1.0, gt=0, description="Uniform resource level")


class CosineResource(FrozenModel):
    """m(x) = mean + amplitude * prod_i cos(modes * pi * x_i / L_i).

    Each factor has zero normal derivative on the box boundary, and
    amplitude < mean keeps m strictly positive.
    """

    kind: Literal["cosine"] = "cosine"
    mean: float = Field(default=1.0, gt=0, description="Mean resource level")
    amplitude: float = Field(default=0.5, ge=0, description="Modulation amplitude")
    modes: int = Field(default=1, ge=1, description="Half-wavelengths per axis")

    @model_validator(mode="after")
    def _check_positive(self) -> "CosineResource":
        if self.amplitude >= self.mean:
            raise ValueError(
                f"amplitude ({self.amplitude}) must be smaller than mean ({self.mean})"
            )
        return self


class FileResource(FrozenModel):
    """m(x) read from a field CSV file."""

    kind: Literal["file"] = "file"
    path: Path = Field(..., description="Field CSV with the resource values")


ResourceField = Annotated[
    ConstantResource | CosineResource | FileResource, Field(discriminator="kind")
]


# ==================== Model Coefficients ====================


class ModelSpec(FrozenModel):
    """All coefficients of the two-species competition system.

    u_t = div(D1 grad u + sigma chi phi(u) grad v) + (a1 - b1 u^alpha - c1 v) u
    v_t = D2 lap v + (a2 - b2 u - c2 v) v        (or 0 = ... when elliptic)

    with sigma = +1 for repulsion and -1 for attraction. In ideal-free mode
    the kinetics become (m - u - v) u and r (m - u - v) v and the flux gains
    the term -chi phi(u) grad m.

    Attributes:
        a1, b1, c1: Growth, self-limitation and competition rates of u
        a2, b2, c2: Competition, growth-limiting and self-limitation rates of v
        alpha: Exponent of the self-limitation term b1 u^alpha u
        D2: Constant diffusion rate of v
        chi: Taxis strength
        taxis_sign: Repulsion (+) or attraction (-)
        diffusion_law: D1 law
        sensitivity_law: phi law
        v_dynamics: Parabolic or elliptic v equation
        kinetics: Reaction mode
        resource_field: m(x), required exactly in ideal-free mode
        resource_rate: r of the v-equation in ideal-free mode (None means 1)
        assume_b1_large: Treat b1 as large enough for the relaxed equality cases

    Example:
        >>> spec = ModelSpec(a1=3, b1=2, c1=1, a2=2, b2=1, c2=2)
        >>> spec.sigma
        1.0
    """

    a1: float = Field(default=3.0, gt=0, description="Intrinsic growth rate of u")
    b1: float = Field(default=2.0, gt=0, description="Self-limitation rate of u")
    c1: float = Field(default=1.0, gt=0, description="Competition of v on u")
    a2: float = Field(default=2.0, gt=0, description="Intrinsic growth rate of v")
    b2: float = Field(default=1.0, gt=0, description="Competition of u on v")
    c2: float = Field(default=2.0, gt=0, description="Self-limitation rate of v")
    alpha: float = Field(default=1.0, gt=0, description="Self-limitation exponent")
    D2: float = Field(default=1.0, gt=0, description="Diffusion rate of v")
    chi: float = Field(default=0.0, ge=0, description="Taxis strength")
    taxis_sign: TaxisSign = Field(default=TaxisSign.REPULSION, description="Taxis orientation")
    diffusion_law: DiffusionLaw = Field(default_factory=PowerLawDiffusion)
    sensitivity_law: SensitivityLaw = Field(default_factory=LinearSensitivity)
    v_dynamics: VDynamics = Field(default=VDynamics.PARABOLIC, description="v equation type")
    kinetics: KineticsMode = Field(default=KineticsMode.STANDARD, description="Reaction mode")
    resource_field: ResourceField | None = Field(default=None, description="Resource m(x)")
    resource_rate: float | None = Field(default=None, gt=0, description="Ideal-free rate r")
    assume_b1_large: bool = Field(
        default=False, description="Assume b1 large for the relaxed equality cases"
    )

    @model_validator(mode="after")
    def _check_resource(self) -> "ModelSpec":
        ideal_free = self.kinetics is KineticsMode.IDEAL_FREE
        if ideal_free and self.resource_field is None:
            raise ValueError("resource_field is required when kinetics is ideal_free")
        if not ideal_free and self.resource_field is not None:
            raise ValueError("resource_field is only allowed when kinetics is ideal_free")
        if not ideal_free and self.resource_rate is not None:
            raise ValueError("resource_rate is only allowed when kinetics is ideal_free")
        return self

    @property
    def sigma(self) -> float:
        """+1 for repulsion, -1 for attraction."""
        return 1.0 if self.taxis_sign is TaxisSign.REPULSION else -1.0

    @property
    def rate(self) -> float:
        """Ideal-free v-equation rate r (defaults to 1)."""
        return 1.0 if self.resource_rate is None else self.resource_rate

    @property
    def v_ceiling(self) -> float:
        """Carrying capacity a2/c2 of v in the absence of u."""
        return self.a2 / self.c2
