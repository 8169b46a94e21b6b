"""Pointwise law evaluation.

This module evaluates the diffusion law D1, the sensitivity law phi and the
reaction terms on scalars or whole cell arrays, and splits the reactions into
nonnegative gain and loss rates for the positivity-preserving step.
"""

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from lvadvect.exceptions import DomainError
from lvadvect.models.spec import (
    AffineDiffusion,
    DiffusionLaw,
    KineticsMode,
    LinearSensitivity,
    ModelSpec,
    PowerLawDiffusion,
    PowerLawSensitivity,
    SensitivityLaw,
    SKTCrossDiffusion,
)
from lvadvect.utils import FloatArray, require_nonnegative, scalar_or_array


def eval_diffusion(
    law: DiffusionLaw, u: npt.ArrayLike, v: npt.ArrayLike = 0.0
) -> float | FloatArray:
    """Evaluate D1(u, v).

    Args:
        law: Diffusion law
        u: Density of u (scalar or array), nonnegative
        v: Density of v, only used by the SKT cross-diffusion law

    Returns:
        D1 with the broadcast shape of u and v; always strictly positive

    Raises:
        DomainError: If u or v is negative

    Example:
        >>> eval_diffusion(PowerLawDiffusion(M1=2.0, m1=2.0), 3.0)
        32.0
        >>> eval_diffusion(SKTCrossDiffusion(d1=1.0, rho11=0.5, rho12=1.0), 2.0, 3.0)
        6.0
    """
    uu = require_nonnegative(u, "u")
    vv = require_nonnegative(v, "v")

    match law:
        case PowerLawDiffusion(M1=m_coef, m1=exponent):
            result = m_coef * np.power(1.0 + uu, exponent)
        case AffineDiffusion(d1=d1, rho11=rho11):
            result = d1 + 2.0 * rho11 * uu
        case SKTCrossDiffusion(d1=d1, rho11=rho11, rho12=rho12):
            result = d1 + 2.0 * rho11 * uu + rho12 * vv
        case _:
            raise TypeError(f"unknown diffusion law: {law!r}")

    return scalar_or_array(np.asarray(result, dtype=np.float64))


def eval_sensitivity(law: SensitivityLaw, u: npt.ArrayLike) -> float | FloatArray:
    """Evaluate phi(u); phi(0) = 0.

    Raises:
        DomainError: If u is negative

    Example:
        >>> eval_sensitivity(PowerLawSensitivity(M2=3.0, m2=2.0), 2.0)
        12.0
    """
    uu = require_nonnegative(u, "u")

    match law:
        case PowerLawSensitivity(M2=m_coef, m2=exponent):
            result = m_coef * np.power(uu, exponent)
        case LinearSensitivity():
            result = uu.copy()
        case _:
            raise TypeError(f"unknown sensitivity law: {law!r}")

    return scalar_or_array(np.asarray(result, dtype=np.float64))


def sensitivity_ratio(law: SensitivityLaw, u: FloatArray, floor: float) -> FloatArray:
    """phi(u) / u with u floored, bounding the upwind outflow per unit mass."""
    base = np.maximum(u, floor)
    match law:
        case PowerLawSensitivity(M2=m_coef, m2=exponent):
            return np.asarray(m_coef * np.power(base, exponent - 1.0), dtype=np.float64)
        case LinearSensitivity():
            return np.ones_like(base)
        case _:
            raise TypeError(f"unknown sensitivity law: {law!r}")


def eval_kinetics(
    spec: ModelSpec,
    u: npt.ArrayLike,
    v: npt.ArrayLike,
    m_local: npt.ArrayLike | None = None,
) -> tuple[float | FloatArray, float | FloatArray]:
    """Evaluate the reaction rates (f, g).

    standard:   f = (a1 - b1 u^alpha - c1 v) u,  g = (a2 - b2 u - c2 v) v
    ideal_free: f = (m - u - v) u,               g = r (m - u - v) v
    off:        f = g = 0

    Args:
        spec: Model coefficients
        u: Density of u
        v: Density of v
        m_local: Resource value(s); required in ideal-free mode

    Returns:
        Tuple (f, g); f vanishes where u = 0 and g where v = 0

    Raises:
        DomainError: If u or v is negative, or m_local is missing in ideal-free mode

    Example:
        >>> spec = ModelSpec(a1=3, b1=2, c1=1, a2=2, b2=1, c2=2)
        >>> eval_kinetics(spec, 0.0, 1.0)
        (0.0, 0.0)
    """
    uu = require_nonnegative(u, "u")
    vv = require_nonnegative(v, "v")

    match spec.kinetics:
        case KineticsMode.STANDARD:
            f = (spec.a1 - spec.b1 * np.power(uu, spec.alpha) - spec.c1 * vv) * uu
            g = (spec.a2 - spec.b2 * uu - spec.c2 * vv) * vv
        case KineticsMode.IDEAL_FREE:
            if m_local is None:
                raise DomainError("m_local is required for ideal_free kinetics", field="m_local")
            mm = np.asarray(m_local, dtype=np.float64)
            slack = mm - uu - vv
            f = slack * uu
            g = spec.rate * slack * vv
        case KineticsMode.OFF:
            f = np.zeros(np.broadcast(uu, vv).shape)
            g = np.zeros(np.broadcast(uu, vv).shape)

    return (
        scalar_or_array(np.asarray(f, dtype=np.float64)),
        scalar_or_array(np.asarray(g, dtype=np.float64)),
    )


@dataclass(frozen=True)
class ReactionSplit:
    """Reaction rates as f = (gain_u - loss_u) u and g = (gain_v - loss_v) v.

    All four arrays are nonnegative; gains are applied explicitly and losses
    implicitly on the new value.
    """

    gain_u: FloatArray
    loss_u: FloatArray
    gain_v: FloatArray
    loss_v: FloatArray


def patankar_split(
    spec: ModelSpec, u: FloatArray, v: FloatArray, m: FloatArray | None = None
) -> ReactionSplit:
    """Split the kinetics into nonnegative per-capita gain and loss rates.

    Args:
        spec: Model coefficients
        u: Cell values of u (nonnegative)
        v: Cell values of v (nonnegative)
        m: Resource values; required in ideal-free mode

    Returns:
        ReactionSplit with arrays shaped like u

    Raises:
        DomainError: If m is missing in ideal-free mode
    """
    shape = np.broadcast(u, v).shape
    match spec.kinetics:
        case KineticsMode.STANDARD:
            return ReactionSplit(
                gain_u=np.full(shape, spec.a1),
                loss_u=spec.b1 * np.power(u, spec.alpha) + spec.c1 * v,
                gain_v=np.full(shape, spec.a2),
                loss_v=spec.b2 * u + spec.c2 * v,
            )
        case KineticsMode.IDEAL_FREE:
            if m is None:
                raise DomainError("resource values are required for ideal_free kinetics", field="m")
            crowding = u + v
            return ReactionSplit(
                gain_u=np.broadcast_to(m, shape).astype(np.float64),
                loss_u=crowding,
                gain_v=spec.rate * np.broadcast_to(m, shape),
                loss_v=spec.rate * crowding,
            )
        case KineticsMode.OFF:
            zeros = np.zeros(shape)
            return ReactionSplit(gain_u=zeros, loss_u=zeros, gain_v=zeros, loss_v=zeros)
