"""Utility functions for lvadvect.

This module contains helpers for input validation, tolerant comparisons,
validation error formatting and logging setup shared by the numerical modules.
"""

import logging

import numpy as np
import numpy.typing as npt
from pydantic import ValidationError

from lvadvect.exceptions import DomainError

FloatArray = npt.NDArray[np.float64]

# Relative tolerance under which the two sides of a regime inequality count as equal.
EQUALITY_TOL = 1e-12

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def require_nonnegative(values: npt.ArrayLike, field: str) -> FloatArray:
    """Convert to a float array and check that no entry is negative.

    Args:
        values: Scalar or array of densities
        field: Argument name used in the error

    Returns:
        Float array view of the input

    Raises:
        DomainError: If any entry is negative or NaN

    Example:
        >>> require_nonnegative([0.0, 1.5], "u")
        array([0. , 1.5])
        >>> require_nonnegative(-1.0, "u")  # Raises DomainError
    """
    array = np.asarray(values, dtype=np.float64)
    if np.isnan(array).any():
        raise DomainError(f"{field} contains NaN", field=field)
    if (array < 0).any():
        raise DomainError(f"{field} must be nonnegative, min={float(array.min()):.3e}", field=field)
    return array


def scalar_or_array(result: FloatArray) -> float | FloatArray:
    """Unwrap zero-dimensional results to a Python float."""
    if result.ndim == 0:
        return float(result)
    return result


def nearly_equal(lhs: float, rhs: float, tol: float = EQUALITY_TOL) -> bool:
    """Check equality relative to the magnitude of both sides (floor 1)."""
    return abs(lhs - rhs) <= tol * max(1.0, abs(lhs), abs(rhs))


def exponent_key(p: float) -> str:
    """Stable text key for an Lp exponent ("1", "2", "1.5")."""
    return f"{p:g}"


def configure_logging(level: int) -> None:
    """Install a root stream handler at the given level."""
    logging.basicConfig(level=level, format=LOG_FORMAT)
    logging.getLogger("lvadvect").setLevel(level)


def describe_validation_error(error: ValidationError, prefix: str = "") -> str:
    """Flatten a pydantic ValidationError into "dotted.location: message" parts.

    Example:
        >>> describe_validation_error(e, prefix="control")
        'control: Value error, dt_min (0.01) must be smaller than dt_init (0.001)'
    """
    parts = []
    for item in error.errors():
        loc = ".".join(str(part) for part in (prefix, *item["loc"]) if part != "")
        parts.append(f"{loc or '<root>'}: {item['msg']}")
    return "; ".join(parts)
