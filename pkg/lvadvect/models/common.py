"""Common data models shared across lvadvect.

This module contains the base model every domain type derives from.
"""

from pydantic import BaseModel, ConfigDict


class FrozenModel(BaseModel):
    """Immutable, strict base model.

    Instances are hashable, reject unknown keys and refuse NaN or infinite
    floats, so every domain value can be shared between threads and used as
    a cache key.

    Example:
        >>> class Pair(FrozenModel):
        ...     a: float
        >>> Pair(a=1.0, b=2.0)  # Raises pydantic.ValidationError (extra key)
    """

    model_config = ConfigDict(frozen=True, extra="forbid", allow_inf_nan=False)
