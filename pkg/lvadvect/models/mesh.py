"""Structured mesh model.

This module contains Grid, the uniform cell-centered mesh on a box domain.
"""

import math

import numpy as np
from pydantic import Field, model_validator

from lvadvect.models.common import FrozenModel


class Grid(FrozenModel):
    """Uniform 1D or 2D cell-centered mesh on [0, Lx] (x [0, Ly]).

    Fields on the grid are numpy arrays shaped ``cells``; axis 0 is x.

    Attributes:
        cells: Cell counts per axis, each at least 3
        lengths: Domain lengths per axis

    Example:
        >>> grid = Grid(cells=(128,), lengths=(1.0,))
        >>> grid.spacing
        (0.0078125,)
        >>> Grid.rectangle(64, 64, 1.0, 1.0).volume
        1.0
    """

    cells: tuple[int, ...] = Field(default=(128,), description="Cells per axis")
    lengths: tuple[float, ...] = Field(default=(1.0,), description="Domain length per axis")

    @model_validator(mode="after")
    def _check_shape(self) -> "Grid":
        if len(self.cells) not in (1, 2):
            raise ValueError(f"only 1D and 2D grids are supported, got {len(self.cells)} axes")
        if len(self.lengths) != len(self.cells):
            raise ValueError(
                f"lengths has {len(self.lengths)} entries but cells has {len(self.cells)}"
            )
        if any(n < 3 for n in self.cells):
            raise ValueError(f"each axis needs at least 3 cells, got {self.cells}")
        if any(length <= 0 for length in self.lengths):
            raise ValueError(f"lengths must be positive, got {self.lengths}")
        return self

    @classmethod
    def line(cls, n: int, length: float = 1.0) -> "Grid":
        """1D grid with n cells on [0, length]."""
        return cls(cells=(n,), lengths=(length,))

    @classmethod
    def rectangle(cls, nx: int, ny: int, lx: float = 1.0, ly: float = 1.0) -> "Grid":
        """2D grid with nx x ny cells on [0, lx] x [0, ly]."""
        return cls(cells=(nx, ny), lengths=(lx, ly))

    @property
    def dim(self) -> int:
        return len(self.cells)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.cells

    @property
    def size(self) -> int:
        return math.prod(self.cells)

    @property
    def spacing(self) -> tuple[float, ...]:
        return tuple(length / n for length, n in zip(self.lengths, self.cells, strict=True))

    @property
    def cell_volume(self) -> float:
        return math.prod(self.spacing)

    @property
    def volume(self) -> float:
        """Measure of the domain."""
        return math.prod(self.lengths)

    def centers(self) -> tuple[np.ndarray, ...]:
        """Cell-center coordinates, one array per axis, each shaped like a field."""
        axes = [
            (np.arange(n, dtype=np.float64) + 0.5) * h
            for n, h in zip(self.cells, self.spacing, strict=True)
        ]
        return tuple(np.meshgrid(*axes, indexing="ij"))
