"""Initial data, resource fields and field CSV files.

This module realizes the InitialData and ResourceField descriptions on a
grid and reads or writes fields in the flat CSV layout:

    nx,ny,Lx,Ly
    128,1,1.0,0.0
    <ny rows of nx comma-separated values>

1D fields use ny = 1 and Ly = 0.
"""

import logging
from functools import lru_cache
from pathlib import Path

import numpy as np

from lvadvect.exceptions import DomainError
from lvadvect.grid import ScalarField
from lvadvect.models.mesh import Grid
from lvadvect.models.scenario import (
    BumpInitial,
    ConstantInitial,
    FileInitial,
    InitialData,
    RandomUniformInitial,
)
from lvadvect.models.spec import ConstantResource, CosineResource, FileResource, ResourceField

logger = logging.getLogger(__name__)

CSV_HEADER = "nx,ny,Lx,Ly"


def realize_initial(
    initial: InitialData, grid: Grid, seed: int | None = None
) -> tuple[ScalarField, ScalarField]:
    """Build (u0, v0) on grid.

    Args:
        initial: Initial data description
        grid: Mesh
        seed: Replaces the generator seed of random initial data

    Returns:
        Tuple of nonnegative fields (u0, v0)

    Raises:
        DomainError: If a file does not match the grid or holds negative values
    """
    match initial:
        case ConstantInitial(u0=u0, v0=v0):
            return ScalarField.constant(grid, u0), ScalarField.constant(grid, v0)

        case BumpInitial():
            centers = grid.centers()
            if len(initial.center) != grid.dim:
                raise DomainError(
                    f"bump center has {len(initial.center)} coordinates for a {grid.dim}D grid",
                    field="center",
                )
            r2 = sum((x - c) ** 2 for x, c in zip(centers, initial.center, strict=True))
            u = initial.background + initial.amplitude * np.exp(-r2 / (2.0 * initial.width**2))
            return ScalarField(grid, u), ScalarField.constant(grid, initial.v0)

        case RandomUniformInitial(lo=lo, hi=hi, rng_seed=rng_seed):
            rng = np.random.default_rng(rng_seed if seed is None else seed)
            u = rng.uniform(lo, hi, size=grid.shape)
            v = rng.uniform(lo, hi, size=grid.shape)
            return ScalarField(grid, u), ScalarField(grid, v)

        case FileInitial(u_path=u_path, v_path=v_path, v0=v0):
            u_field = _checked(read_field_csv(u_path, grid), "u")
            if v_path is None:
                return u_field, ScalarField.constant(grid, v0)
            return u_field, _checked(read_field_csv(v_path, grid), "v")

    raise TypeError(f"unknown initial data: {initial!r}")


@lru_cache(maxsize=32)
def realize_resource(resource: ResourceField, grid: Grid) -> ScalarField:
    """Build m(x) on grid; cached since the field is static over a run.

    Raises:
        DomainError: If the resulting field is not strictly positive
    """
    match resource:
        case ConstantResource(value=value):
            field = ScalarField.constant(grid, value)
        case CosineResource(mean=mean, amplitude=amplitude, modes=modes):
            profile = np.ones(grid.shape)
            for x, length in zip(grid.centers(), grid.lengths, strict=True):
                profile = profile * np.cos(modes * np.pi * x / length)
            field = ScalarField(grid, mean + amplitude * profile)
        case FileResource(path=path):
            field = read_field_csv(path, grid)
        case _:
            raise TypeError(f"unknown resource field: {resource!r}")

    if field.min() <= 0:
        raise DomainError("resource field must be strictly positive", field="resource_field")
    return field


def _checked(field: ScalarField, name: str) -> ScalarField:
    if field.min() < 0:
        raise DomainError(f"initial {name} has negative values", field=name)
    return field


def read_field_csv(path: Path | str, grid: Grid | None = None) -> ScalarField:
    """Read a field CSV file.

    Args:
        path: File to read
        grid: Expected grid; the file header must match it when given

    Returns:
        ScalarField on the grid described by the header

    Raises:
        DomainError: If the file is malformed or does not match grid
    """
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    if len(lines) < 3 or lines[0].strip().replace(" ", "") != CSV_HEADER:
        raise DomainError(f"{path}: expected header line '{CSV_HEADER}'", field="path")

    try:
        nx_raw, ny_raw, lx_raw, ly_raw = (item.strip() for item in lines[1].split(","))
        nx, ny = int(nx_raw), int(ny_raw)
        lx, ly = float(lx_raw), float(ly_raw)
        rows = np.loadtxt(lines[2:], delimiter=",", ndmin=2, dtype=np.float64)
    except ValueError as e:
        raise DomainError(f"{path}: malformed field file ({e})", field="path") from e

    file_grid = Grid.line(nx, lx) if ny == 1 and ly == 0 else Grid.rectangle(nx, ny, lx, ly)
    if rows.shape != (ny, nx):
        raise DomainError(
            f"{path}: expected {ny} rows of {nx} values, got shape {rows.shape}", field="path"
        )
    if grid is not None and grid != file_grid:
        raise DomainError(
            f"{path}: field grid {file_grid.cells}/{file_grid.lengths} does not match "
            f"{grid.cells}/{grid.lengths}",
            field="path",
        )

    values = rows[0] if file_grid.dim == 1 else rows.T
    logger.debug(f"Read field {path} on grid {file_grid.cells}")
    return ScalarField(file_grid, values)


def write_field_csv(field: ScalarField, path: Path | str, float_format: str = "%.17g") -> None:
    """Write a field CSV file; the default format round-trips exactly."""
    grid = field.grid
    if grid.dim == 1:
        header = [grid.cells[0], 1, grid.lengths[0], 0.0]
        rows = field.values.reshape(1, -1)
    else:
        header = [grid.cells[0], grid.cells[1], grid.lengths[0], grid.lengths[1]]
        rows = field.values.T

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        fh.write(CSV_HEADER + "\n")
        fh.write(",".join(repr(item) for item in header) + "\n")
        np.savetxt(fh, rows, delimiter=",", fmt=float_format)
