"""Finite-volume operators on structured grids.

This module provides ScalarField and the conservative spatial operators of
the system: face gradients, the divergence of the total flux
D1 grad u + sigma chi phi(u) grad v (minus chi phi(u) grad m in ideal-free
mode) and the sparse Neumann Laplacian used by the implicit solves.

Face arrays have n+1 entries along their axis; the first and last are the
boundary faces and always carry zero flux.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import numpy.typing as npt
from scipy import sparse

from lvadvect.exceptions import DomainError
from lvadvect.kinetics import eval_diffusion, eval_sensitivity
from lvadvect.models.mesh import Grid
from lvadvect.models.spec import KineticsMode, ModelSpec
from lvadvect.utils import FloatArray, require_nonnegative

FaceArrays = tuple[FloatArray, ...]


@dataclass(frozen=True)
class ScalarField:
    """Cell values on a grid.

    The values array is copied, reshaped to ``grid.shape`` and made read-only.

    Raises:
        DomainError: If the values do not fit the grid or are not finite

    Example:
        >>> field = ScalarField(Grid.line(3), [0.0, 1.0, 2.0])
        >>> field.values.flags.writeable
        False
    """

    grid: Grid
    values: FloatArray

    def __post_init__(self) -> None:
        array = np.array(self.values, dtype=np.float64, copy=True)
        if array.size != self.grid.size:
            raise DomainError(
                f"field has {array.size} values but the grid has {self.grid.size} cells",
                field="values",
            )
        array = array.reshape(self.grid.shape)
        if not np.isfinite(array).all():
            raise DomainError("field values must be finite", field="values")
        array.flags.writeable = False
        object.__setattr__(self, "values", array)

    @classmethod
    def constant(cls, grid: Grid, value: float) -> "ScalarField":
        return cls(grid, np.full(grid.shape, value, dtype=np.float64))

    @property
    def flat(self) -> FloatArray:
        """Values in C order, the unknown ordering of the sparse operators."""
        return self.values.ravel()

    def max(self) -> float:
        return float(self.values.max())

    def min(self) -> float:
        return float(self.values.min())

    def integral(self) -> float:
        return float(self.values.sum() * self.grid.cell_volume)


def _face_differences(values: FloatArray, spacing: tuple[float, ...]) -> FaceArrays:
    faces = []
    for axis, h in enumerate(spacing):
        pad = [(0, 0)] * values.ndim
        pad[axis] = (1, 1)
        faces.append(np.pad(np.diff(values, axis=axis) / h, pad))
    return tuple(faces)


def _face_mean(values: FloatArray, axis: int) -> FloatArray:
    n = values.shape[axis]
    left = np.take(values, np.arange(n - 1), axis=axis)
    right = np.take(values, np.arange(1, n), axis=axis)
    pad = [(0, 0)] * values.ndim
    pad[axis] = (1, 1)
    return np.pad(0.5 * (left + right), pad)


def interior_faces(faces: FloatArray, axis: int) -> FloatArray:
    """Drop the two boundary faces along axis."""
    n = faces.shape[axis]
    return np.take(faces, np.arange(1, n - 1), axis=axis)


def face_gradient(field: ScalarField) -> FaceArrays:
    """Normal derivatives on every face.

    Args:
        field: Cell values

    Returns:
        One array per axis with n+1 faces along that axis; interior faces hold
        (f_R - f_L) / h and boundary faces hold 0 (zero-flux condition)

    Example:
        >>> face_gradient(ScalarField(Grid.line(3, 3.0), [0.0, 1.0, 2.0]))[0]
        array([0., 1., 1., 0.])
    """
    return _face_differences(field.values, field.grid.spacing)


def divergence(faces: FaceArrays, grid: Grid) -> FloatArray:
    """Cell divergence (F_right - F_left) / h summed over axes."""
    result = np.zeros(grid.shape)
    for axis, (flux, h) in enumerate(zip(faces, grid.spacing, strict=True)):
        result += np.diff(flux, axis=axis) / h
    return result


def face_diffusivity(u: FloatArray, v: FloatArray, spec: ModelSpec) -> FaceArrays:
    """D1 on every face as the arithmetic mean of the two adjacent cells."""
    cell_d = np.asarray(eval_diffusion(spec.diffusion_law, u, v), dtype=np.float64)
    cell_d = np.broadcast_to(cell_d, u.shape)
    return tuple(_face_mean(cell_d, axis) for axis in range(u.ndim))


def taxis_drift(
    v: FloatArray, spec: ModelSpec, grid: Grid, m: FloatArray | None = None
) -> FaceArrays:
    """Drift velocity c on every face: -sigma chi dv/dn (+ sigma chi dm/dn in ideal-free mode).

    Mass moves along +axis where c > 0.
    """
    coef = spec.sigma * spec.chi
    grad_v = _face_differences(v, grid.spacing)
    drift = tuple(-coef * g for g in grad_v)
    if spec.kinetics is KineticsMode.IDEAL_FREE:
        if m is None:
            raise DomainError("resource field is required in ideal_free mode", field="m")
        grad_m = _face_differences(m, grid.spacing)
        drift = tuple(c + coef * g for c, g in zip(drift, grad_m, strict=True))
    return drift


def _upwind(cell_values: FloatArray, drift: FloatArray, axis: int) -> FloatArray:
    """Cell value taken from the cell the drift comes from, per face."""
    n = cell_values.shape[axis]
    left = np.take(cell_values, np.arange(n - 1), axis=axis)
    right = np.take(cell_values, np.arange(1, n), axis=axis)
    inner = interior_faces(drift, axis)
    chosen = np.where(inner > 0, left, right)
    pad = [(0, 0)] * cell_values.ndim
    pad[axis] = (1, 1)
    return np.pad(chosen, pad)


def taxis_face_flux(
    u: FloatArray, v: FloatArray, spec: ModelSpec, grid: Grid, m: FloatArray | None = None
) -> FaceArrays:
    """Upwinded taxis contribution -phi(u_upwind) * c to the face flux."""
    phi = np.asarray(eval_sensitivity(spec.sensitivity_law, u), dtype=np.float64)
    drift = taxis_drift(v, spec, grid, m)
    return tuple(-_upwind(phi, c, axis) * c for axis, c in enumerate(drift))


def div_taxis_flux(
    u: ScalarField, v: ScalarField, spec: ModelSpec, m: ScalarField | None = None
) -> ScalarField:
    """Divergence of the taxis part of the flux alone."""
    _check_inputs(u, v, m)
    faces = taxis_face_flux(u.values, v.values, spec, u.grid, None if m is None else m.values)
    return ScalarField(u.grid, divergence(faces, u.grid))


def div_total_flux(
    u: ScalarField, v: ScalarField, spec: ModelSpec, m: ScalarField | None = None
) -> ScalarField:
    """Divergence of D1 grad u + sigma chi phi(u) grad v - chi phi(u) grad m.

    The m-term is present only in ideal-free mode. Face fluxes telescope, so
    the cell-volume-weighted sum of the result vanishes up to rounding.

    Args:
        u: Density of u (nonnegative)
        v: Density of v (nonnegative)
        spec: Model coefficients
        m: Resource field, required in ideal-free mode

    Returns:
        Cellwise divergence

    Raises:
        DomainError: If u or v has negative cells, fields live on different
            grids, or m is missing in ideal-free mode

    Example:
        >>> grid = Grid.line(3, 3.0)
        >>> u = ScalarField(grid, [1.0, 2.0, 1.0])
        >>> div_total_flux(u, ScalarField.constant(grid, 0.0), ModelSpec()).values
        array([ 1., -2.,  1.])
    """
    _check_inputs(u, v, m)
    grid = u.grid
    diffusivity = face_diffusivity(u.values, v.values, spec)
    gradient = _face_differences(u.values, grid.spacing)
    taxis = taxis_face_flux(u.values, v.values, spec, grid, None if m is None else m.values)
    faces = tuple(d * g + t for d, g, t in zip(diffusivity, gradient, taxis, strict=True))
    return ScalarField(grid, divergence(faces, grid))


def _check_inputs(u: ScalarField, v: ScalarField, m: ScalarField | None) -> None:
    if u.grid != v.grid or (m is not None and m.grid != u.grid):
        raise DomainError("fields must live on the same grid", field="grid")
    require_nonnegative(u.values, "u")
    require_nonnegative(v.values, "v")


def neumann_laplacian_matrix(
    grid: Grid, coeff: float | npt.ArrayLike | FaceArrays
) -> sparse.csr_matrix:
    """Sparse operator of div(coeff grad .) with zero-flux boundaries.

    Args:
        grid: Mesh
        coeff: Positive face coefficients; a scalar, or one array per axis
            holding the n-1 interior faces along that axis

    Returns:
        Symmetric CSR matrix with zero row sums and nonpositive quadratic form

    Raises:
        DomainError: If any coefficient is nonpositive or the shapes do not match

    Example:
        >>> neumann_laplacian_matrix(Grid.line(3, 3.0), 1.0).toarray()
        array([[-1.,  1.,  0.],
               [ 1., -2.,  1.],
               [ 0.,  1., -1.]])
    """
    index = np.arange(grid.size).reshape(grid.shape)
    rows: list[npt.NDArray[np.int64]] = []
    cols: list[npt.NDArray[np.int64]] = []
    vals: list[FloatArray] = []

    for axis, h in enumerate(grid.spacing):
        n = grid.shape[axis]
        face_shape = list(grid.shape)
        face_shape[axis] = n - 1
        c = _axis_coefficients(coeff, axis, tuple(face_shape))
        if not (c > 0).all():
            raise DomainError("Laplacian coefficients must be strictly positive", field="coeff")

        p = np.take(index, np.arange(n - 1), axis=axis).ravel()
        q = np.take(index, np.arange(1, n), axis=axis).ravel()
        w = (c / (h * h)).ravel()
        rows += [p, q, p, q]
        cols += [q, p, p, q]
        vals += [w, w, -w, -w]

    matrix = sparse.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(grid.size, grid.size),
    )
    return matrix.tocsr()


def _axis_coefficients(
    coeff: float | npt.ArrayLike | FaceArrays, axis: int, face_shape: tuple[int, ...]
) -> FloatArray:
    if isinstance(coeff, tuple):
        c = np.asarray(coeff[axis], dtype=np.float64)
    else:
        c = np.asarray(coeff, dtype=np.float64)
    if c.ndim == 0:
        return np.full(face_shape, float(c))
    if c.shape != face_shape:
        raise DomainError(
            f"axis {axis} coefficients have shape {c.shape}, expected {face_shape}",
            field="coeff",
        )
    return c


@lru_cache(maxsize=64)
def constant_laplacian(grid: Grid, coeff: float = 1.0) -> sparse.csr_matrix:
    """Cached Laplacian with a uniform coefficient (the v-equation operator)."""
    return neumann_laplacian_matrix(grid, coeff)
