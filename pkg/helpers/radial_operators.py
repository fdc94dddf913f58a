"""
Radial fields and the radial Laplacian / bilaplacian.

For a radial u, Delta u = u'' + (N-1)/r u'. The discrete operator uses central
differences of the grid's accuracy order. At r = 0 the profile is reflected
evenly (u_{-k} = u_k) and the regular limit Delta u(0) = N u''(0) replaces the
singular first-order term. Beyond r = R the profile is extended by zero, so
composing the Laplacian with itself imposes u = Delta u = 0 at the far field.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from numpy.typing import NDArray
from scipy import sparse
from scipy.interpolate import make_interp_spline

from .radial_grid import GridError, RadialGrid

__all__ = [
    "FieldError",
    "RadialField",
    "SobolevNorms",
    "laplacian",
    "bilaplacian",
    "laplacian_matrix",
    "bilaplacian_matrix",
    "radial_derivative",
    "norms",
    "dilate",
    "field_from_function",
]

# (offsets, weights) for u'' * h^2 and u' * h
_SECOND_DERIVATIVE = {
    2: ((-1, 0, 1), (1.0, -2.0, 1.0)),
    4: ((-2, -1, 0, 1, 2), (-1 / 12, 16 / 12, -30 / 12, 16 / 12, -1 / 12)),
}
_FIRST_DERIVATIVE = {
    2: ((-1, 1), (-0.5, 0.5)),
    4: ((-2, -1, 1, 2), (1 / 12, -8 / 12, 8 / 12, -1 / 12)),
}


class FieldError(ValueError):
    """Raised for malformed radial fields."""


@dataclass(frozen=True, eq=False)
class RadialField:
    """Sampled radial profile u(r_i) on a grid."""

    grid: RadialGrid
    values: NDArray[np.float64]

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=float, copy=True)
        if values.shape != (self.grid.size,):
            raise FieldError(
                f"field has {values.shape} samples, grid expects ({self.grid.size},)"
            )
        if not np.all(np.isfinite(values)):
            raise FieldError("field contains non-finite samples")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def _check_compatible(self, other: "RadialField") -> None:
        if self.grid != other.grid:
            raise GridError(f"incompatible grids: {self.grid} vs {other.grid}")

    def with_values(self, values) -> "RadialField":
        return RadialField(self.grid, values)

    def __add__(self, other: "RadialField") -> "RadialField":
        self._check_compatible(other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other: "RadialField") -> "RadialField":
        self._check_compatible(other)
        return self.with_values(self.values - other.values)

    def __mul__(self, scalar: float) -> "RadialField":
        return self.with_values(float(scalar) * self.values)

    __rmul__ = __mul__

    def __neg__(self) -> "RadialField":
        return self.with_values(-self.values)

    def dot(self, other: "RadialField") -> float:
        """L^2(R^N) inner product."""
        self._check_compatible(other)
        return self.grid.integrate(self.values * other.values)

    def integrate(self) -> float:
        return self.grid.integrate(self.values)

    def is_zero(self) -> bool:
        return not np.any(self.values)


class SobolevNorms(NamedTuple):
    l2_sq: float
    grad_sq: float
    bilap_sq: float


def _stencil_matrix(grid: RadialGrid, offsets, coeffs, row_scale) -> sparse.csr_matrix:
    """Assemble sum_k coeffs[k] * u_{i+offsets[k]} * row_scale[i] with the boundary folds."""
    n = grid.size
    rows, cols, data = [], [], []
    index = np.arange(n)
    for offset, coeff in zip(offsets, coeffs):
        target = index + offset
        target = np.abs(target)  # even reflection through r = 0
        keep = target < n  # zero extension beyond r = R
        rows.append(index[keep])
        cols.append(target[keep])
        data.append(np.full(int(keep.sum()), coeff) * row_scale[keep])
    matrix = sparse.coo_matrix(
        (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n)
    )
    return matrix.tocsr()


@lru_cache(maxsize=16)
def laplacian_matrix(grid: RadialGrid) -> sparse.csr_matrix:
    h = grid.spacing
    N = grid.dimension
    ones = np.ones(grid.size)

    second = _stencil_matrix(grid, *_SECOND_DERIVATIVE[grid.order], ones / h**2)

    with np.errstate(divide="ignore"):
        drift = np.where(grid.r > 0, (N - 1) / np.where(grid.r > 0, grid.r, 1.0), 0.0)
    first = _stencil_matrix(grid, *_FIRST_DERIVATIVE[grid.order], drift / h)

    # r = 0: Delta u(0) = N u''(0)
    origin = np.zeros(grid.size)
    origin[0] = N - 1
    lap = second + first + sparse.diags(origin) @ second
    return lap.tocsr()


@lru_cache(maxsize=16)
def bilaplacian_matrix(grid: RadialGrid) -> sparse.csr_matrix:
    lap = laplacian_matrix(grid)
    return (lap @ lap).tocsr()


def laplacian(u: RadialField) -> RadialField:
    return u.with_values(laplacian_matrix(u.grid) @ u.values)


def bilaplacian(u: RadialField) -> RadialField:
    lap = laplacian_matrix(u.grid)
    return u.with_values(lap @ (lap @ u.values))


def radial_derivative(u: RadialField) -> NDArray[np.float64]:
    """u'(r): central differences of the grid order inside, one-sided at both ends."""
    h = u.grid.spacing
    values = u.values
    derivative = np.gradient(values, h, edge_order=2)
    if u.grid.order == 4:
        derivative[2:-2] = (
            values[:-4] - 8.0 * values[1:-3] + 8.0 * values[3:-1] - values[4:]
        ) / (12.0 * h)
    return derivative


def norms(u: RadialField) -> SobolevNorms:
    """Return (int |u|^2, int |grad u|^2, int |Delta u|^2) over R^N."""
    grid = u.grid
    lap = laplacian_matrix(grid) @ u.values
    return SobolevNorms(
        l2_sq=grid.integrate(u.values**2),
        grad_sq=grid.integrate(radial_derivative(u) ** 2),
        bilap_sq=grid.integrate(lap**2),
    )


def dilate(u: RadialField, scale: float) -> RadialField:
    """
    Resample x -> u(scale * x) on the same grid.

    The profile is extended evenly to [-R, R] and interpolated with a quintic
    spline; samples landing beyond R are zero.
    """
    if scale <= 0 or not np.isfinite(scale):
        raise FieldError(f"dilation scale must be positive, got {scale}")
    grid = u.grid
    if scale == 1.0:
        return u
    mirrored_r = np.concatenate([-grid.r[:0:-1], grid.r])
    mirrored_u = np.concatenate([u.values[:0:-1], u.values])
    spline = make_interp_spline(mirrored_r, mirrored_u, k=5)
    targets = scale * grid.r
    inside = targets <= grid.radius
    resampled = np.zeros(grid.size)
    resampled[inside] = spline(targets[inside])
    return u.with_values(resampled)


def field_from_function(grid: RadialGrid, profile) -> RadialField:
    """Sample a vectorized radial profile f(r) on the grid nodes."""
    return RadialField(grid, profile(grid.r))
