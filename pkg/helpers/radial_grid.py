"""
Truncated radial domain, nodes and quadrature for radial functions on R^N.

A radial function f(|x|) integrates over R^N as omega * int_0^inf f(r) r^(N-1) dr
with omega = 2 pi^(N/2) / Gamma(N/2) the surface area of the unit sphere. The
grid truncates at r = R and applies the composite Simpson rule to the
r^(N-1)-weighted integrand, so ``integrate`` is a plain weighted sum.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from numpy.typing import NDArray
from scipy.special import gamma

from configs.constants import (
    DEFAULT_NODES,
    DEFAULT_ORDER,
    DEFAULT_RADIUS,
    MIN_DIMENSION,
    MIN_NODES,
)

logger = logging.getLogger(__name__)

__all__ = [
    "GridError",
    "RadialGrid",
    "build_grid",
    "integrate",
    "refine",
    "sphere_area",
]


class GridError(ValueError):
    """Raised for invalid grid parameters or incompatible grids."""


def sphere_area(dimension: int) -> float:
    """Surface area of the unit sphere in R^N."""
    return float(2.0 * np.pi ** (dimension / 2.0) / gamma(dimension / 2.0))


def _simpson_coefficients(size: int) -> NDArray[np.float64]:
    coeffs = np.ones(size)
    coeffs[1:-1:2] = 4.0
    coeffs[2:-1:2] = 2.0
    return coeffs / 3.0


@dataclass(frozen=True)
class RadialGrid:
    """
    Uniform radial grid on [0, R] with Simpson volume weights.

    Attributes:
        dimension: ambient dimension N (>= 5).
        radius: truncation radius R.
        size: node count n (odd, >= 9).
        order: accuracy order (2 or 4) of the difference stencils built on it.
        r: nodes r_i = i * R / (n - 1).
        weights: w_i = omega * s_i * h * r_i^(N-1), s_i the Simpson coefficients.
    """

    dimension: int
    radius: float
    size: int
    order: int = DEFAULT_ORDER
    r: NDArray[np.float64] = field(init=False, repr=False, compare=False)
    weights: NDArray[np.float64] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if int(self.dimension) != self.dimension or self.dimension < MIN_DIMENSION:
            raise GridError(f"dimension must be an integer >= {MIN_DIMENSION}, got {self.dimension}")
        if not np.isfinite(self.radius) or self.radius <= 0:
            raise GridError(f"truncation radius must be positive, got {self.radius}")
        if int(self.size) != self.size or self.size < MIN_NODES:
            raise GridError(f"node count must be an integer >= {MIN_NODES}, got {self.size}")
        if self.size % 2 == 0:
            raise GridError(f"node count must be odd for the composite Simpson rule, got {self.size}")
        if self.order not in (2, 4):
            raise GridError(f"stencil order must be 2 or 4, got {self.order}")

        nodes = np.linspace(0.0, float(self.radius), int(self.size))
        weights = (
            sphere_area(self.dimension)
            * _simpson_coefficients(self.size)
            * self.spacing
            * nodes ** (self.dimension - 1)
        )
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "r", nodes)
        object.__setattr__(self, "weights", weights)

    @property
    def spacing(self) -> float:
        return float(self.radius) / (self.size - 1)

    @cached_property
    def omega(self) -> float:
        return sphere_area(self.dimension)

    @cached_property
    def critical_exponent(self) -> float:
        """2** = 2N / (N - 4)."""
        return 2.0 * self.dimension / (self.dimension - 4)

    @cached_property
    def trapezoid_weights(self) -> NDArray[np.float64]:
        """
        omega * t_i * h * r_i^(N-1) with trapezoid coefficients t_i.

        No 4/3, 2/3 alternation, so quadratic forms built on them have no cheap
        odd-even mode. The ground-state descent minimizes with these.
        """
        coeffs = np.ones(self.size)
        coeffs[-1] = 0.5
        weights = self.omega * coeffs * self.spacing * self.r ** (self.dimension - 1)
        weights.setflags(write=False)
        return weights

    def integrate(self, samples) -> float:
        """Return sum_i w_i * samples_i, the quadrature of a radial integrand over R^N."""
        values = np.asarray(samples, dtype=float)
        if values.shape != (self.size,):
            raise GridError(
                f"sample length {values.shape} does not match grid node count {self.size}"
            )
        if not np.all(np.isfinite(values)):
            bad = int(np.flatnonzero(~np.isfinite(values))[0])
            raise GridError(f"non-finite sample at node {bad} (r={self.r[bad]:.6g})")
        return float(np.dot(self.weights, values))

    def describe(self) -> dict:
        return {"N": self.dimension, "R": float(self.radius), "n": self.size, "order": self.order}


def build_grid(
    N: int,
    R: float = DEFAULT_RADIUS,
    n: int = DEFAULT_NODES,
    order: int = DEFAULT_ORDER,
) -> RadialGrid:
    """Build the truncated radial grid for dimension N."""
    grid = RadialGrid(dimension=N, radius=float(R), size=n, order=order)
    logger.debug("Built radial grid N=%d R=%g n=%d order=%d", N, R, n, order)
    return grid


def integrate(grid: RadialGrid, samples) -> float:
    return grid.integrate(samples)


def refine(grid: RadialGrid) -> RadialGrid:
    """Same domain, n - 1 doubled."""
    return build_grid(grid.dimension, grid.radius, 2 * (grid.size - 1) + 1, grid.order)
