"""Radial test-function families: Gaussians, dilations and seeded random smooth fields."""

from __future__ import annotations

import math
from typing import Iterator, Optional

import numpy as np

from configs.constants import RANDOM_FIELD_COMPONENTS, RANDOM_FIELD_WIDTHS
from .radial_grid import RadialGrid
from .radial_operators import RadialField, norms

__all__ = [
    "unit_gaussian",
    "dilated_gaussian",
    "random_smooth_field",
    "random_fields",
    "normalize",
]


def unit_gaussian(grid: RadialGrid, amplitude: float = 1.0) -> RadialField:
    """amplitude * pi^(-N/4) exp(-|x|^2 / 2); L^2-normalized for amplitude 1."""
    N = grid.dimension
    return RadialField(grid, amplitude * math.pi ** (-N / 4.0) * np.exp(-0.5 * grid.r**2))


def dilated_gaussian(grid: RadialGrid, lam: float) -> RadialField:
    """lam^(N/2) pi^(-N/4) exp(-lam^2 |x|^2 / 2), L^2-normalized for every lam > 0."""
    N = grid.dimension
    values = lam ** (N / 2.0) * math.pi ** (-N / 4.0) * np.exp(-0.5 * (lam * grid.r) ** 2)
    return RadialField(grid, values)


def random_smooth_field(grid: RadialGrid, rng: np.random.Generator, components: int = RANDOM_FIELD_COMPONENTS) -> RadialField:
    """sum_k (a_k + b_k r^2) exp(-r^2 / (2 s_k^2)), smooth as a function on R^N."""
    lo, hi = RANDOM_FIELD_WIDTHS
    widths = rng.uniform(lo, hi, size=components)
    constant = rng.normal(size=components)
    quadratic = rng.normal(scale=0.5, size=components)
    # keep the sum away from cancelling to zero
    constant[0] = abs(constant[0]) + 0.5
    r2 = grid.r[None, :] ** 2
    terms = (constant[:, None] + quadratic[:, None] * r2) * np.exp(-r2 / (2.0 * widths[:, None] ** 2))
    return RadialField(grid, terms.sum(axis=0))


def random_fields(grid: RadialGrid, count: int, seed: int, normalized: bool = True) -> Iterator[RadialField]:
    rng = np.random.default_rng(seed)
    for _ in range(count):
        u = random_smooth_field(grid, rng)
        yield normalize(u) if normalized else u


def normalize(u: RadialField, l2_sq: Optional[float] = None) -> RadialField:
    """Scale u to unit L^2 norm."""
    mass = norms(u).l2_sq if l2_sq is None else l2_sq
    if mass <= 0:
        raise ValueError("cannot normalize a zero field")
    return u * (1.0 / math.sqrt(mass))
