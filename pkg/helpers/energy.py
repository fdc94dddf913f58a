"""
Energy functionals and their gradients.

    J(u)     = 1/2 int |Delta u|^2 - int G(u)
    J_eps(u) = 1/2 int |Delta u|^2 - int G_eps(u)

For u with int G_eps(u) > 0 the dilation u(r .) with
r = (2** int G_eps(u) / int |Delta u|^2)^(1/4) lies on M_eps, and J_eps there has
the scale-invariant closed form

    E_eps(u) = (1/2 - 1/2**) (int |Delta u|^2)^(N/4) (2** int G_eps(u))^(-(N-4)/4),

which is what the solver minimizes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.typing import NDArray

from configs.constants import MEMBERSHIP_GUARD
from .nonlinearity import Nonlinearity, _check_epsilon
from .radial_operators import RadialField, bilaplacian_matrix, laplacian_matrix

__all__ = [
    "EnergyBreakdown",
    "ReducedState",
    "closed_form_energy",
    "energy",
    "l2_gradient",
    "reduced_energy",
    "reduced_state",
    "nonlinear_integral",
]


@dataclass(frozen=True)
class EnergyBreakdown:
    bilap_sq: float
    G_int: float
    J_value: float
    epsilon: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            "bilap_sq": self.bilap_sq,
            "G_int": self.G_int,
            "J": self.J_value,
            "epsilon": self.epsilon,
        }


@dataclass(frozen=True)
class ReducedState:
    """Reduced energy of an iterate with the pieces the descent needs."""

    energy: float
    bilap_sq: float
    G_int: float
    scale: float  # projection scale r onto M_eps
    residual: NDArray[np.float64]  # Delta^2 u - r^-4 g_eps(u)
    forcing: NDArray[np.float64]  # r^-4 g_eps(u)
    dimension: int

    @property
    def gradient_factor(self) -> float:
        """grad E = gradient_factor * residual (L^2 gradient of the reduced energy)."""
        return self.energy * self.dimension / (2.0 * self.bilap_sq)


def _check_eps(eps: Optional[float]) -> None:
    if eps is not None:
        _check_epsilon(eps)


def _bilap_sq(u: RadialField) -> float:
    lap = laplacian_matrix(u.grid) @ u.values
    return u.grid.integrate(lap**2)


def nonlinear_integral(u: RadialField, nl: Nonlinearity, eps: Optional[float] = None) -> float:
    """int G(u) (or int G_eps(u))."""
    _check_eps(eps)
    return u.grid.integrate(np.asarray(nl.G_eps(eps, u.values)))


def energy(u: RadialField, nl: Nonlinearity, eps: Optional[float] = None) -> EnergyBreakdown:
    _check_eps(eps)
    bilap_sq = _bilap_sq(u)
    G_int = nonlinear_integral(u, nl, eps)
    return EnergyBreakdown(bilap_sq=bilap_sq, G_int=G_int, J_value=0.5 * bilap_sq - G_int, epsilon=eps)


def l2_gradient(u: RadialField, nl: Nonlinearity, eps: Optional[float] = None) -> RadialField:
    """Delta^2 u - g(u), or Delta^2 u - g_eps(u) with g_eps = g_+ - phi_eps g_-."""
    _check_eps(eps)
    bilap = bilaplacian_matrix(u.grid) @ u.values
    return u.with_values(bilap - np.asarray(nl.g_eps(eps, u.values)))


def closed_form_energy(dimension: int, bilap_sq: float, G_int: float) -> float:
    """(1/2 - 1/2**) B^(N/4) (2** G)^(-(N-4)/4)."""
    crit = 2.0 * dimension / (dimension - 4)
    return (0.5 - 1.0 / crit) * bilap_sq ** (dimension / 4.0) * (crit * G_int) ** (-(dimension - 4) / 4.0)


def reduced_energy(u: RadialField, nl: Nonlinearity, eps: Optional[float] = None) -> Optional[float]:
    """J_eps at the projection of u onto M_eps, or None when int G_eps(u) <= 0 (u outside P_eps)."""
    _check_eps(eps)
    G_int = nonlinear_integral(u, nl, eps)
    if G_int <= MEMBERSHIP_GUARD:
        return None
    bilap_sq = _bilap_sq(u)
    if bilap_sq <= 0:
        return None
    return closed_form_energy(u.grid.dimension, bilap_sq, G_int)


def reduced_state(u: RadialField, nl: Nonlinearity, eps: Optional[float] = None) -> Optional[ReducedState]:
    """
    Reduced energy plus its L^2 gradient.

    With B = int |Delta u|^2 and r^4 = 2** int G_eps(u) / B,
        grad E = E N / (2B) * (Delta^2 u - r^-4 g_eps(u)),
    i.e. the gradient of J_eps at the projected iterate, pulled back to u's scale.
    """
    _check_eps(eps)
    grid = u.grid
    G_int = nonlinear_integral(u, nl, eps)
    if G_int <= MEMBERSHIP_GUARD:
        return None
    lap = laplacian_matrix(grid) @ u.values
    bilap_sq = grid.integrate(lap**2)
    if bilap_sq <= 0:
        return None
    crit = grid.critical_exponent
    scale4 = crit * G_int / bilap_sq
    forcing = np.asarray(nl.g_eps(eps, u.values)) / scale4
    residual = laplacian_matrix(grid) @ lap - forcing
    return ReducedState(
        energy=closed_form_energy(grid.dimension, bilap_sq, G_int),
        bilap_sq=bilap_sq,
        G_int=G_int,
        scale=scale4**0.25,
        residual=residual,
        forcing=forcing,
        dimension=grid.dimension,
    )
