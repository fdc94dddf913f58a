"""
Pohozaev manifold M = {u != 0 : int |Delta u|^2 = 2** int G(u)} and its
regularized variant M_eps (G replaced by G_eps).

Every nontrivial solution of Delta^2 u = g(u) with autonomous g lies on M, so
the residual int |Delta u|^2 - 2** int G(u) is the physics check of a solve.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

from configs.constants import DEFAULT_POHOZAEV_TOLERANCE, MEMBERSHIP_GUARD, RESIDUAL_FLOOR
from .energy import energy, nonlinear_integral
from .nonlinearity import Nonlinearity
from .radial_operators import RadialField, dilate, norms

logger = logging.getLogger(__name__)

__all__ = ["PohozaevReport", "projection_scale", "project_to_manifold", "pohozaev_residual"]


@dataclass(frozen=True)
class PohozaevReport:
    bilap_sq: float
    G_int: float
    residual: float
    relative_residual: float
    tolerance: float = DEFAULT_POHOZAEV_TOLERANCE
    epsilon: Optional[float] = None

    @property
    def on_manifold(self) -> bool:
        return self.relative_residual <= self.tolerance

    def to_dict(self) -> dict:
        return {
            "bilap_sq": self.bilap_sq,
            "G_int": self.G_int,
            "residual": self.residual,
            "relative_residual": self.relative_residual,
            "tolerance": self.tolerance,
            "on_manifold": self.on_manifold,
            "epsilon": self.epsilon,
        }


def projection_scale(u: RadialField, nl: Nonlinearity, eps: Optional[float] = None) -> Optional[float]:
    """r = (2** int G_eps(u) / int |Delta u|^2)^(1/4), or None when u is outside P_eps."""
    G_int = nonlinear_integral(u, nl, eps)
    if G_int <= MEMBERSHIP_GUARD:
        return None
    bilap_sq = norms(u).bilap_sq
    if bilap_sq <= 0:
        return None
    return (u.grid.critical_exponent * G_int / bilap_sq) ** 0.25


def project_to_manifold(
    u: RadialField, nl: Nonlinearity, eps: Optional[float] = None
) -> Optional[Tuple[RadialField, float]]:
    """Map u to u(r .) on M_eps (M for eps = None); None when int G_eps(u) <= 0."""
    if u.is_zero():
        logger.debug("Projection requested for the zero field")
        return None
    scale = projection_scale(u, nl, eps)
    if scale is None:
        return None
    return dilate(u, scale), scale


def pohozaev_residual(
    u: RadialField,
    nl: Nonlinearity,
    eps: Optional[float] = None,
    tolerance: float = DEFAULT_POHOZAEV_TOLERANCE,
) -> PohozaevReport:
    parts = energy(u, nl, eps)
    residual = parts.bilap_sq - u.grid.critical_exponent * parts.G_int
    relative = abs(residual) / max(parts.bilap_sq, RESIDUAL_FLOOR)
    return PohozaevReport(
        bilap_sq=parts.bilap_sq,
        G_int=parts.G_int,
        residual=residual,
        relative_residual=relative,
        tolerance=tolerance,
        epsilon=eps,
    )
