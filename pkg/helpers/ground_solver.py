"""
Radial ground states of Delta^2 u = g(u) by descent on the reduced energy.

Each epsilon stage minimizes E_eps (the closed-form value of J_eps at the
M_eps-projection) with an Armijo line search along a Sobolev-preconditioned
gradient, then finishes with damped Newton on the strong equation
Delta^2 u = r^-4 g_eps(u) at the iterate's own scale r. Stages warm-start from
each other along a decreasing schedule, an optional last stage uses the true G,
and the result is projected onto M.

The descent evaluates B and int G_eps with trapezoid weights. Its minimizer is
then a smooth profile; with the alternating Simpson weights the discrete
minimizer carries an odd-even mode in Delta u that the strong residual never
loses. Reported energies and residuals use the grid's Simpson quadrature.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import NDArray
from scipy import sparse
from scipy.sparse.linalg import splu

from configs.constants import (
    DEFAULT_AMPLITUDES,
    DEFAULT_ARMIJO,
    DEFAULT_BACKTRACKING,
    DEFAULT_ENERGY_TOLERANCE,
    DEFAULT_EPSILON_COUNT,
    DEFAULT_EPSILON_FIRST,
    DEFAULT_MAX_ITERATIONS,
    DEFAULT_MAX_STEP,
    DEFAULT_MIN_STEP,
    DEFAULT_RESIDUAL_TOLERANCE,
    DEFAULT_SHIFT,
    DEFAULT_STALL_TOLERANCE,
    MEMBERSHIP_GUARD,
    NEWTON_MAX_ITERATIONS,
    NEWTON_MIN_DAMPING,
    RESIDUAL_FLOOR,
    TAIL_FRACTION,
)
from .energy import ReducedState, closed_form_energy, energy, nonlinear_integral, reduced_state
from .fields import unit_gaussian
from .nonlinearity import Nonlinearity
from .pohozaev import pohozaev_residual, project_to_manifold
from .radial_grid import RadialGrid
from .radial_operators import RadialField, bilaplacian_matrix, laplacian_matrix, norms

logger = logging.getLogger(__name__)

__all__ = [
    "SolverError",
    "NoPositiveG",
    "MaxIterations",
    "LostMembership",
    "LineSearchStalled",
    "SolverConfig",
    "StageReport",
    "GroundStateResult",
    "geometric_schedule",
    "initial_guess",
    "minimize",
    "pde_residual",
    "tail_mass",
]

PRECONDITIONERS = ("sobolev", "none")


class SolverError(RuntimeError):
    """Base class for ground-state search failures."""


class NoPositiveG(SolverError):
    """No amplitude of the start profile reaches int G_eps > 0."""


class MaxIterations(SolverError):
    """A stage used its iteration budget without converging."""


class LostMembership(SolverError):
    """The iterate left P_eps and no shorter step brought it back."""


class LineSearchStalled(SolverError):
    """The Armijo step fell below the minimum while the slope was still large."""


def geometric_schedule(first: float = DEFAULT_EPSILON_FIRST, count: int = DEFAULT_EPSILON_COUNT) -> Tuple[float, ...]:
    """first * 2^-k for k = 0 .. count-1."""
    return tuple(first * 0.5**k for k in range(int(count)))


@dataclass(frozen=True)
class SolverConfig:
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    tolerance: float = DEFAULT_ENERGY_TOLERANCE
    residual_tolerance: float = DEFAULT_RESIDUAL_TOLERANCE
    stall_tolerance: float = DEFAULT_STALL_TOLERANCE
    epsilon_schedule: Tuple[float, ...] = field(default_factory=geometric_schedule)
    backtracking: float = DEFAULT_BACKTRACKING
    armijo: float = DEFAULT_ARMIJO
    amplitudes: Tuple[float, ...] = DEFAULT_AMPLITUDES
    max_step: float = DEFAULT_MAX_STEP
    min_step: float = DEFAULT_MIN_STEP
    shift: float = DEFAULT_SHIFT
    polish: bool = True
    preconditioner: str = "sobolev"

    def __post_init__(self) -> None:
        schedule = tuple(float(e) for e in self.epsilon_schedule)
        object.__setattr__(self, "epsilon_schedule", schedule)
        object.__setattr__(self, "amplitudes", tuple(float(t) for t in self.amplitudes))

        if not schedule:
            raise ValueError("epsilon schedule must not be empty")
        if any(not (0.0 < e < 1.0) for e in schedule):
            raise ValueError(f"epsilon schedule must lie in (0, 1): {schedule}")
        if any(b >= a for a, b in zip(schedule, schedule[1:])):
            raise ValueError(f"epsilon schedule must be strictly decreasing: {schedule}")
        if not self.amplitudes or any(t <= 0 for t in self.amplitudes):
            raise ValueError(f"amplitudes must be positive: {self.amplitudes}")
        if int(self.max_iterations) != self.max_iterations or self.max_iterations < 1:
            raise ValueError(f"max_iterations must be a positive integer, got {self.max_iterations}")
        for name in ("tolerance", "residual_tolerance", "stall_tolerance", "armijo", "max_step", "min_step", "shift"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be positive, got {value}")
        if not (0.0 < self.backtracking < 1.0):
            raise ValueError(f"backtracking factor must lie in (0, 1), got {self.backtracking}")
        if self.min_step >= self.max_step:
            raise ValueError(f"min_step {self.min_step} must be below max_step {self.max_step}")
        if self.preconditioner not in PRECONDITIONERS:
            raise ValueError(f"preconditioner must be one of {PRECONDITIONERS}, got {self.preconditioner!r}")

    def to_dict(self) -> dict:
        return {
            "max_iterations": int(self.max_iterations),
            "tolerance": self.tolerance,
            "residual_tolerance": self.residual_tolerance,
            "stall_tolerance": self.stall_tolerance,
            "epsilon_schedule": list(self.epsilon_schedule),
            "backtracking": self.backtracking,
            "armijo": self.armijo,
            "amplitudes": list(self.amplitudes),
            "max_step": self.max_step,
            "min_step": self.min_step,
            "shift": self.shift,
            "polish": bool(self.polish),
            "preconditioner": self.preconditioner,
        }


@dataclass
class StageReport:
    """
    One epsilon stage. `energy` and `relative_residual` describe the stage
    result; `trace` holds the descent energies of the accepted steps.
    """

    epsilon: Optional[float]
    energy: float
    iterations: int
    relative_residual: float
    stalled: bool = False
    trace: List[float] = field(default_factory=list)
    newton_iterations: int = 0

    def to_dict(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "energy": self.energy,
            "iterations": self.iterations,
            "relative_residual": self.relative_residual,
            "stalled": self.stalled,
            "newton_iterations": self.newton_iterations,
        }


@dataclass
class GroundStateResult:
    profile: RadialField
    model: dict
    energy: float
    J_value: float
    bilap_sq: float
    l2_sq: float
    G_int: float
    pohozaev_relative_residual: float
    pde_relative_residual: float
    iterations: int
    final_epsilon: Optional[float]  # None after the true-G stage
    tail_mass: float
    scale: float
    stages: List[StageReport] = field(default_factory=list)
    C_N_log: Optional[float] = None

    @property
    def stage_energies(self) -> List[float]:
        return [stage.energy for stage in self.stages]

    @property
    def stage_iterations(self) -> List[int]:
        return [stage.iterations for stage in self.stages]

    @property
    def laplacian_ratio(self) -> float:
        """int |Delta u|^2 / int |u|^2 (N/4 for the log model)."""
        return self.bilap_sq / self.l2_sq

    def to_report(self) -> dict:
        return {
            "model": dict(self.model),
            "grid": self.profile.grid.describe(),
            "energy": self.energy,
            "energy_label": "upper estimate",
            "J": self.J_value,
            "bilap_sq": self.bilap_sq,
            "l2_sq": self.l2_sq,
            "G_int": self.G_int,
            "laplacian_ratio": self.laplacian_ratio,
            "pohozaev_relative_residual": self.pohozaev_relative_residual,
            "pde_relative_residual": self.pde_relative_residual,
            "C_N_log": self.C_N_log,
            "iterations": self.iterations,
            "final_epsilon": self.final_epsilon,
            "tail_mass": self.tail_mass,
            "scale": self.scale,
            "stage_energies": self.stage_energies,
            "stage_iterations": self.stage_iterations,
            "stages": [stage.to_dict() for stage in self.stages],
        }


def _weighted_norm(grid: RadialGrid, values: NDArray[np.float64]) -> float:
    return math.sqrt(max(grid.integrate(values**2), 0.0))


def _residual_ratio(grid: RadialGrid, residual: NDArray[np.float64], forcing: NDArray[np.float64]) -> float:
    return _weighted_norm(grid, residual) / max(_weighted_norm(grid, forcing), RESIDUAL_FLOOR)


def _relative_residual(grid: RadialGrid, state: ReducedState) -> float:
    return _residual_ratio(grid, state.residual, state.forcing)


def pde_residual(u: RadialField, nl: Nonlinearity, eps: Optional[float] = None) -> float:
    """||Delta^2 u - g_eps(u)|| / ||g_eps(u)|| in L^2(R^N)."""
    forcing = np.asarray(nl.g_eps(eps, u.values))
    residual = bilaplacian_matrix(u.grid) @ u.values - forcing
    return _residual_ratio(u.grid, residual, forcing)


def tail_mass(u: RadialField, fraction: float = TAIL_FRACTION) -> float:
    """int_{r > fraction R} |u|^2 / int |u|^2."""
    grid = u.grid
    density = u.values**2
    total = grid.integrate(density)
    if total <= 0:
        return 0.0
    return grid.integrate(np.where(grid.r > fraction * grid.radius, density, 0.0)) / total


def initial_guess(nl: Nonlinearity, grid: RadialGrid, cfg: Optional[SolverConfig] = None) -> RadialField:
    """First t * (unit Gaussian) over the amplitude scan with int G_eps1 > 0."""
    cfg = cfg or SolverConfig()
    eps = cfg.epsilon_schedule[0]
    for amplitude in cfg.amplitudes:
        candidate = unit_gaussian(grid, amplitude)
        G_int = nonlinear_integral(candidate, nl, eps)
        if G_int > MEMBERSHIP_GUARD:
            logger.info("Start profile: amplitude %g, int G_eps = %.6g (eps=%g)", amplitude, G_int, eps)
            return candidate
        logger.debug("Amplitude %g rejected: int G_eps = %.6g", amplitude, G_int)
    raise NoPositiveG(
        f"{nl.name} N={nl.dimension}: no amplitude in {list(cfg.amplitudes)} gives int G_eps > 0 (eps={eps})"
    )


class _DescentProblem:
    """
    E_eps with trapezoid weights w, and its exact gradient in R^n.

        grad E = E N / (2B) * (L^T W L u - r^-4 W g_eps(u)),   r^4 = 2** G / B.
    """

    def __init__(self, grid: RadialGrid, nl: Nonlinearity, eps: Optional[float], cfg: SolverConfig):
        self.grid = grid
        self.nl = nl
        self.eps = eps
        self.cfg = cfg
        self.weights = grid.trapezoid_weights
        self.lap = laplacian_matrix(grid)
        self.lap_t = self.lap.T.tocsr()
        self.stiffness = (self.lap_t @ sparse.diags(self.weights) @ self.lap).tocsc()

    def state(self, values: NDArray[np.float64]) -> Optional["_DescentState"]:
        w = self.weights
        G_int = float(np.dot(w, np.asarray(self.nl.G_eps(self.eps, values))))
        if not G_int > MEMBERSHIP_GUARD:
            return None
        lap = self.lap @ values
        bilap_sq = float(np.dot(w, lap**2))
        if not bilap_sq > 0:
            return None
        scale4 = self.grid.critical_exponent * G_int / bilap_sq
        value = closed_form_energy(self.grid.dimension, bilap_sq, G_int)
        if not math.isfinite(value):
            return None
        load = w * np.asarray(self.nl.g_eps(self.eps, values)) / scale4
        return _DescentState(
            energy=value,
            scale4=scale4,
            factor=value * self.grid.dimension / (2.0 * bilap_sq),
            gradient=self.lap_t @ (w * lap) - load,
        )

    def direction(self, values: NDArray[np.float64], state: "_DescentState") -> Tuple[NDArray[np.float64], float]:
        """Preconditioned descent direction and the directional derivative of E along it."""
        w = self.weights
        if self.cfg.preconditioner == "sobolev":
            curvature = np.maximum(0.0, -np.asarray(self.nl.dg_eps(self.eps, values)) / state.scale4)
            operator = self.stiffness + sparse.diags(w * (self.cfg.shift + curvature))
            direction = splu(operator.tocsc()).solve(-state.gradient)
        else:
            diagonal = self.stiffness.diagonal() + w * self.cfg.shift
            direction = -state.gradient / diagonal
        slope = state.factor * float(np.dot(state.gradient, direction))
        if slope < 0 and np.all(np.isfinite(direction)):
            return direction, slope
        logger.debug("Preconditioned direction is not a descent direction; using the diagonal scaling")
        direction = -state.gradient / (self.stiffness.diagonal() + w * self.cfg.shift)
        return direction, state.factor * float(np.dot(state.gradient, direction))


@dataclass(frozen=True)
class _DescentState:
    energy: float
    scale4: float
    factor: float
    gradient: NDArray[np.float64]


def _line_search(
    problem: _DescentProblem,
    values: NDArray[np.float64],
    state: _DescentState,
    direction: NDArray[np.float64],
    slope: float,
    step: float,
) -> Tuple[Optional[NDArray[np.float64]], Optional[_DescentState], float, bool]:
    """Armijo backtracking; returns (values, state, step, any trial stayed in P_eps)."""
    cfg = problem.cfg
    inside = False
    while step >= cfg.min_step:
        trial = values + step * direction
        trial_state = problem.state(trial)
        if trial_state is None:
            step *= cfg.backtracking
            continue
        inside = True
        if trial_state.energy <= state.energy + cfg.armijo * step * slope:
            return trial, trial_state, step, True
        step *= cfg.backtracking
    return None, None, step, inside


def _newton_finish(
    u: RadialField, nl: Nonlinearity, eps: Optional[float], rho: float, cfg: SolverConfig
) -> Tuple[RadialField, float, int]:
    """Damped Newton on Delta^2 u = rho g_eps(u); returns (field, relative residual, iterations)."""
    grid = u.grid
    bilap = bilaplacian_matrix(grid)

    def residual(values):
        forcing = rho * np.asarray(nl.g_eps(eps, values))
        return bilap @ values - forcing, forcing

    values = u.values
    res, forcing = residual(values)
    relative = _residual_ratio(grid, res, forcing)
    for iteration in range(NEWTON_MAX_ITERATIONS):
        if relative <= cfg.residual_tolerance:
            return u.with_values(values), relative, iteration
        jacobian = bilap - sparse.diags(rho * np.asarray(nl.dg_eps(eps, values)))
        update = splu(jacobian.tocsc()).solve(-res)
        if not np.all(np.isfinite(update)):
            logger.debug("eps=%s: singular Newton system at iteration %d", eps, iteration)
            return u.with_values(values), relative, iteration
        damping = 1.0
        while damping >= NEWTON_MIN_DAMPING:
            trial = values + damping * update
            trial_res, trial_forcing = residual(trial)
            trial_relative = _residual_ratio(grid, trial_res, trial_forcing)
            if math.isfinite(trial_relative) and trial_relative < (1.0 - 1e-4 * damping) * relative:
                break
            damping *= 0.5
        else:
            logger.debug("eps=%s: Newton damping fell below %g at residual %.3g", eps, NEWTON_MIN_DAMPING, relative)
            return u.with_values(values), relative, iteration
        values, res, relative = trial, trial_res, trial_relative
        logger.debug("eps=%s newton=%d damping=%.3g residual=%.3g", eps, iteration + 1, damping, relative)
    return u.with_values(values), relative, NEWTON_MAX_ITERATIONS


def _descend(
    u: RadialField, nl: Nonlinearity, eps: Optional[float], cfg: SolverConfig
) -> Tuple[RadialField, int, bool, List[float]]:
    """Armijo descent on E_eps until the relative energy change drops below cfg.tolerance."""
    problem = _DescentProblem(u.grid, nl, eps, cfg)
    values = u.values
    state = problem.state(values)
    if state is None:
        raise LostMembership(f"eps={eps}: stage start has int G_eps <= 0")

    trace = [state.energy]
    step = cfg.max_step
    for iteration in range(cfg.max_iterations):
        direction, slope = problem.direction(values, state)
        trial, trial_state, tried, inside = _line_search(
            problem, values, state, direction, slope, min(2.0 * step, cfg.max_step)
        )
        if trial is None:
            if abs(slope) <= cfg.stall_tolerance * abs(state.energy):
                logger.warning(
                    "eps=%s: line search stalled at step %.3g with slope %.3g; accepting as converged",
                    eps, tried, slope,
                )
                return u.with_values(values), iteration, True, trace
            if not inside:
                raise LostMembership(f"eps={eps}: every trial step left P_eps (iteration {iteration})")
            raise LineSearchStalled(
                f"eps={eps}: step fell below {cfg.min_step:g} with slope {slope:.3g} (energy {state.energy:.10g})"
            )

        change = abs(state.energy - trial_state.energy) / max(abs(state.energy), RESIDUAL_FLOOR)
        values, state, step = trial, trial_state, tried
        trace.append(state.energy)
        logger.debug(
            "eps=%s it=%d E=%.12g step=%.3g change=%.3g scale=%.6f",
            eps, iteration + 1, state.energy, step, change, state.scale4**0.25,
        )
        if change < cfg.tolerance:
            return u.with_values(values), iteration + 1, False, trace

    raise MaxIterations(
        f"eps={eps}: no convergence in {cfg.max_iterations} iterations (energy {state.energy:.10g})"
    )


def _run_stage(u: RadialField, nl: Nonlinearity, eps: Optional[float], cfg: SolverConfig) -> Tuple[RadialField, StageReport]:
    grid = u.grid
    u, iterations, stalled, trace = _descend(u, nl, eps, cfg)

    state = reduced_state(u, nl, eps)
    if state is None:
        raise LostMembership(f"eps={eps}: descent result left P_eps")
    relative = _relative_residual(grid, state)

    finished, newton_relative, newton_iterations = _newton_finish(u, nl, eps, state.scale**-4, cfg)
    finished_state = reduced_state(finished, nl, eps)
    if newton_iterations and finished_state is not None and newton_relative < relative:
        u, state, relative = finished, finished_state, newton_relative
    elif newton_iterations:
        logger.warning("eps=%s: Newton finish did not lower the residual %.3g; keeping the descent iterate", eps, relative)
        newton_iterations = 0
    if relative > cfg.residual_tolerance:
        logger.warning("eps=%s: stage ends with relative residual %.3g", eps, relative)

    return u, StageReport(
        eps, state.energy, iterations, relative, stalled=stalled, trace=trace, newton_iterations=newton_iterations
    )


def _stages(cfg: SolverConfig) -> Sequence[Optional[float]]:
    return list(cfg.epsilon_schedule) + ([None] if cfg.polish else [])


def minimize(nl: Nonlinearity, grid: RadialGrid, cfg: Optional[SolverConfig] = None) -> GroundStateResult:
    """Epsilon-continuation descent followed by projection onto M."""
    if nl.dimension != grid.dimension:
        raise ValueError(f"model dimension {nl.dimension} does not match grid dimension {grid.dimension}")
    cfg = cfg or SolverConfig()
    started = time.perf_counter()

    start = initial_guess(nl, grid, cfg)
    projected = project_to_manifold(start, nl, cfg.epsilon_schedule[0])
    if projected is None:
        raise LostMembership(f"eps={cfg.epsilon_schedule[0]}: start profile has int G_eps <= 0")
    u = projected[0]

    stages: List[StageReport] = []
    for eps in _stages(cfg):
        u, report = _run_stage(u, nl, eps, cfg)
        stages.append(report)
        logger.info(
            "Stage eps=%s: E=%.12g after %d descent and %d Newton iterations (residual %.3g)",
            eps, report.energy, report.iterations, report.newton_iterations, report.relative_residual,
        )

    projected = project_to_manifold(u, nl, None)
    if projected is None:
        raise LostMembership("final iterate has int G <= 0")
    profile, scale = projected

    final_state = reduced_state(u, nl, None)
    parts = energy(profile, nl, None)
    result = GroundStateResult(
        profile=profile,
        model=nl.describe(),
        energy=final_state.energy,
        J_value=parts.J_value,
        bilap_sq=parts.bilap_sq,
        l2_sq=norms(profile).l2_sq,
        G_int=parts.G_int,
        pohozaev_relative_residual=pohozaev_residual(profile, nl).relative_residual,
        pde_relative_residual=pde_residual(profile, nl),
        iterations=sum(stage.iterations for stage in stages),
        final_epsilon=stages[-1].epsilon,
        tail_mass=tail_mass(profile),
        scale=scale,
        stages=stages,
    )
    elapsed = time.perf_counter() - started
    logger.info(
        "%s N=%d: E=%.12g, Pohozaev %.3g, PDE %.3g, %d iterations in %.2fs",
        nl.name, nl.dimension, result.energy, result.pohozaev_relative_residual,
        result.pde_relative_residual, result.iterations, elapsed,
    )
    if result.tail_mass > 1e-8:
        logger.warning("Tail mass %.3g beyond %.0f%% of R; consider a larger grid.R", result.tail_mass, 100 * TAIL_FRACTION)
    return result
