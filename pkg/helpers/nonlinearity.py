"""
Scalar nonlinearity data: G, g, the split G = G_+ - G_-, the cutoff phi_eps and
the regularizations G_eps = G_+ - G_-^eps, g_eps = g_+ - phi_eps g_-.

    g_+(s) = max(g(s), 0) for s >= 0,  min(g(s), 0) for s < 0
    g_-(s) = g_+(s) - g(s)
    G_+(s) = int_0^s g_+,  G_-(s) = int_0^s g_-           (both >= 0)
    phi_eps(s) = min(1, (|s| / eps)^(2** - 1))
    G_-^eps(s) = int_0^s phi_eps(t) g_-(t) dt

Evaluators accept scalars or numpy arrays. Subclasses only have to provide G
and g; the split and the regularization fall back to adaptive quadrature.
Both built-in models override them with closed forms.
"""

from __future__ import annotations

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.integrate import quad
from scipy.special import xlogy

from configs.constants import MIN_DIMENSION, QUADRATURE_TOLERANCE

logger = logging.getLogger(__name__)

__all__ = [
    "NonlinearityError",
    "QuadratureError",
    "Nonlinearity",
    "Logarithmic",
    "PowerMass",
    "GrowthReport",
    "make_nonlinearity",
    "eval_G",
    "eval_g",
    "eval_phi_eps",
    "eval_G_eps",
    "check_growth_conditions",
]


class NonlinearityError(ValueError):
    """Raised for invalid model parameters or a regularization level outside (0, 1)."""


class QuadratureError(ArithmeticError):
    """Raised when adaptive quadrature of phi_eps * g_- misses its tolerance."""


def _check_epsilon(eps: float) -> None:
    if not (0.0 < eps < 1.0):
        raise NonlinearityError(f"regularization level must lie in (0, 1), got {eps}")


def _as_output(values: np.ndarray, like):
    return float(values) if np.ndim(like) == 0 else values


class Nonlinearity(ABC):
    """Evaluator bundle for an autonomous nonlinearity g(u) with primitive G."""

    name: str = "custom"

    def __init__(self, dimension: int):
        if int(dimension) != dimension or dimension < MIN_DIMENSION:
            raise NonlinearityError(f"dimension must be an integer >= {MIN_DIMENSION}, got {dimension}")
        self.dimension = int(dimension)
        self.critical_exponent = 2.0 * self.dimension / (self.dimension - 4)

    # --- model data -------------------------------------------------------

    @abstractmethod
    def G(self, s):
        """Primitive G(s) = int_0^s g."""

    @abstractmethod
    def g(self, s):
        """Nonlinearity g(s), continuous with g(0) = 0."""

    def parameters(self) -> dict:
        return {}

    def describe(self) -> dict:
        return {"model": self.name, "N": self.dimension, **self.parameters()}

    # --- split ------------------------------------------------------------

    def g_plus(self, s):
        s_arr = np.asarray(s, dtype=float)
        gs = np.asarray(self.g(s_arr), dtype=float)
        out = np.where(s_arr >= 0, np.maximum(gs, 0.0), np.minimum(gs, 0.0))
        return _as_output(out, s)

    def g_minus(self, s):
        s_arr = np.asarray(s, dtype=float)
        out = np.asarray(self.g_plus(s_arr)) - np.asarray(self.g(s_arr))
        return _as_output(out, s)

    def G_plus(self, s):
        s_arr = np.asarray(s, dtype=float)
        out = np.vectorize(lambda x: self._integrate_from_zero(self.g_plus, x))(s_arr)
        return _as_output(np.asarray(out, dtype=float), s)

    def G_minus(self, s):
        s_arr = np.asarray(s, dtype=float)
        out = np.asarray(self.G_plus(s_arr)) - np.asarray(self.G(s_arr))
        return _as_output(out, s)

    # --- regularization ---------------------------------------------------

    def phi_eps(self, eps: float, s):
        _check_epsilon(eps)
        s_arr = np.abs(np.asarray(s, dtype=float))
        ratio = np.minimum(s_arr / eps, 1.0)
        out = ratio ** (self.critical_exponent - 1.0)
        return _as_output(out, s)

    def G_minus_eps(self, eps: float, s):
        _check_epsilon(eps)
        s_arr = np.asarray(s, dtype=float)

        def integrand(t: float) -> float:
            return float(self.phi_eps(eps, t) * self.g_minus(t))

        out = np.vectorize(lambda x: self._integrate_from_zero(integrand, x, breakpoint=eps))(s_arr)
        return _as_output(np.asarray(out, dtype=float), s)

    def G_eps(self, eps: Optional[float], s):
        if eps is None:
            return self.G(s)
        s_arr = np.asarray(s, dtype=float)
        out = np.asarray(self.G_plus(s_arr)) - np.asarray(self.G_minus_eps(eps, s_arr))
        return _as_output(out, s)

    def g_eps(self, eps: Optional[float], s):
        if eps is None:
            return self.g(s)
        s_arr = np.asarray(s, dtype=float)
        out = np.asarray(self.g_plus(s_arr)) - np.asarray(self.phi_eps(eps, s_arr)) * np.asarray(
            self.g_minus(s_arr)
        )
        return _as_output(out, s)

    def dg_eps(self, eps: Optional[float], s):
        """Central difference of g_eps with a step relative to |s|."""
        s_arr = np.asarray(s, dtype=float)
        step = 1e-6 * np.abs(s_arr) + 1e-300
        forward = np.asarray(self.g_eps(eps, s_arr + step))
        backward = np.asarray(self.g_eps(eps, s_arr - step))
        return _as_output((forward - backward) / (2.0 * step), s)

    # --- helpers ----------------------------------------------------------

    @staticmethod
    def _integrate_from_zero(func, upper: float, breakpoint: Optional[float] = None) -> float:
        if upper == 0.0:
            return 0.0
        lo, hi = (0.0, upper) if upper > 0 else (upper, 0.0)
        points = None
        if breakpoint is not None:
            inner = [p for p in (breakpoint, -breakpoint) if lo < p < hi]
            points = inner or None
        value, abserr, info, *message = quad(
            func, lo, hi, epsabs=QUADRATURE_TOLERANCE, epsrel=0.0, limit=200, points=points, full_output=1
        )
        if message and abserr > QUADRATURE_TOLERANCE:
            raise QuadratureError(
                f"quadrature on [{lo:.6g}, {hi:.6g}] missed tolerance {QUADRATURE_TOLERANCE:g} "
                f"(estimate {abserr:.3g}): {message[0]}"
            )
        return value if upper > 0 else -value


class Logarithmic(Nonlinearity):
    """G(s) = s^2 log|s|, g(s) = 2 s log|s| + s; g < 0 exactly on 0 < |s| < e^(-1/2)."""

    name = "log"

    @property
    def sign_change(self) -> float:
        return math.exp(-0.5)

    def G(self, s):
        s_arr = np.asarray(s, dtype=float)
        return _as_output(xlogy(s_arr**2, np.abs(s_arr)), s)

    def g(self, s):
        s_arr = np.asarray(s, dtype=float)
        return _as_output(2.0 * xlogy(s_arr, np.abs(s_arr)) + s_arr, s)

    def G_plus(self, s):
        s_arr = np.asarray(s, dtype=float)
        a = np.abs(s_arr)
        out = np.where(a >= self.sign_change, xlogy(a**2, a) + 0.5 / math.e, 0.0)
        return _as_output(out, s)

    def G_minus_eps(self, eps: float, s):
        _check_epsilon(eps)
        s_arr = np.asarray(s, dtype=float)
        q = self.critical_exponent - 1.0
        m = q + 2.0
        c = np.minimum(np.abs(s_arr), self.sign_change)
        x = np.minimum(c, eps)
        # int_0^x t^(q+1) (2 log t + 1) dt
        inner = np.where(
            x > 0,
            x**m * ((2.0 * np.log(np.where(x > 0, x, 1.0)) + 1.0) / m - 2.0 / m**2),
            0.0,
        )
        out = -inner / eps**q
        outer = xlogy(eps**2, eps) - xlogy(c**2, c)
        out = out + np.where(c > eps, outer, 0.0)
        return _as_output(out, s)


class PowerMass(Nonlinearity):
    """G(s) = |s|^p / p - (mu/2) s^2 with 2 < p < 2**; g < 0 exactly on 0 < |s| < mu^(1/(p-2))."""

    name = "power_mass"

    def __init__(self, dimension: int, p: float = 4.0, mu: float = 1.0):
        super().__init__(dimension)
        if not (2.0 < p < self.critical_exponent):
            raise NonlinearityError(
                f"power p must satisfy 2 < p < 2** = {self.critical_exponent:g} for N={self.dimension}, got {p}"
            )
        if not mu > 0:
            raise NonlinearityError(f"mass mu must be positive, got {mu}")
        self.p = float(p)
        self.mu = float(mu)

    @property
    def sign_change(self) -> float:
        return self.mu ** (1.0 / (self.p - 2.0))

    def parameters(self) -> dict:
        return {"p": self.p, "mu": self.mu}

    def G(self, s):
        s_arr = np.asarray(s, dtype=float)
        a = np.abs(s_arr)
        return _as_output(a**self.p / self.p - 0.5 * self.mu * s_arr**2, s)

    def g(self, s):
        s_arr = np.asarray(s, dtype=float)
        a = np.abs(s_arr)
        return _as_output(a ** (self.p - 1.0) * np.sign(s_arr) - self.mu * s_arr, s)

    def G_plus(self, s):
        s_arr = np.asarray(s, dtype=float)
        a = np.abs(s_arr)
        b = self.sign_change
        G_b = b**self.p / self.p - 0.5 * self.mu * b**2
        out = np.where(a >= b, np.asarray(self.G(a)) - G_b, 0.0)
        return _as_output(out, s)

    def G_minus_eps(self, eps: float, s):
        _check_epsilon(eps)
        s_arr = np.asarray(s, dtype=float)
        p, mu = self.p, self.mu
        q = self.critical_exponent - 1.0
        c = np.minimum(np.abs(s_arr), self.sign_change)
        x = np.minimum(c, eps)
        out = (mu * x ** (q + 2.0) / (q + 2.0) - x ** (q + p) / (q + p)) / eps**q
        outer = 0.5 * mu * (c**2 - eps**2) - (c**p - eps**p) / p
        out = out + np.where(c > eps, outer, 0.0)
        return _as_output(out, s)


def make_nonlinearity(name: str, dimension: int, p: Optional[float] = None, mu: Optional[float] = None) -> Nonlinearity:
    """Build a built-in model from its config name: ``log`` or ``power_mass``."""
    key = (name or "").strip().lower()
    if key in {"log", "logarithmic"}:
        return Logarithmic(dimension)
    if key in {"power_mass", "powermass", "power"}:
        return PowerMass(dimension, p=4.0 if p is None else float(p), mu=1.0 if mu is None else float(mu))
    raise NonlinearityError(f"unknown nonlinearity {name!r}; expected 'log' or 'power_mass'")


def eval_G(nl: Nonlinearity, s):
    return nl.G(s)


def eval_g(nl: Nonlinearity, s):
    return nl.g(s)


def eval_phi_eps(nl: Nonlinearity, eps: float, s):
    return nl.phi_eps(eps, s)


def eval_G_eps(nl: Nonlinearity, eps: float, s):
    _check_epsilon(eps)
    return nl.G_eps(eps, s)


@dataclass
class GrowthReport:
    """Sampled check of (g0)-(g3). Sampling can falsify these conditions, never certify them."""

    model: str
    dimension: int
    sample_count: int
    g1_ratio_near_zero: float
    g3_ratio_near_infinity: float
    xi0: Optional[float]
    G_at_xi0: Optional[float]
    g0_constant: float
    violations: list = field(default_factory=list)
    label: str = "diagnostic"

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "N": self.dimension,
            "sample_count": self.sample_count,
            "g1_ratio_near_zero": self.g1_ratio_near_zero,
            "g3_ratio_near_infinity": self.g3_ratio_near_infinity,
            "xi0": self.xi0,
            "G_at_xi0": self.G_at_xi0,
            "g0_constant": self.g0_constant,
            "violations": list(self.violations),
            "label": self.label,
        }


def check_growth_conditions(nl: Nonlinearity, sample_count: int = 1000, ratio_limit: float = 1e-3) -> GrowthReport:
    """
    Sample s log-uniformly on [1e-8, 1e8] (both signs) and report:
      - sup G_+(s)/|s|^2** over the lowest and the highest decade ((g1), (g3));
      - the smallest sampled xi0 > 0 with G(xi0) > 0 ((g2));
      - the smallest c with |g(s)| <= c (1 + |s|^(2**-1)) on the sample ((g0)).
    """
    if sample_count < 100:
        raise NonlinearityError(f"sample count must be >= 100, got {sample_count}")
    crit = nl.critical_exponent
    positive = np.logspace(-8.0, 8.0, int(sample_count))
    samples = np.concatenate([-positive[::-1], positive])
    a = np.abs(samples)

    ratio = np.asarray(nl.G_plus(samples)) / a**crit
    near_zero = ratio[a <= 1e-7]
    near_inf = ratio[a >= 1e7]
    g1 = float(np.max(np.abs(near_zero)))
    g3 = float(np.max(np.abs(near_inf)))

    G_pos = np.asarray(nl.G(positive))
    witnesses = np.flatnonzero(G_pos > 0)
    xi0 = float(positive[witnesses[0]]) if witnesses.size else None
    G_xi0 = float(G_pos[witnesses[0]]) if witnesses.size else None

    g0 = float(np.max(np.abs(np.asarray(nl.g(samples))) / (1.0 + a ** (crit - 1.0))))

    violations = []
    if g1 > ratio_limit:
        violations.append(f"(g1): G_+(s)/|s|^2** = {g1:.3g} near 0")
    if g3 > ratio_limit:
        violations.append(f"(g3): G_+(s)/|s|^2** = {g3:.3g} near infinity")
    if xi0 is None:
        violations.append("(g2): no sampled s with G(s) > 0")
    if not np.isfinite(g0):
        violations.append("(g0): g is not bounded by c(1 + |s|^(2**-1)) on the sample")
    for message in violations:
        logger.warning("%s N=%d: %s", nl.name, nl.dimension, message)

    return GrowthReport(
        model=nl.name,
        dimension=nl.dimension,
        sample_count=int(sample_count),
        g1_ratio_near_zero=g1,
        g3_ratio_near_infinity=g3,
        xi0=xi0,
        G_at_xi0=G_xi0,
        g0_constant=g0,
        violations=violations,
    )
