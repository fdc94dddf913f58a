"""
Numerical helpers for biharmonic ground states.

Command orchestration lives in ``helpers.cli_reporting`` and is imported from
there directly, since it depends on ``utils``.
"""

from .radial_grid import (  # noqa: F401
    GridError,
    RadialGrid,
    build_grid,
    integrate,
    refine,
    sphere_area,
)
from .radial_operators import (  # noqa: F401
    FieldError,
    RadialField,
    SobolevNorms,
    bilaplacian,
    dilate,
    field_from_function,
    laplacian,
    norms,
    radial_derivative,
)
from .nonlinearity import (  # noqa: F401
    GrowthReport,
    Logarithmic,
    Nonlinearity,
    NonlinearityError,
    PowerMass,
    QuadratureError,
    check_growth_conditions,
    eval_G,
    eval_G_eps,
    eval_g,
    eval_phi_eps,
    make_nonlinearity,
)
from .fields import (  # noqa: F401
    dilated_gaussian,
    normalize,
    random_fields,
    random_smooth_field,
    unit_gaussian,
)
from .energy import (  # noqa: F401
    EnergyBreakdown,
    energy,
    l2_gradient,
    nonlinear_integral,
    reduced_energy,
)
from .pohozaev import (  # noqa: F401
    PohozaevReport,
    pohozaev_residual,
    project_to_manifold,
)
from .ground_solver import (  # noqa: F401
    GroundStateResult,
    LineSearchStalled,
    LostMembership,
    MaxIterations,
    NoPositiveG,
    SolverConfig,
    SolverError,
    initial_guess,
    minimize,
    pde_residual,
)
from .logsobolev import (  # noqa: F401
    InequalityReport,
    LogSobolevConstants,
    NormalizationError,
    biharmonic_lsi_check,
    classical_lsi_check,
    constant_from_energy,
    entropy,
    equality_scaling,
    interpolation_check,
    maximize_scaled_entropy,
    optimal_alpha,
    scaled_entropy,
    scaled_inequality_check,
)

__all__ = [
    # radial_grid
    "GridError",
    "RadialGrid",
    "build_grid",
    "integrate",
    "refine",
    "sphere_area",
    # radial_operators
    "FieldError",
    "RadialField",
    "SobolevNorms",
    "bilaplacian",
    "dilate",
    "field_from_function",
    "laplacian",
    "norms",
    "radial_derivative",
    # nonlinearity
    "GrowthReport",
    "Logarithmic",
    "Nonlinearity",
    "NonlinearityError",
    "PowerMass",
    "QuadratureError",
    "check_growth_conditions",
    "eval_G",
    "eval_G_eps",
    "eval_g",
    "eval_phi_eps",
    "make_nonlinearity",
    # fields
    "dilated_gaussian",
    "normalize",
    "random_fields",
    "random_smooth_field",
    "unit_gaussian",
    # energy
    "EnergyBreakdown",
    "energy",
    "l2_gradient",
    "nonlinear_integral",
    "reduced_energy",
    # pohozaev
    "PohozaevReport",
    "pohozaev_residual",
    "project_to_manifold",
    # ground_solver
    "GroundStateResult",
    "LineSearchStalled",
    "LostMembership",
    "MaxIterations",
    "NoPositiveG",
    "SolverConfig",
    "SolverError",
    "initial_guess",
    "minimize",
    "pde_residual",
    # logsobolev
    "InequalityReport",
    "LogSobolevConstants",
    "NormalizationError",
    "biharmonic_lsi_check",
    "classical_lsi_check",
    "constant_from_energy",
    "entropy",
    "equality_scaling",
    "interpolation_check",
    "maximize_scaled_entropy",
    "optimal_alpha",
    "scaled_entropy",
    "scaled_inequality_check",
]
