"""Simplest normal forms of Hopf-zero fields with quasi-Eulerian nonlinear part."""
from .algebra import (
    THETA,
    AlgebraElement,
    ContractError,
    DimensionError,
    E,
    Grading,
    ParamChange,
    ScalarSeries,
    Z,
    apply_generator,
    apply_param_subst,
    apply_state_transform,
    apply_time_rescaling,
    bracket,
    grade,
    mu_derivative_action,
    scalar_action,
)
from .engine import (
    DegenerateError,
    NormalFormResult,
    level_sweep,
    nondegeneracy_matrix,
    normalize_orbital,
    normalize_parametric,
    normalize_state,
    solve_symmetry,
)

__version__ = "0.1.0"
