"""Exact worst-case Newton decrement bounds for damped Newton steps on
self-concordant functions, and short-step path-following built on them."""
from .critical_curve import Regime, classify_regime, delta_y2, focal_time
from .errors import (
    DegeneratePointError,
    DivergenceError,
    DomainError,
    FocalPointNotFound,
    IntegrationError,
    ShootingError,
)
from .hamiltonian import BoundResult, StepQuery, solve_bvp, sweep_bounds, worst_case_decrement
from .onedim import bellman_1d, full_step_bound_1d, optimal_bound_1d, optimal_gamma_1d
from .optimal_damping import OptimalStepResult, optimal_step

__version__ = "0.1.0"
