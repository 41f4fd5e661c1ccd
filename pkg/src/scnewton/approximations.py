"""Analytic approximations of the exact bounds and their error audits."""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "FormulaId",
    "ApproxAudit",
    "approx_full_bound",
    "approx_opt_bound",
    "approx_opt_gamma",
    "asymptotic_opt_bound",
    "asymptotic_opt_gamma",
    "audit",
    "CLAIMED_ERRORS",
]


class FormulaId(enum.Enum):
    FullStepBound = "full_step_bound"
    OptStepBound = "opt_step_bound"
    OptGamma = "opt_gamma"


#: Claimed maximal absolute error and the interval it is claimed on.
CLAIMED_ERRORS = {
    FormulaId.FullStepBound: (0.013, (0.02, 2.0 / 3.0)),
    FormulaId.OptStepBound: (0.007, (0.02, 0.98)),
    FormulaId.OptGamma: (0.008, (0.02, 0.98)),
}


def approx_full_bound(lam: float) -> float:
    """``1.01 lam^2 + 1.02 lam^4``, upper approximation for the full step."""
    if not 0.0 <= lam <= 2.0 / 3.0:
        warnings.warn(f"approx_full_bound is calibrated on [0, 2/3], got {lam}", stacklevel=2)
    return 1.01 * lam ** 2 + 1.02 * lam ** 4


def approx_opt_bound(lam: float) -> float:
    """``lam^2 - 0.556 lam^4 log(lam)`` (natural log), optimal-step bound."""
    if lam == 0.0:
        return 0.0
    if not 0.0 < lam <= 1.0:
        raise DomainError(f"lam must lie in (0, 1], got {lam!r}")
    return lam ** 2 - 0.556 * lam ** 4 * math.log(lam)


def approx_opt_gamma(lam: float) -> float:
    """``1 - 0.95 lam^3 + 0.53 lam^4``, optimal damping."""
    return 1.0 - 0.95 * lam ** 3 + 0.53 * lam ** 4


def asymptotic_opt_bound(lam: float) -> float:
    """Small-decrement expansion of the optimal-step bound."""
    return lam ** 2 - 0.25 * lam ** 4 * math.log(lam) + (math.log(2.0) / 2.0 - 1.0 / 16.0) * lam ** 4


def asymptotic_opt_gamma(lam: float) -> float:
    """Small-decrement expansion ``1 - lam^3/2 + lam^4/4`` of the optimal damping."""
    return 1.0 - lam ** 3 / 2.0 + lam ** 4 / 4.0


@dataclass(frozen=True)
class ApproxAudit:
    formula_id: FormulaId
    interval: tuple
    grid_step: float
    max_abs_error: float
    claimed_error: float
    argmax: float
    # min of (approximation - exact); nonnegative iff the formula bounds from above
    min_signed_gap: float

    @property
    def passed(self) -> bool:
        return self.max_abs_error <= self.claimed_error

    def to_dict(self):
        return {
            "formula_id": self.formula_id.name,
            "interval": list(self.interval),
            "grid_step": self.grid_step,
            "max_abs_error": self.max_abs_error,
            "claimed_error": self.claimed_error,
            "argmax": self.argmax,
            "min_signed_gap": self.min_signed_gap,
            "passed": self.passed,
        }


def audit_grid(lo, hi, step):
    n = int(math.floor((hi - lo) / step + 1e-9))
    return np.round(lo + step * np.arange(n + 1), 12)


def _exact_values(formula_id, grid, tol):
    if formula_id is FormulaId.FullStepBound:
        from .hamiltonian import sweep_bounds

        results = sweep_bounds(grid, gamma=1.0, tol=tol)
        return np.array([np.nan if r is None else r.lambda_out for r in results])
    from .optimal_damping import optimal_step

    results = [optimal_step(float(a)) for a in grid]
    if formula_id is FormulaId.OptStepBound:
        return np.array([r.lambda_out for r in results])
    return np.array([r.gamma_star for r in results])


_APPROX = {
    FormulaId.FullStepBound: approx_full_bound,
    FormulaId.OptStepBound: approx_opt_bound,
    FormulaId.OptGamma: approx_opt_gamma,
}


def audit(formula_id: FormulaId, grid_step: float = 0.005, interval=None,
          tol: float = 1e-10) -> ApproxAudit:
    """Measure an approximation against the exact pipeline on a grid.

    The default interval is the one its error claim refers to, starting at
    0.02 where the exact pipeline is still accurate in absolute terms.
    """
    formula_id = FormulaId(formula_id)
    claimed, default_interval = CLAIMED_ERRORS[formula_id]
    lo, hi = interval or default_interval
    grid = audit_grid(lo, hi, grid_step)
    exact = _exact_values(formula_id, grid, tol)
    if np.isnan(exact).any():
        bad = grid[np.isnan(exact)]
        raise RuntimeError(f"exact pipeline failed at {bad.tolist()}")
    approx = np.array([_APPROX[formula_id](float(a)) for a in grid])
    err = np.abs(approx - exact)
    i = int(np.argmax(err))
    return ApproxAudit(
        formula_id=formula_id,
        interval=(float(lo), float(hi)),
        grid_step=grid_step,
        max_abs_error=float(err[i]),
        claimed_error=claimed,
        argmax=float(grid[i]),
        min_signed_gap=float(np.min(approx - exact)),
    )
