"""Optimal damping coefficient via the planar reduction on ``H = 0``.

Freeing the step length puts the start of the optimal trajectory on the
invariant surface ``H = 0``. There the adjoint can be eliminated and the
projection to ``y`` space follows the autonomous scalar ODE for
``dy2/dy1``; the trajectory ends on the circle ``y1^2 + y1 + y2^2 = 0``.
Time is recovered along the curve from a second, linear ODE in ``t``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.integrate import solve_ivp

from .errors import DomainError, IntegrationError

__all__ = [
    "PlanarPoint",
    "SigmaCurve",
    "OptimalStepResult",
    "planar_rhs",
    "damping_rhs",
    "circle_residual",
    "integrate_sigma",
    "integrate_damping",
    "optimal_step",
    "GAMMA_LIMIT",
]

#: Limit of the optimal damping as the decrement tends to one.
GAMMA_LIMIT = 2.0 ** (2.0 / 3.0) - 1.0

RTOL = 1e-12
ATOL = 1e-14


class PlanarPoint(NamedTuple):
    y1: float
    y2: float


@dataclass(frozen=True)
class SigmaCurve:
    """Samples of the solution curve from ``(-a, 0)`` to the circle."""

    y1: np.ndarray
    y2: np.ndarray


@dataclass(frozen=True)
class OptimalStepResult:
    a: float
    gamma_star: float
    lambda_out: float
    y_star: PlanarPoint
    sigma: SigmaCurve
    t_profile: np.ndarray

    def to_dict(self):
        return {
            "a": self.a,
            "gamma_star": self.gamma_star,
            "lambda_out": self.lambda_out,
            "y_star": list(self.y_star),
        }


def _disc(y1, y2):
    return 4.0 * y1 * y1 * (1.0 - y1 * y1) + y2 * y2


def planar_rhs(y1: float, y2: float) -> float:
    """Slope ``dy2/dy1`` of the projected optimal trajectories on ``H = 0``."""
    if not abs(y1) < 1.0:
        raise DomainError(f"|y1| must be < 1, got {y1!r}")
    return (math.sqrt(_disc(y1, y2)) + y1 * y2) / (1.0 - y1 * y1)


def damping_rhs(y1: float, y2: float, t: float) -> float:
    """``dt/dy1`` along a solution curve of :func:`planar_rhs`."""
    sq = math.sqrt(_disc(y1, y2))
    return (y2 * (y1 + t) + (y1 * t + 1.0) * sq) / ((1.0 - y1 * y1) * sq)


def circle_residual(y1, y2):
    """``y1^2 + y1 + y2^2``; zero on the circle of endpoints with ``H = 0``."""
    return y1 * y1 + y1 + y2 * y2


def _check_a(a):
    if not 0.0 < a < 1.0:
        raise DomainError(f"a must lie in (0, 1), got {a!r}")


def integrate_sigma(a: float, rtol: float = RTOL, atol: float = ATOL, n_samples: int = 201):
    """Follow the solution curve through ``(-a, 0)`` up to the circle.

    Returns
    -------
    y_star : PlanarPoint
        Crossing with the circle in the upper half-plane.
    sigma : SigmaCurve
        ``n_samples`` points from ``(-a, 0)`` to ``y_star``.
    """
    _check_a(a)

    def crossing(y1, z):
        return circle_residual(y1, z[0])

    crossing.terminal = True
    crossing.direction = 1.0

    sol = solve_ivp(
        lambda y1, z: (planar_rhs(y1, z[0]),),
        (-a, 0.0),
        [0.0],
        method="DOP853",
        rtol=rtol,
        atol=atol,
        events=crossing,
        dense_output=True,
    )
    if sol.status != 1 or len(sol.t_events[0]) == 0:
        raise IntegrationError(f"solution curve through (-{a}, 0) never reached the circle")
    y1s = float(sol.t_events[0][0])
    y2s = float(sol.y_events[0][0][0])
    grid = np.linspace(-a, y1s, n_samples)
    y2 = sol.sol(grid)[0]
    y2[0], y2[-1] = 0.0, y2s
    return PlanarPoint(y1s, y2s), SigmaCurve(y1=grid, y2=y2)


def integrate_damping(a: float, sigma, rtol: float = RTOL, atol: float = ATOL):
    """Recover the starting time along ``sigma`` and the optimal damping.

    ``sigma`` is either a :class:`SigmaCurve` or the ``(y_star, curve)`` pair
    from :func:`integrate_sigma`. The curve and ``t`` are integrated jointly
    backward from ``y_star`` (where ``t = 0``) to ``y1 = -a``.

    Returns
    -------
    t0 : float
        Starting time ``t(y0)``.
    gamma_star : float
        ``-t0 / a``, the trajectory starts at ``t = -a gamma``.
    t_profile : ndarray
        ``t`` at the sample abscissae of the curve.
    y2_end : float
        ``y2`` at ``y1 = -a`` from the backward pass; zero up to the
        integration error.
    """
    _check_a(a)
    curve = sigma[1] if isinstance(sigma, tuple) else sigma
    y1s, y2s = float(curve.y1[-1]), float(curve.y2[-1])
    sol = solve_ivp(
        lambda y1, z: (planar_rhs(y1, z[0]), damping_rhs(y1, z[0], z[1])),
        (y1s, -a),
        [y2s, 0.0],
        method="DOP853",
        rtol=rtol,
        atol=atol,
        dense_output=True,
    )
    if sol.status != 0:
        raise IntegrationError(sol.message)
    t0 = float(sol.y[1, -1])
    t_profile = sol.sol(curve.y1)[1]
    t_profile[0], t_profile[-1] = t0, 0.0
    return t0, -t0 / a, t_profile, float(sol.y[0, -1])


def optimal_step(a: float, rtol: float = RTOL, atol: float = ATOL,
                 n_samples: int = 201) -> OptimalStepResult:
    """Optimal damping ``gamma*(a)`` and the resulting worst-case decrement.

    >>> res = optimal_step(0.4)
    >>> round(res.lambda_out, 8), round(res.gamma_star, 8)
    (0.17219312, 0.95979229)
    """
    y_star, curve = integrate_sigma(a, rtol=rtol, atol=atol, n_samples=n_samples)
    t0, gamma, t_profile, _ = integrate_damping(a, curve, rtol=rtol, atol=atol)
    return OptimalStepResult(
        a=a,
        gamma_star=gamma,
        lambda_out=math.sqrt(-y_star.y1),
        y_star=y_star,
        sigma=curve,
        t_profile=t_profile,
    )
