"""Closed-form optimal synthesis for the one-dimensional damped Newton step.

After normalising the current iterate (zero, unit Hessian, gradient ``-a``)
the worst case over self-concordant functions on an interval is the optimal
control problem

    dy/dt = (1 - u y) / (1 + u t),   u in [-1, 1],   y(-a gamma) = -a,

with payoff ``|y(0)|``. Its value function is known explicitly and the
functions below evaluate it together with the derived step-length formulas.
"""
from __future__ import annotations

import enum
import math
from typing import NamedTuple

from .errors import DomainError

__all__ = [
    "Plane1DPoint",
    "Region1D",
    "dispersion_curve",
    "switching_curve",
    "region_1d",
    "bellman_1d",
    "full_step_bound_1d",
    "optimal_gamma_1d",
    "optimal_bound_1d",
]


class Plane1DPoint(NamedTuple):
    t: float
    y: float


class Region1D(enum.Enum):
    BelowDispersion = "below_dispersion"
    Middle = "middle"
    AboveSwitching = "above_switching"


def _check_t(t):
    if not -1.0 <= t <= 0.0:
        raise DomainError(f"t must lie in [-1, 0], got {t!r}")


def dispersion_curve(t: float) -> float:
    """y-coordinate of the dispersion curve ``2(sqrt(1+t^3)-1)/t^2``."""
    _check_t(t)
    t3 = t ** 3
    assert t3 >= -1.0
    # 2(sqrt(1+x)-1)/t^2 with x=t^3, rewritten to avoid cancellation near 0
    return 2.0 * t / (math.sqrt(1.0 + t3) + 1.0)


def switching_curve(t: float) -> float:
    _check_t(t)
    return -t


def region_1d(t: float, y: float) -> Region1D:
    """Which branch of the Bellman function applies at ``(t, y)``.

    Points exactly on either curve are assigned to the middle branch.
    """
    if y < dispersion_curve(t):
        return Region1D.BelowDispersion
    if y > switching_curve(t):
        return Region1D.AboveSwitching
    return Region1D.Middle


def bellman_1d(t: float, y: float) -> float:
    """Worst-case payoff ``B(t, y)`` of the one-dimensional problem.

    Parameters
    ----------
    t : float
        Scaled time in ``[-1, 0]``.
    y : float
        Scaled gradient coordinate; any real value is accepted.

    Returns
    -------
    float
        The maximal ``|y(0)|`` reachable from ``y(t) = y``.
    """
    region = region_1d(t, y)
    if region is Region1D.BelowDispersion:
        return -y + t + t * y
    if region is Region1D.AboveSwitching:
        return y - t - t * y
    return 4.0 - y + t - t * y - 4.0 * math.sqrt((1.0 - y) * (1.0 + t))


def _check_a(a):
    if not 0.0 < a <= 1.0:
        raise DomainError(f"decrement must lie in (0, 1], got {a!r}")


def full_step_bound_1d(a: float) -> float:
    """Worst-case decrement after a full step, ``4 - a^2 - 4 sqrt(1 - a^2)``."""
    _check_a(a)
    return bellman_1d(-a, -a)


def optimal_gamma_1d(a: float) -> float:
    """Optimal damping ``2(sqrt(1+a^3)-1)/a^3`` in one dimension."""
    _check_a(a)
    return 2.0 / (math.sqrt(1.0 + a ** 3) + 1.0)


def optimal_bound_1d(a: float) -> float:
    """Worst-case decrement after the optimally damped step in one dimension.

    Equal to ``(2(1-a)(1-sqrt(1+a^3)) + a^3)/a^2``; evaluated in a form
    without the ``1 - sqrt(1+a^3)`` cancellation.
    """
    _check_a(a)
    return a * (1.0 - 2.0 * (1.0 - a) / (1.0 + math.sqrt(1.0 + a ** 3)))
