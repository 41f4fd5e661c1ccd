"""Focal points of the one-dimensional trajectories and the critical curve.

A trajectory of the one-dimensional synthesis, ``y1 = (c + t)/(1 - t)``,
stays optimal in the full problem until the first-order perturbation
``delta_y2`` out of the symmetry plane vanishes. The locus of those focal
points over all ``c`` is the critical curve in the ``(t, y1)`` plane.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, FocalPointNotFound

__all__ = [
    "Regime",
    "CriticalPoint",
    "nominal_c",
    "nominal_y1",
    "delta_y2",
    "delta_y2_rhs",
    "focal_time",
    "critical_curve_samples",
    "implicit_relation",
    "classify_regime",
    "T_STAR",
]

#: Focal time of the ``c = -1`` trajectory, also the ``|c| -> inf`` asymptote.
T_STAR = 1.0 - 2.0 ** (2.0 / 3.0)


class Regime(enum.Enum):
    OneDim = "one_dim"
    FullDim = "full_dim"


@dataclass(frozen=True)
class CriticalPoint:
    t_crit: float
    y1: float
    c: float


def nominal_c(a: float, gamma: float) -> float:
    """Parameter ``c = y1(0)`` of the nominal trajectory through ``(-a gamma, -a)``."""
    return -a * (1.0 + a * gamma) + a * gamma


def nominal_y1(t, c):
    return (c + t) / (1.0 - t)


def delta_y2_rhs(t, d, c):
    """Right-hand side of the linear ODE satisfied by ``delta_y2``."""
    return -d / (1.0 - t) + 4.0 * (c + t) ** 2 / (c * (c + 2.0 * t - t * t) * (1.0 - t) ** 3)


def delta_y2(t: float, c: float) -> float:
    """Closed-form out-of-plane perturbation with ``delta_y2(0) = 1``.

    Three branches by the sign of ``c + 1``; the ``c < -1`` branch uses
    arctangents in place of the logarithm of the ``c > -1`` branch.

    Raises
    ------
    DomainError
        If ``t`` is outside ``(-1, 0]`` or a logarithm argument is not
        positive (the nominal trajectory does not reach ``t``).
    """
    if not -1.0 < t <= 0.0:
        raise DomainError(f"t must lie in (-1, 0], got {t!r}")
    u = 1.0 - t
    if c == -1.0:
        return 4.0 / (3.0 * u * u) - u / 3.0
    if c == 0.0:
        raise DomainError("c = 0 has no nominal trajectory")
    q = c + 2.0 * t - t * t
    ratio = c * u * u / q
    if not ratio > 0.0:
        raise DomainError(f"log argument {ratio!r} not positive at t={t}, c={c}")
    cc1 = c * (c + 1.0)
    base = (
        -(c * c + 5.0 * c + 16.0) * u / (3.0 * cc1)
        + 4.0 * (c + 2.0) / cc1
        - 4.0 / (c * u)
        + 4.0 * (c + 1.0) / (3.0 * c * u * u)
        + 4.0 * u * math.log(ratio) / cc1
    )
    if c > -1.0:
        s = math.sqrt(c + 1.0)
        arg = q * (s + 1.0) ** 2 / (c * (s + 1.0 - t) ** 2)
        if not arg > 0.0:
            raise DomainError(f"log argument {arg!r} not positive at t={t}, c={c}")
        return base + 2.0 * (c + 2.0) * u * math.log(arg) / (c * (c + 1.0) ** 1.5)
    m = math.sqrt(-1.0 - c)
    return base + 4.0 * (c + 2.0) * u * (math.atan(1.0 / m) - math.atan(u / m)) / (
        c * (-1.0 - c) ** 1.5
    )


def _lower_time(c):
    # for c > 0 the nominal trajectory only exists while c + 2t - t^2 > 0
    if c > 0.0:
        return 1.0 - math.sqrt(1.0 + c)
    return -1.0


def focal_time(c: float, lo: float = -0.95, hi: float = -1e-6, n_scan: int = 400,
               xtol: float = 1e-14) -> float:
    """Largest ``t < 0`` at which ``delta_y2(t; c)`` vanishes.

    Scans ``[lo, hi]`` from the right for the first sign change, then
    refines with Brent's method.
    """
    if not math.isfinite(c):
        raise DomainError("c must be finite")
    lo = max(lo, _lower_time(c) + 1e-9)
    grid = np.linspace(hi, lo, n_scan)
    prev_t, prev_v = grid[0], delta_y2(grid[0], c)
    for t in grid[1:]:
        v = delta_y2(t, c)
        if v == 0.0:
            return float(t)
        if (v < 0.0) != (prev_v < 0.0):
            return float(brentq(delta_y2, t, prev_t, args=(c,), xtol=xtol, rtol=4 * np.finfo(float).eps))
        prev_t, prev_v = t, v
    raise FocalPointNotFound(f"delta_y2 keeps its sign on [{lo}, {hi}] for c={c}")


def critical_curve_samples(n: int, c_min: float = -4.0, c_max: float = -0.02):
    """Focal points for ``n`` equispaced values of ``c`` in ``[c_min, c_max]``."""
    if n < 2:
        raise ValueError("n must be at least 2")
    out = []
    for c in np.linspace(c_min, c_max, n):
        c = float(c)
        t = focal_time(c)
        out.append(CriticalPoint(t_crit=t, y1=float(nominal_y1(t, c)), c=c))
    return out


def implicit_relation(t: float, y1: float) -> float:
    """Left-hand side of the curve relation in ``(t, y1)``, zero on the curve.

    Uses the ``c > -1`` form for ``y1 > -1`` and the ``c < -1`` form for
    ``y1 < -1``. Serves as an independent check of :func:`focal_time`.
    """
    if y1 > -1.0:
        Y, T = math.sqrt(1.0 + y1), math.sqrt(1.0 - t)
        return (
            (-(Y ** 4) * T ** 6 + 4 * Y ** 4 - 3 * Y ** 2 * T ** 4 - 12 * y1 * t) * Y
            + 24 * T ** 2 * Y * math.log(T)
            + 6 * T * (Y * T - 1) ** 2 * math.log((Y - T) / (Y * T - 1))
            + 6 * T * (Y * T + 1) ** 2 * math.log((Y * T + 1) / (Y + T))
        )
    if y1 < -1.0:
        Y, T = math.sqrt(-(1.0 + y1) * (1.0 - t)), 1.0 - t
        return (
            -(Y ** 4) * T ** 3 + 4 * Y ** 4 + 3 * Y ** 2 * T ** 3 - 12 * T ** 2 * y1 * t
        ) + 12 * T ** 3 * (
            2 * math.log(T)
            + (Y * Y - 1) * (math.atan(1 / Y) - math.atan(T / Y)) / Y
            + math.log((Y * Y + 1) / (Y * Y + T * T))
        )
    return t - T_STAR


def classify_regime(q) -> Regime:
    """One-dimensional or full-dimensional worst case for the step ``q``.

    ``q`` needs attributes ``a`` and ``gamma``. The starting point
    ``(-a gamma, -a)`` is right of the critical curve iff the focal point of
    its nominal trajectory has not been reached, i.e. ``delta_y2 >= 0``
    there. Exact zeros count as one-dimensional.
    """
    c = nominal_c(q.a, q.gamma)
    return Regime.OneDim if delta_y2(-q.a * q.gamma, c) >= 0.0 else Regime.FullDim
