"""Choosing the neighbourhood size of a short-step method.

The guaranteed progress per iteration is proportional to
``lambda_bar - lambda_low(lambda_bar)``, where ``lambda_low`` bounds the
decrement after the Newton step. :func:`tune` maximises that gap for a
given step policy.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.optimize import minimize_scalar

from ..errors import DomainError, ShootingError

__all__ = [
    "ClassicalVariant",
    "TunePolicy",
    "TunerResult",
    "BoundCurve",
    "classical_bound",
    "classical_damping",
    "full_step_curve",
    "optimal_bound_curve",
    "optimal_gamma_curve",
    "tune",
]


class ClassicalVariant(enum.Enum):
    Full = "full"
    Damped = "damped"


class TunePolicy(enum.Enum):
    FullStep = "full"
    OptimalDamping = "optimal"
    ClassicalFull = "classical-full"
    ClassicalDamped = "classical-damped"


def classical_damping(rho: float) -> float:
    """Damping ``(1 + rho)/(1 + rho + rho^2)`` of the intermediate step."""
    return (1.0 + rho) / (1.0 + rho + rho * rho)


def classical_bound(lam: float, variant=ClassicalVariant.Full) -> float:
    """Decrement bound from the Hessian sandwich estimate.

    ``Full`` is ``(lam/(1-lam))^2`` for the full step; ``Damped`` is
    ``lam^2 (1 + lam + lam/(1+lam+lam^2))`` for :func:`classical_damping`.
    """
    variant = ClassicalVariant(variant)
    if variant is ClassicalVariant.Full:
        if not 0.0 < lam < 1.0:
            raise DomainError(f"lam must lie in (0, 1), got {lam!r}")
        return (lam / (1.0 - lam)) ** 2
    if not lam > 0.0:
        raise DomainError(f"lam must be positive, got {lam!r}")
    return lam * lam * (1.0 + lam + lam / (1.0 + lam + lam * lam))


class BoundCurve:
    """Monotone cubic interpolant of an expensive curve on a fixed grid.

    Grid nodes are computed the first time an evaluation needs them and are
    cached; each evaluation interpolates through the four surrounding nodes.
    ``node_fn(a, seed)`` returns ``(value, seed)`` so that neighbouring
    solves can be warm-started.
    """

    def __init__(self, node_fn, step=1e-3, lo=0.0, hi=1.0):
        self.node_fn = node_fn
        self.step = step
        self.lo, self.hi = lo, hi
        self._nodes = {}
        self._seeds = {}

    def _node(self, i):
        if i not in self._nodes:
            seed = None
            if self._seeds:
                nearest = min(self._seeds, key=lambda j: abs(j - i))
                seed = self._seeds[nearest]
            value, new_seed = self.node_fn(round(i * self.step, 12), seed)
            self._nodes[i] = value
            if new_seed is not None:
                self._seeds[i] = new_seed
        return self._nodes[i]

    def __call__(self, x):
        x = float(x)
        if not self.lo <= x <= self.hi:
            raise DomainError(f"{x} outside [{self.lo}, {self.hi}]")
        i = int(math.floor(x / self.step + 1e-12))
        lo_i = max(i - 1, int(math.ceil(self.lo / self.step - 1e-12)))
        hi_i = min(i + 2, int(math.floor(self.hi / self.step + 1e-12)))
        idx = list(range(lo_i, hi_i + 1))
        if abs(x - i * self.step) < 1e-14:
            return self._node(i)
        xs = np.array([j * self.step for j in idx])
        ys = np.array([self._node(j) for j in idx])
        return float(PchipInterpolator(xs, ys)(x))

    @property
    def n_nodes(self):
        return len(self._nodes)


def full_step_curve(step=1e-3, tol=1e-10):
    """Worst-case decrement after a full step as a :class:`BoundCurve`."""
    from ..hamiltonian import StepQuery, solve_bvp

    def node(a, seed):
        try:
            res = solve_bvp(StepQuery(a, 1.0), seed=seed, tol=tol)
        except ShootingError:
            res = solve_bvp(StepQuery(a, 1.0), tol=tol)
        y1, y2 = res.endpoint
        return res.lambda_out, (math.hypot(y1, y2), math.atan2(y2, y1))

    return BoundCurve(node, step=step, lo=0.01, hi=0.98)


def _optimal_curve(attr, step):
    from ..optimal_damping import optimal_step

    def node(a, seed):
        return getattr(optimal_step(a), attr), None

    return BoundCurve(node, step=step, lo=0.01, hi=0.99)


def optimal_bound_curve(step=1e-3):
    return _optimal_curve("lambda_out", step)


def optimal_gamma_curve(step=1e-3):
    return _optimal_curve("gamma_star", step)


@dataclass(frozen=True)
class TunerResult:
    step_policy: TunePolicy
    lambda_star: float
    lambda_low: float
    gap: float
    gamma_at_star: float

    def to_dict(self):
        return {
            "step_policy": self.step_policy.value,
            "lambda_star": self.lambda_star,
            "lambda_low": self.lambda_low,
            "gap": self.gap,
            "gamma_at_star": self.gamma_at_star,
        }


def lower_bound_function(policy):
    """``lambda_low`` as a callable of ``lambda_bar`` for a tuning policy."""
    policy = TunePolicy(policy)
    if policy is TunePolicy.FullStep:
        return full_step_curve()
    if policy is TunePolicy.OptimalDamping:
        return optimal_bound_curve()
    variant = ClassicalVariant.Full if policy is TunePolicy.ClassicalFull else ClassicalVariant.Damped
    return lambda lam: classical_bound(lam, variant)


def tune(policy, interval=(0.05, 0.8), xtol=1e-6, lower_bound=None) -> TunerResult:
    """Maximise ``lambda_bar - lambda_low(lambda_bar)`` by golden-section search.

    Parameters
    ----------
    policy : TunePolicy or str
        ``"full"``, ``"optimal"``, ``"classical-full"`` or ``"classical-damped"``.
    interval : tuple
        Search interval for ``lambda_bar``.
    lower_bound : callable, optional
        Precomputed ``lambda_low`` curve to reuse across calls.
    """
    policy = TunePolicy(policy)
    f = lower_bound or lower_bound_function(policy)
    lo, hi = interval
    mid = lo + (hi - lo) * 0.381966
    res = minimize_scalar(
        lambda lam: -(lam - f(lam)),
        bracket=(lo, mid, hi),
        method="golden",
        tol=xtol / mid,
    )
    lam = float(res.x)
    low = float(f(lam))
    if policy is TunePolicy.OptimalDamping:
        from ..optimal_damping import optimal_step

        gamma = optimal_step(lam).gamma_star
    elif policy is TunePolicy.ClassicalDamped:
        gamma = classical_damping(lam)
    else:
        gamma = 1.0
    return TunerResult(policy, lam, low, lam - low, gamma)
