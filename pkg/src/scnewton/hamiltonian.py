"""Hamiltonian system for the worst-case damped Newton step in n dimensions.

By rotational symmetry the problem lives in the plane spanned by the first two
coordinates, so the phase space is ``(y1, y2, p1, p2)`` over scaled time
``t in [-a gamma, 0]``. The worst-case decrement after the step is ``|y(0)|``
for the solution of

    y' = dH/dp,  p' = -dH/dy,  y(-a gamma) = (-a, 0),  p(0) = y(0)/|y(0)|.

:func:`solve_bvp` finds that solution by shooting backward from ``t = 0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import root

from .critical_curve import Regime, classify_regime, nominal_c
from .errors import DegeneratePointError, DomainError, IntegrationError, ShootingError
from .onedim import bellman_1d

__all__ = [
    "PhasePoint",
    "StepQuery",
    "Trajectory",
    "BoundResult",
    "Regime",
    "hamiltonian_value",
    "hamiltonian_rhs",
    "hamiltonian_dt",
    "check_control_inequalities",
    "integrate_flow",
    "solve_bvp",
    "worst_case_decrement",
    "sweep_bounds",
]

# relative threshold below which the radicand counts as a branch point
DEGENERACY_EPS = 1e-14


@dataclass(frozen=True)
class PhasePoint:
    t: float
    y1: float
    y2: float
    p1: float
    p2: float

    @classmethod
    def from_state(cls, t, z):
        return cls(float(t), float(z[0]), float(z[1]), float(z[2]), float(z[3]))

    @property
    def state(self):
        return np.array([self.y1, self.y2, self.p1, self.p2])

    def mirrored(self):
        """Image under the symmetry ``(y1, y2, p1, p2) -> (y1, -y2, p1, -p2)``."""
        return PhasePoint(self.t, self.y1, -self.y2, self.p1, -self.p2)


@dataclass(frozen=True)
class StepQuery:
    """A damped Newton step from decrement ``a`` with damping ``gamma``."""

    a: float
    gamma: float

    def __post_init__(self):
        if not 0.0 < self.a < 1.0:
            raise DomainError(f"a must lie in (0, 1), got {self.a!r}")
        if not 0.0 < self.gamma <= 1.0:
            raise DomainError(f"gamma must lie in (0, 1], got {self.gamma!r}")

    @property
    def t_start(self):
        return -self.a * self.gamma


@dataclass(frozen=True)
class Trajectory:
    """Sampled solution of the Hamiltonian flow.

    ``y`` and ``p`` have shape ``(n, 2)``. ``energy`` holds the Hamiltonian
    integrated alongside via its time derivative, when requested.
    """

    t: np.ndarray
    y: np.ndarray
    p: np.ndarray
    energy: np.ndarray | None = None

    def __post_init__(self):
        for arr in (self.t, self.y, self.p, self.energy):
            if arr is not None:
                arr.setflags(write=False)

    def __len__(self):
        return len(self.t)

    def points(self):
        return [
            PhasePoint(float(t), *map(float, y), *map(float, p))
            for t, y, p in zip(self.t, self.y, self.p)
        ]


@dataclass(frozen=True)
class BoundResult:
    query: StepQuery
    lambda_out: float
    regime: Regime
    trajectory: Trajectory
    shoot_residual: float = 0.0
    endpoint: tuple = field(default=(float("nan"), float("nan")))

    def to_dict(self):
        return {
            "a": self.query.a,
            "gamma": self.query.gamma,
            "lambda_out": self.lambda_out,
            "regime": self.regime.name,
            "shoot_residual": self.shoot_residual,
            "y0": list(self.endpoint),
        }


def _radicand(t, y1, y2, p1, p2):
    s = 1.0 - t * t
    A = p1 * y1 - p2 * y2 + p1 * t
    return A, A * A + 4.0 * p2 * p2 * y1 * y1 * s, s


def _check_t(t):
    if not abs(t) < 1.0:
        raise DomainError(f"|t| must be < 1, got {t!r}")


def _sqrt_radicand(t, y1, y2, p1, p2):
    A, R, s = _radicand(t, y1, y2, p1, p2)
    scale = (abs(p1) + abs(p2)) ** 2 * (abs(y1) + abs(y2) + 1.0) ** 2
    if R < DEGENERACY_EPS * scale:
        raise DegeneratePointError(
            f"radicand {R:.3e} vanishes at t={t}, y=({y1}, {y2}), p=({p1}, {p2})"
        )
    return A, math.sqrt(R), s


def hamiltonian_value(pt: PhasePoint) -> float:
    """Maximised Pontryagin function over the circle of extreme controls."""
    _check_t(pt.t)
    t, y1, y2, p1, p2 = pt.t, pt.y1, pt.y2, pt.p1, pt.p2
    A, R, s = _radicand(t, y1, y2, p1, p2)
    return (p1 + (p1 * y1 - p2 * y2) * t + math.sqrt(max(R, 0.0))) / s


def _rhs(t, y1, y2, p1, p2):
    A, S, s = _sqrt_radicand(t, y1, y2, p1, p2)
    q = 4.0 * y1 * s / S
    dy1 = (1.0 + y1 * t + A * (y1 + t) / S) / s
    dy2 = (-y2 * t + (-A * y2) / S + q * p2 * y1) / s
    dp1 = -(p1 * t + A * p1 / S + q * p2 * p2) / s
    dp2 = (p2 * t + A * p2 / S) / s
    return dy1, dy2, dp1, dp2


def hamiltonian_rhs(pt: PhasePoint) -> np.ndarray:
    """``(dy1/dt, dy2/dt, dp1/dt, dp2/dt)`` of the Hamiltonian flow.

    Raises
    ------
    DegeneratePointError
        If the radicand is at a square-root branch point.
    """
    _check_t(pt.t)
    return np.array(_rhs(pt.t, pt.y1, pt.y2, pt.p1, pt.p2))


def _dH_dt(t, y1, y2, p1, p2, H):
    A, S, s = _sqrt_radicand(t, y1, y2, p1, p2)
    return H * (A + t * S) / (S * s)


def hamiltonian_dt(pt: PhasePoint) -> float:
    """Total time derivative of ``H`` along the flow (proportional to ``H``)."""
    _check_t(pt.t)
    return _dH_dt(pt.t, pt.y1, pt.y2, pt.p1, pt.p2, hamiltonian_value(pt))


def check_control_inequalities(pt: PhasePoint, rtol: float = 1e-12) -> bool:
    """True if the circle maximum of the Pontryagin function is the global one.

    Compares the circle maximum against the two remaining extreme points
    ``V = +-I`` of the relaxed control set. The second inequality is an
    equality at ``t = 0`` under the transversality condition, hence ``rtol``.
    """
    _check_t(pt.t)
    t, y1, y2, p1, p2 = pt.t, pt.y1, pt.y2, pt.p1, pt.p2
    A, R, s = _radicand(t, y1, y2, p1, p2)
    S = math.sqrt(max(R, 0.0))
    rhs_minus = -p1 * t - p1 * y1 - p2 * y2 + 2.0 * p2 * y2 * t
    rhs_plus = p1 * t + p1 * y1 + p2 * y2 + 2.0 * p2 * y2 * t
    slack = rtol * (S + abs(rhs_minus) + abs(rhs_plus) + 1.0)
    return S >= rhs_minus - slack and S >= rhs_plus - slack


def _flow(t, z):
    return _rhs(t, z[0], z[1], z[2], z[3])


def _flow_with_energy(t, z):
    d = _rhs(t, z[0], z[1], z[2], z[3])
    return (*d, _dH_dt(t, z[0], z[1], z[2], z[3], z[4]))


def integrate_flow(
    start: PhasePoint,
    t_end: float,
    tol: float = 1e-9,
    t_eval=None,
    n_samples: int = 101,
    method: str = "DOP853",
    track_energy: bool = False,
) -> Trajectory:
    """Integrate the Hamiltonian flow from ``start`` to ``t_end``.

    Either direction in time is allowed. Samples come from the integrator's
    dense output at ``t_eval`` (default: ``n_samples`` equispaced times).
    With ``track_energy`` the Hamiltonian is carried as a fifth state and
    advanced by its closed-form time derivative, independent of evaluating
    ``H`` on the trajectory.
    """
    for t in (start.t, t_end):
        if not -1.0 < t <= 0.0:
            raise DomainError(f"times must lie in (-1, 0], got {t!r}")
    z0 = list(start.state)
    fun = _flow
    if track_energy:
        z0.append(hamiltonian_value(start))
        fun = _flow_with_energy
    if t_eval is None:
        t_eval = np.linspace(start.t, t_end, n_samples)
    t_eval = np.asarray(t_eval, dtype=float)
    if t_end == start.t:
        z = np.tile(np.asarray(z0)[:, None], (1, len(t_eval)))
    else:
        sol = solve_ivp(
            fun, (start.t, t_end), z0, method=method, rtol=tol, atol=tol, dense_output=True
        )
        if sol.status != 0:
            raise IntegrationError(sol.message)
        z = sol.sol(t_eval)
        # dense output may overshoot the requested end by rounding
        z[:, t_eval == t_end] = sol.y[:, -1:]
    return Trajectory(
        t=t_eval.copy(),
        y=z[0:2].T.copy(),
        p=z[2:4].T.copy(),
        energy=z[4].copy() if track_energy else None,
    )


def _endpoint(r, theta):
    c, s = math.cos(theta), math.sin(theta)
    return PhasePoint(0.0, r * c, r * s, c, s)


def _shoot(x, a, t_start, tol, method):
    r, theta = math.exp(x[0]), x[1]
    z0 = _endpoint(r, theta).state
    sol = solve_ivp(_flow, (0.0, t_start), z0, method=method, rtol=tol, atol=tol)
    if sol.status != 0:
        raise IntegrationError(sol.message)
    return np.array([sol.y[0, -1] + a, sol.y[1, -1]])


def _newton_shoot(q, guess, tol, method, residual_tol):
    """One quasi-Newton solve for ``(r, theta)``; returns ``(r, theta, residual)``.

    Returns ``None`` when the solve fails or leaves the ``theta in (0, pi)``
    branch.
    """
    t_start = q.t_start
    x0 = np.array([math.log(guess[0]), guess[1]])

    def fun(x):
        try:
            return _shoot(x, q.a, t_start, tol, method)
        except (DegeneratePointError, IntegrationError, OverflowError):
            return np.array([1e3, 1e3])

    sol = root(fun, x0, method="hybr", options={"xtol": 1e-13, "eps": max(tol, 1e-15)})
    res = float(np.max(np.abs(sol.fun)))
    r, theta = math.exp(sol.x[0]), float(sol.x[1])
    if not (res <= residual_tol and 0.0 < theta < math.pi):
        return None, (r, theta, res)
    return (r, theta, res), None


def _seed_from_optimal_step(a):
    from .optimal_damping import optimal_step

    res = optimal_step(a)
    y1, y2 = res.y_star
    return res.gamma_star, (math.hypot(y1, y2), math.atan2(y2, y1))


def _continue_in_gamma(q, gamma0, seed, tol, method, residual_tol,
                       h0=0.01, h_max=0.02, h_min=1e-5, max_jump=0.1):
    """Track the ``theta in (0, pi)`` branch from ``gamma0`` to ``q.gamma``."""
    direction = 1.0 if q.gamma >= gamma0 else -1.0
    g, cur = gamma0, (seed[0], seed[1], 0.0)
    h = h0
    last = (seed[0], seed[1], float("inf"))
    while direction * (q.gamma - g) > 0:
        g_next = g + direction * h
        if direction * (g_next - q.gamma) > 0:
            g_next = q.gamma
        ok, failed = _newton_shoot(StepQuery(q.a, g_next), cur[:2], tol, method, residual_tol)
        # theta moves fast near gamma* for small a; only long steps can hop branches
        if ok is not None and (abs(ok[1] - cur[1]) <= max_jump or abs(g_next - g) <= 1e-3):
            g, cur = g_next, ok
            h = min(1.5 * h, h_max)
            continue
        last = failed or ok
        h *= 0.5
        if h < h_min:
            raise ShootingError(
                f"continuation in gamma stalled at gamma={g:.6f} for a={q.a}",
                residual=last[2],
                last_iterate=last[:2],
            )
    if g == gamma0:
        # no continuation step was taken; the seed itself still has to be verified
        ok, failed = _newton_shoot(q, cur[:2], tol, method, residual_tol)
        if ok is None:
            raise ShootingError(
                f"seed did not converge for a={q.a}, gamma={q.gamma}",
                residual=failed[2],
                last_iterate=failed[:2],
            )
        cur = ok
    return cur


def _nominal_trajectory(q, n_samples):
    c = nominal_c(q.a, q.gamma)
    t = np.linspace(q.t_start, 0.0, n_samples)
    y = np.column_stack([(c + t) / (1.0 - t), np.zeros_like(t)])
    p = np.column_stack([math.copysign(1.0, c) * (1.0 - t), np.zeros_like(t)])
    return Trajectory(t=t, y=y, p=p)


def solve_bvp(
    q: StepQuery,
    seed=None,
    tol: float = 1e-9,
    residual_tol: float = 1e-9,
    n_samples: int = 101,
    method: str = "DOP853",
) -> BoundResult:
    """Worst-case decrement after the damped step described by ``q``.

    Points to the right of the critical curve use the one-dimensional closed
    form ``a - a gamma + a^2 gamma``. Otherwise the endpoint
    ``y(0) = r (cos theta, sin theta)`` is found by shooting; the initial guess
    is ``seed`` if given, else the optimal-damping endpoint for the same ``a``
    continued in ``gamma``.

    Parameters
    ----------
    q : StepQuery
    seed : tuple of float, optional
        ``(r, theta)`` of a nearby solution, e.g. from a neighbouring query.
    tol : float
        Integrator tolerance (absolute and relative). Use ``1e-11`` for
        table-grade values.
    residual_tol : float
        Max-norm on ``y(-a gamma) - (-a, 0)`` accepted as converged.

    Raises
    ------
    ShootingError
        If no candidate on the ``theta in (0, pi)`` branch converges.
    """
    if classify_regime(q) is Regime.OneDim:
        lam = q.a - q.a * q.gamma + q.a * q.a * q.gamma
        return BoundResult(
            query=q,
            lambda_out=lam,
            regime=Regime.OneDim,
            trajectory=_nominal_trajectory(q, n_samples),
            endpoint=(-lam, 0.0),
        )

    candidates = []
    failures = []
    if seed is not None:
        ok, failed = _newton_shoot(q, seed, tol, method, residual_tol)
        if ok is not None:
            candidates.append(ok)
        else:
            failures.append(failed)
    if not candidates:
        try:
            gamma0, start = _seed_from_optimal_step(q.a)
            candidates.append(
                _continue_in_gamma(q, gamma0, start, tol, method, residual_tol)
            )
        except ShootingError as exc:
            failures.append((*(exc.last_iterate or (math.nan, math.nan)), exc.residual))
    if not candidates:
        r, theta, res = failures[-1]
        raise ShootingError(
            f"no converged shooting solution for a={q.a}, gamma={q.gamma}",
            residual=res,
            last_iterate=(r, theta),
        )

    r, theta, res = max(candidates, key=lambda c: c[0])
    traj = integrate_flow(_endpoint(r, theta), q.t_start, tol=tol, n_samples=n_samples,
                          method=method)
    traj = Trajectory(t=traj.t[::-1].copy(), y=traj.y[::-1].copy(), p=traj.p[::-1].copy())
    lam = max(r, bellman_1d(q.t_start, -q.a))
    return BoundResult(
        query=q,
        lambda_out=lam,
        regime=Regime.FullDim,
        trajectory=traj,
        shoot_residual=res,
        endpoint=(r * math.cos(theta), r * math.sin(theta)),
    )


def worst_case_decrement(a: float, gamma: float, **kwargs) -> float:
    """Shorthand for ``solve_bvp(StepQuery(a, gamma)).lambda_out``."""
    return solve_bvp(StepQuery(a, gamma), **kwargs).lambda_out


def sweep_bounds(a_values, gamma: float = 1.0, tol: float = 1e-9, **kwargs):
    """Solve a sequence of queries at fixed ``gamma``, warm-starting each solve.

    ``a_values`` should be sorted; each full-dimensional solution seeds the
    next one (continuation in ``a``). Failed points are returned as ``None``
    and do not break the sweep.
    """
    out = []
    seed = None
    for a in a_values:
        q = StepQuery(float(a), gamma)
        try:
            res = solve_bvp(q, seed=seed, tol=tol, **kwargs)
        except ShootingError:
            out.append(None)
            seed = None
            continue
        if res.regime is Regime.FullDim:
            y1, y2 = res.endpoint
            seed = (math.hypot(y1, y2), math.atan2(y2, y1))
        out.append(res)
    return out
