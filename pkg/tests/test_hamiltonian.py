import math

import numpy as np
import pytest
from scipy.optimize import brentq

from scnewton.critical_curve import Regime
from scnewton.errors import DomainError, ShootingError
from scnewton.hamiltonian import (
    PhasePoint,
    StepQuery,
    check_control_inequalities,
    hamiltonian_dt,
    hamiltonian_rhs,
    hamiltonian_value,
    integrate_flow,
    solve_bvp,
    sweep_bounds,
    worst_case_decrement,
)
from scnewton.onedim import bellman_1d


def random_points(n, seed=0):
    rng = np.random.default_rng(seed)
    pts = []
    while len(pts) < n:
        t = rng.uniform(-0.9, 0.0)
        y = rng.normal(scale=0.7, size=2)
        p = rng.normal(size=2)
        A = p[0] * y[0] - p[1] * y[1] + p[0] * t
        R = A * A + 4 * p[1] ** 2 * y[0] ** 2 * (1 - t * t)
        # keep away from the square-root branch point, where differences are meaningless
        if R > 1e-2 * (abs(p[0]) + abs(p[1])) ** 2:
            pts.append(PhasePoint(t, *y, *p))
    return pts


def numeric_partials(pt, h=1e-6):
    z = np.array([pt.y1, pt.y2, pt.p1, pt.p2])
    grad = np.empty(4)
    for i in range(4):
        e = np.zeros(4)
        e[i] = h
        hi = hamiltonian_value(PhasePoint(pt.t, *(z + e)))
        lo = hamiltonian_value(PhasePoint(pt.t, *(z - e)))
        grad[i] = (hi - lo) / (2 * h)
    return grad


def test_rhs_is_symplectic_gradient_of_h():
    worst = 0.0
    for pt in random_points(1000):
        g = numeric_partials(pt)
        expected = np.array([g[2], g[3], -g[0], -g[1]])
        got = hamiltonian_rhs(pt)
        worst = max(worst, np.max(np.abs(got - expected)) / max(np.max(np.abs(expected)), 1.0))
    assert worst <= 1e-6


def test_time_derivative_matches_difference_quotient():
    for pt in random_points(50, seed=1):
        if pt.t > -0.01:
            continue
        h = 1e-6
        z = pt.state
        d = hamiltonian_rhs(pt)
        after = PhasePoint(pt.t + h, *(z + h * d))
        before = PhasePoint(pt.t - h, *(z - h * d))
        fd = (hamiltonian_value(after) - hamiltonian_value(before)) / (2 * h)
        assert hamiltonian_dt(pt) == pytest.approx(fd, rel=1e-5, abs=1e-6)


def zero_energy_point(t, y1, y2):
    f = lambda phi: hamiltonian_value(PhasePoint(t, y1, y2, math.cos(phi), math.sin(phi)))
    phis = np.linspace(0.0, 2 * math.pi, 73)
    vals = [f(p) for p in phis]
    for a, b, fa, fb in zip(phis, phis[1:], vals, vals[1:]):
        if fa > 0 > fb:
            phi = brentq(f, a, b, xtol=1e-15)
            return PhasePoint(t, y1, y2, math.cos(phi), math.sin(phi))
    raise AssertionError("no zero of H on the circle of co-states")


@pytest.mark.parametrize("start", [(-0.05, -0.5, 0.1), (-0.1, -0.2, 0.3), (-0.05, 0.3, -0.2)])
def test_zero_energy_is_conserved(start):
    pt = zero_energy_point(*start)
    traj = integrate_flow(pt, -0.4, tol=1e-12, n_samples=41)
    drift = max(abs(hamiltonian_value(q)) for q in traj.points())
    assert drift <= 1e-8


def test_energy_integral_tracks_h():
    res = solve_bvp(StepQuery(0.5, 1.0), tol=1e-11)
    start = res.trajectory.points()[-1]
    traj = integrate_flow(start, -0.5, tol=1e-11, track_energy=True)
    direct = np.array([hamiltonian_value(q) for q in traj.points()])
    assert np.max(np.abs(direct - traj.energy)) <= 1e-8 * np.max(np.abs(direct))


def test_mirror_symmetry():
    for pt in random_points(20, seed=2):
        assert hamiltonian_value(pt.mirrored()) == pytest.approx(hamiltonian_value(pt), rel=1e-13)
        d, dm = hamiltonian_rhs(pt), hamiltonian_rhs(pt.mirrored())
        np.testing.assert_allclose(dm, d * np.array([1, -1, 1, -1]), rtol=1e-12, atol=1e-14)


@pytest.mark.parametrize("a,expected", [(0.25, 0.0658302428), (0.40, 0.1816461018), (0.70, 0.7519817648)])
def test_full_step_reference_values(a, expected):
    assert worst_case_decrement(a, 1.0, tol=1e-11) == pytest.approx(expected, abs=1e-9)


def test_solution_meets_boundary_conditions():
    res = solve_bvp(StepQuery(0.6, 0.9), tol=1e-11)
    assert res.regime is Regime.FullDim
    traj = res.trajectory
    assert traj.t[0] == pytest.approx(-0.54)
    np.testing.assert_allclose(traj.y[0], [-0.6, 0.0], atol=1e-8)
    y0, p0 = traj.y[-1], traj.p[-1]
    np.testing.assert_allclose(p0, y0 / np.linalg.norm(y0), atol=1e-12)
    assert res.lambda_out == pytest.approx(np.linalg.norm(y0), rel=1e-12)
    assert res.shoot_residual <= 1e-9


def test_control_inequalities_hold_along_solutions():
    for a in (0.3, 0.7, 0.95):
        res = solve_bvp(StepQuery(a, 1.0), tol=1e-11)
        assert all(check_control_inequalities(q, rtol=1e-9) for q in res.trajectory.points())


def test_full_dimensional_bound_dominates_1d():
    for a, g in ((0.4, 1.0), (0.8, 0.8)):
        assert worst_case_decrement(a, g) >= bellman_1d(-a * g, -a) - 1e-12


def test_one_dim_regime_closed_form():
    res = solve_bvp(StepQuery(0.5, 0.1))
    assert res.regime is Regime.OneDim
    assert res.lambda_out == pytest.approx(0.475, abs=1e-15)


def test_sweep_matches_cold_solves():
    sweep = sweep_bounds([0.3, 0.32, 0.34], tol=1e-11)
    for res in sweep:
        cold = solve_bvp(StepQuery(res.query.a, 1.0), tol=1e-11)
        assert res.lambda_out == pytest.approx(cold.lambda_out, abs=1e-9)


def test_bad_queries():
    with pytest.raises(DomainError):
        StepQuery(1.5, 1.0)
    with pytest.raises(DomainError):
        StepQuery(0.5, 0.0)
    with pytest.raises(DomainError):
        hamiltonian_value(PhasePoint(-1.0, 0.0, 0.0, 1.0, 0.0))


def test_bad_seed_falls_back():
    res = solve_bvp(StepQuery(0.5, 1.0), seed=(0.01, 3.1))
    assert res.lambda_out == pytest.approx(0.3051314992, abs=1e-8)


def test_shooting_error_carries_diagnostics():
    err = ShootingError("x", residual=0.5, last_iterate=(1.0, 2.0))
    assert err.residual == 0.5 and err.last_iterate == (1.0, 2.0)
