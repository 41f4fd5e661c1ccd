"""Acceptance suite: one check per criterion, with a PASS/FAIL line for each.

Run under pytest (lines appear in the terminal summary) or directly with
``python tests/test_acceptance.py``.
"""
import functools
import math
import sys
from pathlib import Path

import numpy as np
import pytest
from scipy.integrate import solve_ivp

sys.path.insert(0, str(Path(__file__).parent))

from reference_values import CLAIMED, REFERENCE_TABLE, TUNED  # noqa: E402

# criterion -> (passed, detail)
RESULTS = {}


def record(name, passed, detail):
    RESULTS[name] = (bool(passed), detail)
    print(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")
    return bool(passed)


def summary_lines():
    return [f"{'PASS' if ok else 'FAIL'}  {name}: {detail}" for name, (ok, detail) in RESULTS.items()]


@functools.lru_cache(maxsize=None)
def computed_table():
    from scnewton.reporting import bound_table

    return {r.lambda_bar: r for r in bound_table([row[0] for row in REFERENCE_TABLE])}


def check_table_optimal():
    rows = computed_table()
    err_b = max(abs(rows[a].bound_opt - b) for a, _, b, _ in REFERENCE_TABLE)
    err_g = max(abs(rows[a].gamma_star - g) for a, _, _, g in REFERENCE_TABLE)
    return record(
        "1 optimal-step columns",
        err_b <= 1e-6 and err_g <= 1e-6,
        f"{len(rows)} rows, max |bound err| {err_b:.2e}, max |gamma err| {err_g:.2e} (tol 1e-6)",
    )


def check_table_full_values():
    rows = computed_table()
    errs = {a: (math.inf if rows[a].bound_full is None else abs(rows[a].bound_full - f))
            for a, f, _, _ in REFERENCE_TABLE if f is not None}
    worst = max(errs, key=errs.get)
    return record(
        "2a full-step column values",
        errs[worst] <= 1e-5,
        f"{len(errs)} values, max err {errs[worst]:.2e} at {worst} (tol 1e-5)",
    )


def check_table_full_blanks():
    rows = computed_table()
    blanks = [a for a, f, _, _ in REFERENCE_TABLE if f is None]
    filled = {a: rows[a].bound_full for a in blanks if rows[a].bound_full is not None}
    detail = ", ".join(f"{a}: converged to {v:.6f}" for a, v in filled.items()) or "all blank"
    return record("2b full-step blanks", not filled, f"expected blanks at {blanks}; {detail}")


def check_tuner():
    from scnewton.path_following.tuning import tune

    full, opt = tune("full"), tune("optimal")
    lf, gf, _ = TUNED["full"]
    lo, go, gamma = TUNED["optimal"]
    ok = (
        abs(full.lambda_star - lf) <= 1e-3 and abs(full.gap - gf) <= 1e-4
        and abs(opt.lambda_star - lo) <= 1e-3 and abs(opt.gap - go) <= 1e-4
        and abs(opt.gamma_at_star - gamma) <= 1e-3
    )
    return record(
        "3 tuner",
        ok,
        f"full {full.lambda_star:.6f}/{full.gap:.10f}; optimal {opt.lambda_star:.6f}/"
        f"{opt.gap:.10f}/gamma {opt.gamma_at_star:.6f}",
    )


def check_classical():
    from scnewton.path_following.tuning import tune

    a, b = tune("classical-full"), tune("classical-damped")
    ok = all(
        abs(r.lambda_star - TUNED[k][0]) <= 1e-3 and abs(r.gap - TUNED[k][1]) <= 1e-3
        for r, k in ((a, "classical-full"), (b, "classical-damped"))
    )
    return record(
        "4 classical baselines",
        ok,
        f"full {a.lambda_star:.5f}/{a.gap:.5f}; damped {b.lambda_star:.5f}/{b.gap:.5f}",
    )


def check_audits():
    from scnewton.approximations import FormulaId, audit

    reports = [audit(f) for f in FormulaId]
    ok = all(r.max_abs_error <= CLAIMED[r.formula_id.value] for r in reports)
    detail = "; ".join(f"{r.formula_id.value} {r.max_abs_error:.6f} <= {CLAIMED[r.formula_id.value]}"
                       for r in reports)
    return record("5 approximation audits", ok, detail)


def check_focal_point():
    from scnewton.critical_curve import delta_y2, delta_y2_rhs, focal_time

    t_err = abs(focal_time(-1.0) - (1.0 - 2.0 ** (2.0 / 3.0)))
    worst = 0.0
    for c in (-3.0, -2.0, -1.2, -1.0, -0.8, -0.4, -0.05):
        sol = solve_ivp(lambda t, d: delta_y2_rhs(t, d, c), (0.0, -0.9), [1.0],
                        method="DOP853", rtol=1e-13, atol=1e-14, dense_output=True)
        for t in np.linspace(-0.9, 0.0, 46):
            worst = max(worst, abs(delta_y2(t, c) - sol.sol(t)[0]))
    return record(
        "6 focal point",
        t_err <= 1e-10 and worst <= 1e-8,
        f"|t* - (1 - 2^(2/3))| {t_err:.1e}; closed form vs ODE {worst:.1e}",
    )


def check_invariants():
    from test_hamiltonian import numeric_partials, random_points, zero_energy_point
    from scnewton.hamiltonian import (StepQuery, hamiltonian_rhs, hamiltonian_value,
                                      integrate_flow, solve_bvp)
    from scnewton.optimal_damping import circle_residual, optimal_step

    drift = 0.0
    for start in ((-0.05, -0.5, 0.1), (-0.1, -0.2, 0.3), (-0.05, 0.3, -0.2)):
        traj = integrate_flow(zero_energy_point(*start), -0.4, tol=1e-12, n_samples=41)
        drift = max(drift, max(abs(hamiltonian_value(q)) for q in traj.points()))

    grad_err = 0.0
    for pt in random_points(1000):
        g = numeric_partials(pt)
        expected = np.array([g[2], g[3], -g[0], -g[1]])
        grad_err = max(grad_err, np.max(np.abs(hamiltonian_rhs(pt) - expected))
                       / max(np.max(np.abs(expected)), 1.0))

    circle = max(abs(circle_residual(*optimal_step(a).y_star)) for a in np.linspace(0.02, 0.98, 49))

    cross = 0.0
    for a in (0.1, 0.3, 0.5, 0.7):
        opt = optimal_step(a)
        cross = max(cross, abs(solve_bvp(StepQuery(a, opt.gamma_star), tol=1e-11).lambda_out
                               - opt.lambda_out))

    scan = 0.0
    for a in (0.3, 0.5):
        target = optimal_step(a).gamma_star
        gammas = np.arange(target - 0.03, min(target + 0.03, 1.0), 1e-3)
        seed, vals = None, []
        for g in gammas:
            res = solve_bvp(StepQuery(a, float(g)), seed=seed, tol=1e-10)
            vals.append(res.lambda_out)
            y1, y2 = res.endpoint
            seed = (math.hypot(y1, y2), math.atan2(y2, y1)) if y2 > 0 else None
        scan = max(scan, abs(gammas[int(np.argmin(vals))] - target))

    ok = drift <= 1e-8 and grad_err <= 1e-6 and circle <= 1e-10 and cross <= 1e-5 and scan <= 2e-3
    return record(
        "7 invariant suite",
        ok,
        f"H drift {drift:.1e}; gradient rel err {grad_err:.1e}; circle {circle:.1e}; "
        f"BVP vs planar {cross:.1e}; gamma scan {scan:.1e}",
    )


RHO_GRID = np.round(np.arange(0.05, 0.951, 0.05), 12)
GAMMAS = (0.6, 0.8, 0.9, 1.0)


def _bound_lookup():
    from scnewton.hamiltonian import sweep_bounds
    from scnewton.optimal_damping import optimal_step

    table = {}
    for g in GAMMAS:
        for rho, res in zip(RHO_GRID, sweep_bounds(RHO_GRID, gamma=g, tol=1e-11)):
            table[(float(rho), g)] = res.lambda_out
    for rho in RHO_GRID:
        opt = optimal_step(float(rho))
        table[(float(rho), "opt")] = (opt.gamma_star, opt.lambda_out)
    return table


def _random_trial(rng, table):
    from scnewton.path_following.barriers import decrement, full_logdet_barrier, newton_step, sum_log_barrier

    rho = float(rng.choice(RHO_GRID))
    if rng.random() < 0.8:
        gamma = GAMMAS[rng.integers(len(GAMMAS))]
        bound = table[(rho, gamma)]
    else:
        gamma, bound = table[(rho, "opt")]
    n = int(rng.integers(1, 6))
    if rng.random() < 0.5:
        F = sum_log_barrier(n)
        x = rng.uniform(0.2, 5.0, n)
    else:
        F = full_logdet_barrier(n)
        G = rng.standard_normal((n, n))
        X = G @ G.T + 0.1 * np.eye(n)
        x = np.tensordot(F.basis, X, axes=([1, 2], [0, 1]))
    _, grad, H = F.eval(x)
    m = F.dim
    # mix of generic directions and ones concentrated on one or two coordinates
    mode = rng.integers(3)
    if mode == 0:
        v = rng.standard_normal(m)
    else:
        v = np.zeros(m)
        idx = rng.choice(m, size=min(mode, m), replace=False)
        v[idx] = rng.standard_normal(len(idx))
    L = np.linalg.cholesky(H)
    g = L @ v
    g *= rho / math.sqrt(g @ np.linalg.solve(H, g))
    c = g - grad
    x_new = newton_step(F, x, 1.0, c, gamma)
    return decrement(F, x_new, 1.0, c) - bound


def check_soundness(trials=10_000, seed=2024):
    table = _bound_lookup()
    rng = np.random.default_rng(seed)
    excess = max(_random_trial(rng, table) for _ in range(trials))
    return record(
        "8 soundness spot test",
        excess <= 1e-6,
        f"{trials} trials, max(measured - bound) {excess:.2e} (tol 1e-6)",
    )


def check_path_following():
    from scnewton.path_following import make_problem, run, setup_config

    problem = make_problem("sdp", 7, {"order": 20})
    names = ("traditional-full", "traditional-damped", "tight-full", "tight-optimal")
    iters = {}
    for name in names:
        cfg = setup_config(name, tau0=problem.tau0, tau_max=problem.tau0 * 1e4)
        iters[name] = run(problem.F, problem.c, problem.x0, cfg).iterations
    ratio = iters["tight-optimal"] / iters["traditional-full"]
    ordered = all(iters[a] >= iters[b] for a, b in zip(names, names[1:]))
    return record(
        "9 path-following experiment",
        0.40 <= ratio <= 0.65 and ordered,
        f"order-20 SDP seed 7, iterations {iters}, ratio {ratio:.3f}",
    )


def test_table_optimal_columns():
    assert check_table_optimal()


def test_table_full_step_values():
    assert check_table_full_values()


def test_table_full_step_blanks():
    assert check_table_full_blanks()


def test_tuner_values():
    assert check_tuner()


def test_classical_baselines():
    assert check_classical()


@pytest.mark.slow
def test_approximation_audits():
    assert check_audits()


def test_focal_point():
    assert check_focal_point()


@pytest.mark.slow
def test_invariant_suite():
    assert check_invariants()


@pytest.mark.slow
def test_soundness_spot_test():
    assert check_soundness()


def test_path_following_experiment():
    assert check_path_following()


CHECKS = (check_table_optimal, check_table_full_values, check_table_full_blanks, check_tuner,
          check_classical, check_audits, check_focal_point, check_invariants, check_soundness,
          check_path_following)

if __name__ == "__main__":
    outcomes = [check() for check in CHECKS]
    print(f"{sum(outcomes)}/{len(outcomes)} criteria passed")
    sys.exit(0 if all(outcomes) else 1)
