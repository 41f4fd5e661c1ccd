"""Seeded random test problems for the path-following experiments."""
from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import null_space

from .barriers import BarrierOracle, LogBarrierLP, LogDetBarrier, decrement, newton_step, svec_basis

__all__ = ["ProblemKind", "Problem", "make_problem", "center", "problem_from_json"]

MAX_ATTEMPTS = 10
CENTER_TOL = 0.05


class ProblemKind(enum.Enum):
    LogBarrierLP = "lp"
    LogDetSDP = "sdp"


@dataclass
class Problem:
    """A barrier, a linear objective and a starting point near the central path.

    Iterating yields ``(F, c, x0, tau0)``.
    """

    F: BarrierOracle
    c: np.ndarray
    x0: np.ndarray
    tau0: float
    kind: ProblemKind
    seed: int
    size: dict
    data: dict = field(default_factory=dict, repr=False)

    def __iter__(self):
        return iter((self.F, self.c, self.x0, self.tau0))

    def to_json(self):
        def enc(v):
            return v.tolist() if isinstance(v, np.ndarray) else v

        doc = {
            "kind": self.kind.value,
            "seed": self.seed,
            "size": self.size,
            "tau0": self.tau0,
            "c": self.c.tolist(),
            "x0": self.x0.tolist(),
            "data": {k: enc(v) for k, v in self.data.items()},
        }
        return json.dumps(doc, sort_keys=True)


def problem_from_json(text):
    """Rebuild a :class:`Problem` written by :meth:`Problem.to_json`."""
    doc = json.loads(text)
    kind = ProblemKind(doc["kind"])
    data = {k: np.asarray(v, dtype=float) for k, v in doc["data"].items()}
    if kind is ProblemKind.LogBarrierLP:
        F = LogBarrierLP(data["A"], data["b"])
    else:
        F = LogDetBarrier(data["offset"], data["basis"])
    return Problem(
        F=F,
        c=np.asarray(doc["c"], dtype=float),
        x0=np.asarray(doc["x0"], dtype=float),
        tau0=float(doc["tau0"]),
        kind=kind,
        seed=int(doc["seed"]),
        size=doc["size"],
        data=data,
    )


def center(F, c, x, tau, tol=CENTER_TOL, max_iter=200):
    """Damped Newton steps ``1/(1 + rho)`` on ``F + tau <c, .>`` until ``rho <= tol``.

    The classical damping keeps every iterate feasible and converges from
    any starting point.
    """
    for _ in range(max_iter):
        rho = decrement(F, x, tau, c)
        if rho <= tol:
            return x
        x = newton_step(F, x, tau, c, 1.0 / (1.0 + rho))
    raise RuntimeError(f"centering did not reach decrement {tol} in {max_iter} steps")


def _sym(rng, n):
    G = rng.standard_normal((n, n))
    return (G + G.T) / 2.0


def _make_sdp(rng, order, n_constraints):
    n = order
    A = np.array([_sym(rng, n) for _ in range(n_constraints)])
    G = rng.standard_normal((n, n))
    X_feas = G @ G.T / n + np.eye(n)
    # dual-feasible objective: C = S + sum y_i A_i with S > 0 keeps the primal bounded
    H = rng.standard_normal((n, n))
    S = H @ H.T / n + np.eye(n)
    y = rng.standard_normal(n_constraints)
    C = S + np.tensordot(y, A, axes=1)
    basis_all = svec_basis(n)
    svecA = np.tensordot(A, basis_all, axes=([1, 2], [1, 2]))
    N = null_space(svecA)
    basis = np.tensordot(N.T, basis_all, axes=1)
    F = LogDetBarrier(X_feas, basis)
    c = np.tensordot(basis, C, axes=([1, 2], [0, 1]))
    data = {"offset": X_feas, "basis": basis, "A": A, "b": np.tensordot(A, X_feas, axes=2), "C": C}
    return F, c, np.zeros(F.dim), data


def _make_lp(rng, n, m):
    A = rng.standard_normal((m, n))
    if np.linalg.matrix_rank(A) < n:
        return None
    x_feas = rng.standard_normal(n)
    b = A @ x_feas + rng.uniform(0.5, 1.5, m)
    y = rng.uniform(0.5, 1.5, m)
    c = -A.T @ y
    F = LogBarrierLP(A, b)
    return F, c, x_feas, {"A": A, "b": b}


def make_problem(kind, seed: int, size=None, tau0: float = 1.0) -> Problem:
    """Generate a seeded problem with a point near the central path at ``tau0``.

    Parameters
    ----------
    kind : ProblemKind or str
        ``"lp"`` for ``-sum log(b - A x)`` or ``"sdp"`` for ``-log det`` on a
        random affine slice of the PSD cone.
    seed : int
    size : dict, optional
        LP: ``{"n": variables, "m": constraints}`` (``m <= 100``);
        SDP: ``{"order": matrix order, "constraints": count}`` (order ``<= 25``).
    tau0 : float
        Path parameter at which the returned ``x0`` is centred to decrement
        ``<= 0.05``.
    """
    kind = ProblemKind(kind)
    rng = np.random.default_rng(seed)
    if kind is ProblemKind.LogBarrierLP:
        size = {"n": 20, "m": 40, **(size or {})}
        if size["m"] > 100 or size["m"] < size["n"]:
            raise ValueError(f"LP needs n <= m <= 100, got {size}")
        build = lambda: _make_lp(rng, size["n"], size["m"])
    else:
        size = {"order": 20, **(size or {})}
        size.setdefault("constraints", size["order"])
        if size["order"] > 25:
            raise ValueError(f"SDP order must be <= 25, got {size['order']}")
        build = lambda: _make_sdp(rng, size["order"], size["constraints"])
    for _ in range(MAX_ATTEMPTS):
        made = build()
        if made is None:
            continue
        F, c, x, data = made
        if F.domain_check(x):
            x0 = center(F, c, x, tau0)
            return Problem(F, c, x0, tau0, kind, seed, size, data)
    raise RuntimeError(f"could not generate a feasible {kind.value} instance in {MAX_ATTEMPTS} tries")
