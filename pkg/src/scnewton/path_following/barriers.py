"""Self-concordant barrier oracles and the Newton kernels built on them."""
from __future__ import annotations

import math

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve, solve_triangular

from ..errors import DomainError

__all__ = [
    "BarrierOracle",
    "LogBarrierLP",
    "LogDetBarrier",
    "sum_log_barrier",
    "full_logdet_barrier",
    "svec_basis",
    "decrement",
    "next_tau",
    "newton_step",
]


class BarrierOracle:
    """Value, gradient and Hessian of a self-concordant function.

    Subclasses implement :meth:`eval` and :meth:`domain_check`. The Hessian
    must be positive definite on the domain; self-concordance itself is not
    checked.
    """

    dim: int

    def eval(self, x):
        raise NotImplementedError

    def domain_check(self, x) -> bool:
        raise NotImplementedError


class LogBarrierLP(BarrierOracle):
    """``-sum(log(b - A x))`` on the polyhedron ``A x < b``."""

    def __init__(self, A, b):
        self.A = np.asarray(A, dtype=float)
        self.b = np.asarray(b, dtype=float)
        self.dim = self.A.shape[1]

    def slack(self, x):
        return self.b - self.A @ x

    def domain_check(self, x):
        return bool(np.all(self.slack(x) > 0.0))

    def eval(self, x):
        s = self.slack(x)
        if np.any(s <= 0.0):
            raise DomainError("point outside the polyhedron")
        inv = 1.0 / s
        value = -np.sum(np.log(s))
        grad = self.A.T @ inv
        As = self.A * inv[:, None]
        return value, grad, As.T @ As


def sum_log_barrier(n):
    """``-sum(log(x_i))`` on the positive orthant of dimension ``n``."""
    return LogBarrierLP(-np.eye(n), np.zeros(n))


def svec_basis(n):
    """Frobenius-orthonormal basis of the symmetric ``n x n`` matrices.

    Returns an array of shape ``(n(n+1)/2, n, n)``.
    """
    mats = []
    for i in range(n):
        for j in range(i, n):
            E = np.zeros((n, n))
            if i == j:
                E[i, i] = 1.0
            else:
                E[i, j] = E[j, i] = 1.0 / math.sqrt(2.0)
            mats.append(E)
    return np.array(mats)


class LogDetBarrier(BarrierOracle):
    """``-log det X(x)`` with ``X(x) = offset + sum_j x_j basis[j]``.

    With a basis of an affine slice of the symmetric matrices this is the
    restriction of the log-det barrier to the slice, which remains
    self-concordant.
    """

    def __init__(self, offset, basis):
        self.offset = np.asarray(offset, dtype=float)
        self.basis = np.asarray(basis, dtype=float)
        self.dim = self.basis.shape[0]
        self.order = self.offset.shape[0]

    def matrix(self, x):
        return self.offset + np.tensordot(x, self.basis, axes=1)

    def domain_check(self, x):
        try:
            np.linalg.cholesky(self.matrix(x))
        except np.linalg.LinAlgError:
            return False
        return True

    def eval(self, x):
        X = self.matrix(x)
        try:
            L = np.linalg.cholesky(X)
        except np.linalg.LinAlgError:
            raise DomainError("matrix not positive definite") from None
        value = -2.0 * np.sum(np.log(np.diag(L)))
        Linv = solve_triangular(L, np.eye(self.order), lower=True)
        # Y_j = L^-1 B_j L^-T; then grad_j = -tr(Y_j), hess_jk = <Y_j, Y_k>
        Y = Linv @ self.basis @ Linv.T
        grad = -np.trace(Y, axis1=1, axis2=2)
        Yf = Y.reshape(self.dim, -1)
        return value, grad, Yf @ Yf.T


def full_logdet_barrier(n):
    """``-log det X`` on all positive definite ``n x n`` matrices."""
    return LogDetBarrier(np.zeros((n, n)), svec_basis(n))


def _factor(F, x, tau, c):
    _, grad, hess = F.eval(x)
    try:
        cho = cho_factor(hess, lower=True)
    except LinAlgError:
        raise DomainError("Hessian is not positive definite") from None
    return grad + tau * np.asarray(c, dtype=float), cho


def decrement(F: BarrierOracle, x, tau: float, c) -> float:
    """Newton decrement of ``F + tau <c, .>`` at ``x``."""
    d, cho = _factor(F, x, tau, c)
    return math.sqrt(max(float(d @ cho_solve(cho, d)), 0.0))


def next_tau(F: BarrierOracle, x, tau_prev: float, c, lambda_bar: float) -> float:
    """Largest ``tau`` with decrement at most ``lambda_bar``.

    The squared decrement is a quadratic in ``tau``; the root is taken as an
    increment over ``tau_prev`` to avoid cancellation at large ``tau``.
    """
    d, cho = _factor(F, x, tau_prev, c)
    c = np.asarray(c, dtype=float)
    Hc = cho_solve(cho, c)
    alpha = float(c @ Hc)
    beta = float(d @ Hc)
    slack = lambda_bar ** 2 - float(d @ cho_solve(cho, d))
    if slack < -1e-12 * max(lambda_bar ** 2, 1.0):
        raise AssertionError(
            f"decrement {math.sqrt(lambda_bar ** 2 - slack):.6g} at tau_prev exceeds {lambda_bar}"
        )
    slack = max(slack, 0.0)
    sq = math.sqrt(beta * beta + alpha * slack)
    step = (sq - beta) / alpha if beta <= 0.0 else slack / (beta + sq)
    return tau_prev + step


def newton_step(F: BarrierOracle, x, tau: float, c, gamma: float):
    """Damped Newton step ``x - gamma H^{-1}(F'(x) + tau c)``."""
    if not 0.0 < gamma <= 1.0:
        raise DomainError(f"gamma must lie in (0, 1], got {gamma!r}")
    d, cho = _factor(F, x, tau, c)
    x_new = np.asarray(x, dtype=float) - gamma * cho_solve(cho, d)
    if not F.domain_check(x_new):
        raise DomainError("Newton step left the domain of the barrier")
    return x_new
