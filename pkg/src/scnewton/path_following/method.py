"""Short-step primal path-following with pluggable step policies."""
from __future__ import annotations

import csv
import enum
import io
import json
import math
from dataclasses import asdict, dataclass, field

from ..errors import DivergenceError
from .barriers import decrement, newton_step, next_tau
from .tuning import ClassicalVariant, classical_bound, classical_damping

__all__ = [
    "StepPolicy",
    "PathFollowConfig",
    "IterationRecord",
    "PathFollowRun",
    "SETUPS",
    "setup_config",
    "step_bound",
    "run",
]


class StepPolicy(enum.Enum):
    FullStep = "full"
    FixedDamping = "fixed"
    OptimalDamping = "optimal"
    TraditionalDamping = "traditional"


@dataclass(frozen=True)
class PathFollowConfig:
    """Parameters of one short-step run.

    ``gamma`` is used only by ``FixedDamping``. ``OptimalDamping`` takes
    the exact optimal damping unless ``use_approx_gamma`` selects the
    polynomial approximation.
    """

    lambda_bar: float
    step_policy: StepPolicy = StepPolicy.FullStep
    gamma: float = 1.0
    tau0: float = 1.0
    tau_max: float = 1e4
    max_iters: int = 10_000
    use_approx_gamma: bool = False

    def __post_init__(self):
        if not 0.0 < self.lambda_bar < 1.0:
            raise ValueError(f"lambda_bar must lie in (0, 1), got {self.lambda_bar}")
        if not self.tau0 < self.tau_max:
            raise ValueError("tau0 must be below tau_max")
        object.__setattr__(self, "step_policy", StepPolicy(self.step_policy))


@dataclass(frozen=True)
class IterationRecord:
    k: int
    tau: float
    rho_before: float
    rho_after: float
    gamma_used: float


#: The four setups compared in the experiment, by name.
SETUPS = {
    "traditional-full": dict(lambda_bar=0.2291, step_policy=StepPolicy.FullStep),
    "tight-full": dict(lambda_bar=0.394257, step_policy=StepPolicy.FullStep),
    "traditional-damped": dict(lambda_bar=0.2910, step_policy=StepPolicy.TraditionalDamping),
    "tight-optimal": dict(lambda_bar=0.442946, step_policy=StepPolicy.OptimalDamping),
}


def setup_config(name: str, **overrides) -> PathFollowConfig:
    if name not in SETUPS:
        raise KeyError(f"unknown setup {name!r}; choose from {sorted(SETUPS)}")
    return PathFollowConfig(**{**SETUPS[name], **overrides})


def _gamma_rule(config):
    policy = config.step_policy
    if policy is StepPolicy.FullStep:
        return lambda rho: 1.0
    if policy is StepPolicy.FixedDamping:
        return lambda rho: config.gamma
    if policy is StepPolicy.TraditionalDamping:
        return classical_damping
    if config.use_approx_gamma:
        from ..approximations import approx_opt_gamma

        return approx_opt_gamma
    from .tuning import optimal_gamma_curve

    return optimal_gamma_curve()


def step_bound(config: PathFollowConfig, gamma=None) -> float:
    """Worst-case decrement after a step taken at decrement ``lambda_bar``."""
    from ..hamiltonian import worst_case_decrement
    from ..optimal_damping import optimal_step

    lam, policy = config.lambda_bar, config.step_policy
    if policy is StepPolicy.TraditionalDamping:
        return classical_bound(lam, ClassicalVariant.Damped)
    if policy is StepPolicy.OptimalDamping and not config.use_approx_gamma:
        return optimal_step(lam).lambda_out
    if gamma is None:
        gamma = {StepPolicy.FullStep: 1.0, StepPolicy.FixedDamping: config.gamma}.get(policy)
        if gamma is None:
            from ..approximations import approx_opt_gamma

            gamma = approx_opt_gamma(lam)
    return worst_case_decrement(lam, min(gamma, 1.0), tol=1e-10)


@dataclass
class PathFollowRun:
    config: PathFollowConfig
    records: list = field(default_factory=list)
    bound: float = float("nan")
    tau0: float = 1.0

    @property
    def iterations(self):
        return len(self.records)

    @property
    def final_tau(self):
        return self.records[-1].tau if self.records else self.tau0

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["k", "tau", "rho_before", "rho_after", "gamma_used"])
        for r in self.records:
            writer.writerow([r.k, repr(r.tau), repr(r.rho_before), repr(r.rho_after), repr(r.gamma_used)])
        return buf.getvalue()

    def to_json(self):
        cfg = asdict(self.config)
        cfg["step_policy"] = self.config.step_policy.value
        doc = {
            "config": cfg,
            "bound": self.bound,
            "tau0": self.tau0,
            "iterations": self.iterations,
            "records": [asdict(r) for r in self.records],
        }
        return json.dumps(doc, sort_keys=True)


def run(F, c, x0, config: PathFollowConfig, bound=None) -> PathFollowRun:
    """Follow the central path of ``F + tau <c, .>`` from ``config.tau0``.

    Each iteration moves ``tau`` as far as the decrement at the current
    point allows (``<= lambda_bar``), then takes one damped Newton step.

    Parameters
    ----------
    F : BarrierOracle
    c : array_like
    x0 : array_like
        Point with decrement at most the policy's post-step bound at ``tau0``.
    config : PathFollowConfig
    bound : float, optional
        Worst-case post-step decrement to enforce; computed from the exact
        pipeline when omitted.

    Raises
    ------
    DivergenceError
        If a post-step decrement exceeds the worst-case bound (plus 1e-6) or
        reaches 1.
    """
    gamma_of = _gamma_rule(config)
    if bound is None:
        bound = step_bound(config)
    out = PathFollowRun(config=config, bound=bound, tau0=config.tau0)
    x, tau = x0, config.tau0
    for k in range(1, config.max_iters + 1):
        if tau >= config.tau_max:
            break
        tau = next_tau(F, x, tau, c, config.lambda_bar)
        rho = decrement(F, x, tau, c)
        gamma = float(gamma_of(min(rho, config.lambda_bar)))
        x = newton_step(F, x, tau, c, gamma)
        rho_after = decrement(F, x, tau, c)
        if rho_after >= 1.0 or rho_after > bound + 1e-6:
            raise DivergenceError(
                f"iteration {k}: decrement {rho_after:.6g} after the step exceeds bound {bound:.6g}"
            )
        out.records.append(IterationRecord(k, tau, rho, rho_after, gamma))
    return out
