"""Short-step path-following: barriers, parameter tuning and the method itself."""
from .barriers import (
    BarrierOracle,
    LogBarrierLP,
    LogDetBarrier,
    decrement,
    full_logdet_barrier,
    newton_step,
    next_tau,
    sum_log_barrier,
)
from .method import (
    SETUPS,
    IterationRecord,
    PathFollowConfig,
    PathFollowRun,
    StepPolicy,
    run,
    setup_config,
    step_bound,
)
from .problems import Problem, ProblemKind, make_problem, problem_from_json
from .tuning import (
    ClassicalVariant,
    TunePolicy,
    TunerResult,
    classical_bound,
    classical_damping,
    tune,
)
