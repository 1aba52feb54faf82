"""Generic optimization kernels: LP solver, flow oracle, norm cutting planes."""

from .flow import (
    Arc,
    FlowNetwork,
    FlowResult,
    FlowStatus,
    max_flow_value,
    solve_min_cost_flow,
)
from .lp import (
    FEASIBILITY_TOL,
    GAP_REL_TOL,
    LinearProgram,
    LpSolution,
    LpStatus,
    NumericalFailure,
    solve_lp,
)
from .socp import (
    NormAugmentedResult,
    NormAugmentedStatus,
    solve_norm_augmented,
)

__all__ = [
    "Arc",
    "FlowNetwork",
    "FlowResult",
    "FlowStatus",
    "max_flow_value",
    "solve_min_cost_flow",
    "FEASIBILITY_TOL",
    "GAP_REL_TOL",
    "LinearProgram",
    "LpSolution",
    "LpStatus",
    "NumericalFailure",
    "solve_lp",
    "NormAugmentedResult",
    "NormAugmentedStatus",
    "solve_norm_augmented",
]
