from .lp import (
    EXPERIMENTS,
    ConstraintPolicy,
    LPProblem,
    build_lp,
    dump_lp,
    parse_lp_dump,
)
from .simplex import (
    INFEASIBLE,
    OPTIMAL,
    UNBOUNDED,
    LPSolution,
    certify,
    dual_objective,
    duality_gap,
    solve_simplex,
)
from .validation import ValidationReport, scale_factors_csv, validate_solution

__all__ = [
    "EXPERIMENTS", "ConstraintPolicy", "LPProblem", "build_lp", "dump_lp",
    "parse_lp_dump", "INFEASIBLE", "OPTIMAL", "UNBOUNDED", "LPSolution", "certify",
    "dual_objective", "duality_gap", "solve_simplex", "ValidationReport",
    "scale_factors_csv", "validate_solution",
]
