"""Two-phase thin-film quasi-stationary solver."""

from ._core import (
    CoupledConfig,
    GrowthMode,
    Grid,
    ModelParams,
    SolutionState,
    TractionKind,
    TractionSpec,
    build_grid,
    evolve_heights,
    lower_bound_certificate,
    monod,
    run_fixed_point,
    run_mms,
    run_verify,
    solve_nutrient,
    solve_transport,
)

__all__ = [
    "CoupledConfig",
    "GrowthMode",
    "Grid",
    "ModelParams",
    "SolutionState",
    "TractionKind",
    "TractionSpec",
    "build_grid",
    "evolve_heights",
    "lower_bound_certificate",
    "monod",
    "run_fixed_point",
    "run_mms",
    "run_verify",
    "solve_nutrient",
    "solve_transport",
]
