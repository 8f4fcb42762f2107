"""Doubly stochastic primal-dual coordinate solvers for bilinear saddle-point problems."""

from ._dspdc import (
    CapacityError,
    ConfigError,
    ConsistencyError,
    NumericalError,
    ParseError,
    Problem,
    ReferenceSolution,
    SaddlePoint,
    SolverParams,
    UnsupportedOperation,
    __version__,
    certify_reference,
    compute_params,
    distance_rate,
    dual_objective,
    duality_gap,
    gap_rate,
    gen_factorized,
    gen_factorized_reduced,
    gen_lower_bound,
    gen_matrix_risk,
    gen_synthetic,
    load_problem,
    primal_objective,
    problem_from_json,
    run_experiment,
    save_problem,
    scale_constant_exact,
    scale_constant_heuristic,
    sdca,
    solve,
    spdc,
    spectral_norm_sq,
    stationarity_residual,
    verify_theorems,
)

__all__ = [
    "CapacityError",
    "ConfigError",
    "ConsistencyError",
    "NumericalError",
    "ParseError",
    "Problem",
    "ReferenceSolution",
    "SaddlePoint",
    "SolverParams",
    "UnsupportedOperation",
    "__version__",
    "certify_reference",
    "compute_params",
    "distance_rate",
    "dual_objective",
    "duality_gap",
    "gap_rate",
    "gen_factorized",
    "gen_factorized_reduced",
    "gen_lower_bound",
    "gen_matrix_risk",
    "gen_synthetic",
    "load_problem",
    "primal_objective",
    "problem_from_json",
    "run_experiment",
    "save_problem",
    "scale_constant_exact",
    "scale_constant_heuristic",
    "sdca",
    "solve",
    "spdc",
    "spectral_norm_sq",
    "stationarity_residual",
    "verify_theorems",
]
