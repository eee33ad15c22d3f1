"""Sparse PCA with multiple components on disjoint supports."""

__version__ = "0.1.0"

from .baselines import OracleResult, appendix_example, brute_force_opt, deflate_greedy, tpower_single
from .components import ComponentSet
from .errors import (
    CapacityExceeded,
    InfeasibleSparsity,
    InternalInvariantViolation,
    InvalidInput,
    ParseError,
    SpcaError,
    ZeroMatrixError,
)
from .linalg import (
    EigFactor,
    column_variances,
    explained_variance,
    gram_from_data,
    sym_eig,
    sym_eig_truncated,
)
from .matching import gen_bigraph, max_weight_perfect_matching, supports_from_matching
from .net import build_sphere_net, cartesian_power_stream, covering_check
from .sketch import SketchSpec, gaussian_sketch, svd_sketch
from .solver import SolverConfig, SolveReport, candidate_solution, solve_multi_spca

__all__ = [
    "CapacityExceeded",
    "ComponentSet",
    "EigFactor",
    "InfeasibleSparsity",
    "InternalInvariantViolation",
    "InvalidInput",
    "OracleResult",
    "ParseError",
    "SketchSpec",
    "SolveReport",
    "SolverConfig",
    "SpcaError",
    "ZeroMatrixError",
    "appendix_example",
    "brute_force_opt",
    "build_sphere_net",
    "candidate_solution",
    "cartesian_power_stream",
    "column_variances",
    "covering_check",
    "deflate_greedy",
    "explained_variance",
    "gaussian_sketch",
    "gen_bigraph",
    "gram_from_data",
    "max_weight_perfect_matching",
    "solve_multi_spca",
    "supports_from_matching",
    "svd_sketch",
    "sym_eig",
    "sym_eig_truncated",
    "tpower_single",
]
