"""Derivative-free greedy coordinate-descent global optimization on the unit simplex.

Public surface:

* :mod:`simplexopt.simplex`    -- point validation, distances, uniform sampling;
* :mod:`simplexopt.gcdvss`     -- the optimizer core (runs, restarts, tuning);
* :mod:`simplexopt.transforms` -- slack / linear-constraint / hypercube bridges;
* :mod:`simplexopt.benchfns`   -- benchmark registry with known optima;
* :mod:`simplexopt.harness`    -- seeded multi-start campaigns and reports;
* :mod:`simplexopt.cli`        -- the ``simplexopt`` command.
"""

from .errors import (
    AllCoordinatesInsignificant,
    DimensionMismatch,
    FeasibilityError,
    NegativeCoordinate,
    NonFiniteObjective,
    SimplexOptError,
    SumOutOfTolerance,
    TooFewCoordinates,
    UnknownBenchmark,
    UnsupportedDimension,
)
from .simplex import (
    DEFAULT_TOLERANCE,
    SUM_TOL,
    FeasibilityTolerance,
    SimplexPoint,
    is_feasible,
    make_point,
    random_simplex_point,
    squared_distance,
    uniform_point,
)
from .gcdvss import (
    MINUS,
    PLUS,
    MoveProposal,
    Objective,
    OptimizeResult,
    RunReport,
    TuningParams,
    backoff_feasible_move,
    build_candidate,
    evaluate_proposals,
    optimize,
    run_stage1,
    select_best,
    significant_set,
    sparsify,
)
from .transforms import (
    HypercubeDomain,
    HypercubeEmbedding,
    LinearConstraint,
    hypercube_embed,
    linear_to_simplex,
    negate,
    with_slack,
    wrap_linear_objective,
)
from .benchfns import BENCHMARK_NAMES, BenchmarkSpec, registry_lookup
from .harness import BenchmarkResult, CampaignConfig, StartRecord, emit_report, run_campaign
from . import moves

__version__ = "0.1.0"

__all__ = [
    "AllCoordinatesInsignificant",
    "BENCHMARK_NAMES",
    "BenchmarkResult",
    "BenchmarkSpec",
    "CampaignConfig",
    "DEFAULT_TOLERANCE",
    "DimensionMismatch",
    "FeasibilityError",
    "FeasibilityTolerance",
    "HypercubeDomain",
    "HypercubeEmbedding",
    "LinearConstraint",
    "MINUS",
    "MoveProposal",
    "NegativeCoordinate",
    "NonFiniteObjective",
    "Objective",
    "OptimizeResult",
    "PLUS",
    "RunReport",
    "SUM_TOL",
    "SimplexOptError",
    "SimplexPoint",
    "StartRecord",
    "SumOutOfTolerance",
    "TooFewCoordinates",
    "TuningParams",
    "UnknownBenchmark",
    "UnsupportedDimension",
    "backoff_feasible_move",
    "build_candidate",
    "emit_report",
    "evaluate_proposals",
    "hypercube_embed",
    "is_feasible",
    "linear_to_simplex",
    "make_point",
    "moves",
    "negate",
    "optimize",
    "random_simplex_point",
    "registry_lookup",
    "run_campaign",
    "run_stage1",
    "select_best",
    "significant_set",
    "sparsify",
    "squared_distance",
    "uniform_point",
    "with_slack",
    "wrap_linear_objective",
]
