"""Derivative-free multiobjective optimization by direct search over a box.

The solver maintains an archive of mutually nondominated points, improves it
with a model-based search step (per-component quadratic models, minimized
individually and in Chebyshev combinations) followed by coordinate polling,
and evaluates candidate batches on a worker pool. A benchmark harness
reproduces purity, spread, hypervolume, and performance-profile comparisons
across the parallelization and center-selection strategies.
"""

from .core import (
    Archive,
    ArchiveEntry,
    EvalBudget,
    EvalCache,
    InitializationFailed,
    Problem,
    dominates,
    initialize,
)
from .driver import RunReport, SelectionKind, SelectionStrategy, StopRule, run
from .metrics import (
    FrontSet,
    ReferenceData,
    build_reference,
    delta_metric,
    gamma_metric,
    hypervolume,
    performance_profile,
    purity,
)
from .parexec import BatchExecutor
from .problems import REGISTRY, SUITES, get_problem
from .search import EvalBatching, ModelBuildMode, SearchStrategy

__version__ = "0.1.0"

__all__ = [
    "Archive",
    "ArchiveEntry",
    "BatchExecutor",
    "EvalBatching",
    "EvalBudget",
    "EvalCache",
    "FrontSet",
    "InitializationFailed",
    "ModelBuildMode",
    "Problem",
    "REGISTRY",
    "ReferenceData",
    "RunReport",
    "SUITES",
    "SearchStrategy",
    "SelectionKind",
    "SelectionStrategy",
    "StopRule",
    "build_reference",
    "delta_metric",
    "dominates",
    "gamma_metric",
    "get_problem",
    "hypervolume",
    "initialize",
    "performance_profile",
    "purity",
    "run",
]
