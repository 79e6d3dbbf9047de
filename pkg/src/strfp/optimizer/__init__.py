"""Choosing a partition that minimizes false positives on a training workload."""

from .exact import MAX_EXACT_ALPHABET, exact_solve, restricted_growth_strings
from .instance import SolveTrace, TraceEntry, TrainingInstance, fpr, objective
from .mip import (ModelInstance, build_mip, expected_counts, export_lp, implied_values,
                  import_solution, read_solution)
from .search import DEFAULT_TIME_LIMIT, gram_tiebreak, local_search

__all__ = [
    "DEFAULT_TIME_LIMIT", "MAX_EXACT_ALPHABET", "ModelInstance", "SolveTrace", "TraceEntry",
    "TrainingInstance", "build_mip", "exact_solve", "expected_counts", "export_lp", "fpr", "gram_tiebreak",
    "implied_values", "import_solution", "local_search", "objective", "read_solution",
    "restricted_growth_strings",
]
