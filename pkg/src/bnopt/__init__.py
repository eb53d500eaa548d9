"""Exact score-based Bayesian network structure learning.

Learning is posed as a shortest-path problem over the order graph (the
lattice of variable subsets): the arc U -> U|{x} costs the best MDL score
of x with parents drawn from U. A sparse per-variable score store answers
those arc costs through packed bit rows, and additive pattern databases
tighten the admissible search heuristics. A* and breadth-first branch and
bound both return provably optimal networks.
"""

from ._kernels import using_numba
from .dataset import (DataError, Dataset, RawTable, binarize_mean, counts,
                      drop_incomplete, load_dataset, load_delimited)
from .heuristics import (DynamicHeuristic, DynamicPDB, HeuristicValue,
                         SimpleHeuristic, StaticHeuristic, StaticPDB,
                         build_dynamic_pdb, build_static_pdb,
                         default_grouping, greedy_partition, parse_grouping,
                         pattern_cost_exact, simple_h, static_h)
from .parent_store import (ExclusionCursor, best_in, cursor_best,
                           cursor_exclude, cursor_new)
from .scoring import (ScoreSet, ScoreTable, best_score_naive,
                      build_score_table, build_score_tables,
                      format_score_file, mdl_local_score, parent_limit,
                      prune_scores, read_score_file, write_score_file)
from .search import (LearnedNetwork, MemoryBudgetError, SearchStats, astar,
                     bfbnb, dp_oracle, exact_distances_to_goal,
                     initial_upper_bound, reconstruct)
from .synth import prefix_dataset, random_dataset

__version__ = "0.1.0"

__all__ = [
    "DataError", "Dataset", "RawTable", "binarize_mean", "counts",
    "drop_incomplete", "load_dataset", "load_delimited",
    "ScoreSet", "ScoreTable", "best_score_naive", "build_score_table",
    "build_score_tables", "format_score_file", "mdl_local_score",
    "parent_limit", "prune_scores", "read_score_file", "write_score_file",
    "ExclusionCursor", "best_in", "cursor_best", "cursor_exclude",
    "cursor_new",
    "DynamicHeuristic", "DynamicPDB", "HeuristicValue", "SimpleHeuristic",
    "StaticHeuristic", "StaticPDB", "build_dynamic_pdb", "build_static_pdb",
    "default_grouping", "greedy_partition", "parse_grouping",
    "pattern_cost_exact", "simple_h", "static_h",
    "LearnedNetwork", "MemoryBudgetError", "SearchStats", "astar", "bfbnb",
    "dp_oracle", "exact_distances_to_goal", "initial_upper_bound",
    "reconstruct",
    "prefix_dataset", "random_dataset", "using_numba",
]
