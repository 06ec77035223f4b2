"""Pool-guided fix-and-explore search for the 0-1 multidimensional knapsack problem."""

from .core import Solution, evaluate, flip_delta, hamming
from .driver import RunResult, SearchState, find_solution_from_cbs, find_solution_from_ss, run
from .instance import (
    Instance,
    ParseError,
    Renumbering,
    coarse_scores,
    load,
    parse_mkgk,
    parse_orlib,
    renumber,
)
from .pagen import PartialAssignment
from .params import Params
from .pool import SolutionSet, init_solution_set, random_solution, score_V, update
from .subsolver import Budget, Subproblem, greedy_complete, reduce, solve
from .tabu import VisitRecord, best_neighbor, tabu_search

__version__ = "0.1.0"

__all__ = [
    "Budget", "Instance", "Params", "ParseError", "PartialAssignment", "Renumbering",
    "RunResult", "SearchState", "Solution", "SolutionSet", "Subproblem", "VisitRecord",
    "best_neighbor", "coarse_scores", "evaluate", "find_solution_from_cbs",
    "find_solution_from_ss", "flip_delta", "greedy_complete", "hamming", "init_solution_set",
    "load", "parse_mkgk", "parse_orlib", "random_solution", "reduce", "renumber", "run",
    "score_V", "solve", "tabu_search", "update",
]
