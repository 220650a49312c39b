"""Exact minimum-volume bipartitioning of sparse matrices."""

from .pattern import (
    FREE, PART1, PART2, MatrixMarketError, Solution, SolutionError, SparsePattern, evaluate,
    max_part_size, parse_epsilon, parse_matrix_market, read_matrix_market, write_matrix_market,
)
from .solver import INFEASIBLE, NODE_LIMIT, OPTIMAL, TIMED_OUT, SolverConfig, SolverReport, solve

__all__ = [
    "FREE", "PART1", "PART2", "MatrixMarketError", "Solution", "SolutionError", "SparsePattern",
    "evaluate", "max_part_size", "parse_epsilon", "parse_matrix_market", "read_matrix_market",
    "write_matrix_market", "INFEASIBLE", "NODE_LIMIT", "OPTIMAL", "TIMED_OUT", "SolverConfig",
    "SolverReport", "solve",
]
