"""Exact branch-and-bound bipartitioner with iterative deepening."""

from __future__ import annotations

import math
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .assignstate import (
    SearchState, child_order, extract_solution, leaf_feasible, select_branch_line,
)
from .bounds import BoundStats, FlowNetwork, combined_lower_bound
from .pattern import LineGraph, Solution, SparsePattern, parse_epsilon

OPTIMAL = "Optimal"
TIMED_OUT = "TimedOut"
NODE_LIMIT = "NodeLimit"
INFEASIBLE = "Infeasible"

_CLOCK_INTERVAL = 1 << 12


@dataclass
class SolverConfig:
    eps: Fraction = Fraction(3, 100)
    time_limit: float = 0.0
    deepening: Fraction = Fraction(5, 4)
    initial_upper: int | None = None
    node_limit: int | None = None
    max_part: int | None = None
    progress: bool = False

    def __post_init__(self):
        if not isinstance(self.eps, Fraction):
            self.eps = parse_epsilon(self.eps)
        self.deepening = Fraction(self.deepening)
        if self.deepening <= 1:
            raise ValueError("deepening factor must exceed 1")
        if self.initial_upper is not None and self.initial_upper < 1:
            raise ValueError("initial upper bound must be at least 1")


@dataclass
class SolverReport:
    status: str
    optimal_volume: int | None
    incumbent: Solution | None
    incumbent_volume: int | None
    nodes: int
    prunes_by_stage: list[int]
    rounds: int
    elapsed: float
    augmentations: int = 0
    leaves: int = 0
    upper_bounds: list[int] = field(default_factory=list)


class _Stop(Exception):
    def __init__(self, status):
        self.status = status


class BranchAndBound:
    """One search over a fixed pattern. Not reusable across threads."""

    def __init__(self, pattern: SparsePattern, cfg: SolverConfig):
        if pattern.nnz < 1:
            raise ValueError("pattern has no nonzeros")
        self.pattern = pattern
        self.cfg = cfg
        self.graph = LineGraph(pattern)
        self.state = SearchState(self.graph, cfg.eps, cfg.max_part)
        self.net = FlowNetwork(self.state)
        self.stats = BoundStats()
        self.nodes = 0
        self.leaves = 0
        self.best: Solution | None = None
        self.best_volume: int | None = None
        self._t0 = time.perf_counter()
        self._deadline = self._t0 + cfg.time_limit if cfg.time_limit > 0 else None

    def _tick(self) -> None:
        self.nodes += 1
        if self.cfg.node_limit is not None and self.nodes > self.cfg.node_limit:
            raise _Stop(NODE_LIMIT)
        if self._deadline is not None and self.nodes % _CLOCK_INTERVAL == 0:
            if time.perf_counter() > self._deadline:
                raise _Stop(TIMED_OUT)

    def _enter(self, upper: int) -> tuple[int | None, int]:
        """Examine the current node. Returns ``(branch_line, upper)``;
        ``branch_line`` is ``None`` when the node is closed."""
        self._tick()
        state = self.state
        if state.cut_count >= upper:
            self.stats.prunes[0] += 1
            return None, upper
        res = combined_lower_bound(state, self.net, upper, self.stats)
        if res.stage:
            return None, upper
        line = select_branch_line(state)
        if line is not None:
            return line, upper
        self.leaves += 1
        settlement = leaf_feasible(state)
        if settlement is None:
            return None, upper
        sol = extract_solution(state, settlement)
        if sol.volume < upper:
            self.best = sol
            self.best_volume = sol.volume
            upper = sol.volume
        return None, upper

    def run_round(self, upper: int) -> bool:
        """Depth-first search with strict upper bound ``upper``; True when an
        incumbent was found, in which case it is optimal."""
        state, net = self.state, self.net
        found_before = self.best_volume
        line, upper = self._enter(upper)
        stack = []
        if line is not None:
            stack.append([line, child_order(state, line), 0, None])
        try:
            while stack:
                frame = stack[-1]
                if frame[3] is not None:
                    net.rollback()
                    state.undo(frame[3])
                    frame[3] = None
                line, children, k = frame[0], frame[1], frame[2]
                if k == len(children):
                    stack.pop()
                    continue
                frame[2] = k + 1
                # the upper bound may have dropped since this frame opened
                if state.cut_count >= upper:
                    frame[2] = len(children)
                    continue
                level = state.apply(line, children[k])
                if level is None:
                    continue
                net.sync()
                frame[3] = level
                nxt, upper = self._enter(upper)
                if nxt is not None:
                    stack.append([nxt, child_order(state, nxt), 0, None])
        except _Stop:
            self._unwind(stack)
            raise
        return self.best_volume is not None and self.best_volume != found_before

    def _unwind(self, stack) -> None:
        for frame in reversed(stack):
            if frame[3] is not None:
                self.net.rollback()
                self.state.undo(frame[3])

    def solve(self) -> SolverReport:
        cfg = self.cfg
        p = self.pattern
        # a column-major (or row-major) half split cuts at most min(m, n) + 1 lines
        cap = min(p.m, p.n) + 2
        upper = cfg.initial_upper if cfg.initial_upper is not None else 1
        bounds_used = []
        status = OPTIMAL
        rounds = 0
        try:
            # otherwise a half split along rows or columns is always feasible
            if 2 * self.state.max_part < p.nnz:
                status = INFEASIBLE
            while status == OPTIMAL:
                rounds += 1
                bounds_used.append(upper)
                optimal = self.run_round(upper)
                if cfg.progress:
                    best = "-" if self.best_volume is None else self.best_volume
                    print(f"round={rounds} U={upper} best={best} nodes={self.nodes}",
                          file=sys.stderr, flush=True)
                if optimal:
                    break
                if upper >= cap:
                    raise RuntimeError("search exhausted without a solution")
                upper = min(math.ceil(upper * cfg.deepening), cap)
        except _Stop as stop:
            status = stop.status
        return SolverReport(
            status=status,
            optimal_volume=self.best_volume if status == OPTIMAL else None,
            incumbent=self.best,
            incumbent_volume=self.best_volume,
            nodes=self.nodes,
            prunes_by_stage=list(self.stats.prunes),
            rounds=rounds,
            elapsed=time.perf_counter() - self._t0,
            augmentations=self.net.augmentations,
            leaves=self.leaves,
            upper_bounds=bounds_used,
        )


def solve(pattern: SparsePattern, cfg: SolverConfig | None = None, **kwargs) -> SolverReport:
    """Minimum-volume balanced bipartitioning of ``pattern``.

    ``kwargs`` are forwarded to :class:`SolverConfig` when ``cfg`` is omitted.
    """
    if cfg is None:
        cfg = SolverConfig(**kwargs)
    return BranchAndBound(pattern, cfg).solve()
