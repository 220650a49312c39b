"""Partial line assignments for the branch-and-bound search.

Every line is ``UNASSIGNED``, ``RED``, ``BLUE`` or ``CUT``. An edge is red
when it touches a red line, blue when it touches a blue line and free
otherwise. An unassigned line next to a red line is *partially red*; one
next to both a red and a blue line is cut on the spot.

The state is mutated in place and rolled back through a trail, one record
per decision level.
"""

from __future__ import annotations

from fractions import Fraction

from .pattern import (
    FREE, PART1, PART2, LineGraph, Solution, max_part_size, parse_epsilon, settle_free,
)

UNASSIGNED = 0
RED = 1
BLUE = 2
CUT = 3

STATUS_NAMES = {UNASSIGNED: "unassigned", RED: "red", BLUE: "blue", CUT: "cut"}


class SearchState:
    """Mutable partial assignment over a :class:`LineGraph`.

    Public counters: ``red_edges``, ``blue_edges``, ``free_edges``,
    ``cut_count``. Per line: ``status``, ``free_deg`` (incident free edges),
    ``red_nbrs`` / ``blue_nbrs`` (number of adjacent red / blue lines).
    """

    def __init__(self, graph: LineGraph, eps=Fraction(0), max_part: int | None = None):
        self.graph = graph
        self.eps = parse_epsilon(eps) if not isinstance(eps, Fraction) else eps
        self.max_part = max_part_size(graph.n_edges, self.eps) if max_part is None else max_part
        n = graph.n_lines
        self.status = [UNASSIGNED] * n
        self.free_deg = list(graph.degree)
        self.red_nbrs = [0] * n
        self.blue_nbrs = [0] * n
        self.red_edges = 0
        self.blue_edges = 0
        self.free_edges = graph.n_edges
        self.cut_count = 0
        # one (line, decision, auto_cut_lines) record per open level
        self._trail: list[tuple[int, int, list[int]]] = []
        # lines removed from the unassigned region by the latest apply
        self.last_removed: list[int] = []

    @property
    def level(self) -> int:
        return len(self._trail)

    def partially_red(self, u: int) -> bool:
        return self.status[u] == UNASSIGNED and self.red_nbrs[u] > 0

    def partially_blue(self, u: int) -> bool:
        return self.status[u] == UNASSIGNED and self.blue_nbrs[u] > 0

    def snapshot(self) -> tuple:
        """Everything except the trail, for equality checks in tests."""
        return (
            tuple(self.status), tuple(self.free_deg), tuple(self.red_nbrs),
            tuple(self.blue_nbrs), self.red_edges, self.blue_edges,
            self.free_edges, self.cut_count,
        )

    def apply(self, line: int, decision: int) -> int | None:
        """Assign ``line`` and open a new level.

        Returns the new level number, or ``None`` (state untouched) when the
        colouring would overfill its part.
        """
        status = self.status
        if status[line] != UNASSIGNED:
            raise ValueError(f"line {line} is already {STATUS_NAMES[status[line]]}")
        if decision == CUT:
            status[line] = CUT
            self.cut_count += 1
            self._trail.append((line, CUT, []))
            self.last_removed = [line]
            return len(self._trail)

        if decision == RED:
            if self.blue_nbrs[line]:
                raise ValueError(f"line {line} is partially blue and cannot be red")
            mine, other = self.red_nbrs, self.blue_nbrs
            if self.red_edges + self.free_deg[line] > self.max_part:
                return None
            self.red_edges += self.free_deg[line]
        elif decision == BLUE:
            if self.red_nbrs[line]:
                raise ValueError(f"line {line} is partially red and cannot be blue")
            mine, other = self.blue_nbrs, self.red_nbrs
            if self.blue_edges + self.free_deg[line] > self.max_part:
                return None
            self.blue_edges += self.free_deg[line]
        else:
            raise ValueError(f"unknown decision {decision!r}")

        self.free_edges -= self.free_deg[line]
        self.free_deg[line] = 0
        status[line] = decision
        free_deg = self.free_deg
        auto_cut = []
        for v in self.graph.nbrs[line]:
            mine[v] += 1
            sv = status[v]
            if sv == UNASSIGNED:
                free_deg[v] -= 1
                if other[v] and mine[v] == 1:
                    status[v] = CUT
                    auto_cut.append(v)
            elif sv == CUT:
                free_deg[v] -= 1
        self.cut_count += len(auto_cut)
        self._trail.append((line, decision, auto_cut))
        self.last_removed = [line, *auto_cut]
        return len(self._trail)

    def _pop(self) -> None:
        line, decision, auto_cut = self._trail.pop()
        status = self.status
        if decision == CUT:
            status[line] = UNASSIGNED
            self.cut_count -= 1
            return
        for v in auto_cut:
            status[v] = UNASSIGNED
        self.cut_count -= len(auto_cut)
        mine = self.red_nbrs if decision == RED else self.blue_nbrs
        free_deg = self.free_deg
        restored = 0
        for v in self.graph.nbrs[line]:
            mine[v] -= 1
            if status[v] != decision:
                free_deg[v] += 1
                restored += 1
        free_deg[line] = restored
        self.free_edges += restored
        if decision == RED:
            self.red_edges -= restored
        else:
            self.blue_edges -= restored
        status[line] = UNASSIGNED

    def undo(self, level: int) -> None:
        """Roll back every level ``>= level``, restoring the state that held
        just before ``level`` was opened."""
        if not (1 <= level <= len(self._trail)):
            raise ValueError(f"no open level {level} (current level {len(self._trail)})")
        while len(self._trail) >= level:
            self._pop()


def select_branch_line(state: SearchState) -> int | None:
    """Unassigned line with the most free edges; lowest index on ties.

    Lines without free edges are never branched on.
    """
    best, best_deg = None, 0
    status = state.status
    for u, d in enumerate(state.free_deg):
        if d > best_deg and status[u] == UNASSIGNED:
            best, best_deg = u, d
    return best


def child_order(state: SearchState, line: int) -> list[int]:
    """Decisions to try for ``line``: consistent colours, the colour of the
    smaller side first, then ``CUT``."""
    if state.red_nbrs[line]:
        return [RED, CUT]
    if state.blue_nbrs[line]:
        return [BLUE, CUT]
    if state.red_edges <= state.blue_edges:
        return [RED, BLUE, CUT]
    return [BLUE, RED, CUT]


def settle(red: int, blue: int, free: int, max_part: int) -> tuple[int, int] | None:
    """Split ``free`` edges as ``(x1, x2)`` so neither side exceeds
    ``max_part``, filling the smaller side first; ``None`` if impossible."""
    if red > max_part or blue > max_part or red + blue + free > 2 * max_part:
        return None
    n1, n2 = settle_free(red, blue, free)
    return n1 - red, n2 - blue


def leaf_feasible(state: SearchState) -> tuple[int, int] | None:
    """Settlement ``(x1, x2)`` of the remaining free edges at a leaf, or
    ``None`` when no balanced split exists."""
    if select_branch_line(state) is not None:
        raise ValueError("state is not a leaf: unassigned lines still have free edges")
    return settle(state.red_edges, state.blue_edges, state.free_edges, state.max_part)


def extract_solution(state: SearchState, settlement: tuple[int, int]) -> Solution:
    """Turn a feasible leaf into a labeled :class:`Solution`.

    Edges of red lines get ``PART1``, edges of blue lines ``PART2``. A free
    edge is ``FREE`` when both of its lines are already cut by coloured
    edges; the remaining free edges draw concrete labels from the
    settlement budget.
    """
    if select_branch_line(state) is not None:
        raise ValueError("state is not a leaf")
    g = state.graph
    status = state.status
    labels = [0] * g.n_edges
    for e, (u, v) in enumerate(g.edges):
        su, sv = status[u], status[v]
        if su == RED or sv == RED:
            labels[e] = PART1
        elif su == BLUE or sv == BLUE:
            labels[e] = PART2
    colour_cut = [state.red_nbrs[u] > 0 and state.blue_nbrs[u] > 0 for u in range(g.n_lines)]
    x1, x2 = settlement
    pending = []
    for e, (u, v) in enumerate(g.edges):
        if labels[e]:
            continue
        if colour_cut[u] and colour_cut[v]:
            labels[e] = FREE
        else:
            pending.append(e)
    # concrete labels: keep each pending edge with its lines' colour where possible
    n1, n2 = state.red_edges, state.blue_edges
    budget = {PART1: x1, PART2: x2}
    for e in pending:
        u, v = g.edges[e]
        pref = []
        for w in (u, v):
            if state.red_nbrs[w] and not state.blue_nbrs[w]:
                pref.append(PART1)
            elif state.blue_nbrs[w] and not state.red_nbrs[w]:
                pref.append(PART2)
        pref.append(PART1 if n1 <= n2 else PART2)
        pref.extend((PART1, PART2))
        for lab in pref:
            if budget[lab] > 0:
                budget[lab] -= 1
                labels[e] = lab
                if lab == PART1:
                    n1 += 1
                else:
                    n2 += 1
                break
    parts = {g.coords[e]: labels[e] for e in range(g.n_edges)}
    volume = _volume_of(g, labels)
    nfree = sum(1 for lab in labels if lab == FREE)
    sizes = settle_free(n1, n2, nfree)
    return Solution(parts=parts, volume=volume, part_sizes=sizes, free=nfree)


def _volume_of(g: LineGraph, labels: list[int]) -> int:
    mask = [0] * g.n_lines
    for e, (u, v) in enumerate(g.edges):
        lab = labels[e]
        if lab == FREE:
            continue
        mask[u] |= lab
        mask[v] |= lab
    return sum(1 for x in mask if x == 3)
