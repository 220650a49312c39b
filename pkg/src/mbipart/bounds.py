"""Lower bounds on the number of additional cut lines below a search node.

Three bounds are combined in increasing cost:

* local packing: free-edge stars around partially red / blue lines that
  cannot all join their colour without overfilling it;
* flow: vertex-disjoint paths of unassigned lines from a partially red to a
  partially blue line, each of which needs its own cut;
* extended packing: disjoint connected subgraphs grown from partially
  coloured lines, away from the flow paths, treated like the stars above.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import NamedTuple

from .assignstate import BLUE, CUT, RED, UNASSIGNED, SearchState

NONE = -1
SOURCE = -2
SINK = -3


def _greedy_forced_cuts(coloured: int, sizes: list[int], max_part: int) -> int:
    """Fewest items to drop (largest first) so ``coloured + sum(rest)`` fits."""
    excess = coloured + sum(sizes) - max_part
    if excess <= 0:
        return 0
    cuts = 0
    for s in sorted(sizes, reverse=True):
        excess -= s
        cuts += 1
        if excess <= 0:
            break
    return cuts


def local_packing_bound(state: SearchState, color: int) -> int:
    """Forced cuts among the partially ``color`` lines.

    Stars of lines on the same side of the bipartite graph are disjoint; the
    two sides force cuts on different lines, so their counts add up.
    """
    nbrs = state.red_nbrs if color == RED else state.blue_nbrs
    coloured = state.red_edges if color == RED else state.blue_edges
    status, free_deg, m = state.status, state.free_deg, state.graph.m
    rows, cols = [], []
    for u in range(state.graph.n_lines):
        if nbrs[u] and status[u] == UNASSIGNED and free_deg[u]:
            (rows if u < m else cols).append(free_deg[u])
    mp = state.max_part
    return _greedy_forced_cuts(coloured, rows, mp) + _greedy_forced_cuts(coloured, cols, mp)


# ------------------------------------------------------------------------ flow


class FlowNetwork:
    """Maximum set of vertex-disjoint partially-red to partially-blue paths
    through unassigned lines, kept in step with a :class:`SearchState`.

    Each line is split into an in-node and an out-node joined by a unit
    arc. Flow is stored as path links: ``pred[v]`` / ``succ[v]`` is the
    previous / next line on v's path (``SOURCE`` / ``SINK`` at the ends,
    ``NONE`` off-path). Changes are trailed so :meth:`rollback` restores the
    flow of the enclosing level exactly.
    """

    def __init__(self, state: SearchState):
        self.state = state
        n = state.graph.n_lines
        self.pred = [NONE] * n
        self.succ = [NONE] * n
        self.value = 0
        self.augmentations = 0
        self._trail: list[tuple[int, int, int]] = []
        self._marks: list[tuple[int, int]] = []

    # -- trail -----------------------------------------------------------
    def mark(self) -> None:
        self._marks.append((len(self._trail), self.value))

    def rollback(self) -> None:
        pos, value = self._marks.pop()
        trail, pred, succ = self._trail, self.pred, self.succ
        while len(trail) > pos:
            v, p, s = trail.pop()
            pred[v] = p
            succ[v] = s
        self.value = value

    def _set_pred(self, v: int, p: int) -> None:
        self._trail.append((v, self.pred[v], self.succ[v]))
        self.pred[v] = p

    def _set_succ(self, v: int, s: int) -> None:
        self._trail.append((v, self.pred[v], self.succ[v]))
        self.succ[v] = s

    # -- events ----------------------------------------------------------
    def remove_lines(self, lines) -> None:
        """Drop flow through lines that just left the unassigned region."""
        for v in lines:
            if self.pred[v] != NONE:
                self._cancel_path(v)

    def _cancel_path(self, v: int) -> None:
        pred, succ = self.pred, self.succ
        start = v
        while pred[start] >= 0:
            start = pred[start]
            if start == v:
                break
        from_source = pred[start] == SOURCE
        u = start
        while u >= 0 and pred[u] != NONE:
            nxt = succ[u]
            self._trail.append((u, pred[u], nxt))
            pred[u] = NONE
            succ[u] = NONE
            u = nxt
        if from_source:
            self.value -= 1

    def sync(self) -> None:
        """Register the latest :meth:`SearchState.apply` and open a level."""
        self.mark()
        self.remove_lines(self.state.last_removed)

    # -- augmentation ----------------------------------------------------
    def _find_path(self) -> list[int] | None:
        st = self.state
        status, rn, bn = st.status, st.red_nbrs, st.blue_nbrs
        nbrs = st.graph.nbrs
        pred, succ = self.pred, self.succ
        n = st.graph.n_lines
        parent = [-2] * (2 * n)
        queue = deque()
        for p in range(n):
            if rn[p] and status[p] == UNASSIGNED and pred[p] != SOURCE:
                parent[2 * p] = -1
                queue.append(2 * p)
        end = -1
        while queue:
            x = queue.popleft()
            v = x >> 1
            if not x & 1:
                pv = pred[v]
                if pv == NONE:
                    y = x | 1
                elif pv >= 0:
                    y = 2 * pv + 1
                else:
                    continue
                if parent[y] == -2:
                    parent[y] = x
                    queue.append(y)
                continue
            sv = succ[v]
            if bn[v] and sv != SINK:
                end = x
                break
            pv = pred[v]
            if pv != NONE:
                y = x - 1
                if parent[y] == -2:
                    parent[y] = x
                    queue.append(y)
            for w in nbrs[v]:
                if status[w] == UNASSIGNED and w != sv and w != pv:
                    y = 2 * w
                    if parent[y] == -2:
                        parent[y] = x
                        queue.append(y)
        if end < 0:
            return None
        path = [end]
        while parent[path[-1]] != -1:
            path.append(parent[path[-1]])
        path.reverse()
        return path

    def _apply_path(self, path: list[int]) -> None:
        pred, succ = self.pred, self.succ
        self._set_pred(path[0] >> 1, SOURCE)
        for a, b in zip(path, path[1:]):
            va, vb = a >> 1, b >> 1
            if va == vb:
                continue
            if a & 1:
                # forward link out(va) -> in(vb)
                self._set_succ(va, vb)
                self._set_pred(vb, va)
            else:
                # cancel link out(vb) -> in(va)
                if succ[vb] == va:
                    self._set_succ(vb, NONE)
                if pred[va] == vb:
                    self._set_pred(va, NONE)
        self._set_succ(path[-1] >> 1, SINK)
        self.value += 1
        self.augmentations += 1

    def augment(self, limit: int | None = None) -> int:
        """Augment along shortest paths until maximum (or ``value >= limit``)."""
        while limit is None or self.value < limit:
            path = self._find_path()
            if path is None:
                break
            self._apply_path(path)
        return self.value

    # -- inspection ------------------------------------------------------
    def path_lines(self) -> list[int]:
        return [v for v, p in enumerate(self.pred) if p != NONE]

    def path_edges(self) -> set[tuple[int, int]]:
        return {(min(v, s), max(v, s)) for v, s in enumerate(self.succ) if s >= 0}

    def paths(self) -> list[list[int]]:
        """Source-to-sink line sequences of the current flow."""
        out = []
        for v, p in enumerate(self.pred):
            if p == SOURCE:
                path = [v]
                while self.succ[path[-1]] >= 0:
                    path.append(self.succ[path[-1]])
                out.append(path)
        return out


def flow_bound(net: FlowNetwork) -> int:
    """Maximum number of vertex-disjoint paths, reusing the current flow."""
    return net.augment()


def max_flow_from_scratch(state: SearchState) -> int:
    return FlowNetwork(state).augment()


# ----------------------------------------------------------- extended packing


@dataclass
class Subgraph:
    """A connected group of unassigned lines grown from one seed."""

    color: int
    seed: int
    lines: list[int] = field(default_factory=list)
    edges: list[int] = field(default_factory=list)


def packing_subgraphs(
    state: SearchState,
    excluded_lines=(),
    excluded_edges=(),
    colors=(RED, BLUE),
) -> list[Subgraph]:
    """Grow pairwise disjoint colour-adjacent subgraphs from every partially
    coloured line not in ``excluded_lines``.

    Growth is depth-first per subgraph and round-robin across subgraphs, one
    edge per turn, so no subgraph swallows a region while others starve.
    ``excluded_edges`` holds edge ids. An edge may end on a line outside
    the subgraph (cut, foreign or excluded) as long as that line meets no
    other edge of the same subgraph.
    """
    st = state
    g = st.graph
    status = st.status
    nbrs, eids = g.nbrs, g.eids
    n = g.n_lines
    owner = [-1] * n
    for v in excluded_lines:
        owner[v] = -2
    edge_used = bytearray(g.n_edges)
    for e in excluded_edges:
        edge_used[e] = 1
    subs: list[Subgraph] = []
    stacks: list[list[list[int]]] = []
    for color in colors:
        cnt = st.red_nbrs if color == RED else st.blue_nbrs
        for p in range(n):
            if cnt[p] and status[p] == UNASSIGNED and owner[p] == -1 and st.free_deg[p]:
                owner[p] = len(subs)
                subs.append(Subgraph(color, p, [p]))
                stacks.append([[p, 0]])
    # (subgraph, outside line) pairs already touched by a boundary edge
    boundary: set[int] = set()
    rotation = deque(range(len(subs)))
    while rotation:
        i = rotation.popleft()
        stack = stacks[i]
        sub = subs[i]
        opposite = st.blue_nbrs if sub.color == RED else st.red_nbrs
        grown = None
        while stack:
            frame = stack[-1]
            x, k = frame
            adj_x, ids_x = nbrs[x], eids[x]
            took = False
            while k < len(adj_x):
                y, e = adj_x[k], ids_x[k]
                k += 1
                if edge_used[e]:
                    continue
                sy = status[y]
                if sy == RED or sy == BLUE:
                    continue
                if sy == UNASSIGNED and owner[y] == -1 and not opposite[y]:
                    owner[y] = i
                    sub.lines.append(y)
                    grown = y
                elif owner[y] != i:
                    key = i * n + y
                    if key in boundary:
                        continue
                    boundary.add(key)
                edge_used[e] = 1
                sub.edges.append(e)
                took = True
                break
            frame[1] = k
            if took:
                if grown is not None:
                    stack.append([grown, 0])
                break
            stack.pop()
        if stack:
            rotation.append(i)
    return subs


def extended_packing_bound(
    state: SearchState,
    excluded_lines=(),
    excluded_edges=(),
    colors=(RED, BLUE),
) -> int:
    """Forced cuts from the subgraphs of :func:`packing_subgraphs`, summed
    over ``colors``."""
    subs = packing_subgraphs(state, excluded_lines, excluded_edges, colors)
    total = 0
    for color in colors:
        sizes = [len(s.edges) for s in subs if s.color == color]
        coloured = state.red_edges if color == RED else state.blue_edges
        total += _greedy_forced_cuts(coloured, sizes, state.max_part)
    return total


# ----------------------------------------------------------------- combined


class BoundResult(NamedTuple):
    bound: int
    stage: int  # 0 = not pruned, else the stage that reached the upper bound


@dataclass
class BoundStats:
    calls: int = 0
    prunes: list[int] = field(default_factory=lambda: [0, 0, 0])
    flow_calls: int = 0
    packing_calls: int = 0


def flow_exclusions(net: FlowNetwork) -> tuple[list[int], list[int]]:
    """Lines and edge ids used by the current flow paths."""
    g = net.state.graph
    lines = net.path_lines()
    edges = []
    succ = net.succ
    for v in lines:
        s = succ[v]
        if s >= 0:
            # adjacency lists are sorted, so a bisect would also do
            edges.append(g.eids[v][g.nbrs[v].index(s)])
    return lines, edges


def combined_lower_bound(
    state: SearchState,
    net: FlowNetwork,
    strict_upper: int,
    stats: BoundStats | None = None,
) -> BoundResult:
    """Staged bound: local packing, then flow, then flow plus extended
    packing on what the flow paths leave free. Stops at the first stage
    whose bound reaches ``strict_upper``."""
    if stats is not None:
        stats.calls += 1
    c = state.cut_count
    b0 = c + local_packing_bound(state, RED) + local_packing_bound(state, BLUE)
    if b0 >= strict_upper:
        if stats is not None:
            stats.prunes[0] += 1
        return BoundResult(b0, 1)
    if stats is not None:
        stats.flow_calls += 1
    f = net.augment()
    if c + f >= strict_upper:
        if stats is not None:
            stats.prunes[1] += 1
        return BoundResult(c + f, 2)
    mp, free = state.max_part, state.free_edges
    if state.red_edges + free <= mp and state.blue_edges + free <= mp:
        # every free edge fits on either side, so no subgraph can force a cut
        return BoundResult(c + f, 0)
    if stats is not None:
        stats.packing_calls += 1
    lines, edges = flow_exclusions(net)
    e = extended_packing_bound(state, lines, edges)
    b3 = c + f + e
    if b3 >= strict_upper:
        if stats is not None:
            stats.prunes[2] += 1
        return BoundResult(b3, 3)
    return BoundResult(b3, 0)


__all__ = [
    "SOURCE", "SINK", "NONE", "FlowNetwork", "Subgraph", "BoundResult", "BoundStats",
    "local_packing_bound", "flow_bound", "max_flow_from_scratch", "packing_subgraphs",
    "extended_packing_bound", "combined_lower_bound", "flow_exclusions", "CUT",
]
