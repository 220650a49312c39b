"""Shared generators and scratch recomputations for the tests."""

import os
import random
from fractions import Fraction

from mbipart.assignstate import BLUE, CUT, RED, UNASSIGNED, SearchState, child_order
from mbipart.oracle import RandomSpec, random_pattern
from mbipart.pattern import LineGraph, SparsePattern

EPS_GRID = (Fraction(0), Fraction(3, 100), Fraction(1, 10))


def tiny_pattern(seed, max_dim=5, max_nz=12):
    rng = random.Random(seed)
    m, n = rng.randint(1, max_dim), rng.randint(1, max_dim)
    count = rng.randint(1, min(max_nz, m * n))
    return random_pattern(RandomSpec(m, n, count, seed=seed))


def full_pattern(m, n):
    return SparsePattern.from_coords(m, n, [(i, j) for i in range(1, m + 1) for j in range(1, n + 1)])


def grid_laplacian(k):
    """5-point stencil pattern on a ``k x k`` grid."""
    def idx(i, j):
        return i * k + j + 1

    nz = set()
    for i in range(k):
        for j in range(k):
            nz.add((idx(i, j), idx(i, j)))
            for di, dj in ((1, 0), (0, 1), (-1, 0), (0, -1)):
                if 0 <= i + di < k and 0 <= j + dj < k:
                    nz.add((idx(i, j), idx(i + di, j + dj)))
    return SparsePattern.from_coords(k * k, k * k, nz)


def legal_moves(state):
    """(line, decision) pairs ``apply`` accepts without raising."""
    moves = []
    for u in range(state.graph.n_lines):
        if state.status[u] == UNASSIGNED:
            for d in child_order(state, u):
                moves.append((u, d))
    return moves


def random_prefix(state, rng, steps):
    """Apply up to ``steps`` random legal decisions; returns the levels."""
    levels = []
    for _ in range(steps):
        moves = legal_moves(state)
        rng.shuffle(moves)
        for u, d in moves:
            lvl = state.apply(u, d)
            if lvl is not None:
                levels.append(lvl)
                break
        else:
            break
    return levels


def random_state(seed, max_dim=5, max_nz=12, eps=None, max_lines=None):
    """A random pattern with a random partial assignment applied."""
    rng = random.Random(seed * 7919 + 1)
    while True:
        p = tiny_pattern(seed, max_dim, max_nz)
        if max_lines is None or p.m + p.n <= max_lines:
            break
        seed += 100003
    eps = eps if eps is not None else rng.choice(EPS_GRID)
    state = SearchState(LineGraph(p), eps)
    random_prefix(state, rng, rng.randint(0, p.m + p.n))
    return p, state


def coloured_state(seed, max_dim=5, max_nz=12, max_lines=10):
    """A denser pattern with one red and one blue line placed first, so the
    flow and packing bounds have something to find."""
    rng = random.Random(seed * 104729 + 3)
    m = rng.randint(3, max_dim)
    n = rng.randint(3, min(max_dim, max_lines - m))
    count = rng.randint(min(8, m * n), min(max_nz, m * n))
    p = random_pattern(RandomSpec(m, n, count, seed=seed))
    state = SearchState(LineGraph(p), rng.choice(EPS_GRID))
    for colour in (RED, BLUE):
        cand = [u for u in range(p.m + p.n) if state.status[u] == UNASSIGNED
                and state.free_deg[u] and colour in child_order(state, u)]
        rng.shuffle(cand)
        for u in cand:
            if state.apply(u, colour) is not None:
                break
    random_prefix(state, rng, rng.randint(0, 2))
    return p, state


def mixed_states(count, max_lines=None):
    """``count`` uniform random states followed by ``count`` coloured ones."""
    for seed in range(count):
        yield random_state(seed, max_lines=max_lines)
    for seed in range(count):
        yield coloured_state(seed, max_lines=max_lines or 10)


def rebuild(graph, decisions, max_part):
    """State tuple recomputed from the explicit decisions alone."""
    n = graph.n_lines
    status = [UNASSIGNED] * n
    for u, d in decisions:
        status[u] = d
    red = {u for u, d in decisions if d == RED}
    blue = {u for u, d in decisions if d == BLUE}
    red_nbrs = [sum(1 for v in graph.nbrs[u] if v in red) for u in range(n)]
    blue_nbrs = [sum(1 for v in graph.nbrs[u] if v in blue) for u in range(n)]
    for u in range(n):
        if status[u] == UNASSIGNED and red_nbrs[u] and blue_nbrs[u]:
            status[u] = CUT
    free_deg = [0] * n
    red_edges = blue_edges = free_edges = 0
    for u, v in graph.edges:
        if u in red or v in red:
            red_edges += 1
        elif u in blue or v in blue:
            blue_edges += 1
        else:
            free_edges += 1
            free_deg[u] += 1
            free_deg[v] += 1
    cut = sum(1 for s in status if s == CUT)
    return (tuple(status), tuple(free_deg), tuple(red_nbrs), tuple(blue_nbrs),
            red_edges, blue_edges, free_edges, cut)


def unassigned_adjacency(state):
    """Adjacency among unassigned lines plus the P_R and P_B sets."""
    g = state.graph
    un = [u for u in range(g.n_lines) if state.status[u] == UNASSIGNED]
    uset = set(un)
    adj = {u: [v for v in g.nbrs[u] if v in uset] for u in un}
    pr = [u for u in un if state.red_nbrs[u]]
    pb = [u for u in un if state.blue_nbrs[u]]
    return adj, pr, pb, un


MATRIX_DIRS = [
    d for d in (
        os.environ.get("MBIPART_MATRIX_DIR"),
        os.path.join(os.path.dirname(__file__), "data"),
        os.path.join(os.path.dirname(os.path.dirname(__file__)), "matrices"),
    ) if d
]
