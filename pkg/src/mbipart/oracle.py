"""Slow, obviously-correct reference routines used to check the solver.

Everything here enumerates: nonzero labelings, vertex subsets. Nothing
shares code with the branch-and-bound beyond the pattern types.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .pattern import (
    PART1, PART2, Solution, SolutionError, SparsePattern, evaluate, max_part_size,
    parse_epsilon,
)

MAX_BRUTE_NONZEROS = 24
MAX_CUT_CANDIDATES = 16
_CHUNK = 1 << 16


class OracleLimitError(ValueError):
    """Instance too large for exhaustive enumeration."""


class BruteForceResult(NamedTuple):
    volume: int | None
    witness: Solution | None


def _line_masks(p: SparsePattern, nonzeros) -> list[int]:
    masks: dict[int, int] = {}
    for bit, (r, c) in enumerate(nonzeros):
        for u in (r - 1, p.m + c - 1):
            masks[u] = masks.get(u, 0) | (1 << bit)
    return list(masks.values())


def _popcount(x: np.ndarray) -> np.ndarray:
    x = x.astype(np.uint64)
    count = np.zeros(x.shape, dtype=np.int64)
    while np.any(x):
        count += (x & np.uint64(1)).astype(np.int64)
        x >>= np.uint64(1)
    return count


def min_volume_labeling(
    line_masks: list[int], nbits: int, cap: int, fixed_ones: int = 0, fixed_count: int = 0,
    base_volume: int = 0, free_lines=None,
) -> tuple[int | None, int | None]:
    """Exhaustive minimum over ``2**nbits`` labelings (bit set = part 1).

    ``line_masks`` are bitmasks of the nonzeros on each line; a line counts
    as cut when its masked bits are mixed. ``fixed_ones`` / ``fixed_count``
    add nonzeros whose part is forced (ones in part 1, the rest in part 2).
    Returns ``(volume, labeling)`` or ``(None, None)`` if nothing balances.
    """
    best_vol, best_lab = None, None
    total = 1 << nbits
    masks = [np.uint64(mk) for mk in line_masks]
    for start in range(0, total, _CHUNK):
        lab = np.arange(start, min(total, start + _CHUNK), dtype=np.uint64)
        ones = _popcount(lab) + fixed_ones
        twos = (nbits - _popcount(lab) + fixed_count - fixed_ones)
        ok = (ones <= cap) & (twos <= cap)
        if not ok.any():
            continue
        vol = np.full(lab.shape, base_volume, dtype=np.int64)
        for mk in masks:
            hit = lab & mk
            vol += ((hit != 0) & (hit != mk)).astype(np.int64)
        if free_lines is not None:
            for mk, forced_one, forced_two in free_lines:
                hit = lab & mk
                has1 = (hit != 0) | forced_one
                has2 = (hit != mk) | forced_two
                vol += (has1 & has2).astype(np.int64)
        vol = np.where(ok, vol, np.iinfo(np.int64).max)
        i = int(np.argmin(vol))
        if ok[i] and (best_vol is None or vol[i] < best_vol):
            best_vol, best_lab = int(vol[i]), start + i
    return best_vol, best_lab


def brute_force_bipartition(p: SparsePattern, eps, max_part: int | None = None) -> BruteForceResult:
    """Minimum volume over all balanced 2-labelings of the nonzeros."""
    eps = parse_epsilon(eps) if not isinstance(eps, Fraction) else eps
    if p.nnz > MAX_BRUTE_NONZEROS:
        raise OracleLimitError(f"{p.nnz} nonzeros exceeds the enumeration cap {MAX_BRUTE_NONZEROS}")
    cap = max_part_size(p.nnz, eps) if max_part is None else max_part
    vol, lab = min_volume_labeling(_line_masks(p, p.nonzeros), p.nnz, cap)
    if vol is None:
        return BruteForceResult(None, None)
    parts = {rc: PART1 if lab >> bit & 1 else PART2 for bit, rc in enumerate(p.nonzeros)}
    n1 = sum(1 for v in parts.values() if v == PART1)
    return BruteForceResult(vol, Solution(parts, vol, (n1, p.nnz - n1)))


def best_completion(state) -> int | None:
    """Fewest cut lines over balanced completions of a partial assignment.

    Nonzeros on red (blue) lines are fixed to part 1 (2); the others are
    enumerated. Lines already marked cut always count.
    """
    from .assignstate import BLUE, CUT, RED

    g = state.graph
    status = state.status
    free_edges, fixed1, fixed2 = [], 0, 0
    forced = {}
    for e, (u, v) in enumerate(g.edges):
        if status[u] == RED or status[v] == RED:
            fixed1 += 1
            lab = 1
        elif status[u] == BLUE or status[v] == BLUE:
            fixed2 += 1
            lab = 2
        else:
            free_edges.append(e)
            continue
        for w in (u, v):
            forced[w] = forced.get(w, 0) | lab
    if len(free_edges) > MAX_BRUTE_NONZEROS:
        raise OracleLimitError("too many free edges")
    bit = {e: i for i, e in enumerate(free_edges)}
    base = 0
    lines = []
    for u in range(g.n_lines):
        if status[u] == CUT:
            base += 1
            continue
        mk = 0
        for e in g.eids[u]:
            if e in bit:
                mk |= 1 << bit[e]
        f = forced.get(u, 0)
        if f == 3:
            base += 1
        elif mk:
            lines.append((np.uint64(mk), bool(f & 1), bool(f & 2)))
    vol, _ = min_volume_labeling(
        [], len(free_edges), state.max_part, fixed_ones=fixed1,
        fixed_count=fixed1 + fixed2, base_volume=base, free_lines=lines,
    )
    return vol


def min_vertex_cut(adj: dict, sources, sinks, candidates=None) -> int:
    """Smallest vertex set whose removal leaves no source-sink path.

    ``adj`` maps each vertex to its neighbours. Sources and sinks may be
    removed themselves; a vertex that is both must be.
    """
    sources, sinks = set(sources), set(sinks)
    verts = set(adj) | sources | sinks
    if candidates is None:
        candidates = sorted(verts)
    if len(candidates) > MAX_CUT_CANDIDATES:
        raise OracleLimitError(f"{len(candidates)} candidates exceeds {MAX_CUT_CANDIDATES}")

    def separated(removed) -> bool:
        seen = {s for s in sources if s not in removed}
        todo = list(seen)
        while todo:
            x = todo.pop()
            if x in sinks:
                return False
            for y in adj.get(x, ()):
                if y not in removed and y not in seen:
                    seen.add(y)
                    todo.append(y)
        return True

    for k in range(len(candidates) + 1):
        for removed in itertools.combinations(candidates, k):
            if separated(set(removed)):
                return k
    raise AssertionError("removing every vertex must separate")


def max_matching_bound(state) -> int:
    """Maximum matching on free edges between partially red and partially
    blue lines (the bound the flow bound generalises)."""
    import networkx as nx

    g = state.graph
    pr = [u for u in range(g.n_lines) if state.partially_red(u)]
    pb = {u for u in range(g.n_lines) if state.partially_blue(u)}
    h = nx.Graph()
    for u in pr:
        for v in g.nbrs[u]:
            if v in pb:
                h.add_edge(("r", u), ("b", v))
    if h.number_of_edges() == 0:
        return 0
    return len(nx.max_weight_matching(h, maxcardinality=True))


@dataclass
class VerifyReport:
    ok: bool
    volume: int | None
    balanced: bool
    part_sizes: tuple[int, int] | None
    problems: list[str] = field(default_factory=list)


def verify(p: SparsePattern, s: Solution | dict, eps, claimed_volume: int | None = None) -> VerifyReport:
    """Recompute volume and balance of ``s`` from scratch and compare."""
    try:
        ev = evaluate(p, s, eps)
    except SolutionError as exc:
        return VerifyReport(False, None, False, None, [str(exc)])
    problems = []
    if not ev.balanced:
        cap = max_part_size(p.nnz, parse_epsilon(eps) if not isinstance(eps, Fraction) else eps)
        problems.append(f"imbalanced: part sizes {ev.part_sizes} exceed {cap}")
    if claimed_volume is not None and claimed_volume != ev.volume:
        problems.append(f"claimed volume {claimed_volume}, recomputed {ev.volume}")
    return VerifyReport(not problems, ev.volume, ev.balanced, ev.part_sizes, problems)


@dataclass(frozen=True)
class RandomSpec:
    m: int
    n: int
    count: int | None = None
    density: float | None = None
    seed: int = 0


def random_pattern(spec: RandomSpec) -> SparsePattern:
    """Seeded sample of distinct coordinates from the ``m x n`` grid."""
    total = spec.m * spec.n
    if spec.count is not None:
        count = spec.count
    elif spec.density is not None:
        count = max(1, round(spec.density * total))
    else:
        raise ValueError("give a count or a density")
    if count > total:
        raise ValueError(f"cannot place {count} nonzeros in a {spec.m}x{spec.n} grid")
    rng = np.random.default_rng(spec.seed)
    cells = rng.choice(total, size=count, replace=False)
    return SparsePattern.from_coords(spec.m, spec.n, ((int(c) // spec.n + 1, int(c) % spec.n + 1) for c in cells))
