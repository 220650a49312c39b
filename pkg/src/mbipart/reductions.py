"""Graph constructions linking edge bisection, graph bisection and matrix
bipartitioning, with brute-force bisection oracles for tiny graphs.

Graphs are undirected and simple. Vertices are 0-based internally and
1-based in the text format::

    p <vertices> <edges>
    u v
    ...
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import NamedTuple

import numpy as np

from .pattern import SparsePattern, max_part_size, parse_epsilon

MAX_ORACLE_BITS = 20
DEFAULT_MAX_EXPANSION_EDGES = 2_000_000
_CHUNK = 1 << 16


class GraphFormatError(ValueError):
    pass


class ReductionSizeError(ValueError):
    """Output would exceed the size cap. ``vertices`` and ``edges`` hold
    the size that was refused."""

    def __init__(self, vertices: int, edges: int, cap: int):
        self.vertices = vertices
        self.edges = edges
        super().__init__(
            f"clique expansion would have {vertices} vertices and {edges} edges "
            f"(cap {cap} edges); pass force=True to build it anyway"
        )


@dataclass(frozen=True)
class SimpleGraph:
    """``n`` vertices and a sorted tuple of ``(u, v)`` edges with ``u < v``."""

    n: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        canon = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) outside 0..{self.n - 1}")
            e = (min(u, v), max(u, v))
            if e in canon:
                raise ValueError(f"duplicate edge {e}")
            canon.add(e)
        object.__setattr__(self, "edges", tuple(sorted(canon)))

    @property
    def m(self) -> int:
        return len(self.edges)

    def adjacency(self) -> list[list[int]]:
        adj = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj


def parse_graph(text: str) -> SimpleGraph:
    """Read the ``p <V> <E>`` edge-list format. ``%`` and ``c`` start comments."""
    header = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line[0] in "%c":
            continue
        tok = line.split()
        if header is None:
            if tok[0] != "p" or len(tok) != 3:
                raise GraphFormatError(f"line {lineno}: expected 'p <vertices> <edges>'")
            try:
                header = (int(tok[1]), int(tok[2]))
            except ValueError:
                raise GraphFormatError(f"line {lineno}: non-integer size") from None
            continue
        if len(tok) != 2:
            raise GraphFormatError(f"line {lineno}: expected 'u v'")
        try:
            u, v = int(tok[0]), int(tok[1])
        except ValueError:
            raise GraphFormatError(f"line {lineno}: non-integer vertex") from None
        if not (1 <= u <= header[0] and 1 <= v <= header[0]):
            raise GraphFormatError(f"line {lineno}: vertex outside 1..{header[0]}")
        edges.append((u - 1, v - 1))
    if header is None:
        raise GraphFormatError("missing 'p' line")
    if len(edges) != header[1]:
        raise GraphFormatError(f"header declares {header[1]} edges, found {len(edges)}")
    try:
        return SimpleGraph(header[0], tuple(edges))
    except ValueError as exc:
        raise GraphFormatError(str(exc)) from None


def read_graph(path) -> SimpleGraph:
    with open(path) as fh:
        return parse_graph(fh.read())


def serialize_graph(g: SimpleGraph) -> str:
    out = [f"p {g.n} {g.m}"]
    out.extend(f"{u + 1} {v + 1}" for u, v in g.edges)
    return "\n".join(out) + "\n"


def write_graph(g: SimpleGraph, path) -> None:
    with open(path, "w") as fh:
        fh.write(serialize_graph(g))


# --------------------------------------------------------------- constructions


def edge_split(g: SimpleGraph) -> SimpleGraph:
    """Subdivide every edge once. Edge ``i`` gets midpoint ``g.n + i``."""
    edges = []
    for i, (u, v) in enumerate(g.edges):
        mid = g.n + i
        edges.append((u, mid))
        edges.append((v, mid))
    return SimpleGraph(g.n + g.m, tuple(edges))


def two_coloring(g: SimpleGraph) -> list[int] | None:
    """0/1 side per vertex, or ``None`` if ``g`` has an odd cycle.

    Each component's lowest vertex goes on side 0.
    """
    side = [-1] * g.n
    adj = g.adjacency()
    for s in range(g.n):
        if side[s] >= 0:
            continue
        side[s] = 0
        todo = deque([s])
        while todo:
            x = todo.popleft()
            for y in adj[x]:
                if side[y] < 0:
                    side[y] = 1 - side[x]
                    todo.append(y)
                elif side[y] == side[x]:
                    return None
    return side


def bipartite_to_pattern(g: SimpleGraph, left=None) -> SparsePattern:
    """Incidence pattern with one row per ``left`` vertex and one column per
    remaining vertex, both in increasing vertex order.

    Without ``left`` a 2-colouring picks the sides.
    """
    if left is None:
        side = two_coloring(g)
        if side is None:
            raise ValueError("graph is not bipartite")
        left = [u for u in range(g.n) if side[u] == 0]
    left = set(left)
    rows = sorted(left)
    cols = [u for u in range(g.n) if u not in left]
    if not rows or not cols:
        raise ValueError("both sides must be non-empty")
    ri = {u: i + 1 for i, u in enumerate(rows)}
    ci = {u: j + 1 for j, u in enumerate(cols)}
    coords = []
    for u, v in g.edges:
        if (u in left) == (v in left):
            raise ValueError(f"edge ({u + 1}, {v + 1}) does not cross the given sides")
        if v in left:
            u, v = v, u
        coords.append((ri[u], ci[v]))
    return SparsePattern(len(rows), len(cols), tuple(coords))


def clique_size(g: SimpleGraph) -> int:
    return 4 + 2 * g.n * comb(g.m, 2)


def clique_expansion_size(g: SimpleGraph) -> tuple[int, int]:
    """``(vertices, edges)`` of the clique expansion, without building it."""
    s = clique_size(g)
    return g.n * s - g.m, g.n * s * (s - 1) // 2


def clique_expansion(g: SimpleGraph, max_edges: int = DEFAULT_MAX_EXPANSION_EDGES,
                     force: bool = False) -> SimpleGraph:
    """Replace each vertex by a clique of size ``4 + 2|V|C(|E|, 2)`` and let
    edge ``i`` glue position ``i`` of its two endpoint cliques together.

    Refuses outputs with more than ``max_edges`` edges unless ``force``.
    """
    nv, ne = clique_expansion_size(g)
    if ne > max_edges and not force:
        raise ReductionSizeError(nv, ne, max_edges)
    s = clique_size(g)
    # glue[(v, i)] = (u, i) for the i-th edge (u, v)
    glue = {(v, i): (u, i) for i, (u, v) in enumerate(g.edges)}
    ids = {}
    for u in range(g.n):
        for i in range(s):
            if (u, i) not in glue:
                ids[(u, i)] = len(ids)
    for key, target in glue.items():
        ids[key] = ids[target]
    edges = []
    for u in range(g.n):
        members = [ids[(u, i)] for i in range(s)]
        for a in range(s):
            for b in range(a + 1, s):
                edges.append((members[a], members[b]))
    return SimpleGraph(len(set(ids.values())), tuple(edges))


# --------------------------------------------------------------------- oracles


class BisectionReport(NamedTuple):
    """Results of one bisection oracle under both balance conventions."""

    proof: int | None
    proof_cap: int
    ceil: int | None
    ceil_cap: int


def bisection_cap(size: int, eps, convention: str = "proof") -> int:
    """Largest admissible part for ``size`` items.

    ``"proof"``: floor((1+eps) size / 2). ``"ceil"``: floor((1+eps) ceil(size / 2)),
    the convention the matrix solver uses.
    """
    eps = eps if isinstance(eps, Fraction) else parse_epsilon(eps)
    if convention == "proof":
        return int((1 + eps) * size / 2)
    if convention == "ceil":
        return max_part_size(size, eps)
    raise ValueError(f"unknown balance convention {convention!r}")


def _popcount(x: np.ndarray) -> np.ndarray:
    count = np.zeros(x.shape, dtype=np.int64)
    x = x.copy()
    while np.any(x):
        count += (x & np.uint64(1)).astype(np.int64)
        x >>= np.uint64(1)
    return count


def _enumerate_min(nbits: int, cap: int, cost) -> int | None:
    if nbits > MAX_ORACLE_BITS:
        raise ValueError(f"{nbits} items exceeds the enumeration cap {MAX_ORACLE_BITS}")
    best = None
    total = 1 << nbits
    for start in range(0, total, _CHUNK):
        lab = np.arange(start, min(total, start + _CHUNK), dtype=np.uint64)
        ones = _popcount(lab)
        ok = (ones <= cap) & (nbits - ones <= cap)
        if not ok.any():
            continue
        val = cost(lab)[ok]
        low = int(val.min())
        if best is None or low < best:
            best = low
    return best


def graph_bisection_oracle(g: SimpleGraph, eps, convention: str = "proof",
                           max_part: int | None = None) -> int | None:
    """Fewest cut edges over vertex 2-colourings with each side at most the
    cap; ``None`` if no colouring is balanced."""
    cap = bisection_cap(g.n, eps, convention) if max_part is None else max_part
    one = np.uint64(1)

    def cost(lab):
        cut = np.zeros(lab.shape, dtype=np.int64)
        for u, v in g.edges:
            cut += (((lab >> np.uint64(u)) ^ (lab >> np.uint64(v))) & one).astype(np.int64)
        return cut

    return _enumerate_min(g.n, cap, cost)


def edge_bisection_oracle(g: SimpleGraph, eps, convention: str = "proof",
                          max_part: int | None = None) -> int | None:
    """Fewest vertices touching both colours over edge 2-colourings with
    each side at most the cap; ``None`` if no colouring is balanced."""
    cap = bisection_cap(g.m, eps, convention) if max_part is None else max_part
    masks = [0] * g.n
    for i, (u, v) in enumerate(g.edges):
        masks[u] |= 1 << i
        masks[v] |= 1 << i
    masks = [np.uint64(mk) for mk in masks if mk]

    def cost(lab):
        cut = np.zeros(lab.shape, dtype=np.int64)
        for mk in masks:
            hit = lab & mk
            cut += ((hit != 0) & (hit != mk)).astype(np.int64)
        return cut

    return _enumerate_min(g.m, cap, cost)


def edge_bisection_report(g: SimpleGraph, eps) -> BisectionReport:
    pc, cc = bisection_cap(g.m, eps, "proof"), bisection_cap(g.m, eps, "ceil")
    return BisectionReport(
        edge_bisection_oracle(g, eps, max_part=pc), pc,
        edge_bisection_oracle(g, eps, max_part=cc), cc,
    )


def graph_bisection_report(g: SimpleGraph, eps) -> BisectionReport:
    pc, cc = bisection_cap(g.n, eps, "proof"), bisection_cap(g.n, eps, "ceil")
    return BisectionReport(
        graph_bisection_oracle(g, eps, max_part=pc), pc,
        graph_bisection_oracle(g, eps, max_part=cc), cc,
    )


def random_graph(n: int, m: int, seed: int = 0) -> SimpleGraph:
    """``m`` distinct edges drawn uniformly from the ``C(n, 2)`` pairs."""
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    if m > len(pairs):
        raise ValueError(f"cannot place {m} edges on {n} vertices")
    rng = np.random.default_rng(seed)
    pick = rng.choice(len(pairs), size=m, replace=False) if m else []
    return SimpleGraph(n, tuple(pairs[int(i)] for i in pick))


def random_bipartite_graph(a: int, b: int, m: int, seed: int = 0) -> tuple[SimpleGraph, list[int]]:
    """Random bipartite graph with sides ``0..a-1`` and ``a..a+b-1``."""
    if m > a * b:
        raise ValueError(f"cannot place {m} edges between sides of {a} and {b}")
    rng = np.random.default_rng(seed)
    pick = rng.choice(a * b, size=m, replace=False) if m else []
    edges = tuple((int(c) // b, a + int(c) % b) for c in pick)
    return SimpleGraph(a + b, edges), list(range(a))
