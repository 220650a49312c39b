"""Sparse patterns, Matrix Market I/O, the bipartite line graph, and
evaluation of complete bipartitionings.

Rows and columns are both called *lines*. In the line graph, row ``i``
(1-based) is vertex ``i - 1`` and column ``j`` is vertex ``m + j - 1``;
every nonzero is one edge.
"""

from __future__ import annotations

import gzip
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, TextIO

PART1 = 1
PART2 = 2
FREE = 3

_MM_FIELDS = {"pattern", "real", "integer", "complex", "double"}
_MM_SYMMETRY = {"general", "symmetric", "skew-symmetric", "hermitian"}


class MatrixMarketError(ValueError):
    """Raised for unreadable Matrix Market input. ``lineno`` is 1-based."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class SolutionError(ValueError):
    """Raised when a labeling does not fit its pattern."""


@dataclass(frozen=True)
class SparsePattern:
    """Nonzero structure of an ``m x n`` matrix.

    ``nonzeros`` holds sorted, distinct 1-based ``(row, col)`` pairs.
    """

    m: int
    n: int
    nonzeros: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError(f"matrix dimensions must be positive, got {self.m}x{self.n}")
        nz = tuple(sorted(set((int(r), int(c)) for r, c in self.nonzeros)))
        if len(nz) != len(self.nonzeros):
            raise ValueError("duplicate coordinates in pattern")
        for r, c in nz:
            if not (1 <= r <= self.m and 1 <= c <= self.n):
                raise ValueError(f"coordinate ({r}, {c}) outside {self.m}x{self.n}")
        object.__setattr__(self, "nonzeros", nz)

    @classmethod
    def from_coords(cls, m: int, n: int, coords: Iterable[tuple[int, int]]) -> "SparsePattern":
        """Build a pattern, silently collapsing duplicate coordinates."""
        return cls(m, n, tuple(set(coords)))

    @property
    def nnz(self) -> int:
        return len(self.nonzeros)

    def transpose(self) -> "SparsePattern":
        return SparsePattern(self.n, self.m, tuple((c, r) for r, c in self.nonzeros))


def parse_epsilon(value) -> Fraction:
    """Convert ``value`` to an exact imbalance fraction in ``[0, 1)``.

    Strings may be decimals (``"0.03"``) or ratios (``"3/100"``); decimal
    strings are read exactly, never through a float.
    """
    if isinstance(value, float):
        raise TypeError("pass epsilon as a string or Fraction, not a float")
    try:
        eps = Fraction(value.strip()) if isinstance(value, str) else Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"invalid epsilon {value!r}") from exc
    if not (0 <= eps < 1):
        raise ValueError(f"epsilon must lie in [0, 1), got {eps}")
    return eps


def max_part_size(nz: int, eps) -> int:
    """Largest admissible part: ``floor((1 + eps) * ceil(nz / 2))``."""
    eps = parse_epsilon(eps) if not isinstance(eps, Fraction) else eps
    half = (nz + 1) // 2
    return (eps.denominator + eps.numerator) * half // eps.denominator


# ---------------------------------------------------------------- Matrix Market


def parse_matrix_market(text: str | TextIO) -> SparsePattern:
    """Read a coordinate Matrix Market file as a pattern.

    Values are ignored and explicitly stored zeros count as nonzeros.
    Symmetric, skew-symmetric and hermitian files are expanded to both
    triangles.
    """
    lines = text.splitlines() if isinstance(text, str) else text.read().splitlines()
    if not lines:
        raise MatrixMarketError("empty input", 1)
    header = lines[0].split()
    if len(header) != 5 or header[0].lower() != "%%matrixmarket":
        raise MatrixMarketError("missing '%%MatrixMarket' banner", 1)
    obj, fmt, fld, sym = (h.lower() for h in header[1:])
    if obj != "matrix":
        raise MatrixMarketError(f"unsupported object {obj!r}", 1)
    if fmt == "array":
        raise MatrixMarketError("dense 'array' format is not supported", 1)
    if fmt != "coordinate":
        raise MatrixMarketError(f"unknown format {fmt!r}", 1)
    if fld not in _MM_FIELDS:
        raise MatrixMarketError(f"unknown field {fld!r}", 1)
    if sym not in _MM_SYMMETRY:
        raise MatrixMarketError(f"unknown symmetry {sym!r}", 1)
    ntok = {"pattern": 2, "complex": 4}.get(fld, 3)

    idx = 1
    while idx < len(lines) and (not lines[idx].strip() or lines[idx].lstrip().startswith("%")):
        idx += 1
    if idx == len(lines):
        raise MatrixMarketError("missing size line", idx)
    try:
        m, n, count = (int(t) for t in lines[idx].split())
    except ValueError:
        raise MatrixMarketError(f"malformed size line {lines[idx]!r}", idx + 1) from None
    if m < 1 or n < 1 or count < 0:
        raise MatrixMarketError(f"invalid sizes {m} {n} {count}", idx + 1)

    coords = set()
    seen = 0
    for lineno in range(idx + 2, len(lines) + 1):
        raw = lines[lineno - 1].strip()
        if not raw or raw.startswith("%"):
            continue
        tok = raw.split()
        if len(tok) < ntok:
            raise MatrixMarketError(f"expected {ntok} fields, got {len(tok)}", lineno)
        try:
            r, c = int(tok[0]), int(tok[1])
        except ValueError:
            raise MatrixMarketError(f"non-integer index in {raw!r}", lineno) from None
        if not (1 <= r <= m and 1 <= c <= n):
            raise MatrixMarketError(f"index ({r}, {c}) outside {m}x{n}", lineno)
        seen += 1
        coords.add((r, c))
        if sym != "general" and r != c:
            if c > m or r > n:
                raise MatrixMarketError(f"mirror of ({r}, {c}) outside {m}x{n}", lineno)
            coords.add((c, r))
    if seen != count:
        raise MatrixMarketError(f"size line declares {count} entries, found {seen}", idx + 1)
    return SparsePattern.from_coords(m, n, coords)


def read_matrix_market(path) -> SparsePattern:
    path = str(path)
    opener = gzip.open if path.endswith(".gz") else open
    with opener(path, "rt") as fh:
        return parse_matrix_market(fh.read())


def serialize_matrix_market(p: SparsePattern) -> str:
    """Canonical pattern file: general symmetry, entries sorted by (row, col)."""
    out = ["%%MatrixMarket matrix coordinate pattern general", f"{p.m} {p.n} {p.nnz}"]
    out.extend(f"{r} {c}" for r, c in p.nonzeros)
    return "\n".join(out) + "\n"


def write_matrix_market(p: SparsePattern, path) -> None:
    with open(path, "w") as fh:
        fh.write(serialize_matrix_market(p))


# ------------------------------------------------------------------ line graph


class LineGraph:
    """Bipartite graph with one vertex per line and one edge per nonzero.

    ``nbrs[u]`` and ``eids[u]`` are parallel lists (sorted by neighbour) of
    the neighbours of line ``u`` and the ids of the connecting edges;
    ``edges[e]`` is ``(row_line, col_line)`` and ``coords[e]`` the original
    1-based coordinate.
    """

    def __init__(self, p: SparsePattern):
        self.m = p.m
        self.n = p.n
        self.n_lines = p.m + p.n
        self.coords = p.nonzeros
        self.edges = [(r - 1, p.m + c - 1) for r, c in p.nonzeros]
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n_lines)]
        for e, (u, v) in enumerate(self.edges):
            adj[u].append((v, e))
            adj[v].append((u, e))
        for lst in adj:
            lst.sort()
        self.nbrs = [[v for v, _ in lst] for lst in adj]
        self.eids = [[e for _, e in lst] for lst in adj]
        self.degree = [len(lst) for lst in adj]

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def is_row(self, u: int) -> bool:
        return u < self.m

    def line_name(self, u: int) -> str:
        return f"row {u + 1}" if u < self.m else f"col {u - self.m + 1}"


def build_line_graph(p: SparsePattern) -> LineGraph:
    return LineGraph(p)


# ------------------------------------------------------------------- solutions


@dataclass(frozen=True)
class Solution:
    """Per-nonzero labels in ``{PART1, PART2, FREE}`` plus certificates.

    A ``FREE`` nonzero sits on a row and a column that are both cut by the
    labelled nonzeros, so it may go to either part at no cost.
    """

    parts: dict[tuple[int, int], int]
    volume: int
    part_sizes: tuple[int, int]
    free: int = field(default=0)


class Evaluation(NamedTuple):
    volume: int
    balanced: bool
    part_sizes: tuple[int, int]
    free: int


def settle_free(n1: int, n2: int, free: int) -> tuple[int, int]:
    """Distribute ``free`` nonzeros onto the smaller part first."""
    lo, hi = min(n1, n2), max(n1, n2)
    fill = min(free, hi - lo)
    lo += fill
    rest = free - fill
    lo += (rest + 1) // 2
    hi += rest // 2
    if n1 <= n2:
        return lo, hi
    return hi, lo


def cut_lines(p: SparsePattern, parts: dict) -> set[int]:
    """Line ids (row ``i`` -> ``i-1``, column ``j`` -> ``m+j-1``) that carry
    both a ``PART1`` and a ``PART2`` nonzero."""
    seen: dict[int, int] = {}
    for (r, c), lab in parts.items():
        if lab == FREE:
            continue
        for u in (r - 1, p.m + c - 1):
            seen[u] = seen.get(u, 0) | lab
    return {u for u, mask in seen.items() if mask == 3}


def evaluate(p: SparsePattern, s: Solution | dict, eps) -> Evaluation:
    """Volume and balance of a complete labeling of ``p``'s nonzeros."""
    parts = s.parts if isinstance(s, Solution) else s
    eps = parse_epsilon(eps) if not isinstance(eps, Fraction) else eps
    nzset = set(p.nonzeros)
    for coord, lab in parts.items():
        if coord not in nzset:
            raise SolutionError(f"label for {coord}, which is not a nonzero")
        if lab not in (PART1, PART2, FREE):
            raise SolutionError(f"invalid label {lab!r} at {coord}")
    if len(parts) != len(nzset):
        missing = sorted(nzset - set(parts))
        raise SolutionError(f"{len(missing)} nonzeros unlabeled, first {missing[0]}")
    cut = cut_lines(p, parts)
    n1 = n2 = free = 0
    for (r, c), lab in parts.items():
        if lab == PART1:
            n1 += 1
        elif lab == PART2:
            n2 += 1
        else:
            if r - 1 not in cut or p.m + c - 1 not in cut:
                raise SolutionError(f"free nonzero ({r}, {c}) lies on an uncut line")
            free += 1
    sizes = settle_free(n1, n2, free)
    cap = max_part_size(p.nnz, eps)
    return Evaluation(len(cut), sizes[0] <= cap and sizes[1] <= cap, sizes, free)
