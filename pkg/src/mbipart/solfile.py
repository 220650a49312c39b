"""Plain-text solution files.

Layout::

    % optional comment lines
    <m> <n> <nz> <volume> <epsNum>/<epsDen>
    <row> <col> <part>        one line per nonzero, sorted by (row, col)

``part`` is 1 or 2, or 3 for a free nonzero.
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

from .pattern import FREE, PART1, PART2, Solution, SolutionError, settle_free


class SolutionHeader(NamedTuple):
    m: int
    n: int
    nnz: int
    volume: int
    eps: Fraction


def format_solution(m: int, n: int, sol: Solution, eps: Fraction, comments=()) -> str:
    eps = Fraction(eps)
    out = [f"% {c}" for c in comments]
    out.append(f"{m} {n} {len(sol.parts)} {sol.volume} {eps.numerator}/{eps.denominator}")
    out.extend(f"{r} {c} {lab}" for (r, c), lab in sorted(sol.parts.items()))
    return "\n".join(out) + "\n"


def parse_solution(text: str) -> tuple[SolutionHeader, Solution]:
    header = None
    parts = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        tok = line.split()
        if header is None:
            if len(tok) != 5:
                raise SolutionError(f"line {lineno}: expected '<m> <n> <nz> <volume> <num>/<den>'")
            try:
                m, n, nz, vol = (int(t) for t in tok[:4])
                num, den = tok[4].split("/")
                eps = Fraction(int(num), int(den))
            except (ValueError, ZeroDivisionError):
                raise SolutionError(f"line {lineno}: malformed header {line!r}") from None
            header = SolutionHeader(m, n, nz, vol, eps)
            continue
        try:
            r, c, lab = (int(t) for t in tok)
        except ValueError:
            raise SolutionError(f"line {lineno}: expected '<row> <col> <part>'") from None
        if lab not in (PART1, PART2, FREE):
            raise SolutionError(f"line {lineno}: part must be 1, 2 or 3, got {lab}")
        if (r, c) in parts:
            raise SolutionError(f"line {lineno}: duplicate entry ({r}, {c})")
        parts[(r, c)] = lab
    if header is None:
        raise SolutionError("missing header line")
    if len(parts) != header.nnz:
        raise SolutionError(f"header declares {header.nnz} entries, found {len(parts)}")
    labs = list(parts.values())
    sizes = settle_free(labs.count(PART1), labs.count(PART2), labs.count(FREE))
    return header, Solution(parts, header.volume, sizes, labs.count(FREE))


def write_solution(path, m: int, n: int, sol: Solution, eps: Fraction, comments=()) -> None:
    with open(path, "w") as fh:
        fh.write(format_solution(m, n, sol, eps, comments))


def read_solution(path) -> tuple[SolutionHeader, Solution]:
    with open(path) as fh:
        return parse_solution(fh.read())
