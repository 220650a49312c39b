"""Compare heuristic volumes against known optima.

A ratio is ``heuristic / optimal``. For an optimum of zero the ratio is 1
when the heuristic also found zero and infinite otherwise. The geometric
mean skips matrices whose optimum is zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

DEFAULT_THRESHOLDS = (1.0, 1.05, 1.1, 1.25, 1.5, 2.0, 3.0, 5.0, 10.0)


class BenchError(ValueError):
    pass


@dataclass(frozen=True)
class BenchRecord:
    name: str
    optimal: int
    heuristic: int

    @property
    def ratio(self) -> float:
        return volume_ratio(self.heuristic, self.optimal)


@dataclass
class BenchSummary:
    records: list[BenchRecord]
    geomean: float | None
    profile: list[tuple[float, float]]
    infinite: int
    only_optimal: list[str]
    only_heuristic: list[str]


def volume_ratio(heuristic: int, optimal: int) -> float:
    if optimal == 0:
        return 1.0 if heuristic == 0 else math.inf
    return heuristic / optimal


def parse_table(text: str, what: str = "table") -> dict[str, int]:
    """``name volume`` pairs; blank lines and ``#`` / ``%`` comments skipped."""
    table = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line[0] in "#%":
            continue
        tok = line.split()
        if len(tok) != 2:
            raise BenchError(f"{what} line {lineno}: expected 'name volume'")
        try:
            vol = int(tok[1])
        except ValueError:
            raise BenchError(f"{what} line {lineno}: volume {tok[1]!r} is not an integer") from None
        if vol < 0:
            raise BenchError(f"{what} line {lineno}: negative volume")
        if tok[0] in table:
            raise BenchError(f"{what} line {lineno}: duplicate name {tok[0]!r}")
        table[tok[0]] = vol
    return table


def geometric_mean(values) -> float | None:
    values = list(values)
    if not values:
        return None
    if any(v == math.inf for v in values):
        return math.inf
    if len(values) == 1:
        # exp(log(r)) is not always r in floating point
        return float(values[0])
    return math.exp(math.fsum(math.log(v) for v in values) / len(values))


def performance_profile(ratios, thresholds=DEFAULT_THRESHOLDS) -> list[tuple[float, float]]:
    """Fraction of ratios at or below each threshold."""
    ratios = list(ratios)
    if not ratios:
        return [(t, 0.0) for t in thresholds]
    return [(t, sum(1 for r in ratios if r <= t) / len(ratios)) for t in thresholds]


def compare(optimal: dict[str, int], heuristic: dict[str, int],
            thresholds=DEFAULT_THRESHOLDS) -> BenchSummary:
    common = sorted(set(optimal) & set(heuristic))
    records = [BenchRecord(k, optimal[k], heuristic[k]) for k in common]
    ratios = [r.ratio for r in records]
    return BenchSummary(
        records=records,
        geomean=geometric_mean(r.ratio for r in records if r.optimal > 0),
        profile=performance_profile(ratios, thresholds),
        infinite=sum(1 for x in ratios if x == math.inf),
        only_optimal=sorted(set(optimal) - set(heuristic)),
        only_heuristic=sorted(set(heuristic) - set(optimal)),
    )


def format_summary(s: BenchSummary) -> str:
    out = []
    for r in s.records:
        out.append(f"{r.name} optimal={r.optimal} heuristic={r.heuristic} ratio={r.ratio:.6g}")
    gm = "-" if s.geomean is None else f"{s.geomean:.12g}"
    counted = sum(1 for r in s.records if r.optimal > 0)
    out.append(f"geomean={gm} matrices={counted} excluded_zero={len(s.records) - counted}")
    for t, frac in s.profile:
        out.append(f"profile r={t:g} fraction={frac:.6f}")
    out.append(f"profile r=inf infinite={s.infinite}")
    for name in s.only_optimal:
        out.append(f"missing heuristic: {name}")
    for name in s.only_heuristic:
        out.append(f"missing optimal: {name}")
    return "\n".join(out) + "\n"
