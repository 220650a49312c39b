# Ratio statistics of a heuristic against proven optima.
import math

from mbipart import bench

optimal = {"a": 2, "b": 4, "c": 0, "d": 0, "e": 5}
heuristic = {"a": 2, "b": 8, "c": 0, "d": 3, "e": 6}

s = bench.compare(optimal, heuristic, thresholds=(1.0, 1.25, 1.5, 2.0))
print(bench.format_summary(s))

# zero optima: ratio 1 if the heuristic also found 0, infinite otherwise,
# and neither enters the geometric mean
print(bench.volume_ratio(0, 0), bench.volume_ratio(3, 0))
print(s.geomean, math.prod([1.0, 2.0, 1.2]) ** (1 / 3))
