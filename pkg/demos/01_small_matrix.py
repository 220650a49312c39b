# Partition a small matrix to optimality and look at the result.
from fractions import Fraction

from mbipart import SparsePattern, evaluate, solve
from mbipart.oracle import brute_force_bipartition

# a 4x4 arrow matrix: dense first row and column plus the diagonal
coords = [(1, j) for j in range(1, 5)] + [(i, 1) for i in range(2, 5)] + [(i, i) for i in range(2, 5)]
p = SparsePattern.from_coords(4, 4, coords)
print(p.m, p.n, p.nnz)

eps = Fraction(3, 100)
rep = solve(p, eps=eps)
print(rep.status, rep.optimal_volume, "nodes:", rep.nodes, "rounds:", rep.upper_bounds)

# labels per nonzero: 1 and 2 are the parts, 3 marks a free nonzero
for (r, c), part in sorted(rep.incumbent.parts.items()):
    print(f"  ({r},{c}) -> {part}")

# recompute from scratch, and compare with exhaustive enumeration
print(evaluate(p, rep.incumbent, eps))
print("brute force:", brute_force_bipartition(p, eps).volume)

# a looser balance never costs more volume
for e in ("0", "0.03", "0.1", "0.5"):
    print(e, solve(p, eps=e).optimal_volume)
