# The graph constructions behind the hardness result, checked by enumeration.
from fractions import Fraction

from mbipart.reductions import (
    SimpleGraph, bipartite_to_pattern, bisection_cap, clique_expansion, clique_expansion_size,
    edge_bisection_oracle, edge_bisection_report, edge_split, graph_bisection_oracle,
)
from mbipart.solver import solve

k4 = SimpleGraph(4, tuple((u, v) for u in range(4) for v in range(u + 1, 4)))

# subdividing every edge makes the graph bipartite ...
s = edge_split(k4)
print(s.n, s.m)

# ... so it is the line graph of a matrix: rows are the old vertices
p = bipartite_to_pattern(s, left=range(4))
print(p.m, p.n, p.nnz)

# edge bisection of K4 equals the optimal volume of that matrix
eps = Fraction(0)
print(edge_bisection_oracle(k4, eps), solve(p, eps=eps).optimal_volume)

# the two balance conventions differ when (1 + eps) |E| / 2 is fractional
tri = SimpleGraph(3, ((0, 1), (1, 2), (0, 2)))
print(edge_bisection_report(tri, eps))
print(bisection_cap(3, eps, "proof"), bisection_cap(3, eps, "ceil"))

# clique expansion grows fast
for g in (SimpleGraph(2, ((0, 1),)), SimpleGraph(3, ((0, 1), (1, 2))), k4):
    print(g.n, g.m, "->", clique_expansion_size(g))

# the smallest case is still enumerable
k2 = SimpleGraph(2, ((0, 1),))
print(graph_bisection_oracle(k2, eps), edge_bisection_oracle(clique_expansion(k2), eps))
