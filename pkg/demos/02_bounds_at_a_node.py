# What the lower bounds see at one search node.
from fractions import Fraction

from mbipart.assignstate import BLUE, RED, SearchState, STATUS_NAMES
from mbipart.bounds import (
    FlowNetwork, combined_lower_bound, extended_packing_bound, flow_exclusions,
    local_packing_bound, packing_subgraphs,
)
from mbipart.oracle import best_completion
from mbipart.pattern import LineGraph, SparsePattern

# upper bidiagonal 6x6: the line graph is one long path
n = 6
p = SparsePattern.from_coords(n, n, [(i, i) for i in range(1, n + 1)] + [(i, i + 1) for i in range(1, n)])
g = LineGraph(p)
s = SearchState(g, Fraction(1, 10))

# colour row 1 red and row 6 blue
s.apply(0, RED)
s.apply(5, BLUE)
for u in range(g.n_lines):
    tags = []
    if s.partially_red(u):
        tags.append("partially red")
    if s.partially_blue(u):
        tags.append("partially blue")
    print(g.line_name(u), STATUS_NAMES[s.status[u]], s.free_deg[u], ", ".join(tags))

print("local packing:", local_packing_bound(s, RED), local_packing_bound(s, BLUE))

net = FlowNetwork(s)
print("flow:", net.augment(), "paths:", [[g.line_name(v) for v in path] for path in net.paths()])

lines, edges = flow_exclusions(net)
for sub in packing_subgraphs(s, lines, edges):
    print("subgraph from", g.line_name(sub.seed), "edges:", len(sub.edges))
print("extended packing:", extended_packing_bound(s, lines, edges))

print("combined:", combined_lower_bound(s, FlowNetwork(s), 100).bound)
print("true best completion:", best_completion(s))
