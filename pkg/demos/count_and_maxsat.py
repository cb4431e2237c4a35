"""Model counting and Max-SAT on a small formula, checked against brute force.

Run: python demos/count_and_maxsat.py
"""

from rwsat import build_signed_graph, parse_dimacs, solve, width
from rwsat.decomposition import heuristic_decomposition, random_decomposition
from rwsat.dp import COUNTING, run_dp
from rwsat.oracle import brute_force_count, brute_force_max_sat
from rwsat.parsetree import build_parse_tree

text = """\
c exactly one of x1, x2, x3, and x4 equals x1
p cnf 4 6
1 2 3 0
-1 -2 0
-1 -3 0
-2 -3 0
-1 4 0
1 -4 0
"""
f = parse_dimacs(text)
g = build_signed_graph(f)
print(f"{f.num_vars} variables, {f.num_clauses} clauses, {g.num_vertices} graph vertices")

for mode in ("count", "maxsat"):
    s = solve(f, mode)
    print(f"{mode}: {s.value} (decomposition {s.source}, widths t+={s.t_plus} t-={s.t_minus})")
print("brute force:", brute_force_count(f), brute_force_max_sat(f))

# Any decomposition gives the same answer; only the table sizes change.
print()
for name, d in (("heuristic", heuristic_decomposition(g)), ("random", random_decomposition(g, seed=5))):
    tree = build_parse_tree(d, g)
    res = run_dp(tree, COUNTING, f.num_clauses, keep_tables=True)
    biggest = max(len(t) for t in res.tables.values())
    print(f"{name:9s} signed width {width(d, g).signed}, count {res.value}, largest table {biggest} entries")

# Adding a contradiction: no models left, but all but one clause can still hold.
g2 = parse_dimacs(text.replace("p cnf 4 6", "p cnf 4 8") + "4 0\n-4 0\n")
print()
print("with x4 and not x4 added:", solve(g2, "count").value, "models,", solve(g2, "maxsat").value, "of 8 clauses")
