"""Running time grows linearly along a family of fixed width.

The chain (x1∨x2)∧(x2∨x3)∧… has signed width 1 however long it gets, so
doubling the formula should roughly double the time.

Run: python demos/chain_scaling.py
"""

import time

from rwsat import build_parse_tree, build_signed_graph, count_models, heuristic_decomposition, width
from rwsat.generators import chain

prev = None
for m in (500, 1000, 2000, 4000):
    f = chain(m)
    g = build_signed_graph(f)
    d = heuristic_decomposition(g)
    tree = build_parse_tree(d, g)
    t0 = time.perf_counter()
    n = count_models(tree, f)
    dt = time.perf_counter() - t0
    note = "" if prev is None else f"  x{dt / prev:.2f}"
    print(f"{m:5d} clauses  width {width(d, g).signed}  {dt:.3f}s{note}  count has {n.bit_length()} bits")
    prev = dt

# The counts are Fibonacci numbers: x_i = 0 forces x_{i+1} = 1.
counts = []
for m in range(1, 9):
    f = chain(m)
    g = build_signed_graph(f)
    counts.append(count_models(build_parse_tree(heuristic_decomposition(g), g), f))
print("counts for 1..8 clauses:", counts)
