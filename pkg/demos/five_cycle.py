"""A five-cycle from decomposition to parse tree, and back.

Run: python demos/five_cycle.py
"""

from rwsat import BranchDecomposition, build_parse_tree, exact_decomposition, width
from rwsat.formula import SignedGraph
from rwsat.parsetree import evaluate_parse_tree, evaluate_subtree

# a-b-c-d-e-a, every edge positive
g = SignedGraph.from_edges(5, [(i, (i + 1) % 5) for i in range(5)], names=list("abcde"))

# Splitting {a,b,c} from {d,e} needs two labels: a and c both see the other side,
# but through different neighbours.
d = BranchDecomposition.from_nested(((0, (1, 2)), (3, 4)))
print("hand-made decomposition:", width(d, g))
print("best possible:          ", width(exact_decomposition(g), g))

tree = build_parse_tree(d, g)
print()
print(tree.dump())

# Watch the graph grow bottom-up.  Labels are shown after each node relabels.
print()
for z in tree.postorder():
    if tree.children[z] is None:
        continue
    sub = evaluate_subtree(tree, z)
    names = [g.names[v] for v in sub.vertices]
    edges = sorted(f"{g.names[u]}{g.names[v]}" for u, v in sub.pos_edges)
    labels = {g.names[v]: format(sub.lab_plus[v], f"0{tree.t_plus}b")[::-1] for v in sub.vertices}
    print(f"node {z}: vertices {names} edges {edges} labels {labels}")

print()
print("regenerates the cycle:", evaluate_parse_tree(tree).same_graph(g))
