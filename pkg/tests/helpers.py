"""Shared test fixtures and independent reference computations."""

from __future__ import annotations

import random

from rwsat.formula import SignedGraph
from rwsat.oracle import closure


def cycle(n: int) -> SignedGraph:
    return SignedGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n: int) -> SignedGraph:
    return SignedGraph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def random_signed_graph(rng: random.Random, max_vertices: int = 8, density: float = 0.4) -> SignedGraph:
    n = rng.randint(1, max_vertices)
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    pos = [e for e in pairs if rng.random() < density]
    neg = [e for e in pairs if rng.random() < density]
    return SignedGraph.from_edges(n, pos, neg)


def ref_cut_rank(adj, side: set[int], n: int) -> int:
    """Rank over GF(2) of the cut matrix, by plain Gaussian elimination on lists."""
    rows = [[(adj[u] >> w) & 1 for w in range(n) if w not in side] for u in sorted(side)]
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                rows[i] = [a ^ b for a, b in zip(rows[i], rows[r])]
        r += 1
    return r


def all_unrooted_trees(n: int):
    """Every leaf-labelled unrooted cubic tree on leaves 0..n-1, by leaf insertion.

    Yielded as edge lists over node ids (leaves are 0..n-1, internal nodes n..).
    """
    if n == 1:
        yield []
        return
    if n == 2:
        yield [(0, 1)]
        return

    def grow(edges, k, next_id):
        if k == n:
            yield edges
            return
        for i, (a, b) in enumerate(edges):
            m = next_id
            rest = edges[:i] + edges[i + 1:]
            yield from grow(rest + [(a, m), (m, b), (m, k)], k + 1, next_id + 1)

    yield from grow([(0, n), (1, n), (2, n)], 3, n + 1)


def tree_signed_width(edges, n: int, g: SignedGraph) -> int:
    """Max over tree edges of rho+ + rho- of the leaf set on one side."""
    if not edges:
        return 0
    nbrs: dict[int, list[int]] = {}
    for a, b in edges:
        nbrs.setdefault(a, []).append(b)
        nbrs.setdefault(b, []).append(a)
    best = 0
    for a, b in edges:
        side, stack, seen = set(), [a], {a, b}
        while stack:
            x = stack.pop()
            if x < n:
                side.add(x)
            for y in nbrs[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        w = ref_cut_rank(g.pos_adj, side, n) + ref_cut_rank(g.neg_adj, side, n)
        best = max(best, w)
    return best


def brute_min_signed_width(g: SignedGraph) -> int:
    n = g.num_vertices
    return min(tree_signed_width(e, n, g) for e in all_unrooted_trees(n))


def dp_table_as_sets(table, ctx) -> dict:
    """DP table re-keyed by element sets so it compares with the oracle."""
    out = {}
    for (sp, sm), row in table.entries.items():
        for (pp, pm), v in row.items():
            key = (
                closure(ctx.idx_plus.basis(sp)),
                closure(ctx.idx_minus.basis(sm)),
                closure(ctx.idx_plus.basis(pp)),
                closure(ctx.idx_minus.basis(pm)),
            )
            out[key] = v
    return out


def pi_pairs_as_sets(ctx, node):
    return [(closure(ctx.idx_plus.basis(p)), closure(ctx.idx_minus.basis(m))) for p, m in ctx.pi_domain_of(node)]


def chain_count(num_clauses: int) -> int:
    """Models of (x1∨x2)∧…∧(x_m∨x_{m+1}) by a two-state transfer matrix."""
    f, t = 1, 1  # assignments of x1 ending in false / true
    for _ in range(num_clauses):
        f, t = t, f + t
    return f + t
