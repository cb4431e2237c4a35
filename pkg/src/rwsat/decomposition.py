"""Cut-rank, branch-decompositions and their widths.

Decompositions are stored as rooted full binary trees.  Every non-root node
stands for the tree edge to its parent; the two edges at the root are one edge
of the underlying unrooted tree and define complementary cuts.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .formula import SignedGraph
from .gf2 import rank_of_rows


class DecompositionError(ValueError):
    pass


@dataclass(frozen=True)
class BranchDecomposition:
    """``children[i]`` is ``(left, right)`` for internal nodes, ``None`` for leaves;
    ``leaf[i]`` is the graph vertex of a leaf and ``-1`` elsewhere."""

    children: tuple[tuple[int, int] | None, ...]
    leaf: tuple[int, ...]
    root: int

    @property
    def num_nodes(self) -> int:
        return len(self.children)

    def is_leaf(self, node: int) -> bool:
        return self.children[node] is None

    def leaves(self) -> list[int]:
        return [v for v in self.leaf if v >= 0]

    def postorder(self) -> Iterator[int]:
        stack = [(self.root, False)]
        while stack:
            node, done = stack.pop()
            kids = self.children[node]
            if done or kids is None:
                yield node
            else:
                stack.append((node, True))
                stack.append((kids[1], False))
                stack.append((kids[0], False))

    def parents(self) -> list[int]:
        par = [-1] * self.num_nodes
        for i, kids in enumerate(self.children):
            if kids is not None:
                par[kids[0]] = i
                par[kids[1]] = i
        return par

    def leaf_masks(self) -> list[int]:
        """Bitmask of the graph vertices below each node (memory O(n^2) bits)."""
        masks = [0] * self.num_nodes
        for node in self.postorder():
            kids = self.children[node]
            masks[node] = 1 << self.leaf[node] if kids is None else masks[kids[0]] | masks[kids[1]]
        return masks

    def to_nested(self):
        out: dict[int, object] = {}
        for node in self.postorder():
            kids = self.children[node]
            out[node] = self.leaf[node] if kids is None else (out.pop(kids[0]), out.pop(kids[1]))
        return out[self.root]

    @classmethod
    def from_nested(cls, nested) -> "BranchDecomposition":
        """Build from nested pairs of vertex ids, e.g. ``((0, 2), (1, 3))``."""
        children: list = []
        leaf: list[int] = []
        # explicit stack: deep caterpillars exceed the recursion limit
        result: list[int] = []
        stack: list = [("visit", nested)]
        while stack:
            op, item = stack.pop()
            if op == "visit":
                if isinstance(item, int):
                    children.append(None)
                    leaf.append(item)
                    result.append(len(leaf) - 1)
                else:
                    a, b = item
                    stack.append(("make", None))
                    stack.append(("visit", b))
                    stack.append(("visit", a))
            else:
                right = result.pop()
                left = result.pop()
                children.append((left, right))
                leaf.append(-1)
                result.append(len(leaf) - 1)
        return cls(tuple(children), tuple(leaf), result[0])

    @classmethod
    def caterpillar(cls, order: Sequence[int]) -> "BranchDecomposition":
        if not order:
            raise DecompositionError("empty vertex order")
        children: list = [None]
        leaf = [order[0]]
        cur = 0
        for v in order[1:]:
            children.append(None)
            leaf.append(v)
            children.append((cur, len(leaf) - 1))
            leaf.append(-1)
            cur = len(leaf) - 1
        return cls(tuple(children), tuple(leaf), cur)

    def validate(self, g: SignedGraph) -> None:
        seen = set()
        for v in self.leaves():
            if not 0 <= v < g.num_vertices:
                raise DecompositionError(f"leaf {v} is not a vertex")
            if v in seen:
                raise DecompositionError(f"duplicate leaf {g.names[v]}")
            seen.add(v)
        if len(seen) != g.num_vertices:
            missing = [g.names[v] for v in g.vertices if v not in seen]
            raise DecompositionError(f"vertices missing from decomposition: {', '.join(missing[:10])}")


@dataclass(frozen=True)
class Width:
    plus: int
    minus: int
    signed: int


def cut_rank(adj: Sequence[int], u: int | Iterable[int]) -> int:
    """GF(2) rank of the adjacency matrix between ``u`` and its complement."""
    mask = u if isinstance(u, int) else sum(1 << v for v in set(u))
    out = ~mask
    rows = []
    m = mask
    while m:
        low = m & -m
        rows.append(adj[low.bit_length() - 1] & out)
        m ^= low
    return rank_of_rows(rows)


def signed_cut_rank(g: SignedGraph, u: int | Iterable[int]) -> tuple[int, int]:
    return cut_rank(g.pos_adj, u), cut_rank(g.neg_adj, u)


def _reduce_reps(adj: Sequence[int], candidates: Iterable[int], outside: int) -> list[int]:
    """First candidates (in the given order) whose restricted rows are independent."""
    basis: dict[int, int] = {}
    reps = []
    for r in candidates:
        row = adj[r] & outside
        while row:
            top = row.bit_length() - 1
            b = basis.get(top)
            if b is None:
                basis[top] = row
                reps.append(r)
                break
            row ^= b
    return reps


def node_cut_ranks(d: BranchDecomposition, adj: Sequence[int]) -> list[int]:
    """Cut-rank of the vertex set below every node (root included, always 0)."""
    ranks = [0] * d.num_nodes
    live_mask: dict[int, int] = {}
    live_reps: dict[int, list[int]] = {}
    for node in d.postorder():
        kids = d.children[node]
        if kids is None:
            v = d.leaf[node]
            mask = 1 << v
            cands: list[int] = [v]
        else:
            mask = live_mask.pop(kids[0]) | live_mask.pop(kids[1])
            cands = sorted(live_reps.pop(kids[0]) + live_reps.pop(kids[1]))
        reps = _reduce_reps(adj, cands, ~mask)
        ranks[node] = len(reps)
        live_mask[node] = mask
        live_reps[node] = reps
    return ranks


def edge_ranks(d: BranchDecomposition, g: SignedGraph) -> list[tuple[int, int]]:
    plus = node_cut_ranks(d, g.pos_adj)
    minus = node_cut_ranks(d, g.neg_adj)
    return [(plus[i], minus[i]) for i in range(d.num_nodes) if i != d.root]


def width(d: BranchDecomposition, g: SignedGraph) -> Width:
    d.validate(g)
    er = edge_ranks(d, g)
    if not er:
        return Width(0, 0, 0)
    return Width(max(p for p, _ in er), max(m for _, m in er), max(p + m for p, m in er))


def _signed_rank_mask(g: SignedGraph, mask: int) -> int:
    return cut_rank(g.pos_adj, mask) + cut_rank(g.neg_adj, mask)


def exact_decomposition(g: SignedGraph, cap: int = 10) -> BranchDecomposition:
    """Decomposition of minimum signed width, by dynamic programming over subsets.

    Every unrooted tree is rooted at the leaf edge of the last vertex ``r``; the
    remaining vertices then form a rooted binary tree whose optimal width obeys
    ``cost(X) = max(rho(X), min over splits X=A+B of max(cost(A), cost(B)))``.
    """
    n = g.num_vertices
    if n > cap:
        raise DecompositionError(f"{n} vertices exceed exact-search cap {cap}")
    if n == 0:
        raise DecompositionError("graph has no vertices")
    if n == 1:
        return BranchDecomposition.from_nested(0)
    r = n - 1
    full = (1 << r) - 1
    rho = [0] * (full + 1)
    for x in range(1, full + 1):
        rho[x] = _signed_rank_mask(g, x)
    cost = [0] * (full + 1)
    split = [0] * (full + 1)
    for x in range(1, full + 1):
        if x & (x - 1) == 0:
            cost[x] = rho[x]
            continue
        low = x & -x
        rest = x ^ low
        best = None
        best_split = 0
        # submasks of x that contain its lowest bit, excluding x itself
        sub = rest
        while True:
            a = sub | low
            if a != x:
                c = max(cost[a], cost[x ^ a])
                if best is None or c < best:
                    best, best_split = c, a
                    if best <= rho[x]:
                        break
            if sub == 0:
                break
            sub = (sub - 1) & rest
        cost[x] = max(rho[x], best)
        split[x] = best_split

    def build(x: int):
        if x & (x - 1) == 0:
            return x.bit_length() - 1
        a = split[x]
        return (build(a), build(x ^ a))

    return BranchDecomposition.from_nested((build(full), r))


def caterpillar_profile(g: SignedGraph, order: Sequence[int], singles: Sequence[int] | None = None) -> list[int]:
    """Signed cut-ranks of all edges of the caterpillar over ``order``."""
    n = len(order)
    if singles is None:
        singles = [_signed_rank_mask(g, 1 << v) for v in g.vertices]
    out = [singles[v] for v in order]
    plus = _prefix_ranks(g.pos_adj, order[: n - 2])
    minus = _prefix_ranks(g.neg_adj, order[: n - 2])
    for k in range(1, n - 2):
        out.append(plus[k] + minus[k])
    return out


def _prefix_ranks(adj: Sequence[int], order: Sequence[int]) -> list[int]:
    mask = 0
    reps: list[int] = []
    ranks = []
    for v in order:
        mask |= 1 << v
        reps = _reduce_reps(adj, reps + [v], ~mask)
        ranks.append(len(reps))
    return ranks


def _score(profile: list[int]) -> tuple[int, int]:
    if not profile:
        return (0, 0)
    w = max(profile)
    return (w, profile.count(w))


def greedy_order(g: SignedGraph, candidate_limit: int = 256) -> list[int]:
    """Vertex order greedily minimizing the signed cut-rank of each prefix."""
    n = g.num_vertices
    visited = 0
    mask = 0
    reps_p: list[int] = []
    reps_n: list[int] = []
    frontier: set[int] = set()
    next_free = 0
    order = []
    pos, neg = g.pos_adj, g.neg_adj
    while len(order) < n:
        while (visited >> next_free) & 1:
            next_free += 1
        cands = sorted(frontier)[:candidate_limit]
        if next_free not in frontier:
            cands.append(next_free)
        if not order:
            cands = list(range(n))
        best = None
        for v in cands:
            out = ~(mask | (1 << v))
            rp = len(_reduce_reps(pos, reps_p + [v], out))
            rn = len(_reduce_reps(neg, reps_n + [v], out))
            key = (rp + rn, v)
            if best is None or key < best:
                best = key
        v = best[1]
        order.append(v)
        visited |= 1 << v
        mask = visited
        reps_p = _reduce_reps(pos, sorted(reps_p + [v]), ~mask)
        reps_n = _reduce_reps(neg, sorted(reps_n + [v]), ~mask)
        frontier.discard(v)
        nb = (pos[v] | neg[v]) & ~mask
        while nb:
            low = nb & -nb
            frontier.add(low.bit_length() - 1)
            nb ^= low
    return order


def heuristic_decomposition(
    g: SignedGraph,
    seed: int = 0,
    swap_budget: int = 150,
    local_search_limit: int = 64,
) -> BranchDecomposition:
    """Greedy caterpillar followed by a bounded pass of leaf-pair swaps."""
    if g.num_vertices == 0:
        raise DecompositionError("graph has no vertices")
    order = greedy_order(g)
    n = len(order)
    if 2 < n <= local_search_limit and swap_budget > 0:
        rng = random.Random(seed)
        singles = [_signed_rank_mask(g, 1 << v) for v in g.vertices]
        score = _score(caterpillar_profile(g, order, singles))
        for _ in range(swap_budget):
            if score[0] <= max(singles):
                break
            i, j = rng.sample(range(n), 2)
            order[i], order[j] = order[j], order[i]
            s = _score(caterpillar_profile(g, order, singles))
            if s < score:
                score = s
            else:
                order[i], order[j] = order[j], order[i]
    return BranchDecomposition.caterpillar(order)


def random_decomposition(g: SignedGraph, seed: int = 0) -> BranchDecomposition:
    """Uniformly merged random binary tree; useful as an arbitrary valid input."""
    rng = random.Random(seed)
    items: list = list(g.vertices)
    if not items:
        raise DecompositionError("graph has no vertices")
    rng.shuffle(items)
    while len(items) > 1:
        i, j = rng.sample(range(len(items)), 2)
        a, b = items[i], items[j]
        for k in sorted((i, j), reverse=True):
            items.pop(k)
        items.append((a, b))
    return BranchDecomposition.from_nested(items[0])


_TOKEN = re.compile(r"\s*(?:([(),])|([^\s(),]+))")


def read_decomposition(text: str, g: SignedGraph) -> BranchDecomposition:
    """Parse ``((v1,c1),(v2,c2))``-style text against the vertex names of ``g``."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise DecompositionError(f"unexpected character at offset {pos}")
        tokens.append(m.group(1) or m.group(2))
        pos = m.end()
    # each open group holds its parsed subtrees and whether the ',' was seen
    stack: list[tuple[list, list[bool]]] = [([], [False])]

    def push(item) -> None:
        items, comma = stack[-1]
        if len(stack) > 1 and len(items) != (1 if comma[0] else 0):
            raise DecompositionError("subtrees in a group must be separated by one ','")
        if len(stack) == 1 and items:
            raise DecompositionError("text continues after a complete decomposition")
        items.append(item)

    for tok in tokens:
        if tok == "(":
            stack.append(([], [False]))
        elif tok == ",":
            items, comma = stack[-1]
            if len(stack) < 2 or len(items) != 1 or comma[0]:
                raise DecompositionError("misplaced ','")
            comma[0] = True
        elif tok == ")":
            if len(stack) < 2 or len(stack[-1][0]) != 2:
                raise DecompositionError("a group must contain exactly two subtrees")
            pair = tuple(stack.pop()[0])
            push(pair)
        else:
            if not g.has_name(tok):
                raise DecompositionError(f"unknown leaf label {tok!r}")
            push(g.index_of(tok))
    if len(stack) != 1 or len(stack[0][0]) != 1:
        raise DecompositionError("unbalanced or empty decomposition text")
    d = BranchDecomposition.from_nested(stack[0][0][0])
    d.validate(g)
    return d


def write_decomposition(d: BranchDecomposition, g: SignedGraph) -> str:
    out: dict[int, str] = {}
    for node in d.postorder():
        kids = d.children[node]
        if kids is None:
            out[node] = g.names[d.leaf[node]]
        else:
            out[node] = f"({out.pop(kids[0])},{out.pop(kids[1])})"
    return out[d.root]
