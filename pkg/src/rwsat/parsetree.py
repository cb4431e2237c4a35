"""Signed labeling parse trees: construction, evaluation and verification.

Each internal node carries, per sign, a relabeling pair ``(f1, f2)`` and a
join matrix ``g``, all ``t × t`` over GF(2) with row vectors multiplying from
the left.  Joining ``u`` (left) and ``v`` (right) adds an edge iff
``lab(u) · gᵀ · lab(v)ᵀ = 1``; afterwards labels become ``lab · f1`` and
``lab · f2``.  Leaves start with label ``e1`` (bit 0) in both signs.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

from .decomposition import BranchDecomposition, node_cut_ranks
from .formula import SignedGraph
from .gf2 import BitMatrix, transpose_rows, vec_times


class ParseTreeError(RuntimeError):
    pass


@dataclass(frozen=True)
class SignOps:
    f1: BitMatrix
    f2: BitMatrix
    g: BitMatrix


@dataclass(frozen=True)
class SignedParseTree:
    children: tuple[tuple[int, int] | None, ...]
    leaf: tuple[int, ...]
    root: int
    plus: tuple[SignOps | None, ...]
    minus: tuple[SignOps | None, ...]
    t_plus: int
    t_minus: int
    kinds: tuple[str, ...]
    names: tuple[str, ...]

    @property
    def num_nodes(self) -> int:
        return len(self.children)

    @property
    def num_vertices(self) -> int:
        return len(self.names)

    def postorder(self):
        return BranchDecomposition.postorder(self)  # same node layout

    def ops(self, sign: str) -> tuple[SignOps | None, ...]:
        return self.plus if sign == "+" else self.minus

    def width(self, sign: str) -> int:
        return self.t_plus if sign == "+" else self.t_minus

    def leaves_below(self, node: int) -> list[int]:
        out = []
        stack = [node]
        while stack:
            z = stack.pop()
            kids = self.children[z]
            if kids is None:
                out.append(self.leaf[z])
            else:
                stack.extend(kids)
        return sorted(out)

    def replace_ops(self, node: int, sign: str, ops: SignOps) -> "SignedParseTree":
        seq = list(self.ops(sign))
        seq[node] = ops
        if sign == "+":
            return _replace(self, plus=tuple(seq))
        return _replace(self, minus=tuple(seq))

    def dump(self) -> str:
        """Indented listing; matrices as row-major bit strings, rows space separated."""
        lines = [f"parse tree t+={self.t_plus} t-={self.t_minus}"]
        stack = [(self.root, 0)]
        while stack:
            z, depth = stack.pop()
            pad = "  " * depth
            kids = self.children[z]
            if kids is None:
                v = self.leaf[z]
                lines.append(f"{pad}leaf {self.names[v]} ({self.kinds[v]})")
                continue
            p, m = self.plus[z], self.minus[z]
            lines.append(f"{pad}node {z}")
            lines.append(f"{pad}  + f1=[{p.f1}] f2=[{p.f2}] g=[{p.g}]")
            lines.append(f"{pad}  - f1=[{m.f1}] f2=[{m.f2}] g=[{m.g}]")
            stack.append((kids[1], depth + 1))
            stack.append((kids[0], depth + 1))
        return "\n".join(lines)


def _replace(tree: SignedParseTree, **kw) -> SignedParseTree:
    return replace(tree, **kw)


def _pad(rows: Sequence[int], t: int) -> BitMatrix:
    return BitMatrix(tuple(rows) + (0,) * (t - len(rows)), t)


class _Eliminator:
    """Row basis with coordinates relative to the chosen representative rows."""

    def __init__(self) -> None:
        self.basis: dict[int, tuple[int, int]] = {}
        self.size = 0

    def add(self, row: int) -> bool:
        combo = 0
        while row:
            top = row.bit_length() - 1
            entry = self.basis.get(top)
            if entry is None:
                self.basis[top] = (row, combo ^ (1 << self.size))
                self.size += 1
                return True
            row ^= entry[0]
            combo ^= entry[1]
        return False

    def coords(self, row: int) -> int:
        combo = 0
        while row:
            top = row.bit_length() - 1
            entry = self.basis.get(top)
            if entry is None:
                raise ParseTreeError("row outside the representative span")
            row ^= entry[0]
            combo ^= entry[1]
        return combo


def _build_sign(d: BranchDecomposition, adj: Sequence[int], t: int) -> list[SignOps | None]:
    ops: list[SignOps | None] = [None] * d.num_nodes
    live_mask: dict[int, int] = {}
    live_reps: dict[int, list[int]] = {}
    for node in d.postorder():
        kids = d.children[node]
        if kids is None:
            v = d.leaf[node]
            live_mask[node] = 1 << v
            live_reps[node] = [v]
            continue
        x, y = kids
        mask = live_mask.pop(x) | live_mask.pop(y)
        rx, ry = live_reps.pop(x), live_reps.pop(y)
        outside = ~mask
        elim = _Eliminator()
        reps = [r for r in sorted(rx + ry) if elim.add(adj[r] & outside)]
        if len(reps) > t or len(rx) > t or len(ry) > t:
            raise ParseTreeError(f"label width exceeds {t} at node {node}")
        f1 = [elim.coords(adj[r] & outside) for r in rx]
        f2 = [elim.coords(adj[r] & outside) for r in ry]
        # edge condition lab(u) gᵀ lab(v)ᵀ with gᵀ = A[reps(x), reps(y)]
        gt = []
        for r in rx:
            row = 0
            for j, s in enumerate(ry):
                if (adj[r] >> s) & 1:
                    row |= 1 << j
            gt.append(row)
        gt_m = _pad(gt, t)
        g = BitMatrix(transpose_rows(gt_m.rows, t), t)
        ops[node] = SignOps(_pad(f1, t), _pad(f2, t), g)
        live_mask[node] = mask
        live_reps[node] = reps
    return ops


def build_parse_tree(d: BranchDecomposition, g: SignedGraph) -> SignedParseTree:
    """Turn a branch-decomposition into a signed labeling parse tree of ``g``.

    Widths are the per-sign maxima of the decomposition, raised to 1 so
    that leaf labels ``e1`` exist even for a sign without edges.
    """
    d.validate(g)
    widths = {}
    for sign, adj in (("+", g.pos_adj), ("-", g.neg_adj)):
        ranks = node_cut_ranks(d, adj)
        widths[sign] = max(1, max((r for i, r in enumerate(ranks) if i != d.root), default=0))
    plus = _build_sign(d, g.pos_adj, widths["+"])
    minus = _build_sign(d, g.neg_adj, widths["-"])
    return SignedParseTree(
        children=d.children,
        leaf=d.leaf,
        root=d.root,
        plus=tuple(plus),
        minus=tuple(minus),
        t_plus=widths["+"],
        t_minus=widths["-"],
        kinds=g.kinds,
        names=g.names,
    )


def _evaluate_sign(tree: SignedParseTree, sign: str) -> list[tuple[int, int]]:
    ops = tree.ops(sign)
    groups: dict[int, dict[int, list[int]]] = {}
    edges = []
    for z in tree.postorder():
        kids = tree.children[z]
        if kids is None:
            groups[z] = {1: [tree.leaf[z]]}
            continue
        gx, gy = groups.pop(kids[0]), groups.pop(kids[1])
        op = ops[z]
        gt = transpose_rows(op.g.rows, op.g.ncols)
        for a, us in gx.items():
            a_g = vec_times(a, gt)
            if not a_g:
                continue
            for b, vs in gy.items():
                if (a_g & b).bit_count() & 1:
                    edges.extend((u, v) for u in us for v in vs)
        merged: dict[int, list[int]] = {}
        for grp, f in ((gx, op.f1.rows), (gy, op.f2.rows)):
            for a, us in grp.items():
                b = vec_times(a, f)
                if b:
                    merged.setdefault(b, []).extend(us)
        groups[z] = merged
    return edges


def evaluate_parse_tree(tree: SignedParseTree) -> SignedGraph:
    """The signed graph generated by ``tree`` (vertices keep their ids)."""
    pos = _evaluate_sign(tree, "+")
    neg = _evaluate_sign(tree, "-")
    return SignedGraph.from_edges(tree.num_vertices, pos, neg, tree.kinds, tree.names)


@dataclass(frozen=True)
class LabeledSubgraph:
    vertices: tuple[int, ...]
    pos_edges: frozenset[tuple[int, int]]
    neg_edges: frozenset[tuple[int, int]]
    lab_plus: dict[int, int]
    lab_minus: dict[int, int]


def evaluate_subtree(tree: SignedParseTree, node: int) -> LabeledSubgraph:
    """Labeled graph parsed by the subtree at ``node``, with every vertex's labels."""
    order = [z for z in tree.postorder()]
    below = set()
    stack = [node]
    while stack:
        z = stack.pop()
        below.add(z)
        kids = tree.children[z]
        if kids is not None:
            stack.extend(kids)
    state: dict[int, tuple[list[int], dict[int, int], dict[int, int]]] = {}
    pos: set[tuple[int, int]] = set()
    neg: set[tuple[int, int]] = set()
    for z in order:
        if z not in below:
            continue
        kids = tree.children[z]
        if kids is None:
            v = tree.leaf[z]
            state[z] = ([v], {v: 1}, {v: 1})
            continue
        vx, px, mx = state.pop(kids[0])
        vy, py, my = state.pop(kids[1])
        for sign, lx, ly, out in (("+", px, py, pos), ("-", mx, my, neg)):
            op = tree.ops(sign)[z]
            gt = transpose_rows(op.g.rows, op.g.ncols)
            for u in vx:
                a = vec_times(lx[u], gt)
                for v in vy:
                    if (a & ly[v]).bit_count() & 1:
                        out.add((min(u, v), max(u, v)))
        newp = {u: vec_times(px[u], tree.plus[z].f1.rows) for u in vx}
        newp.update({v: vec_times(py[v], tree.plus[z].f2.rows) for v in vy})
        newm = {u: vec_times(mx[u], tree.minus[z].f1.rows) for u in vx}
        newm.update({v: vec_times(my[v], tree.minus[z].f2.rows) for v in vy})
        state[z] = (vx + vy, newp, newm)
    verts, lp, lm = state[node]
    return LabeledSubgraph(tuple(sorted(verts)), frozenset(pos), frozenset(neg), lp, lm)


def verify_parse_tree(tree: SignedParseTree, g: SignedGraph) -> bool:
    if tree.num_vertices != g.num_vertices:
        return False
    if sorted(v for v in tree.leaf if v >= 0) != list(g.vertices):
        return False
    return evaluate_parse_tree(tree).same_graph(g)
