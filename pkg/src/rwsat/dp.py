"""Shape-table dynamic programming for #SAT and Max-SAT over signed parse trees.

A table maps a pair of "available" subspaces ``(Σ⁺, Σ⁻)`` and a pair of
"expected" subspaces ``(Π⁺, Π⁻)`` to a semiring value: a number of partial
assignments (counting) or a minimum number of given-up clauses (tropical).
Subspaces are referred to by ids of two :class:`SubspaceIndex` registries,
one over GF(2)^{t⁺} and one over GF(2)^{t⁻}.

Only the ``Π``-pairs some ancestor can actually ask for are materialized: the
root needs ``(0, 0)`` and a child needs whatever its parent derives from its
own pairs and the sibling's reachable ``Σ``-pairs.  ``pi_domain="full"``
instead tabulates every pair of subspaces (small widths only).
"""

from __future__ import annotations

import itertools
import math
import operator
from dataclasses import dataclass, field
from typing import Any, Callable, Iterator, NamedTuple

from .formula import CLAUSE, VARIABLE, CnfFormula
from .gf2 import SubspaceIndex, enumerate_subspace_bases, transpose_rows
from .parsetree import SignedParseTree, SignOps


@dataclass(frozen=True)
class Semiring:
    name: str
    add: Callable[[Any, Any], Any]
    mul: Callable[[Any, Any], Any]
    zero: Any
    one: Any
    # value of a single clause that is neither satisfied nor expected to be
    unsatisfied: Any

    def is_zero(self, x) -> bool:
        return x == self.zero


COUNTING = Semiring("counting", operator.add, operator.mul, 0, 1, 0)
TROPICAL = Semiring("tropical", min, operator.add, math.inf, 0, 1)


class ShapeKey(NamedTuple):
    sig_plus: int
    sig_minus: int
    pi_plus: int
    pi_minus: int


Pair = tuple[int, int]


@dataclass
class DpTable:
    node: int
    semiring: Semiring
    entries: dict[Pair, dict[Pair, Any]] = field(default_factory=dict)

    def get(self, key: ShapeKey):
        return self.entries.get((key[0], key[1]), {}).get((key[2], key[3]), self.semiring.zero)

    def items(self) -> Iterator[tuple[ShapeKey, Any]]:
        for s, row in self.entries.items():
            for p, v in row.items():
                yield ShapeKey(s[0], s[1], p[0], p[1]), v

    def __len__(self) -> int:
        return sum(len(r) for r in self.entries.values())

    def sigma_pairs(self) -> set[Pair]:
        return set(self.entries)


class DpContext:
    """Subspace registries and per-node Π-domains for one parse tree."""

    def __init__(self, tree: SignedParseTree, pi_domain: str = "demand"):
        if pi_domain not in ("demand", "full"):
            raise ValueError(f"unknown pi_domain {pi_domain!r}")
        self.tree = tree
        self.pi_domain = pi_domain
        self.idx_plus = SubspaceIndex(tree.t_plus)
        self.idx_minus = SubspaceIndex(tree.t_minus)
        self.e1_plus = self.idx_plus.register_basis((1,))
        self.e1_minus = self.idx_minus.register_basis((1,))
        self._reach: dict[int, set[Pair]] = {}
        self._domain: dict[int, list[Pair]] = {}
        self._rows: dict[tuple[int, str, str], tuple[int, ...]] = {}
        self._maps: dict[tuple[str, tuple[int, ...]], dict[int, int]] = {}
        self._interned: dict[tuple[int, ...], tuple[int, ...]] = {}
        self._prepare()

    def index(self, sign: str) -> SubspaceIndex:
        return self.idx_plus if sign == "+" else self.idx_minus

    def image_map(self, node: int, sign: str, which: str, ids) -> dict[int, int]:
        """Images of subspace ids under ``f1, f2, g`` or their transposes at ``node``.

        Caches are keyed by the matrix itself, so nodes carrying equal matrices
        (common in regular formulas) share their images.
        """
        key = (node, sign, which)
        rows = self._rows.get(key)
        if rows is None:
            op: SignOps = self.tree.ops(sign)[node]
            m = {"f1": op.f1, "f2": op.f2, "g": op.g}[which.rstrip("T")]
            rows = transpose_rows(m.rows, m.ncols) if which.endswith("T") else m.rows
            rows = self._rows.setdefault(key, self._interned.setdefault(rows, rows))
        cache = self._maps.get((sign, rows))
        if cache is None:
            cache = self._maps[(sign, rows)] = {}
        idx = self.index(sign)
        for i in ids:
            if i not in cache:
                cache[i] = idx.image_id(rows, i)
        return cache

    def _prepare(self) -> None:
        tree = self.tree
        for z in tree.postorder():
            kids = tree.children[z]
            if kids is None:
                if tree.kinds[tree.leaf[z]] == VARIABLE:
                    self._reach[z] = {(self.e1_plus, 0), (0, self.e1_minus)}
                else:
                    self._reach[z] = {(0, 0)}
                continue
            rx, ry = self._reach[kids[0]], self._reach[kids[1]]
            self._reach[z] = {s for s, _, _ in self._sigma_products(z, rx, ry)}
        if self.pi_domain == "full":
            all_p = all_subspace_ids(self.idx_plus)
            all_m = all_subspace_ids(self.idx_minus)
            full = list(itertools.product(all_p, all_m))
            for z in range(tree.num_nodes):
                self._domain[z] = full
            return
        self._domain[tree.root] = [(0, 0)]
        for z in reversed(list(tree.postorder())):
            kids = tree.children[z]
            if kids is None:
                continue
            dom = self._domain[z]
            for child, sibling, fT, gname in ((kids[0], kids[1], "f1T", "g"), (kids[1], kids[0], "f2T", "gT")):
                sib = self._reach[sibling]
                fp = self.image_map(z, "+", fT, {p for p, _ in dom})
                fm = self.image_map(z, "-", fT, {m for _, m in dom})
                gp = self.image_map(z, "+", gname, {s for s, _ in sib})
                gm = self.image_map(z, "-", gname, {s for _, s in sib})
                jp, jm = self.idx_plus.join_ids, self.idx_minus.join_ids
                out = set()
                for p, m in dom:
                    a, b = fp[p], fm[m]
                    for sp, sm in sib:
                        out.add((jp(a, gp[sp]), jm(b, gm[sm])))
                self._domain[child] = sorted(out)

    def _sigma_products(self, z, sx_set, sy_set):
        f1p = self.image_map(z, "+", "f1", {s for s, _ in sx_set})
        f1m = self.image_map(z, "-", "f1", {s for _, s in sx_set})
        f2p = self.image_map(z, "+", "f2", {s for s, _ in sy_set})
        f2m = self.image_map(z, "-", "f2", {s for _, s in sy_set})
        jp, jm = self.idx_plus.join_ids, self.idx_minus.join_ids
        for sx in sx_set:
            for sy in sy_set:
                yield (jp(f1p[sx[0]], f2p[sy[0]]), jm(f1m[sx[1]], f2m[sy[1]])), sx, sy

    def release(self, node: int) -> None:
        """Forget the per-node state of a finished node."""
        for sign in "+-":
            for which in ("f1", "f2", "g", "f1T", "f2T", "gT"):
                self._rows.pop((node, sign, which), None)
        self._domain.pop(node, None)
        self._reach.pop(node, None)

    def reachable_sigmas(self, node: int) -> set[Pair]:
        return self._reach[node]

    def pi_domain_of(self, node: int) -> list[Pair]:
        return self._domain[node]


def all_subspace_ids(idx: SubspaceIndex) -> list[int]:
    """Register and return ids of every subspace of the ambient space (small t)."""
    return sorted(idx.register_basis(b) for b in enumerate_subspace_bases(idx.ambient_dim))


def _not_orth_e1(idx: SubspaceIndex, i: int) -> bool:
    return any(b & 1 for b in idx.basis(i))


def leaf_table(ctx: DpContext, node: int, semiring: Semiring) -> DpTable:
    tree = ctx.tree
    kind = tree.kinds[tree.leaf[node]]
    table = DpTable(node, semiring)
    dom = ctx.pi_domain_of(node)
    if kind == VARIABLE:
        for sig in ((ctx.e1_plus, 0), (0, ctx.e1_minus)):
            table.entries[sig] = {p: semiring.one for p in dom}
    elif kind == CLAUSE:
        row = {}
        for p, m in dom:
            if _not_orth_e1(ctx.idx_plus, p) or _not_orth_e1(ctx.idx_minus, m):
                v = semiring.one
            else:
                v = semiring.unsatisfied
            if not semiring.is_zero(v):
                row[(p, m)] = v
        if row:
            table.entries[(0, 0)] = row
    else:
        raise ValueError(f"unknown leaf kind {kind!r}")
    return table


def combine_node(ctx: DpContext, node: int, tx: DpTable, ty: DpTable, semiring: Semiring) -> DpTable:
    """Table of ``node`` from the tables of its two children."""
    table = DpTable(node, semiring)
    if not tx.entries or not ty.entries:
        return table
    dom = ctx.pi_domain_of(node)
    sx_set, sy_set = tx.sigma_pairs(), ty.sigma_pairs()
    gp = ctx.image_map(node, "+", "g", {s for s, _ in sy_set})
    gm = ctx.image_map(node, "-", "g", {s for _, s in sy_set})
    gtp = ctx.image_map(node, "+", "gT", {s for s, _ in sx_set})
    gtm = ctx.image_map(node, "-", "gT", {s for _, s in sx_set})
    f1tp = ctx.image_map(node, "+", "f1T", {p for p, _ in dom})
    f1tm = ctx.image_map(node, "-", "f1T", {m for _, m in dom})
    f2tp = ctx.image_map(node, "+", "f2T", {p for p, _ in dom})
    f2tm = ctx.image_map(node, "-", "f2T", {m for _, m in dom})
    pis = [(pz, f1tp[pz[0]], f1tm[pz[1]], f2tp[pz[0]], f2tm[pz[1]]) for pz in dom]
    jp, jm = ctx.idx_plus.join_ids, ctx.idx_minus.join_ids
    add, mul, out = semiring.add, semiring.mul, table.entries
    for sz, sx, sy in ctx._sigma_products(node, sx_set, sy_set):
        row_x, row_y = tx.entries[sx], ty.entries[sy]
        axp, axm = gp[sy[0]], gm[sy[1]]
        ayp, aym = gtp[sx[0]], gtm[sx[1]]
        target = out.get(sz)
        for pz, a1p, a1m, a2p, a2m in pis:
            vx = row_x.get((jp(a1p, axp), jm(a1m, axm)))
            if vx is None:
                continue
            vy = row_y.get((jp(a2p, ayp), jm(a2m, aym)))
            if vy is None:
                continue
            v = mul(vx, vy)
            if target is None:
                target = out[sz] = {}
            old = target.get(pz)
            target[pz] = v if old is None else add(old, v)
    return table


def finalize(root: DpTable, semiring: Semiring, num_clauses: int) -> int:
    """Model count, or the number of simultaneously satisfiable clauses."""
    vals = [row[(0, 0)] for row in root.entries.values() if (0, 0) in row]
    if semiring.name == "counting":
        return sum(vals)
    m = min(vals, default=math.inf)
    if m == math.inf:
        m = 0
    return num_clauses - int(m)


@dataclass
class DpResult:
    value: int
    root: DpTable
    tables: dict[int, DpTable] | None
    context: DpContext

    @property
    def index_sizes(self) -> tuple[int, int]:
        return len(self.context.idx_plus), len(self.context.idx_minus)


def check_tree_matches(tree: SignedParseTree, f: CnfFormula) -> None:
    n = f.num_vars + f.num_clauses
    if tree.num_vertices != n or sorted(v for v in tree.leaf if v >= 0) != list(range(n)):
        raise ValueError("parse tree leaves do not match the formula's vertices")
    expected = (VARIABLE,) * f.num_vars + (CLAUSE,) * f.num_clauses
    if tuple(tree.kinds) != expected:
        raise ValueError("parse tree vertex kinds do not match the formula")


def run_dp(
    tree: SignedParseTree,
    semiring: Semiring,
    num_clauses: int,
    pi_domain: str = "demand",
    keep_tables: bool = False,
) -> DpResult:
    ctx = DpContext(tree, pi_domain)
    live: dict[int, DpTable] = {}
    kept: dict[int, DpTable] | None = {} if keep_tables else None
    for z in tree.postorder():
        kids = tree.children[z]
        if kids is None:
            t = leaf_table(ctx, z, semiring)
        elif keep_tables:
            t = combine_node(ctx, z, live[kids[0]], live[kids[1]], semiring)
        else:
            t = combine_node(ctx, z, live.pop(kids[0]), live.pop(kids[1]), semiring)
        live[z] = t
        if not keep_tables:
            ctx.release(z)
        if kept is not None:
            kept[z] = t
    root = live[tree.root]
    return DpResult(finalize(root, semiring, num_clauses), root, kept, ctx)


def count_models(tree: SignedParseTree, f: CnfFormula, pi_domain: str = "demand") -> int:
    check_tree_matches(tree, f)
    return run_dp(tree, COUNTING, f.num_clauses, pi_domain).value


def max_sat(tree: SignedParseTree, f: CnfFormula, pi_domain: str = "demand") -> int:
    check_tree_matches(tree, f)
    return run_dp(tree, TROPICAL, f.num_clauses, pi_domain).value
