"""Brute-force reference implementations for differential testing.

Nothing here calls into the dynamic program or the GF(2) module: clauses are
evaluated literally and subspaces are handled as explicit sets of vectors.
The only production code used is the parse-tree evaluator, to obtain the
labels of the vertices below a node.
"""

from __future__ import annotations

import itertools
import math
from typing import Iterable

from .formula import CLAUSE, VARIABLE, CnfFormula
from .parsetree import SignedParseTree, evaluate_subtree

MAX_COUNT_VARS = 24
MAX_SHAPE_VARS = 16

ElementSet = frozenset  # a subspace, as the frozenset of all its vectors
ShapeTable = dict[tuple[ElementSet, ElementSet, ElementSet, ElementSet], int]


class OracleTooLarge(ValueError):
    pass


def _assignments(n: int):
    return itertools.product((False, True), repeat=n)


def _satisfied(clause, values) -> bool:
    return any(values[v - 1] == positive for v, positive in clause)


def brute_force_count(f: CnfFormula, max_vars: int = MAX_COUNT_VARS) -> int:
    if f.num_vars > max_vars:
        raise OracleTooLarge(f"{f.num_vars} variables exceed oracle cap {max_vars}")
    return sum(
        all(_satisfied(c, values) for c in f.clauses) for values in _assignments(f.num_vars)
    )


def brute_force_max_sat(f: CnfFormula, max_vars: int = MAX_COUNT_VARS) -> int:
    if f.num_vars > max_vars:
        raise OracleTooLarge(f"{f.num_vars} variables exceed oracle cap {max_vars}")
    return max(
        sum(_satisfied(c, values) for c in f.clauses) for values in _assignments(f.num_vars)
    )


def closure(vectors: Iterable[int]) -> ElementSet:
    """All GF(2) combinations of the given vectors."""
    elems = {0}
    for v in vectors:
        if v not in elems:
            elems |= {e ^ v for e in elems}
    return frozenset(elems)


def all_subspaces(t: int) -> list[ElementSet]:
    """Every subspace of GF(2)^t, found as the XOR-closed subsets containing 0."""
    found = {frozenset({0})}
    frontier = [frozenset({0})]
    while frontier:
        nxt = []
        for s in frontier:
            for v in range(1, 1 << t):
                if v not in s:
                    c = closure(list(s) + [v])
                    if c not in found:
                        found.add(c)
                        nxt.append(c)
        frontier = nxt
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def _odd(a: int, b: int) -> bool:
    return bool((a & b).bit_count() & 1)


def _not_orthogonal(label: int, space: ElementSet) -> bool:
    return any(_odd(label, p) for p in space)


def brute_force_shape_table(
    tree: SignedParseTree,
    node: int,
    semiring: str = "counting",
    pi_pairs: Iterable[tuple[ElementSet, ElementSet]] | None = None,
    max_vars: int = MAX_SHAPE_VARS,
) -> ShapeTable:
    """Shape table of ``node`` by enumerating every partial assignment below it.

    Keys are ``(Σ⁺, Σ⁻, Π⁺, Π⁻)`` as element sets.  ``pi_pairs`` defaults to all
    pairs of subspaces.  Counting tables omit zero entries, tropical tables
    omit infinite ones, exactly like the DP's sparse tables.
    """
    if semiring not in ("counting", "tropical"):
        raise ValueError(semiring)
    sub = evaluate_subtree(tree, node)
    variables = [v for v in sub.vertices if tree.kinds[v] == VARIABLE]
    clauses = [v for v in sub.vertices if tree.kinds[v] == CLAUSE]
    if len(variables) > max_vars:
        raise OracleTooLarge(f"{len(variables)} variables below node exceed cap {max_vars}")
    if pi_pairs is None:
        pi_pairs = list(itertools.product(all_subspaces(tree.t_plus), all_subspaces(tree.t_minus)))
    else:
        pi_pairs = list(pi_pairs)
    pos_nb = {c: set() for c in clauses}
    neg_nb = {c: set() for c in clauses}
    for edges, nb in ((sub.pos_edges, pos_nb), (sub.neg_edges, neg_nb)):
        for u, v in edges:
            if u in nb:
                nb[u].add(v)
            if v in nb:
                nb[v].add(u)
    table: ShapeTable = {}
    for values in _assignments(len(variables)):
        true = {v for v, b in zip(variables, values) if b}
        false = {v for v, b in zip(variables, values) if not b}
        sig_p = closure(sub.lab_plus[v] for v in true)
        sig_m = closure(sub.lab_minus[v] for v in false)
        open_clauses = [c for c in clauses if not (pos_nb[c] & true or neg_nb[c] & false)]
        for pi_p, pi_m in pi_pairs:
            failing = sum(
                1
                for c in open_clauses
                if not (_not_orthogonal(sub.lab_plus[c], pi_p) or _not_orthogonal(sub.lab_minus[c], pi_m))
            )
            key = (sig_p, sig_m, pi_p, pi_m)
            if semiring == "counting":
                if failing == 0:
                    table[key] = table.get(key, 0) + 1
            else:
                table[key] = min(table.get(key, math.inf), failing)
    return table
