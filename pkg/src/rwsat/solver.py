"""End-to-end pipeline: formula -> decomposition -> parse tree -> DP."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .decomposition import (
    BranchDecomposition,
    Width,
    exact_decomposition,
    heuristic_decomposition,
    width,
)
from .dp import COUNTING, TROPICAL, check_tree_matches, run_dp
from .formula import CnfFormula, SignedGraph, build_signed_graph
from .parsetree import ParseTreeError, SignedParseTree, build_parse_tree, verify_parse_tree


class VerificationError(RuntimeError):
    pass


@dataclass
class Solution:
    value: int
    mode: str
    source: str
    width: Width
    t_plus: int
    t_minus: int
    index_sizes: tuple[int, int]
    timings: dict[str, float] = field(default_factory=dict)


def choose_decomposition(
    g: SignedGraph,
    decomposition: BranchDecomposition | None = None,
    exact_cap: int = 10,
    seed: int = 0,
) -> tuple[BranchDecomposition, str]:
    """File-supplied decomposition first, then exact search, then the heuristic."""
    if decomposition is not None:
        decomposition.validate(g)
        return decomposition, "file"
    if g.num_vertices <= exact_cap:
        return exact_decomposition(g, cap=exact_cap), "exact"
    return heuristic_decomposition(g, seed=seed), "heuristic"


def prepare(
    f: CnfFormula,
    decomposition: BranchDecomposition | None = None,
    exact_cap: int = 10,
    verify: bool = True,
    timings: dict[str, float] | None = None,
) -> tuple[SignedGraph, BranchDecomposition, str, SignedParseTree]:
    timings = {} if timings is None else timings
    t0 = time.perf_counter()
    g = build_signed_graph(f)
    d, source = choose_decomposition(g, decomposition, exact_cap)
    t1 = time.perf_counter()
    try:
        tree = build_parse_tree(d, g)
    except ParseTreeError as e:
        raise VerificationError(str(e)) from e
    t2 = time.perf_counter()
    if verify and not verify_parse_tree(tree, g):
        raise VerificationError("parse tree does not regenerate the formula graph")
    t3 = time.perf_counter()
    timings.update(decompose=t1 - t0, parse_tree=t2 - t1, verify=t3 - t2)
    return g, d, source, tree


def solve(
    f: CnfFormula,
    mode: str = "count",
    decomposition: BranchDecomposition | None = None,
    exact_cap: int = 10,
    verify: bool = True,
) -> Solution:
    if mode not in ("count", "maxsat"):
        raise ValueError(f"unknown mode {mode!r}")
    timings: dict[str, float] = {}
    if f.num_vars + f.num_clauses == 0:
        return Solution(1 if mode == "count" else 0, mode, "none", Width(0, 0, 0), 0, 0, (0, 0), timings)
    g, d, source, tree = prepare(f, decomposition, exact_cap, verify, timings)
    check_tree_matches(tree, f)
    t0 = time.perf_counter()
    result = run_dp(tree, COUNTING if mode == "count" else TROPICAL, f.num_clauses)
    timings["dp"] = time.perf_counter() - t0
    return Solution(
        result.value, mode, source, width(d, g), tree.t_plus, tree.t_minus, result.index_sizes, timings
    )


def count(f: CnfFormula, **kw) -> int:
    return solve(f, "count", **kw).value


def maxsat(f: CnfFormula, **kw) -> int:
    return solve(f, "maxsat", **kw).value
