import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rwsat.decomposition import BranchDecomposition, exact_decomposition, heuristic_decomposition, random_decomposition
from rwsat.dp import (
    COUNTING,
    TROPICAL,
    DpContext,
    DpTable,
    combine_node,
    count_models,
    finalize,
    leaf_table,
    max_sat,
    run_dp,
)
from rwsat.formula import CnfFormula, build_signed_graph
from rwsat.generators import chain, random_cnf
from rwsat.gf2 import BitMatrix
from rwsat.oracle import brute_force_count, brute_force_max_sat, brute_force_shape_table, closure
from rwsat.parsetree import SignOps, SignedParseTree, build_parse_tree, evaluate_subtree

from helpers import chain_count, dp_table_as_sets, pi_pairs_as_sets

E0 = frozenset({0})
E1 = frozenset({0, 1})


def tree_for(f, d=None):
    g = build_signed_graph(f)
    d = d or random_decomposition(g, 0)
    return build_parse_tree(d, g)


def unit_leaf_tables(semiring):
    # (x1): variable leaf 0, clause leaf 1, both widths 1
    tree = tree_for(CnfFormula.from_ints(1, [[1]]), BranchDecomposition.from_nested((0, 1)))
    ctx = DpContext(tree, "full")
    leaves = {tree.leaf[z]: z for z in range(tree.num_nodes) if tree.children[z] is None}
    return ctx, leaf_table(ctx, leaves[0], semiring), leaf_table(ctx, leaves[1], semiring)


def test_clause_leaf_counting():
    ctx, _, clause = unit_leaf_tables(COUNTING)
    assert (ctx.tree.t_plus, ctx.tree.t_minus) == (1, 1)
    entries = dp_table_as_sets(clause, ctx)
    assert entries == {(E0, E0, E1, E0): 1, (E0, E0, E0, E1): 1, (E0, E0, E1, E1): 1}


def test_variable_leaf_counting():
    ctx, var, _ = unit_leaf_tables(COUNTING)
    entries = dp_table_as_sets(var, ctx)
    assert len(entries) == 8 and set(entries.values()) == {1}
    assert {(k[0], k[1]) for k in entries} == {(E1, E0), (E0, E1)}


def test_clause_leaf_tropical():
    ctx, var, clause = unit_leaf_tables(TROPICAL)
    entries = dp_table_as_sets(clause, ctx)
    assert entries[(E0, E0, E0, E0)] == 1
    assert entries[(E0, E0, E1, E0)] == 0
    assert len(entries) == 4
    assert set(dp_table_as_sets(var, ctx).values()) == {0}


def two_free_variables() -> SignedParseTree:
    one = BitMatrix.identity(1)
    ops = SignOps(one, one, BitMatrix.zeros(1, 1))
    return SignedParseTree(
        (None, None, (0, 1)), (0, 1, -1), 2, (None, None, ops), (None, None, ops), 1, 1, ("variable",) * 2, ("v1", "v2")
    )


def test_combine_two_variables_without_edges():
    tree = two_free_variables()
    ctx = DpContext(tree, "full")
    t = combine_node(ctx, 2, leaf_table(ctx, 0, COUNTING), leaf_table(ctx, 1, COUNTING), COUNTING)
    for pz in ctx.pi_domain_of(2):
        assert sum(row.get(pz, 0) for row in t.entries.values()) == 4
    assert finalize(t, COUNTING, 0) == 4


def test_combine_with_empty_input():
    tree = two_free_variables()
    ctx = DpContext(tree, "full")
    empty = DpTable(0, COUNTING)
    assert len(combine_node(ctx, 2, empty, leaf_table(ctx, 1, COUNTING), COUNTING)) == 0
    assert len(combine_node(ctx, 2, leaf_table(ctx, 0, COUNTING), empty, COUNTING)) == 0


def test_small_examples():
    xor = CnfFormula.from_ints(2, [[1, 2], [-1, -2]])
    assert count_models(tree_for(xor), xor) == 2
    unit = CnfFormula.from_ints(1, [[1]])
    assert count_models(tree_for(unit), unit) == 1
    contra = CnfFormula.from_ints(1, [[1], [-1]])
    t = tree_for(contra)
    assert count_models(t, contra) == 0 and max_sat(t, contra) == 1
    three = CnfFormula.from_ints(1, [[1], [-1], [-1]])
    assert max_sat(tree_for(three), three) == 2
    sat = CnfFormula.from_ints(3, [[1, 2], [-2, 3], [3], [1, -3, 2], [-1, 3]])
    assert max_sat(tree_for(sat), sat) == 5


def test_finalize_normalizes_missing_root_slice():
    assert finalize(DpTable(0, TROPICAL), TROPICAL, 0) == 0
    assert finalize(DpTable(0, COUNTING), COUNTING, 3) == 0


def test_empty_clause_and_free_variables():
    f = CnfFormula.from_ints(3, [[]])
    t = tree_for(f)
    assert count_models(t, f) == 0 and max_sat(t, f) == 0
    free = CnfFormula.from_ints(4, [[1, -2]])
    assert count_models(tree_for(free), free) == 12


@pytest.mark.parametrize("m", [1, 2, 19, 200])
def test_chain_against_transfer_matrix(m):
    f = chain(m)
    g = build_signed_graph(f)
    tree = build_parse_tree(heuristic_decomposition(g), g)
    assert count_models(tree, f) == chain_count(m)
    assert max_sat(tree, f) == m
    if m <= 19:
        assert chain_count(m) == brute_force_count(f)


@pytest.mark.parametrize("seed", range(150))
def test_random_formulas_against_brute_force(seed):
    rng = random.Random(seed)
    f = random_cnf(rng)
    g = build_signed_graph(f)
    want = (brute_force_count(f), brute_force_max_sat(f))
    for d in (random_decomposition(g, seed), heuristic_decomposition(g, seed=seed)):
        tree = build_parse_tree(d, g)
        assert (count_models(tree, f), max_sat(tree, f)) == want
        assert (count_models(tree, f, "full"), max_sat(tree, f, "full")) == want


def _instances(n, base, max_vars=4, max_clauses=5):
    rng = random.Random(base)
    for i in range(n):
        f = random_cnf(rng, max_vars=max_vars, max_clauses=max_clauses)
        g = build_signed_graph(f)
        yield f, build_parse_tree(random_decomposition(g, i), g)


@pytest.mark.parametrize("pi_domain", ["full", "demand"])
def test_node_tables_match_oracle(pi_domain):
    for f, tree in _instances(25, 3):
        for name, semiring in (("counting", COUNTING), ("tropical", TROPICAL)):
            res = run_dp(tree, semiring, f.num_clauses, pi_domain=pi_domain, keep_tables=True)
            for z, table in res.tables.items():
                pairs = pi_pairs_as_sets(res.context, z)
                want = brute_force_shape_table(tree, z, name, pi_pairs=pairs)
                assert dp_table_as_sets(table, res.context) == want


def test_root_slice_and_subformula_satisfaction():
    for f, tree in _instances(25, 4):
        res = run_dp(tree, COUNTING, f.num_clauses, pi_domain="full", keep_tables=True)
        zero = res.context.idx_plus.register_basis(()), res.context.idx_minus.register_basis(())
        for z, table in res.tables.items():
            sliced = sum(row.get(zero, 0) for row in table.entries.values())
            # partial assignments below z that satisfy every clause below z
            shapes = brute_force_shape_table(tree, z, "counting", pi_pairs=[(E0, E0)])
            assert sliced == sum(shapes.values())
        assert finalize(res.root, COUNTING, f.num_clauses) == brute_force_count(f)


def test_no_assignment_is_counted_twice():
    # with Π maximal, only clauses whose labels vanish in both signs constrain the
    # assignment; the counts summed over all Σ-pairs must equal the number of
    # assignments satisfying those clauses, so no assignment lands in two Σ-pairs
    for f, tree in _instances(20, 5):
        res = run_dp(tree, COUNTING, f.num_clauses, pi_domain="full", keep_tables=True)
        top = (
            res.context.idx_plus.register_basis(tuple(1 << i for i in range(tree.t_plus))),
            res.context.idx_minus.register_basis(tuple(1 << i for i in range(tree.t_minus))),
        )
        for z, table in res.tables.items():
            sub = evaluate_subtree(tree, z)
            variables = [v for v in sub.vertices if tree.kinds[v] == "variable"]
            closed = [c for c in sub.vertices if tree.kinds[c] == "clause" and not sub.lab_plus[c] and not sub.lab_minus[c]]
            want = 0
            for bits in range(1 << len(variables)):
                true = {v for i, v in enumerate(variables) if (bits >> i) & 1}
                want += all(
                    any((min(c, v), max(c, v)) in sub.pos_edges for v in true)
                    or any((min(c, v), max(c, v)) in sub.neg_edges for v in set(variables) - true)
                    for c in closed
                )
            assert sum(row.get(top, 0) for row in table.entries.values()) == want


def test_pi_monotonicity():
    for f, tree in _instances(25, 6):
        for semiring in (COUNTING, TROPICAL):
            res = run_dp(tree, semiring, f.num_clauses, pi_domain="full", keep_tables=True)
            idx_p, idx_m = res.context.idx_plus, res.context.idx_minus
            sets = {p: (closure(idx_p.basis(p[0])), closure(idx_m.basis(p[1]))) for p in res.context.pi_domain_of(0)}
            below = [(a, b) for a in sets for b in sets if sets[a][0] <= sets[b][0] and sets[a][1] <= sets[b][1]]
            for table in res.tables.values():
                for row in table.entries.values():
                    for small, big in below:
                        v1, v2 = row.get(small, semiring.zero), row.get(big, semiring.zero)
                        # more expectation can only help: counts grow, defects shrink
                        assert v1 <= v2 if semiring is COUNTING else v2 <= v1


@pytest.mark.parametrize("seed", range(40))
def test_decomposition_independence(seed):
    rng = random.Random(2000 + seed)
    f = random_cnf(rng, max_vars=5, max_clauses=5)
    g = build_signed_graph(f)
    ds = [exact_decomposition(g), heuristic_decomposition(g, seed=seed)] + [random_decomposition(g, s) for s in range(3)]
    results = {(count_models(build_parse_tree(d, g), f), max_sat(build_parse_tree(d, g), f)) for d in ds}
    assert len(results) == 1


values = st.integers(0, 10**6)
tropical_values = st.one_of(st.integers(0, 10**6), st.just(math.inf))


@given(values, values, values)
def test_counting_semiring_laws(a, b, c):
    s = COUNTING
    assert s.add(a, b) == s.add(b, a) and s.mul(a, b) == s.mul(b, a)
    assert s.add(s.add(a, b), c) == s.add(a, s.add(b, c))
    assert s.mul(s.mul(a, b), c) == s.mul(a, s.mul(b, c))
    assert s.add(a, s.zero) == a and s.mul(a, s.one) == a and s.mul(a, s.zero) == s.zero
    assert s.mul(a, s.add(b, c)) == s.add(s.mul(a, b), s.mul(a, c))


@given(tropical_values, tropical_values, tropical_values)
def test_tropical_semiring_laws(a, b, c):
    s = TROPICAL
    assert s.add(a, b) == s.add(b, a) and s.mul(a, b) == s.mul(b, a)
    assert s.add(s.add(a, b), c) == s.add(a, s.add(b, c))
    assert s.mul(s.mul(a, b), c) == s.mul(a, s.mul(b, c))
    assert s.add(a, s.zero) == a and s.mul(a, s.one) == a and s.mul(a, s.zero) == s.zero
    assert s.mul(a, s.add(b, c)) == s.add(s.mul(a, b), s.mul(a, c))


def test_tree_formula_mismatch_is_rejected():
    f = CnfFormula.from_ints(2, [[1, 2]])
    tree = tree_for(f)
    with pytest.raises(ValueError):
        count_models(tree, CnfFormula.from_ints(3, [[1, 2]]))
