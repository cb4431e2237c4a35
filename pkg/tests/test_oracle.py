import random

import pytest

from rwsat.decomposition import random_decomposition
from rwsat.dp import COUNTING, TROPICAL, DpContext, DpTable, combine_node, leaf_table
from rwsat.formula import CnfFormula, build_signed_graph
from rwsat.generators import random_cnf
from rwsat.gf2 import galois_number
from rwsat.oracle import (
    OracleTooLarge,
    all_subspaces,
    brute_force_count,
    brute_force_max_sat,
    brute_force_shape_table,
    closure,
)
from rwsat.parsetree import build_parse_tree

from helpers import dp_table_as_sets


def test_count_examples():
    assert brute_force_count(CnfFormula.from_ints(1, [[1]])) == 1
    assert brute_force_count(CnfFormula.from_ints(4, [])) == 16
    assert brute_force_count(CnfFormula.from_ints(2, [[1, 2], [-1, -2]])) == 2


def test_max_sat_examples():
    assert brute_force_max_sat(CnfFormula.from_ints(1, [[1], [-1]])) == 1
    assert brute_force_max_sat(CnfFormula.from_ints(2, [[1, 2], [-1], [2]])) == 3
    assert brute_force_max_sat(CnfFormula.from_ints(1, [[1], [-1], [-1]])) == 2


def test_size_caps():
    big = CnfFormula.from_ints(25, [[1]])
    with pytest.raises(OracleTooLarge):
        brute_force_count(big)
    with pytest.raises(OracleTooLarge):
        brute_force_max_sat(big, max_vars=10)


def test_all_subspaces_counts():
    assert [len(all_subspaces(t)) for t in range(5)] == [galois_number(t) for t in range(5)]
    assert closure([3, 3, 5]) == {0, 3, 5, 6}


def _tree(seed):
    rng = random.Random(seed)
    f = random_cnf(rng, max_vars=4, max_clauses=4)
    g = build_signed_graph(f)
    return f, build_parse_tree(random_decomposition(g, seed), g)


@pytest.mark.parametrize("seed", range(10))
def test_leaf_shape_tables_equal_leaf_tables(seed):
    f, tree = _tree(seed)
    ctx = DpContext(tree, "full")
    for z in range(tree.num_nodes):
        if tree.children[z] is None:
            for name, s in (("counting", COUNTING), ("tropical", TROPICAL)):
                assert brute_force_shape_table(tree, z, name) == dp_table_as_sets(leaf_table(ctx, z, s), ctx)


@pytest.mark.parametrize("seed", range(10))
def test_root_slice_sums_to_count(seed):
    f, tree = _tree(seed)
    zero = frozenset({0})
    table = brute_force_shape_table(tree, tree.root, "counting", pi_pairs=[(zero, zero)])
    assert sum(table.values()) == brute_force_count(f)
    trop = brute_force_shape_table(tree, tree.root, "tropical", pi_pairs=[(zero, zero)])
    assert f.num_clauses - min(trop.values()) == brute_force_max_sat(f)


def _as_dp_table(shape, ctx, node, semiring):
    t = DpTable(node, semiring)
    for (sp, sm, pp, pm), v in shape.items():
        s = (ctx.idx_plus.register_span(sp), ctx.idx_minus.register_span(sm))
        p = (ctx.idx_plus.register_span(pp), ctx.idx_minus.register_span(pm))
        t.entries.setdefault(s, {})[p] = v
    return t


@pytest.mark.parametrize("seed", range(15))
def test_oracle_tables_compose(seed):
    # the oracle at a node equals one combine step over the oracle's child tables
    f, tree = _tree(100 + seed)
    ctx = DpContext(tree, "full")
    for z, kids in enumerate(tree.children):
        if kids is None:
            continue
        for name, s in (("counting", COUNTING), ("tropical", TROPICAL)):
            tx = _as_dp_table(brute_force_shape_table(tree, kids[0], name), ctx, kids[0], s)
            ty = _as_dp_table(brute_force_shape_table(tree, kids[1], name), ctx, kids[1], s)
            combined = combine_node(ctx, z, tx, ty, s)
            assert dp_table_as_sets(combined, ctx) == brute_force_shape_table(tree, z, name)
