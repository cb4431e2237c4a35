"""Formula families for tests and benchmarks."""

from __future__ import annotations

import random

from .formula import CnfFormula


def chain(num_clauses: int) -> CnfFormula:
    """(x1 ∨ x2) ∧ (x2 ∨ x3) ∧ … with ``num_clauses`` clauses."""
    return CnfFormula.from_ints(num_clauses + 1, [[i, i + 1] for i in range(1, num_clauses + 1)])


def clique(k: int) -> CnfFormula:
    """k clauses, each containing all k variables positively (complete bipartite graph)."""
    return CnfFormula.from_ints(k, [list(range(1, k + 1)) for _ in range(k)])


def random_cnf(
    rng: random.Random,
    max_vars: int = 6,
    max_clauses: int = 8,
    max_len: int = 3,
    min_vars: int = 1,
) -> CnfFormula:
    n = rng.randint(min_vars, max_vars)
    m = rng.randint(0, max_clauses)
    clauses = []
    for _ in range(m):
        k = rng.randint(1, min(max_len, n))
        clauses.append([v if rng.random() < 0.5 else -v for v in rng.sample(range(1, n + 1), k)])
    return CnfFormula.from_ints(n, clauses)


def random_3cnf(num_clauses: int, ratio: float = 4.0, seed: int = 0) -> CnfFormula:
    rng = random.Random(seed)
    n = max(3, round(num_clauses / ratio))
    clauses = [[v if rng.random() < 0.5 else -v for v in rng.sample(range(1, n + 1), 3)] for _ in range(num_clauses)]
    return CnfFormula.from_ints(n, clauses)

