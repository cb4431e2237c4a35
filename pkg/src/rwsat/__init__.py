"""Model counting and Max-SAT for CNF formulas of bounded signed rank-width."""

from .decomposition import (
    BranchDecomposition,
    DecompositionError,
    Width,
    cut_rank,
    exact_decomposition,
    heuristic_decomposition,
    random_decomposition,
    read_decomposition,
    signed_cut_rank,
    width,
    write_decomposition,
)
from .dp import COUNTING, TROPICAL, DpTable, Semiring, count_models, max_sat, run_dp
from .formula import CnfFormula, DimacsError, SignedGraph, build_signed_graph, parse_dimacs, to_dimacs
from .gf2 import BitMatrix, BitVector, Subspace, SubspaceIndex, galois_number
from .parsetree import SignedParseTree, build_parse_tree, evaluate_parse_tree, verify_parse_tree
from .solver import count, maxsat, solve

__version__ = "0.1.0"
