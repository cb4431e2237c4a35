"""CNF formulas, DIMACS input/output and the signed formula graph."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import IO, Iterable, Sequence

log = logging.getLogger(__name__)

Literal = tuple[int, bool]  # (variable id, positive?)

VARIABLE = "variable"
CLAUSE = "clause"


class DimacsError(ValueError):
    pass


@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    clauses: tuple[frozenset[Literal], ...]

    def __post_init__(self) -> None:
        for i, clause in enumerate(self.clauses):
            for var, _ in clause:
                if not 1 <= var <= self.num_vars:
                    raise ValueError(f"clause {i + 1}: variable {var} outside 1..{self.num_vars}")

    @classmethod
    def from_ints(cls, num_vars: int, clauses: Iterable[Iterable[int]]) -> "CnfFormula":
        """Build from DIMACS-style signed integers, e.g. ``[[1, -2], [2]]``."""
        out = []
        for c in clauses:
            lits = []
            for lit in c:
                if lit == 0:
                    raise ValueError("literal 0 is not allowed")
                lits.append((abs(lit), lit > 0))
            out.append(frozenset(lits))
        return cls(num_vars, tuple(out))

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    @property
    def num_literals(self) -> int:
        return sum(len(c) for c in self.clauses)

    def clause_ints(self) -> list[list[int]]:
        return [sorted((v if p else -v for v, p in c), key=lambda x: (abs(x), x < 0)) for c in self.clauses]


def parse_dimacs(source: str | bytes | IO) -> CnfFormula:
    """Parse DIMACS CNF text.  Duplicate literals inside a clause are merged."""
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        source = source.decode("utf-8", errors="replace")
    header = None
    clauses: list[list[int]] = []
    current: list[int] = []
    for lineno, raw in enumerate(source.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            if header is not None:
                raise DimacsError(f"line {lineno}: second header")
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"line {lineno}: malformed header {line!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise DimacsError(f"line {lineno}: malformed header {line!r}") from None
            if header[0] < 0 or header[1] < 0:
                raise DimacsError(f"line {lineno}: negative count in header")
            continue
        if header is None:
            raise DimacsError(f"line {lineno}: clause before header")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsError(f"line {lineno}: bad token {tok!r}") from None
            if lit == 0:
                clauses.append(current)
                current = []
            elif abs(lit) > header[0]:
                raise DimacsError(f"line {lineno}: literal {lit} outside declared range 1..{header[0]}")
            else:
                current.append(lit)
    if header is None:
        raise DimacsError("missing 'p cnf' header")
    if current:
        raise DimacsError("last clause is not terminated by 0")
    if len(clauses) != header[1]:
        log.warning("header declares %d clauses, found %d", header[1], len(clauses))
    return CnfFormula.from_ints(header[0], clauses)


def to_dimacs(f: CnfFormula) -> str:
    lines = [f"p cnf {f.num_vars} {f.num_clauses}"]
    for c in f.clause_ints():
        lines.append(" ".join(str(x) for x in c + [0]))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SignedGraph:
    """Graph with a positive and a negative edge set over vertices ``0..n-1``.

    ``pos_adj[v]`` / ``neg_adj[v]`` are neighbourhood bitmasks.  Formula graphs
    put variable ``k`` at index ``k-1`` and clause ``j`` at ``num_vars + j-1``.
    """

    num_vertices: int
    pos_adj: tuple[int, ...]
    neg_adj: tuple[int, ...]
    kinds: tuple[str, ...]
    names: tuple[str, ...]
    _name_index: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self) -> None:
        n = self.num_vertices
        if not (len(self.pos_adj) == len(self.neg_adj) == len(self.kinds) == len(self.names) == n):
            raise ValueError("inconsistent vertex data")
        if len(set(self.names)) != n:
            raise ValueError("vertex names must be unique")
        object.__setattr__(self, "_name_index", {nm: i for i, nm in enumerate(self.names)})

    @classmethod
    def from_edges(
        cls,
        n: int,
        pos_edges: Iterable[tuple[int, int]] = (),
        neg_edges: Iterable[tuple[int, int]] = (),
        kinds: Sequence[str] | None = None,
        names: Sequence[str] | None = None,
    ) -> "SignedGraph":
        pos = [0] * n
        neg = [0] * n
        for adj, edges in ((pos, pos_edges), (neg, neg_edges)):
            for u, v in edges:
                if u == v or not (0 <= u < n and 0 <= v < n):
                    raise ValueError(f"bad edge {(u, v)}")
                adj[u] |= 1 << v
                adj[v] |= 1 << u
        kinds = tuple(kinds) if kinds is not None else (VARIABLE,) * n
        names = tuple(names) if names is not None else tuple(f"v{i + 1}" for i in range(n))
        return cls(n, tuple(pos), tuple(neg), kinds, names)

    @property
    def vertices(self) -> range:
        return range(self.num_vertices)

    def index_of(self, name: str) -> int:
        return self._name_index[name]

    def has_name(self, name: str) -> bool:
        return name in self._name_index

    @staticmethod
    def _edges(adj: Sequence[int]) -> frozenset[tuple[int, int]]:
        out = set()
        for u, mask in enumerate(adj):
            m = mask >> (u + 1)
            v = u + 1
            while m:
                low = m & -m
                v2 = v + low.bit_length() - 1
                out.add((u, v2))
                m ^= low
        return frozenset(out)

    @property
    def edges_pos(self) -> frozenset[tuple[int, int]]:
        return self._edges(self.pos_adj)

    @property
    def edges_neg(self) -> frozenset[tuple[int, int]]:
        return self._edges(self.neg_adj)

    def adjacency(self, sign: str) -> tuple[int, ...]:
        return self.pos_adj if sign == "+" else self.neg_adj

    def same_graph(self, other: "SignedGraph") -> bool:
        return (
            self.num_vertices == other.num_vertices
            and self.pos_adj == other.pos_adj
            and self.neg_adj == other.neg_adj
        )

    def is_bipartite_formula_graph(self) -> bool:
        var_mask = sum(1 << v for v in self.vertices if self.kinds[v] == VARIABLE)
        for v in self.vertices:
            own = var_mask if self.kinds[v] == VARIABLE else ~var_mask
            if (self.pos_adj[v] | self.neg_adj[v]) & own:
                return False
        return True


def build_signed_graph(f: CnfFormula) -> SignedGraph:
    n = f.num_vars + f.num_clauses
    pos = [0] * n
    neg = [0] * n
    for j, clause in enumerate(f.clauses):
        c = f.num_vars + j
        for var, positive in clause:
            w = var - 1
            adj = pos if positive else neg
            adj[w] |= 1 << c
            adj[c] |= 1 << w
    kinds = (VARIABLE,) * f.num_vars + (CLAUSE,) * f.num_clauses
    names = tuple(f"v{k}" for k in range(1, f.num_vars + 1)) + tuple(
        f"c{j}" for j in range(1, f.num_clauses + 1)
    )
    return SignedGraph(n, tuple(pos), tuple(neg), kinds, names)
