"""Linear algebra over GF(2) on packed integer rows.

Coordinate ``i`` (0-based) of a vector of dimension ``t`` is bit ``i`` of an
``int``.  Label ``1`` of a labeling is therefore bit 0.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

MAX_DIM = 64


def _check_dim(dim: int) -> None:
    if dim < 0 or dim > MAX_DIM:
        raise ValueError(f"dimension {dim} outside supported range 0..{MAX_DIM}")


@dataclass(frozen=True)
class BitVector:
    bits: int
    dim: int

    def __post_init__(self) -> None:
        _check_dim(self.dim)
        if self.bits < 0 or self.bits >> self.dim:
            raise ValueError(f"bits {self.bits:#x} do not fit dimension {self.dim}")

    @classmethod
    def from_list(cls, entries: Sequence[int]) -> "BitVector":
        bits = 0
        for i, e in enumerate(entries):
            if e & 1:
                bits |= 1 << i
        return cls(bits, len(entries))

    @classmethod
    def unit(cls, i: int, dim: int) -> "BitVector":
        return cls(1 << i, dim)

    def to_list(self) -> list[int]:
        return [(self.bits >> i) & 1 for i in range(self.dim)]

    def dot(self, other: "BitVector") -> int:
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        return (self.bits & other.bits).bit_count() & 1

    def __str__(self) -> str:
        return "".join(str(b) for b in self.to_list())


@dataclass(frozen=True)
class BitMatrix:
    """Matrix with rows packed as ints; row vectors multiply from the left."""

    rows: tuple[int, ...]
    ncols: int

    def __post_init__(self) -> None:
        _check_dim(self.ncols)
        for r in self.rows:
            if r < 0 or r >> self.ncols:
                raise ValueError("row does not fit ncols")

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @classmethod
    def from_lists(cls, rows: Sequence[Sequence[int]], ncols: int | None = None) -> "BitMatrix":
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        packed = []
        for row in rows:
            if len(row) != ncols:
                raise ValueError("ragged rows")
            packed.append(BitVector.from_list(row).bits)
        return cls(tuple(packed), ncols)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "BitMatrix":
        return cls((0,) * nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(tuple(1 << i for i in range(n)), n)

    def to_lists(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.ncols)] for r in self.rows]

    def transpose(self) -> "BitMatrix":
        return BitMatrix(transpose_rows(self.rows, self.ncols), self.nrows)

    def row_times(self, vec: int) -> int:
        """``vec × M`` for a packed row vector ``vec`` of length ``nrows``."""
        return vec_times(vec, self.rows)

    def __str__(self) -> str:
        return " ".join("".join(str((r >> j) & 1) for j in range(self.ncols)) for r in self.rows)


def vec_times(vec: int, rows: Sequence[int]) -> int:
    out = 0
    i = 0
    while vec:
        if vec & 1:
            out ^= rows[i]
        vec >>= 1
        i += 1
    return out


def transpose_rows(rows: Sequence[int], ncols: int) -> tuple[int, ...]:
    out = [0] * ncols
    for i, r in enumerate(rows):
        j = 0
        while r:
            if r & 1:
                out[j] |= 1 << i
            r >>= 1
            j += 1
    return tuple(out)


def rank_of_rows(rows: Iterable[int]) -> int:
    """Rank of packed rows of any width (rows may be arbitrarily long ints)."""
    basis: dict[int, int] = {}
    for r in rows:
        while r:
            top = r.bit_length() - 1
            b = basis.get(top)
            if b is None:
                basis[top] = r
                break
            r ^= b
    return len(basis)


def rank(m: BitMatrix) -> int:
    return rank_of_rows(m.rows)


def rref(rows: Iterable[int]) -> tuple[int, ...]:
    """Reduced row-echelon basis; pivot of a row is its lowest set bit."""
    pivots: dict[int, int] = {}
    for r in rows:
        for p, b in pivots.items():
            if (r >> p) & 1:
                r ^= b
        if not r:
            continue
        p = (r & -r).bit_length() - 1
        for q in pivots:
            if (pivots[q] >> p) & 1:
                pivots[q] ^= r
        pivots[p] = r
    return tuple(pivots[p] for p in sorted(pivots))


@dataclass(frozen=True)
class Subspace:
    basis: tuple[int, ...]
    ambient_dim: int

    @classmethod
    def zero(cls, dim: int) -> "Subspace":
        _check_dim(dim)
        return cls((), dim)

    @classmethod
    def full(cls, dim: int) -> "Subspace":
        _check_dim(dim)
        return cls(tuple(1 << i for i in range(dim)), dim)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def elements(self) -> list[int]:
        out = [0]
        for b in self.basis:
            out += [x ^ b for x in out]
        return out

    def contains(self, vec: int) -> bool:
        for b in self.basis:
            p = (b & -b).bit_length() - 1
            if (vec >> p) & 1:
                vec ^= b
        return vec == 0

    def __str__(self) -> str:
        rows = ",".join(str(BitVector(b, self.ambient_dim)) for b in self.basis)
        return f"<{rows}>"


def _as_bits(v: BitVector | int, dim: int) -> int:
    if isinstance(v, BitVector):
        if v.dim != dim:
            raise ValueError(f"vector of dim {v.dim} in ambient dim {dim}")
        return v.bits
    if v < 0 or v >> dim:
        raise ValueError(f"vector {v:#x} outside ambient dim {dim}")
    return v


def span(vectors: Iterable[BitVector | int], ambient_dim: int) -> Subspace:
    _check_dim(ambient_dim)
    return Subspace(rref(_as_bits(v, ambient_dim) for v in vectors), ambient_dim)


def join(a: Subspace, b: Subspace) -> Subspace:
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("dimension mismatch")
    return Subspace(rref(a.basis + b.basis), a.ambient_dim)


def image(f: BitMatrix, s: Subspace) -> Subspace:
    """Image ``{x × f : x in s}``."""
    if f.nrows != s.ambient_dim:
        raise ValueError("dimension mismatch")
    return Subspace(rref(vec_times(b, f.rows) for b in s.basis), f.ncols)


def image_t(f: BitMatrix, s: Subspace) -> Subspace:
    """Image under the transposed map, ``{x × fᵀ : x in s}``."""
    if f.ncols != s.ambient_dim:
        raise ValueError("dimension mismatch")
    ft = transpose_rows(f.rows, f.ncols)
    return Subspace(rref(vec_times(b, ft) for b in s.basis), f.nrows)


def is_orthogonal(v: BitVector | int, s: Subspace) -> bool:
    bits = _as_bits(v, s.ambient_dim)
    return all(not ((bits & b).bit_count() & 1) for b in s.basis)


class SubspaceIndex:
    """Dense ids for canonical subspaces of GF(2)^t, allocated on first use."""

    def __init__(self, ambient_dim: int):
        _check_dim(ambient_dim)
        self.ambient_dim = ambient_dim
        self._ids: dict[tuple[int, ...], int] = {(): 0}
        self._bases: list[tuple[int, ...]] = [()]
        self._lock = threading.Lock()
        self._join_memo: dict[tuple[int, int], int] = {}

    def __len__(self) -> int:
        return len(self._bases)

    def register(self, s: Subspace) -> int:
        if s.ambient_dim != self.ambient_dim:
            raise ValueError("dimension mismatch")
        return self.register_basis(s.basis)

    def register_basis(self, basis: tuple[int, ...]) -> int:
        """Register an already canonical (RREF) basis."""
        i = self._ids.get(basis)
        if i is not None:
            return i
        with self._lock:
            i = self._ids.get(basis)
            if i is None:
                i = len(self._bases)
                self._bases.append(basis)
                self._ids[basis] = i
        return i

    def register_span(self, rows: Iterable[int]) -> int:
        return self.register_basis(rref(rows))

    def basis(self, i: int) -> tuple[int, ...]:
        return self._bases[i]

    def subspace(self, i: int) -> Subspace:
        return Subspace(self._bases[i], self.ambient_dim)

    def id_of(self, s: Subspace) -> int | None:
        return self._ids.get(s.basis)

    def join_ids(self, a: int, b: int) -> int:
        if a == b or b == 0:
            return a
        if a == 0:
            return b
        key = (a, b) if a < b else (b, a)
        r = self._join_memo.get(key)
        if r is None:
            r = self.register_basis(rref(self._bases[a] + self._bases[b]))
            self._join_memo[key] = r
        return r

    def image_id(self, rows: Sequence[int], i: int) -> int:
        """Id of the image of subspace ``i`` under the map with packed ``rows``."""
        if i == 0:
            return 0
        return self.register_basis(rref(vec_times(b, rows) for b in self._bases[i]))


def enumerate_subspace_bases(t: int) -> Iterator[tuple[int, ...]]:
    """Canonical bases of all subspaces of GF(2)^t, one RREF form at a time."""
    _check_dim(t)
    for k in range(t + 1):
        for pivots in itertools.combinations(range(t), k):
            slots = [(r, c) for r, p in enumerate(pivots) for c in range(p + 1, t) if c not in pivots]
            for bits in itertools.product((0, 1), repeat=len(slots)):
                rows = [1 << p for p in pivots]
                for (r, c), b in zip(slots, bits):
                    if b:
                        rows[r] |= 1 << c
                yield tuple(rows)


def gaussian_binomial(n: int, k: int, q: int = 2) -> int:
    if k < 0 or k > n:
        return 0
    num = 1
    den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def galois_number(t: int) -> int:
    """Number of linear subspaces of GF(2)^t."""
    if t < 0:
        raise ValueError("t must be non-negative")
    return sum(gaussian_binomial(t, k) for k in range(t + 1))
