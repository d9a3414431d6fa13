"""Exact linear algebra over GF(2).

Vectors are Python ints used as bitsets: bit ``i`` is coordinate ``i``.
Ints are sparse-friendly for the mostly-empty differentials coming out of grid
diagrams and still dense-fast for small complexes, so no separate dense path
is needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


class DimensionMismatch(ValueError):
    """Operands live in different ambient spaces."""


def bits(v: int) -> Iterator[int]:
    """Indices of the set bits of ``v`` in increasing order."""
    while v:
        low = v & -v
        yield low.bit_length() - 1
        v ^= low


def popcount(v: int) -> int:
    return bin(v).count("1")


def _low(v: int) -> int:
    return (v & -v).bit_length() - 1


class Echelon:
    """Incremental row reduction with optional combination tags.

    Each stored row remembers (as a tag bitset) which inserted vectors were
    summed to produce it, so dependencies and preimages can be read off.
    """

    __slots__ = ("rows",)

    def __init__(self) -> None:
        # pivot (lowest set bit) -> (row, tag)
        self.rows: dict[int, tuple[int, int]] = {}

    def reduce(self, v: int, tag: int = 0) -> tuple[int, int]:
        # pivots are distinct lowest bits, so v is in the span iff this hits 0
        rows = self.rows
        while v:
            hit = rows.get(_low(v))
            if hit is None:
                break
            v ^= hit[0]
            tag ^= hit[1]
        return v, tag

    def insert(self, v: int, tag: int = 0) -> int | None:
        """Add ``v``; return ``None`` if independent, else the dependency tag."""
        r, t = self.reduce(v, tag)
        if r == 0:
            return t
        self.rows[_low(r)] = (r, t)
        return None

    def __len__(self) -> int:
        return len(self.rows)


@dataclass(frozen=True)
class F2Matrix:
    """A ``rows x cols`` matrix stored as column bitsets."""

    rows: int
    cols: int
    columns: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.columns) != self.cols:
            raise DimensionMismatch("column count does not match cols")
        limit = 1 << self.rows
        for c in self.columns:
            if c < 0 or c >= limit:
                raise DimensionMismatch("entry outside declared row range")

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Iterable[tuple[int, int]]) -> "F2Matrix":
        data = [0] * cols
        seen: set[tuple[int, int]] = set()
        for r, c in entries:
            if not (0 <= r < rows and 0 <= c < cols):
                raise DimensionMismatch(f"entry {(r, c)} outside {rows}x{cols}")
            if (r, c) in seen:
                raise ValueError(f"duplicate entry {(r, c)}")
            seen.add((r, c))
            data[c] ^= 1 << r
        return cls(rows, cols, tuple(data))

    @classmethod
    def zero(cls, rows: int, cols: int) -> "F2Matrix":
        return cls(rows, cols, (0,) * cols)

    @property
    def entries(self) -> frozenset[tuple[int, int]]:
        return frozenset((r, c) for c, col in enumerate(self.columns) for r in bits(col))

    def apply(self, v: int) -> int:
        out = 0
        for c in bits(v):
            out ^= self.columns[c]
        return out

    def compose(self, other: "F2Matrix") -> "F2Matrix":
        """``self @ other``."""
        if other.rows != self.cols:
            raise DimensionMismatch("inner dimensions differ")
        return F2Matrix(self.rows, other.cols, tuple(self.apply(c) for c in other.columns))

    def is_zero(self) -> bool:
        return not any(self.columns)


@dataclass(frozen=True)
class F2Subspace:
    """Subspace of GF(2)^ambient_dim in fully reduced echelon form.

    Pivots are lowest set bits, sorted increasingly; no basis vector contains
    another vector's pivot. This makes equality structural.
    """

    ambient_dim: int
    basis: tuple[int, ...]

    @classmethod
    def span(cls, ambient_dim: int, vectors: Iterable[int]) -> "F2Subspace":
        ech = Echelon()
        limit = 1 << ambient_dim
        for v in vectors:
            if v < 0 or v >= limit:
                raise DimensionMismatch("vector outside ambient space")
            ech.insert(v)
        return cls._from_echelon(ambient_dim, ech)

    @classmethod
    def _from_echelon(cls, ambient_dim: int, ech: Echelon) -> "F2Subspace":
        piv = sorted(ech.rows)
        rows = {p: ech.rows[p][0] for p in piv}
        # back-substitute so each pivot bit appears in exactly one row
        for p in reversed(piv):
            r = rows[p]
            for q in piv:
                if q != p and (rows[q] >> p) & 1:
                    rows[q] ^= r
        return cls(ambient_dim, tuple(rows[p] for p in piv))

    @classmethod
    def zero(cls, ambient_dim: int) -> "F2Subspace":
        return cls(ambient_dim, ())

    @classmethod
    def full(cls, ambient_dim: int) -> "F2Subspace":
        return cls(ambient_dim, tuple(1 << i for i in range(ambient_dim)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(_low(b) for b in self.basis)

    def reduce(self, v: int) -> int:
        for b in self.basis:
            if (v >> _low(b)) & 1:
                v ^= b
        return v

    def contains(self, v: int) -> bool:
        return self.reduce(v) == 0

    def __contains__(self, v: int) -> bool:
        return self.contains(v)

    def _check(self, other: "F2Subspace") -> None:
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatch(f"ambient {self.ambient_dim} vs {other.ambient_dim}")

    def sum(self, other: "F2Subspace") -> "F2Subspace":
        self._check(other)
        return F2Subspace.span(self.ambient_dim, self.basis + other.basis)

    def intersection(self, other: "F2Subspace") -> "F2Subspace":
        self._check(other)
        if not self.basis or not other.basis:
            return F2Subspace.zero(self.ambient_dim)
        # dependencies a + b = 0 with a in self and b in other give a in both
        ech = Echelon()
        for i, a in enumerate(self.basis):
            ech.insert(a, 1 << i)
        na = len(self.basis)
        mask = (1 << na) - 1
        found = []
        for j, b in enumerate(other.basis):
            dep = ech.insert(b, 1 << (na + j))
            if dep is not None:
                v = 0
                for i in bits(dep & mask):
                    v ^= self.basis[i]
                found.append(v)
        return F2Subspace.span(self.ambient_dim, found)

    def issubspace(self, other: "F2Subspace") -> bool:
        self._check(other)
        return all(other.contains(b) for b in self.basis)

    def quotient_dim(self, other: "F2Subspace") -> int:
        """dim self - dim(self & other)."""
        self._check(other)
        return self.sum(other).dim - other.dim

    def elements(self) -> Iterator[int]:
        """All 2^dim vectors; only for small brute-force checks."""
        for mask in range(1 << self.dim):
            v = 0
            for i in bits(mask):
                v ^= self.basis[i]
            yield v


def subspace_ops(a: F2Subspace, b: F2Subspace) -> dict[str, object]:
    return {"sum": a.sum(b), "intersection": a.intersection(b), "quotient_dim": a.quotient_dim(b)}


def coordinate_subspace(ambient_dim: int, indices: Iterable[int]) -> F2Subspace:
    idx = sorted(set(indices))
    if idx and (idx[0] < 0 or idx[-1] >= ambient_dim):
        raise DimensionMismatch("coordinate outside ambient space")
    return F2Subspace(ambient_dim, tuple(1 << i for i in idx))


def kernel_image(m: F2Matrix) -> tuple[F2Subspace, F2Subspace]:
    ech = Echelon()
    deps = []
    for c, col in enumerate(m.columns):
        d = ech.insert(col, 1 << c)
        if d is not None:
            deps.append(d)
    image = F2Subspace._from_echelon(m.rows, ech)
    kernel = F2Subspace.span(m.cols, deps)
    return kernel, image


def rank(m: F2Matrix) -> int:
    return kernel_image(m)[1].dim


def solve_in_subspace(m: F2Matrix, b: int, constraint: F2Subspace) -> tuple[int, int] | None:
    """Find ``(z, w)`` with ``z`` in ``constraint`` and ``z + m w = b``."""
    if constraint.ambient_dim != m.rows:
        raise DimensionMismatch("constraint must live in the codomain of m")
    if b < 0 or b >= (1 << m.rows):
        raise DimensionMismatch("right-hand side outside codomain")
    if b == 0:
        return 0, 0
    ech = Echelon()
    nz = constraint.dim
    for i, v in enumerate(constraint.basis):
        ech.insert(v, 1 << i)
    for c, col in enumerate(m.columns):
        ech.insert(col, 1 << (nz + c))
    r, tag = ech.reduce(b)
    if r:
        return None
    z = 0
    for i in bits(tag & ((1 << nz) - 1)):
        z ^= constraint.basis[i]
    w = tag >> nz
    return z, w


def solve(m: F2Matrix, b: int) -> int | None:
    """Some ``w`` with ``m w = b``, or ``None``."""
    res = solve_in_subspace(m, b, F2Subspace.zero(m.rows))
    return None if res is None else res[1]


def vector_from(indices: Sequence[int]) -> int:
    v = 0
    for i in indices:
        v ^= 1 << i
    return v
