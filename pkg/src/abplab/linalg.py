"""Exact sparse linear algebra over the rationals.

Rows are dicts ``column key -> value``.  Column keys only need to be mutually
comparable; elimination always pivots on the smallest key of a row, so pivot
order is the sorted order of the keys.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import ShapeMismatch
from .laurent import as_fraction


@dataclass(frozen=True)
class SparseMatrix:
    rows: int
    cols: int
    entries: Mapping[tuple[int, int], Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (r, c), v in self.entries.items():
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise ShapeMismatch(f"entry ({r},{c}) outside {self.rows}x{self.cols}")
            v = as_fraction(v)
            if v != 0:
                clean[(r, c)] = v
        object.__setattr__(self, "entries", clean)

    @classmethod
    def from_dense(cls, data: Sequence[Sequence]) -> "SparseMatrix":
        nr = len(data)
        nc = len(data[0]) if nr else 0
        return cls(nr, nc, {(r, c): v for r, row in enumerate(data) for c, v in enumerate(row) if v != 0})

    @classmethod
    def from_row_dicts(cls, rows: Sequence[Mapping[int, object]], cols: int) -> "SparseMatrix":
        return cls(len(rows), cols, {(r, c): v for r, row in enumerate(rows) for c, v in row.items()})

    def __getitem__(self, rc: tuple[int, int]) -> Fraction:
        return self.entries.get(rc, Fraction(0))

    def row_dicts(self) -> list[dict[int, Fraction]]:
        out: list[dict[int, Fraction]] = [{} for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def column_nnz(self) -> list[int]:
        counts = [0] * self.cols
        for _, c in self.entries:
            counts[c] += 1
        return counts

    def row_nnz(self) -> list[int]:
        counts = [0] * self.rows
        for r, _ in self.entries:
            counts[r] += 1
        return counts

    def to_dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()})

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows:
            raise ShapeMismatch(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        by_row = other.row_dicts()
        acc: dict[tuple[int, int], Fraction] = {}
        for (r, k), v in self.entries.items():
            for c, w in by_row[k].items():
                acc[(r, c)] = acc.get((r, c), Fraction(0)) + v * w
        return SparseMatrix(self.rows, other.cols, acc)

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)


def _integer_row(row: Mapping[Hashable, object]) -> dict:
    """Scale a rational row to a primitive integer row with the same span."""
    vals = {k: as_fraction(v) for k, v in row.items() if v != 0}
    if not vals:
        return {}
    den = reduce(lcm, (v.denominator for v in vals.values()), 1)
    ints = {k: int(v * den) for k, v in vals.items()}
    g = reduce(gcd, ints.values(), 0)
    return {k: v // g for k, v in ints.items()}


def _primitive(row: dict) -> dict:
    g = reduce(gcd, row.values(), 0)
    if g > 1:
        return {k: v // g for k, v in row.items()}
    return row


class Echelon:
    """Incremental fraction-free row echelon form over the integers.

    Each stored row is primitive (content 1) and indexed by its leading key.
    Elimination uses only integer cross-multiplication, so no fractions ever
    appear.
    """

    def __init__(self):
        self.pivots: dict = {}

    def __len__(self) -> int:
        return len(self.pivots)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: Mapping) -> dict:
        r = _integer_row(row)
        while r:
            lead = min(r)
            p = self.pivots.get(lead)
            if p is None:
                return r
            a, b = p[lead], r[lead]
            new = {k: a * v for k, v in r.items()}
            for k, v in p.items():
                nv = new.get(k, 0) - b * v
                if nv:
                    new[k] = nv
                else:
                    new.pop(k, None)
            r = _primitive(new)
        return r

    def add(self, row: Mapping) -> bool:
        """Insert a row; return True if it was independent of the stored rows."""
        r = self.reduce(row)
        if not r:
            return False
        self.pivots[min(r)] = r
        return True

    def contains(self, row: Mapping) -> bool:
        return not self.reduce(row)


def rank_of_rows(rows: Iterable[Mapping]) -> int:
    ech = Echelon()
    for row in rows:
        ech.add(row)
    return ech.rank


def bareiss_rank(data: Sequence[Sequence]) -> int:
    """Rank of a dense rational matrix by Bareiss fraction-free elimination."""
    if not data or not data[0]:
        return 0
    den = reduce(lcm, (as_fraction(v).denominator for row in data for v in row), 1)
    a = [[int(as_fraction(v) * den) for v in row] for row in data]
    nr, nc = len(a), len(a[0])
    rank, prev = 0, 1
    for col in range(nc):
        piv = next((r for r in range(rank, nr) if a[r][col] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][col]
        for r in range(rank + 1, nr):
            f = a[r][col]
            for c in range(col + 1, nc):
                # exact by Sylvester's identity
                a[r][c] = (p * a[r][c] - f * a[rank][c]) // prev
            a[r][col] = 0
        prev = p
        rank += 1
        if rank == nr:
            break
    return rank


def exact_rank(M: SparseMatrix | Sequence[Sequence], method: str = "sparse") -> int:
    """Rank over Q.  ``method`` is ``"sparse"`` (default) or ``"bareiss"`` (dense)."""
    if method == "bareiss":
        dense = M.to_dense() if isinstance(M, SparseMatrix) else M
        return bareiss_rank(dense)
    if method != "sparse":
        raise ValueError(f"unknown rank method {method!r}")
    if not isinstance(M, SparseMatrix):
        M = SparseMatrix.from_dense(M)
    return rank_of_rows(M.row_dicts())


def rref(rows: Iterable[Mapping]) -> list[dict]:
    """Reduced row-echelon basis of the span of ``rows``.

    Returned rows are sorted by pivot key, each has a 1 at its pivot and zeros
    at every other row's pivot.
    """
    ech = Echelon()
    for row in rows:
        ech.add(row)
    basis: dict = {}
    for lead in sorted(ech.pivots):
        r = ech.pivots[lead]
        basis[lead] = {k: Fraction(v, r[lead]) for k, v in r.items()}
    # back-substitution, highest pivot first
    leads = sorted(basis)
    for i in reversed(range(len(leads))):
        pi = leads[i]
        pr = basis[pi]
        for j in range(i):
            r = basis[leads[j]]
            f = r.get(pi)
            if f:
                for k, v in pr.items():
                    nv = r.get(k, Fraction(0)) - f * v
                    if nv:
                        r[k] = nv
                    else:
                        r.pop(k, None)
    return [basis[k] for k in leads]


