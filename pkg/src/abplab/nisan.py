"""Prefix/suffix flattenings, width profiles and minimal single-(source,sink) ABPs."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .abp import SINGLE, Abp, EdgeId, LinearLabel, evaluate
from .errors import ZeroTensor
from .laurent import as_fraction
from .linalg import SparseMatrix, exact_rank, rank_of_rows, rref
from .tensor import LayeredTensor

__all__ = [
    "SparseMatrix",
    "WidthProfile",
    "exact_rank",
    "minimize",
    "minimize_transcript",
    "mixed_radix_index",
    "nisan_flattening",
    "width_profile",
]


def mixed_radix_index(digits: Sequence[int], sizes: Sequence[int]) -> int:
    idx = 0
    for k, m in zip(digits, sizes):
        idx = idx * m + k
    return idx


def _rational_items(f: LayeredTensor):
    for mono, c in f.items():
        yield mono, as_fraction(c)


def nisan_flattening(f: LayeredTensor, i: int) -> SparseMatrix:
    """Matrix with rows indexed by prefixes (k_1..k_i) and columns by suffixes
    (k_{i+1}..k_d), both in lexicographic order."""
    if not 0 <= i <= f.degree:
        raise ValueError(f"split point {i} outside 0..{f.degree}")
    left, right = f.alphabet_sizes[:i], f.alphabet_sizes[i:]
    entries = {
        (mixed_radix_index(mono[:i], left), mixed_radix_index(mono[i:], right)): c
        for mono, c in _rational_items(f)
    }
    return SparseMatrix(math.prod(left), math.prod(right), entries)


@dataclass(frozen=True)
class WidthProfile:
    ranks: tuple[int, ...]

    def internal(self) -> tuple[int, ...]:
        return self.ranks[1:-1]

    @property
    def width(self) -> int:
        """Minimal single-(source,sink) width: the largest layer size."""
        return max(self.ranks)

    def __iter__(self):
        return iter(self.ranks)

    def __getitem__(self, i):
        return self.ranks[i]


def _prefix_rows(f: LayeredTensor, i: int) -> dict[tuple, dict[tuple, Fraction]]:
    """Rows of M_i keyed by prefix, each a dict suffix -> coefficient."""
    rows: dict[tuple, dict[tuple, Fraction]] = {}
    for mono, c in _rational_items(f):
        rows.setdefault(mono[:i], {})[mono[i:]] = c
    return rows


def width_profile(f: LayeredTensor) -> WidthProfile:
    """(rk M_0, ..., rk M_d); lower bounds on single-(source,sink) layer sizes."""
    if f.is_zero():
        raise ZeroTensor("the zero tensor has no width profile")
    return WidthProfile(tuple(rank_of_rows(_prefix_rows(f, i).values()) for i in range(f.degree + 1)))


def minimize(f: LayeredTensor, alphabets: Sequence[Sequence[str]] | None = None) -> Abp:
    """Single-(source,sink) ABP for ``f`` whose layer i+1 has exactly rk(M_i) vertices.

    Vertex j of layer i+1 stands for the j-th reduced row-echelon basis vector
    of the row space of M_i (a function of the remaining suffix).  Because the
    basis is in RREF, the coordinates of any row-space vector are its values at
    the pivot suffixes, which gives the edge labels directly.
    """
    if f.is_zero():
        raise ZeroTensor("cannot build an ABP for the zero tensor")
    d = f.degree
    if alphabets is None:
        alphabets = tuple(tuple(f"x{k + 1}" for k in range(m)) for m in f.alphabet_sizes)
    alphabets = tuple(tuple(a) for a in alphabets)
    if tuple(len(a) for a in alphabets) != f.alphabet_sizes:
        raise ValueError("alphabets do not match the tensor's alphabet sizes")

    bases = [rref(_prefix_rows(f, i).values()) for i in range(d + 1)]
    # the source must stand for f itself, not a rescaled copy
    bases[0] = [_prefix_rows(f, 0)[()]]
    pivots = [[min(b) for b in basis] for basis in bases]

    labels: dict[EdgeId, LinearLabel] = {}
    for i in range(d):
        nxt_basis, nxt_piv = bases[i + 1], pivots[i + 1]
        for j, b in enumerate(bases[i]):
            # derivative of b by letter k: suffix (k, rest) -> rest
            derivs: dict[int, dict[tuple, Fraction]] = {}
            for suffix, c in b.items():
                derivs.setdefault(suffix[0], {})[suffix[1:]] = c
            edge_terms: dict[int, dict[str, Fraction]] = {}
            for k, der in derivs.items():
                coords = [der.get(p, Fraction(0)) for p in nxt_piv]
                recon: dict[tuple, Fraction] = {}
                for t, cf in enumerate(coords):
                    if cf:
                        for key, v in nxt_basis[t].items():
                            recon[key] = recon.get(key, Fraction(0)) + cf * v
                if {key: v for key, v in recon.items() if v} != der:
                    raise AssertionError(f"derivative at layer {i + 1} is not in the next row space")
                for t, cf in enumerate(coords):
                    if cf:
                        edge_terms.setdefault(t, {})[alphabets[i][k]] = cf
            for t, terms in edge_terms.items():
                labels[EdgeId(i + 1, j + 1, t + 1)] = LinearLabel(terms)

    fmt = tuple(len(b) for b in bases[:d])
    variables: dict[str, None] = {}
    for a in alphabets:
        for v in a:
            variables.setdefault(v, None)
    return Abp(fmt, labels, SINGLE, tuple(variables), alphabets)


def minimize_transcript(f: LayeredTensor, alphabets=None) -> dict:
    """Profile, synthesized ABP and a round-trip verification flag."""
    profile = width_profile(f)
    abp = minimize(f, alphabets)
    verified = evaluate(abp) == f and tuple(abp.widths()) == profile.ranks
    return {"profile": list(profile.ranks), "abp": abp, "verified": verified}
