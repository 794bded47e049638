"""Mode flattenings, conciseness, and the slot-wise action of matrix tuples."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from .errors import ModeOutOfRange, ShapeMismatch
from .formats import check_format, edge_index
from .abp import EdgeId
from .linalg import SparseMatrix, exact_rank
from .nisan import mixed_radix_index
from .tensor import LayeredTensor


def mode_flattening(f: LayeredTensor, j: int) -> SparseMatrix:
    """Rows indexed by the slot-j letter, columns by the remaining letters in
    lexicographic order (slot order preserved). ``j`` is 1-based."""
    if not 1 <= j <= f.degree:
        raise ModeOutOfRange(f"mode {j} outside 1..{f.degree}")
    rest = f.alphabet_sizes[: j - 1] + f.alphabet_sizes[j:]
    entries = {}
    for mono, c in f.items():
        entries[(mono[j - 1], mixed_radix_index(mono[: j - 1] + mono[j:], rest))] = c
    return SparseMatrix(f.alphabet_sizes[j - 1], math.prod(rest), entries)


def mode_ranks(f: LayeredTensor) -> list[int]:
    return [exact_rank(mode_flattening(f, j)) for j in range(1, f.degree + 1)]


def is_concise(f: LayeredTensor) -> tuple[bool, list[int]]:
    """True iff every mode flattening has full row rank; also returns the ranks."""
    ranks = mode_ranks(f)
    return ranks == list(f.alphabet_sizes), ranks


def _as_rows(g) -> list[list[Fraction]]:
    if isinstance(g, SparseMatrix):
        return g.to_dense()
    return [[Fraction(x) for x in row] for row in g]


def apply_end(f: LayeredTensor, g: Sequence) -> LayeredTensor:
    """Apply ``(g_1, ..., g_d)`` slot-wise: basis vector k of slot i goes to
    column k of ``g_i``."""
    if len(g) != f.degree:
        raise ShapeMismatch(f"need {f.degree} matrices, got {len(g)}")
    mats = [_as_rows(m) for m in g]
    for i, (m, n) in enumerate(zip(mats, f.alphabet_sizes)):
        if len(m) != n or any(len(row) != n for row in m):
            raise ShapeMismatch(f"matrix {i + 1} must be {n}x{n}")
    coeffs = dict(f.coeffs)
    for i, m in enumerate(mats):
        cols = [[(r, m[r][k]) for r in range(len(m)) if m[r][k]] for k in range(len(m))]
        nxt: dict = {}
        for mono, c in coeffs.items():
            for r, x in cols[mono[i]]:
                key = mono[:i] + (r,) + mono[i + 1 :]
                nxt[key] = nxt[key] + c * x if key in nxt else c * x
        coeffs = nxt
    return LayeredTensor(f.alphabet_sizes, coeffs)


def unit_width_zero_row(fmt: Sequence[int]) -> tuple[int, int]:
    """For a format with some w_j = 1, the (mode, row) of an f0 mode flattening
    that must vanish.

    With v the only vertex of layer j, every valid path through the preserving
    edge v^{j+1}_1 -> v^{j+2}_1 also uses the preserving edge v^j -> v^{j+1}_1,
    so no path with a single preserving edge uses it.  Layers are read
    cyclically, so for j = d the dependent edge lies in layer 1.
    """
    fmt = check_format(fmt)
    d = len(fmt)
    for j, w in enumerate(fmt, start=1):
        if w == 1:
            layer = j % d + 1
            return layer, edge_index(fmt, EdgeId(layer, 1, 1))
    raise ValueError(f"format {fmt} has no layer of width 1")
