"""Lie algebra action on W-tensors and tangent space dimensions.

The basis element ``A^{(i)}_{e,e'}`` acts on slot ``i`` only: a monomial whose
slot-i letter is ``e`` is rewritten to use ``e'`` instead; all other monomials
are annihilated.  Pairs are split by how many vertices ``e`` and ``e'`` share:
two (``e == e'``, piece g0), one (g1) or none (g2).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

from .abp import EdgeId
from .concise import is_concise
from .errors import EvenDegreeUnsupported, HypothesisViolated, ShapeMismatch
from .formats import (
    check_format,
    edge_alphabet_sizes,
    edge_at,
    edge_index,
    layer_edges,
    path_monomial,
    shared_vertices,
    valid_paths,
    width,
)
from .linalg import Echelon, SparseMatrix, rank_of_rows
from .tensor import LayeredTensor

KINDS = ("g0", "g1", "g2")
_KIND_BY_SHARED = {2: "g0", 1: "g1", 0: "g2"}


@dataclass(frozen=True)
class LieBasisElement:
    layer: int
    from_edge: EdgeId
    to_edge: EdgeId

    def __post_init__(self):
        if not (self.from_edge.layer == self.to_edge.layer == self.layer):
            raise ValueError("both edges must lie in the element's layer")

    @property
    def kind(self) -> str:
        return _KIND_BY_SHARED[shared_vertices(self.from_edge, self.to_edge)]


def basis_elements(fmt: Sequence[int], kind: str | None = None) -> Iterator[LieBasisElement]:
    fmt = check_format(fmt)
    for i in range(1, len(fmt) + 1):
        edges = layer_edges(fmt, i)
        for e, e2 in itertools.product(edges, edges):
            b = LieBasisElement(i, e, e2)
            if kind is None or b.kind == kind:
                yield b


def _check_shape(f: LayeredTensor, fmt: Sequence[int]) -> None:
    if f.alphabet_sizes != edge_alphabet_sizes(fmt):
        raise ShapeMismatch(
            f"tensor alphabet sizes {f.alphabet_sizes} do not match the edge alphabets of format {tuple(fmt)}"
        )


def _action_row(f_by_letter: dict, fmt, b: LieBasisElement) -> dict:
    i = b.layer - 1
    src, dst = edge_index(fmt, b.from_edge), edge_index(fmt, b.to_edge)
    return {mono[:i] + (dst,) + mono[i + 1 :]: c for mono, c in f_by_letter.get((i, src), ())}


def _index_by_letter(f: LayeredTensor) -> dict:
    out: dict = {}
    for mono, c in f.items():
        for i, k in enumerate(mono):
            out.setdefault((i, k), []).append((mono, c))
    return out


def lie_action(b: LieBasisElement, f: LayeredTensor, fmt: Sequence[int]) -> LayeredTensor:
    """``A^{(i)}_{e,e'} f`` for the edge alphabets of ``fmt``."""
    fmt = check_format(fmt)
    _check_shape(f, fmt)
    return LayeredTensor(f.alphabet_sizes, _action_row(_index_by_letter(f), fmt, b))


def piece_rows(f: LayeredTensor, fmt: Sequence[int], kind: str) -> list[tuple[LieBasisElement, dict]]:
    """(basis element, nonzero row) pairs spanning the given piece of T_f."""
    fmt = check_format(fmt)
    _check_shape(f, fmt)
    if kind not in KINDS:
        raise ValueError(f"unknown piece {kind!r}")
    idx = _index_by_letter(f)
    out = []
    for b in basis_elements(fmt, kind):
        row = _action_row(idx, fmt, b)
        if row:
            out.append((b, row))
    return out


def g_piece_dim(f: LayeredTensor, kind: str, fmt: Sequence[int]) -> int:
    """Exact dimension of g_kind f."""
    return rank_of_rows(row for _, row in piece_rows(f, fmt, kind))


def piece_support(f: LayeredTensor, fmt: Sequence[int], kind: str) -> set:
    return {m for _, row in piece_rows(f, fmt, kind) for m in row}


@dataclass(frozen=True)
class TangentDims:
    g0: int
    g1: int
    g2: int
    stacked: int | None = None

    @property
    def total(self) -> int:
        return self.g0 + self.g1 + self.g2

    def to_json(self) -> dict:
        out = {"g0": self.g0, "g1": self.g1, "g2": self.g2, "total": self.total}
        if self.stacked is not None:
            out["stacked"] = self.stacked
        return out


def tangent_dims(f: LayeredTensor, fmt: Sequence[int], cross_check: bool = True) -> TangentDims:
    """Piece dimensions; with ``cross_check`` also the rank of all rows stacked."""
    dims = {k: g_piece_dim(f, k, fmt) for k in KINDS}
    stacked = None
    if cross_check:
        ech = Echelon()
        for k in KINDS:
            for _, row in piece_rows(f, fmt, k):
                ech.add(row)
        stacked = ech.rank
    return TangentDims(dims["g0"], dims["g1"], dims["g2"], stacked)


def tangent_dim(f: LayeredTensor, fmt: Sequence[int], cross_check: bool = True) -> int:
    dims = tangent_dims(f, fmt, cross_check)
    if cross_check and dims.stacked != dims.total:
        raise AssertionError(f"pieces sum to {dims.total} but the stacked rank is {dims.stacked}")
    return dims.total


# closed forms ---------------------------------------------------------------


def g2_formula(fmt: Sequence[int]) -> int:
    d = len(fmt)
    return sum(width(fmt, i) * width(fmt, i + 1) * (width(fmt, i) - 1) * (width(fmt, i + 1) - 1) for i in range(1, d + 1))


def g1_formula(fmt: Sequence[int]) -> int:
    d = len(fmt)
    # width(fmt, 0) wraps to w_d
    return sum(
        (width(fmt, i - 1) + width(fmt, i + 1) - 1) * (width(fmt, i) - 1) * width(fmt, i) for i in range(1, d + 1)
    )


def g0_fcom_formula(fmt: Sequence[int]) -> int:
    n_edges = sum(width(fmt, i) * width(fmt, i + 1) for i in range(1, len(fmt) + 1))
    return n_edges - sum(fmt) + 1


def g0_f0_bound(fmt: Sequence[int]) -> int:
    return g0_fcom_formula(fmt) - 1


# structural checks ------------------------------------------------------------


def supports_disjoint(f: LayeredTensor, fmt: Sequence[int]) -> bool:
    s = [piece_support(f, fmt, k) for k in KINDS]
    return not (s[0] & s[1] or s[0] & s[2] or s[1] & s[2])


def g2_columns_single(f: LayeredTensor, fmt: Sequence[int]) -> bool:
    """No monomial occurs in two different g2 rows."""
    seen: set = set()
    for _, row in piece_rows(f, fmt, "g2"):
        if seen.intersection(row):
            return False
        seen.update(row)
    return True


def jump_paths(fmt: Sequence[int], i: int, a: int, b: int) -> LayeredTensor:
    """Sum of the near-paths that arrive at vertex a of layer i and leave from
    vertex b of the same layer (layer indices cyclic)."""
    fmt = check_format(fmt)
    d = len(fmt)
    terms = []
    for p in valid_paths(fmt):
        # p passes through layer i at p[i-1].src; retarget the jump
        if p[i - 1].src != b:
            continue
        prev = (i - 2) % d
        path = list(p)
        path[prev] = EdgeId(path[prev].layer, path[prev].src, a)
        terms.append((path_monomial(fmt, path), 1))
    return LayeredTensor(edge_alphabet_sizes(fmt), terms)


def boundary_sums(f: LayeredTensor, fmt: Sequence[int], i: int, a: int, b: int) -> tuple[LayeredTensor, LayeredTensor]:
    """The two sums of g1 rows around the jump a -> b at layer i.

    Left: pairs (e, e') in layer i-1 with a common start, e' ending at a and e
    ending at b.  Right: pairs (h, h') in layer i with a common end, h starting
    at a and h' starting at b.
    """
    fmt = check_format(fmt)
    d = len(fmt)
    prev = (i - 2) % d + 1
    left = LayeredTensor.zero(f.alphabet_sizes)
    for k in range(1, width(fmt, prev) + 1):
        left = left + lie_action(LieBasisElement(prev, EdgeId(prev, k, b), EdgeId(prev, k, a)), f, fmt)
    right = LayeredTensor.zero(f.alphabet_sizes)
    for l in range(1, width(fmt, i + 1) + 1):
        right = right + lie_action(LieBasisElement(i, EdgeId(i, a, l), EdgeId(i, b, l)), f, fmt)
    return left, right


def boundary_relation_holds(f: LayeredTensor, fmt: Sequence[int]) -> bool:
    fmt = check_format(fmt)
    for i in range(1, len(fmt) + 1):
        for a in range(1, width(fmt, i) + 1):
            for b in range(1, width(fmt, i) + 1):
                if a != b:
                    left, right = boundary_sums(f, fmt, i, a, b)
                    if left != right:
                        return False
    return True


def row_matrix(rows: Sequence[dict]) -> SparseMatrix:
    """Rows over a common column set (the union of supports, sorted)."""
    cols = sorted({k for r in rows for k in r})
    pos = {k: j for j, k in enumerate(cols)}
    return SparseMatrix(len(rows), len(cols), {(r, pos[k]): v for r, row in enumerate(rows) for k, v in row.items()})


# certificate ----------------------------------------------------------------


def check_separation_hypotheses(fmt: Sequence[int]) -> tuple[int, ...]:
    fmt = check_format(fmt)
    if any(w < 2 for w in fmt):
        raise HypothesisViolated(f"all widths must be >= 2, got {fmt}")
    if len(fmt) % 2 == 0:
        raise EvenDegreeUnsupported(f"degree {len(fmt)} is even")
    if len(fmt) < 3:
        raise HypothesisViolated(f"degree {len(fmt)} is below 3")
    return fmt


def certify_separation(fmt: Sequence[int]) -> dict:
    """Exact evidence that f0 has no ABP of format ``fmt``.

    f0 is concise, which rules out the non-invertible part of the monoid
    orbit; its tangent space is strictly smaller than that of f_com, which
    rules out the group orbit.
    """
    from .family import f0 as make_f0, f_com as make_f_com

    fmt = check_separation_hypotheses(fmt)
    fcom, f0 = make_f_com(fmt), make_f0(fmt)
    concise, ranks = is_concise(f0)
    dc, d0 = tangent_dims(fcom, fmt), tangent_dims(f0, fmt)
    checks = {
        "f0_concise": concise,
        "stacked_rank_fcom": dc.stacked == dc.total,
        "stacked_rank_f0": d0.stacked == d0.total,
        "g2_formula_fcom": dc.g2 == g2_formula(fmt),
        "g2_formula_f0": d0.g2 == g2_formula(fmt),
        "g1_formula_fcom": dc.g1 == g1_formula(fmt),
        "g1_formula_f0": d0.g1 == g1_formula(fmt),
        "g0_formula_fcom": dc.g0 == g0_fcom_formula(fmt),
        "g0_bound_f0": d0.g0 <= g0_f0_bound(fmt),
        "supports_disjoint_fcom": supports_disjoint(fcom, fmt),
        "supports_disjoint_f0": supports_disjoint(f0, fmt),
        "tangent_strictly_smaller": d0.total < dc.total,
    }
    separated = concise and d0.total < dc.total
    return {
        "format": list(fmt),
        "concise": {"concise": concise, "mode_ranks": ranks, "mode_sizes": list(f0.alphabet_sizes)},
        "dims_fcom": dc.to_json(),
        "dims_f0": d0.to_json(),
        "dim_T_fcom": dc.total,
        "dim_T_f0": d0.total,
        "formulas": {
            "g2": g2_formula(fmt),
            "g1": g1_formula(fmt),
            "g0_fcom": g0_fcom_formula(fmt),
            "g0_f0_bound": g0_f0_bound(fmt),
        },
        "checks": [{"name": k, "ok": v} for k, v in checks.items()],
        "separated": separated,
        "verified": separated and all(checks.values()),
    }
