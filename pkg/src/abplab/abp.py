"""Layered algebraic branching programs in the trace and single-(source,sink) models.

Vertices are ``(layer, index)`` pairs with 1-based layers ``1..d+1`` and 1-based
indices.  Layer ``d+1`` has ``w_1`` vertices and vertex ``(d+1, j)`` corresponds
to ``(1, j)``.  An edge ``EdgeId(layer=i, src=a, dst=b)`` joins ``(i, a)`` to
``(i+1, b)``.  Edges without a label are simply absent (zero label).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Sequence

from .laurent import LaurentEps, ZERO, as_laurent, simplify_scalar
from .tensor import LayeredTensor

TRACE = "trace"
SINGLE = "single"
MODELS = (TRACE, SINGLE)

# reserved letter standing for the constant part of an affine label
CONST_LETTER = "1"


class EdgeId(NamedTuple):
    layer: int
    src: int
    dst: int


@dataclass(frozen=True)
class LinearLabel:
    """Affine form sum_v c_v * v + constant with LaurentEps coefficients."""

    terms: Mapping[str, LaurentEps] = field(default_factory=dict)
    constant: LaurentEps = ZERO

    def __post_init__(self):
        clean = {}
        for v, c in self.terms.items():
            c = as_laurent(c)
            if c:
                clean[str(v)] = c
        object.__setattr__(self, "terms", dict(sorted(clean.items())))
        object.__setattr__(self, "constant", as_laurent(self.constant))

    @classmethod
    def var(cls, name: str, coeff=1) -> "LinearLabel":
        return cls({name: coeff})

    def is_zero(self) -> bool:
        return not self.terms and not self.constant

    def is_homogeneous(self) -> bool:
        return not self.constant

    def coefficients(self) -> list[LaurentEps]:
        out = list(self.terms.values())
        if self.constant:
            out.append(self.constant)
        return out

    def scale(self, c) -> "LinearLabel":
        return LinearLabel({v: x * c for v, x in self.terms.items()}, self.constant * c)

    def shift(self, k: int) -> "LinearLabel":
        """Multiply the whole label by eps**k."""
        if k == 0:
            return self
        return LinearLabel({v: x.shift(k) for v, x in self.terms.items()}, self.constant.shift(k))

    def __add__(self, other: "LinearLabel") -> "LinearLabel":
        terms = dict(self.terms)
        for v, c in other.terms.items():
            terms[v] = terms[v] + c if v in terms else c
        return LinearLabel(terms, self.constant + other.constant)

    def min_exponent(self) -> int | None:
        vals = [c.valuation() for c in self.coefficients()]
        return min(vals) if vals else None

    def has_negative_exponent(self) -> bool:
        m = self.min_exponent()
        return m is not None and m < 0

    def divisible_by_eps(self) -> bool:
        return all(c.divisible_by_eps() for c in self.coefficients())

    def eval_at_zero(self) -> "LinearLabel":
        return LinearLabel({v: c.eval_at_zero() for v, c in self.terms.items()}, self.constant.eval_at_zero())

    def letters(self) -> list[tuple[str, object]]:
        """(letter, coefficient) pairs; the constant part uses CONST_LETTER."""
        out = [(v, simplify_scalar(c)) for v, c in self.terms.items()]
        if self.constant:
            out.append((CONST_LETTER, simplify_scalar(self.constant)))
        return out

    def __str__(self):
        parts = []
        for v, c in self.terms.items():
            parts.append(v if c == 1 else f"({c})*{v}")
        if self.constant:
            parts.append(f"({self.constant})")
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class Abp:
    """A layered ABP of format ``(w_1, ..., w_d)``.

    ``alphabets`` optionally fixes, per layer, the ordered letters of the
    corresponding tensor slot.  Without it a slot's alphabet is the set of
    variables occurring in that layer, in variable-table order.
    """

    format: tuple[int, ...]
    labels: Mapping[EdgeId, LinearLabel] = field(default_factory=dict)
    model: str = TRACE
    variables: tuple[str, ...] = ()
    alphabets: tuple[tuple[str, ...], ...] | None = None
    affine: bool = False

    def __post_init__(self):
        object.__setattr__(self, "format", tuple(int(w) for w in self.format))
        clean = {}
        for e, lab in self.labels.items():
            e = EdgeId(*map(int, e))
            if not isinstance(lab, LinearLabel):
                raise TypeError(f"label of {e} must be a LinearLabel")
            if not lab.is_zero():
                clean[e] = lab
        object.__setattr__(self, "labels", dict(sorted(clean.items())))
        if not self.variables:
            seen: dict[str, None] = {}
            for lab in self.labels.values():
                for v in lab.terms:
                    seen.setdefault(v, None)
            object.__setattr__(self, "variables", tuple(seen))
        else:
            object.__setattr__(self, "variables", tuple(self.variables))
        if self.alphabets is not None:
            object.__setattr__(self, "alphabets", tuple(tuple(a) for a in self.alphabets))

    # geometry -------------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.format)

    def width(self, layer: int) -> int:
        """Number of vertices in layer ``layer`` (1..d+1)."""
        d = self.degree
        return self.format[0] if layer == d + 1 else self.format[layer - 1]

    def widths(self) -> tuple[int, ...]:
        return self.format + (self.format[0],)

    def all_edges(self) -> Iterable[EdgeId]:
        for i in range(1, self.degree + 1):
            for a in range(1, self.width(i) + 1):
                for b in range(1, self.width(i + 1) + 1):
                    yield EdgeId(i, a, b)

    def label(self, e) -> LinearLabel:
        return self.labels.get(EdgeId(*e), LinearLabel())

    def out_edges(self, layer: int, index: int) -> list[EdgeId]:
        if layer > self.degree:
            return []
        return [e for e in (EdgeId(layer, index, b) for b in range(1, self.width(layer + 1) + 1)) if e in self.labels]

    def in_edges(self, layer: int, index: int) -> list[EdgeId]:
        if layer < 2:
            return []
        return [e for e in (EdgeId(layer - 1, a, index) for a in range(1, self.width(layer - 1) + 1)) if e in self.labels]

    def with_labels(self, labels: Mapping[EdgeId, LinearLabel], **changes) -> "Abp":
        return replace(self, labels=labels, **changes)

    def max_width(self) -> int:
        return max(self.format)

    # alphabets ------------------------------------------------------------

    def slot_alphabet(self, layer: int) -> tuple[str, ...]:
        if self.alphabets is not None:
            return self.alphabets[layer - 1]
        present: set[str] = set()
        has_const = False
        for e, lab in self.labels.items():
            if e.layer == layer:
                present.update(lab.terms)
                has_const = has_const or bool(lab.constant)
        order = [v for v in self.variables if v in present]
        order += sorted(present.difference(order))
        if has_const:
            order.append(CONST_LETTER)
        return tuple(order)

    def slot_alphabets(self) -> tuple[tuple[str, ...], ...]:
        return tuple(self.slot_alphabet(i) for i in range(1, self.degree + 1))


def _check_well_formed(abp: Abp) -> None:
    problems = validate(abp)
    if problems:
        raise ValueError("malformed ABP: " + "; ".join(problems))


def evaluate(abp: Abp, alphabets: Sequence[Sequence[str]] | None = None) -> LayeredTensor:
    """Expand tr(M_1 ... M_d) into a layered tensor.

    Sums, over every start vertex s of layer 1, the label products of all paths
    from s to its corresponding vertex in layer d+1.
    """
    _check_well_formed(abp)
    d = abp.degree
    alph = tuple(tuple(a) for a in alphabets) if alphabets is not None else abp.slot_alphabets()
    index = [{v: k for k, v in enumerate(a)} for a in alph]
    layer_edges: list[list[tuple[int, int, list[tuple[int, object]]]]] = []
    for i in range(1, d + 1):
        rows = []
        for e, lab in abp.labels.items():
            if e.layer != i:
                continue
            try:
                letters = [(index[i - 1][v], c) for v, c in lab.letters()]
            except KeyError as exc:
                raise ValueError(f"letter {exc.args[0]!r} of edge {tuple(e)} missing from slot {i} alphabet") from None
            rows.append((e.src, e.dst, letters))
        layer_edges.append(rows)

    total: dict[tuple, object] = {}
    for s in range(1, abp.width(1) + 1):
        # state: vertex index in current layer -> {prefix monomial: coeff}
        state: dict[int, dict[tuple, object]] = {s: {(): Fraction(1)}}
        for i in range(d):
            nxt: dict[int, dict[tuple, object]] = {}
            for a, b, letters in layer_edges[i]:
                cur = state.get(a)
                if not cur:
                    continue
                acc = nxt.setdefault(b, {})
                for prefix, c in cur.items():
                    for k, lc in letters:
                        key = prefix + (k,)
                        val = c * lc
                        acc[key] = acc[key] + val if key in acc else val
            state = nxt
        for mono, c in state.get(s, {}).items():
            total[mono] = total[mono] + c if mono in total else c
    return LayeredTensor([len(a) for a in alph], total)


def layer_matrices(abp: Abp, assignment: Mapping[str, object], eps=None) -> list[list[list]]:
    """Numeric layer matrices M_1..M_d after substituting variable values (and eps)."""
    mats = []
    for i in range(1, abp.degree + 1):
        M = [[Fraction(0)] * abp.width(i + 1) for _ in range(abp.width(i))]
        for e, lab in abp.labels.items():
            if e.layer != i:
                continue
            val = Fraction(0)
            for v, c in lab.letters():
                c = c.evaluate(eps) if isinstance(c, LaurentEps) else c
                x = Fraction(1) if v == CONST_LETTER else assignment[v]
                val += c * x
            M[e.src - 1][e.dst - 1] = val
        mats.append(M)
    return mats


def evaluate_numeric(abp: Abp, assignment: Mapping[str, object], eps=None) -> Fraction:
    """tr(M_1 ... M_d) for a numeric assignment of the variables."""
    mats = layer_matrices(abp, assignment, eps)
    prod = mats[0]
    for M in mats[1:]:
        prod = [[sum((row[k] * M[k][c] for k in range(len(M))), Fraction(0)) for c in range(len(M[0]))] for row in prod]
    return sum((prod[j][j] for j in range(len(prod))), Fraction(0))


def to_single_source_sink(abp: Abp) -> Abp:
    """Convert a trace ABP to a single-(source,sink) ABP computing the same tensor.

    One copy of the program is kept per corresponding (start, end) pair, then
    all starts are merged into one source and all ends into one sink.  Layer
    i+1 of the result has w_1 * w_i vertices for 2 <= i <= d.
    """
    if abp.width(1) == 1:
        return replace(abp, model=SINGLE)
    _check_well_formed(abp)
    d, w1 = abp.degree, abp.width(1)
    alph = abp.slot_alphabets()

    def vid(s: int, layer: int, j: int) -> int:
        return (s - 1) * abp.width(layer) + j

    labels: dict[EdgeId, LinearLabel] = {}
    for e, lab in abp.labels.items():
        for s in range(1, w1 + 1):
            if d == 1:
                if e.src == s and e.dst == s:
                    new = EdgeId(1, 1, 1)
                else:
                    continue
            elif e.layer == 1:
                if e.src != s:
                    continue
                new = EdgeId(1, 1, vid(s, 2, e.dst))
            elif e.layer == d:
                if e.dst != s:
                    continue
                new = EdgeId(d, vid(s, d, e.src), 1)
            else:
                new = EdgeId(e.layer, vid(s, e.layer, e.src), vid(s, e.layer + 1, e.dst))
            labels[new] = labels[new] + lab if new in labels else lab
    fmt = (1,) + tuple(w1 * abp.width(i) for i in range(2, d + 1))
    return Abp(fmt, labels, SINGLE, abp.variables, alph, abp.affine)


def validate(abp: Abp) -> list[str]:
    """Structural diagnostics; an empty list means well-formed."""
    out: list[str] = []
    fmt = abp.format
    if len(fmt) < 1:
        return ["format must have at least one layer"]
    for i, w in enumerate(fmt, start=1):
        if w < 1:
            out.append(f"width w{i}={w} must be >= 1")
    if abp.model not in MODELS:
        out.append(f"unknown model {abp.model!r}")
    if abp.model == SINGLE and fmt[0] != 1:
        out.append("single model requires w₁=1")
    d = len(fmt)
    known = set(abp.variables)
    for e, lab in abp.labels.items():
        where = f"edge ({e.src},{e.dst},{e.layer})"
        if not 1 <= e.layer <= d:
            out.append(f"{where}: layer index out of range")
            continue
        if not 1 <= e.src <= abp.width(e.layer):
            out.append(f"{where}: from-index out of range")
        if not 1 <= e.dst <= abp.width(e.layer + 1):
            out.append(f"{where}: to-index out of range")
        if lab.constant and not abp.affine:
            out.append(f"{where}: nonzero constant term in homogeneous mode")
        unknown = [v for v in lab.terms if v not in known]
        if unknown:
            out.append(f"{where}: variables {unknown} not in variable table")
        if abp.alphabets is not None and 1 <= e.layer <= len(abp.alphabets):
            missing = [v for v, _ in lab.letters() if v not in abp.alphabets[e.layer - 1]]
            if missing:
                out.append(f"{where}: letters {missing} missing from slot alphabet")
    if abp.alphabets is not None and len(abp.alphabets) != d:
        out.append(f"expected {d} slot alphabets, got {len(abp.alphabets)}")
    return out


def is_monotone_strict(abp: Abp) -> bool:
    """All label coefficients are nonnegative, eps-free rationals."""
    return all(c.is_constant() and c.constant_term() >= 0 for lab in abp.labels.values() for c in lab.coefficients())


def is_monotone_eps(abp: Abp) -> bool:
    """All label coefficients are nonnegative for every sufficiently small eps > 0."""
    return all(c.is_nonneg_small_eps() for lab in abp.labels.values() for c in lab.coefficients())


def is_monotone(abp: Abp, variant: str = "strict") -> bool:
    if variant == "strict":
        return is_monotone_strict(abp)
    if variant == "eps":
        return is_monotone_eps(abp)
    raise ValueError(f"unknown monotonicity variant {variant!r}")
