"""Turning a monotone eps-ABP in the single-(source,sink) model into a monotone
ABP of the same format computing the eps -> 0 limit.

Phase 1 pushes every negative eps power onto the source edges, phase 2 then
strips one factor of eps at a time.  Every step only rescales the edges
around one vertex, so the format never changes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .abp import SINGLE, Abp, EdgeId, LinearLabel, evaluate, is_monotone_eps, is_monotone_strict, validate
from .errors import (
    NegativeExponentPresent,
    NotDivisibleByEps,
    NotMonotoneEps,
    NotSingleModel,
    OutputHasNegativeEps,
    SinkReachable,
)
from .io import checksum
from .tensor import LayeredTensor

Vertex = tuple[int, int]  # (layer, index)


@dataclass(frozen=True)
class DeborderStep:
    kind: str  # "push", "push-source", "leaf", "strip-source"
    vertex: Vertex
    exponent: int  # out-edges scaled by eps**exponent, in-edges by eps**-exponent
    snapshot: str

    def to_json(self) -> dict:
        return {"kind": self.kind, "vertex": list(self.vertex), "exponent": self.exponent, "snapshot": self.snapshot}


@dataclass
class DeborderTrace:
    steps: list[DeborderStep] = field(default_factory=list)
    phase1_final_power: int = 0
    input_checksum: str = ""
    output_checksum: str = ""

    def to_json(self) -> dict:
        return {
            "steps": [s.to_json() for s in self.steps],
            "phase1_final_power": self.phase1_final_power,
            "input_checksum": self.input_checksum,
            "output_checksum": self.output_checksum,
        }


def _require_single_monotone(abp: Abp) -> None:
    if abp.model != SINGLE:
        raise NotSingleModel(f"debordering needs the single-(source,sink) model, got {abp.model!r}")
    problems = validate(abp)
    if problems:
        raise ValueError("malformed ABP: " + "; ".join(problems))
    if not is_monotone_eps(abp):
        raise NotMonotoneEps("some label coefficient is negative for small eps > 0")


def rescale_vertex(abp: Abp, vertex: Vertex, k: int) -> Abp:
    """Multiply the out-edges of ``vertex`` by eps**k and its in-edges by eps**-k."""
    layer, idx = vertex
    labels = dict(abp.labels)
    for e in abp.out_edges(layer, idx):
        labels[e] = labels[e].shift(k)
    for e in abp.in_edges(layer, idx):
        labels[e] = labels[e].shift(-k)
    return abp.with_labels(labels)


def _shift_source(abp: Abp, k: int) -> Abp:
    labels = dict(abp.labels)
    for e in abp.out_edges(1, 1):
        labels[e] = labels[e].shift(k)
    return abp.with_labels(labels)


def _check_step(abp: Abp, expected: LayeredTensor, what: str) -> str:
    got = evaluate(abp)
    if got != expected:
        raise AssertionError(f"{what} changed the computed tensor")
    if not is_monotone_eps(abp):
        raise AssertionError(f"{what} broke eps-monotonicity")
    return checksum(got)


def _push(abp: Abp, trace: DeborderTrace | None, check: bool) -> tuple[Abp, int]:
    expected = evaluate(abp) if check else None
    n_edges = len(abp.labels)
    worst = max((-(lab.min_exponent() or 0) for lab in abp.labels.values()), default=0)
    budget = n_edges * max(worst, 1) * max(abp.degree, 1) + n_edges + 1
    steps = 0
    while True:
        bad = [e for e, lab in abp.labels.items() if e.layer >= 2 and lab.has_negative_exponent()]
        if not bad:
            break
        # highest layer first, then (from, to)
        e = min(bad, key=lambda e: (-e.layer, e.src, e.dst))
        k = -abp.labels[e].min_exponent()
        abp = rescale_vertex(abp, (e.layer, e.src), k)
        steps += 1
        if steps > budget:
            raise AssertionError("phase 1 exceeded its step bound")
        snap = _check_step(abp, expected, "phase-1 rescale") if check else ""
        if trace is not None:
            trace.steps.append(DeborderStep("push", (e.layer, e.src), k, snap))

    i = max((-abp.labels[e].min_exponent() for e in abp.out_edges(1, 1) if abp.labels[e].has_negative_exponent()), default=0)
    if i:
        abp = _shift_source(abp, i)
        if check:
            expected = expected.shift_eps(i)
        snap = _check_step(abp, expected, "source rescale") if check else ""
        if trace is not None:
            trace.steps.append(DeborderStep("push-source", (1, 1), i, snap))
    if any(lab.has_negative_exponent() for lab in abp.labels.values()):
        raise AssertionError("phase 1 left a negative eps exponent")
    if check and evaluate(abp) != expected:
        raise AssertionError("phase 1 result does not compute eps^i times the input")
    return abp, i


def push_negative_eps_to_source(abp: Abp, trace: DeborderTrace | None = None, check: bool = True) -> tuple[Abp, int]:
    """Return ``(abp_i, i)`` with no negative eps exponents in any label and
    evaluate(abp_i) == eps**i * evaluate(abp)."""
    _require_single_monotone(abp)
    abp, i = _push(abp, trace, check)
    if trace is not None:
        trace.phase1_final_power = i
    return abp, i


def _is_eps_edge(lab: LinearLabel) -> bool:
    return lab.divisible_by_eps()


def reachable_without_eps(abp: Abp) -> set[Vertex]:
    """Vertices reachable from the source along edges whose label is not divisible by eps."""
    seen = {(1, 1)}
    stack = [(1, 1)]
    while stack:
        layer, idx = stack.pop()
        for e in abp.out_edges(layer, idx):
            v = (layer + 1, e.dst)
            if v not in seen and not _is_eps_edge(abp.labels[e]):
                seen.add(v)
                stack.append(v)
    return seen


def _strip(abp: Abp, trace: DeborderTrace | None, check: bool) -> Abp:
    if any(lab.has_negative_exponent() for lab in abp.labels.values()):
        raise NegativeExponentPresent("strip_one_eps needs labels without negative eps exponents")
    out = evaluate(abp)
    if not out.divisible_by_eps():
        raise NotDivisibleByEps("the computed tensor has a nonzero eps^0 coefficient")
    sink = (abp.degree + 1, 1)
    n_vertices = sum(abp.widths())
    steps = 0
    while True:
        delta = reachable_without_eps(abp)
        if sink in delta:
            raise SinkReachable("the sink is reachable without eps-edges although the output is divisible by eps")
        leaves = [
            v for v in delta
            if v != (1, 1) and not any(not _is_eps_edge(abp.labels[e]) for e in abp.out_edges(*v))
        ]
        if not leaves:
            break
        v = min(leaves, key=lambda v: (-v[0], v[1]))
        abp = rescale_vertex(abp, v, -1)
        steps += 1
        if steps > n_vertices * n_vertices:
            raise AssertionError("phase 2 exceeded its step bound")
        snap = _check_step(abp, out, "leaf rescale") if check else ""
        if trace is not None:
            trace.steps.append(DeborderStep("leaf", v, -1, snap))

    if any(not _is_eps_edge(abp.labels[e]) for e in abp.out_edges(1, 1)):
        raise AssertionError("source still has an edge not divisible by eps")
    abp = _shift_source(abp, -1)
    result = out.shift_eps(-1)
    snap = _check_step(abp, result, "source division") if check else ""
    if trace is not None:
        trace.steps.append(DeborderStep("strip-source", (1, 1), -1, snap))
    return abp


def strip_one_eps(abp: Abp, trace: DeborderTrace | None = None, check: bool = True) -> Abp:
    """ABP of the same format computing evaluate(abp) / eps."""
    _require_single_monotone(abp)
    return _strip(abp, trace, check)


def deborder_with_trace(abp: Abp, check: bool = True) -> tuple[Abp, DeborderTrace]:
    _require_single_monotone(abp)
    out = evaluate(abp)
    if out.has_negative_eps():
        raise OutputHasNegativeEps("the computed tensor has a coefficient with a negative eps exponent")
    trace = DeborderTrace(input_checksum=checksum(out))
    g, i = _push(abp, trace, check)
    trace.phase1_final_power = i
    for _ in range(i):
        g = _strip(g, trace, check)
    # labels may vanish at eps = 0, so keep the input's slot alphabets
    final = g.with_labels(
        {e: lab.eval_at_zero() for e, lab in g.labels.items()},
        alphabets=abp.alphabets if abp.alphabets is not None else abp.slot_alphabets(),
    )
    limit = out.eval_at_zero()
    got = evaluate(final)
    if got != limit:
        raise AssertionError("debordered ABP does not compute the eps -> 0 limit")
    if not is_monotone_strict(final) or final.format != abp.format:
        raise AssertionError("debordered ABP is not monotone of the same format")
    trace.output_checksum = checksum(got)
    return final, trace


def deborder(abp: Abp) -> Abp:
    """Monotone ABP of the same format computing evaluate(abp) at eps = 0."""
    return deborder_with_trace(abp)[0]
