"""Generators for the complete-layered family: gamma_com, f_com, f_eps, f0 and
the width-2m program computing f0.

Vertex ``v^i_j`` has parity ``j mod 2``; an edge is parity preserving when both
endpoints have the same parity.
"""

from __future__ import annotations

from typing import Sequence

from .abp import TRACE, Abp, EdgeId, LinearLabel, evaluate
from .errors import EvenDegreeUnsupported, HypothesisViolated
from .formats import (
    all_edges,
    check_format,
    edge_alphabet_sizes,
    edge_alphabets,
    edge_var,
    guard_format_size,
    is_parity_preserving,
    path_monomial,
    preserving_count,
    valid_paths,
)
from .laurent import EPS
from .tensor import LayeredTensor

OBJECTS = ("gamma-com", "f-com", "f0", "f-eps", "gamma-prime")


def gamma_com(fmt: Sequence[int]) -> Abp:
    """Complete layered trace ABP, each edge labeled by its own variable."""
    fmt = check_format(fmt)
    labels = {e: LinearLabel.var(edge_var(e)) for e in all_edges(fmt)}
    alph = edge_alphabets(fmt)
    return Abp(fmt, labels, TRACE, tuple(v for a in alph for v in a), alph)


def f_com(fmt: Sequence[int]) -> LayeredTensor:
    """Sum of the monomials of all valid paths, by direct enumeration."""
    fmt = check_format(fmt)
    guard_format_size(fmt)
    return LayeredTensor(edge_alphabet_sizes(fmt), ((path_monomial(fmt, p), 1) for p in valid_paths(fmt)))


def _require_odd(fmt) -> None:
    if len(fmt) % 2 == 0:
        raise EvenDegreeUnsupported(f"degree {len(fmt)} is even; only odd degree is supported")


def one_preserving_paths(fmt: Sequence[int]):
    """Valid paths with exactly one parity-preserving edge.

    For odd d no valid path is free of preserving edges; this is asserted.
    """
    fmt = check_format(fmt)
    _require_odd(fmt)
    for p in valid_paths(fmt):
        k = preserving_count(p)
        if k == 0:
            raise AssertionError(f"valid path {p} has no parity-preserving edge although d is odd")
        if k == 1:
            yield p


def f0(fmt: Sequence[int]) -> LayeredTensor:
    """Coefficient-1 sum over valid paths with exactly one parity-preserving edge."""
    fmt = check_format(fmt)
    guard_format_size(fmt)
    return LayeredTensor(edge_alphabet_sizes(fmt), ((path_monomial(fmt, p), 1) for p in one_preserving_paths(fmt)))


def f_eps_abp(fmt: Sequence[int]) -> Abp:
    """gamma_com with every parity-preserving edge label multiplied by eps."""
    base = gamma_com(fmt)
    labels = {e: (lab.scale(EPS) if is_parity_preserving(e) else lab) for e, lab in base.labels.items()}
    return base.with_labels(labels)


def f_eps_prime(fmt: Sequence[int]) -> LayeredTensor:
    """The tensor computed by f_eps_abp (coefficients eps^#preserving)."""
    return evaluate(f_eps_abp(fmt))


def f_eps(fmt: Sequence[int]) -> LayeredTensor:
    """(1/eps) * f_eps_prime; for odd d it has no negative eps exponents."""
    return f_eps_prime(fmt).shift_eps(-1)


def f_eps_at(fmt: Sequence[int], eps0) -> LayeredTensor:
    """f_eps with eps specialised to a nonzero rational."""
    return f_eps(fmt).eval_eps(eps0)


def gamma_prime(m: int, d: int) -> Abp:
    """Width-2m trace ABP computing f0((m,)*d).

    Every vertex v gets two copies v' (index j) and v'' (index m+j).  Parity
    changing edges are duplicated on both copies, parity preserving edges go
    from the ' copy to the '' copy.  The last layer is wired so that u'
    corresponds to v'' and u'' to v'.
    """
    if m < 2:
        raise HypothesisViolated(f"width m={m} must be at least 2")
    if d < 1 or d % 2 == 0:
        raise EvenDegreeUnsupported(f"degree d={d} must be odd")
    fmt = (m,) * d

    def target(layer: int, j: int, double: bool) -> int:
        if layer == d:
            # correspondence swaps the copies
            double = not double
        return m + j if double else j

    labels: dict[EdgeId, LinearLabel] = {}
    for e in all_edges(fmt):
        lab = LinearLabel.var(edge_var(e))
        if is_parity_preserving(e):
            labels[EdgeId(e.layer, e.src, target(e.layer, e.dst, True))] = lab
        else:
            labels[EdgeId(e.layer, e.src, target(e.layer, e.dst, False))] = lab
            labels[EdgeId(e.layer, m + e.src, target(e.layer, e.dst, True))] = lab
    alph = edge_alphabets(fmt)
    return Abp((2 * m,) * d, labels, TRACE, tuple(v for a in alph for v in a), alph)


def gamma_prime_crossings(m: int, d: int) -> list[int]:
    """For each path of gamma_prime between corresponding vertices, how many
    times it moves from a ' vertex to a '' vertex."""
    abp = gamma_prime(m, d)
    out = []

    def walk(layer: int, j: int, start: int, crossings: int):
        if layer == d + 1:
            if j == start:
                out.append(crossings)
            return
        for e in abp.out_edges(layer, j):
            here_double = j > m
            if layer + 1 == d + 1:
                there_double = e.dst <= m  # last layer indices are swapped
            else:
                there_double = e.dst > m
            walk(layer + 1, e.dst, start, crossings + int(there_double and not here_double))

    for s in range(1, 2 * m + 1):
        walk(1, s, s, 0)
    return out


def generate(obj: str, fmt: Sequence[int]):
    """Dispatch used by the CLI: returns an Abp or a LayeredTensor."""
    fmt = check_format(fmt)
    if obj == "gamma-com":
        return gamma_com(fmt)
    if obj == "f-com":
        return f_com(fmt)
    if obj == "f0":
        return f0(fmt)
    if obj == "f-eps":
        return f_eps_abp(fmt)
    if obj == "gamma-prime":
        if len(set(fmt)) != 1:
            raise HypothesisViolated("gamma-prime needs a uniform format (m,...,m)")
        return gamma_prime(fmt[0], len(fmt))
    raise ValueError(f"unknown object {obj!r}; choose from {', '.join(OBJECTS)}")

