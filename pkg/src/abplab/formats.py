"""Formats, edge alphabets and valid paths of the complete layered digraph.

For a format ``w = (w_1, ..., w_d)`` (with ``w_{d+1} = w_1``) the edge set of
layer ``i`` is ``E^i = [w_i] x [w_{i+1}]``.  Slot ``i`` of a W-tensor uses
``E^i`` as its alphabet, ordered lexicographically by ``(src, dst)``.
"""

from __future__ import annotations

import itertools
import math
import os
from typing import Iterator, Sequence

from .abp import EdgeId
from .errors import FormatTooLarge

MAX_FORMAT_SIZE_ENV = "ABPLAB_MAX_FORMAT_SIZE"
DEFAULT_MAX_FORMAT_SIZE = 10**6

Path = tuple  # tuple[EdgeId, ...], one edge per layer


def check_format(fmt: Sequence[int]) -> tuple[int, ...]:
    fmt = tuple(int(w) for w in fmt)
    if not fmt:
        raise ValueError("format must have at least one layer")
    if any(w < 1 for w in fmt):
        raise ValueError(f"all widths must be >= 1, got {fmt}")
    return fmt


def parse_format(text: str) -> tuple[int, ...]:
    try:
        return check_format(int(tok) for tok in text.split(",") if tok.strip())
    except ValueError as exc:
        raise ValueError(f"bad format {text!r}: {exc}") from None


def guard_format_size(fmt: Sequence[int]) -> None:
    """Refuse formats whose number of valid paths exceeds the configured cap."""
    cap = int(os.environ.get(MAX_FORMAT_SIZE_ENV, DEFAULT_MAX_FORMAT_SIZE))
    n = math.prod(fmt)
    if n > cap:
        raise FormatTooLarge(f"format {tuple(fmt)} has {n} valid paths, above {MAX_FORMAT_SIZE_ENV}={cap}")


def width(fmt: Sequence[int], layer: int) -> int:
    return fmt[(layer - 1) % len(fmt)]


def layer_edges(fmt: Sequence[int], layer: int) -> list[EdgeId]:
    return [EdgeId(layer, a, b) for a in range(1, width(fmt, layer) + 1) for b in range(1, width(fmt, layer + 1) + 1)]


def all_edges(fmt: Sequence[int]) -> list[EdgeId]:
    return [e for i in range(1, len(fmt) + 1) for e in layer_edges(fmt, i)]


def edge_alphabet_sizes(fmt: Sequence[int]) -> tuple[int, ...]:
    return tuple(width(fmt, i) * width(fmt, i + 1) for i in range(1, len(fmt) + 1))


def edge_index(fmt: Sequence[int], e: EdgeId) -> int:
    """0-based position of ``e`` inside the slot alphabet ``E^{e.layer}``."""
    return (e.src - 1) * width(fmt, e.layer + 1) + (e.dst - 1)


def edge_at(fmt: Sequence[int], layer: int, k: int) -> EdgeId:
    nb = width(fmt, layer + 1)
    return EdgeId(layer, k // nb + 1, k % nb + 1)


def edge_var(e: EdgeId) -> str:
    return f"x{e.layer}_{e.src}_{e.dst}"


def edge_alphabets(fmt: Sequence[int]) -> tuple[tuple[str, ...], ...]:
    return tuple(tuple(edge_var(e) for e in layer_edges(fmt, i)) for i in range(1, len(fmt) + 1))


def is_parity_preserving(e: EdgeId) -> bool:
    return (e.src - e.dst) % 2 == 0


def shared_vertices(e: EdgeId, f: EdgeId) -> int:
    """Number of vertices shared by two edges of the same layer."""
    if e.layer != f.layer:
        raise ValueError("edges lie in different layers")
    if e == f:
        return 2
    return int(e.src == f.src) + int(e.dst == f.dst)


def valid_paths(fmt: Sequence[int]) -> Iterator[Path]:
    """Paths from a first-layer vertex to its corresponding last-layer vertex."""
    d = len(fmt)
    for verts in itertools.product(*(range(1, w + 1) for w in fmt)):
        yield tuple(EdgeId(i + 1, verts[i], verts[(i + 1) % d]) for i in range(d))


def path_monomial(fmt: Sequence[int], path: Path) -> tuple[int, ...]:
    return tuple(edge_index(fmt, e) for e in path)


def monomial_path(fmt: Sequence[int], mono: Sequence[int]) -> Path:
    return tuple(edge_at(fmt, i + 1, k) for i, k in enumerate(mono))


def is_valid_path(fmt: Sequence[int], path: Path) -> bool:
    d = len(fmt)
    return all(path[i].dst == path[(i + 1) % d].src for i in range(d))


def preserving_count(path: Path) -> int:
    return sum(is_parity_preserving(e) for e in path)
