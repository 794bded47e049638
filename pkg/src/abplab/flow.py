"""Flows on the identified digraph (first and last layers merged) and exact
verification of the tangent-space dimension results.

Vertices are ``(layer, index)`` with layer in ``1..d``; edge ``(i, a, b)``
runs from ``(i, a)`` to ``(i % d + 1, b)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import networkx as nx

from .abp import EdgeId
from .errors import Disconnected, HypothesisViolated, ShapeMismatch
from .formats import (
    all_edges,
    check_format,
    edge_alphabet_sizes,
    edge_at,
    is_parity_preserving,
    layer_edges,
    preserving_count,
    valid_paths,
    width,
)
from .linalg import Echelon, rank_of_rows
from .tangent import LieBasisElement, lie_action
from .tensor import LayeredTensor

Vertex = tuple[int, int]


class EdgeVector:
    """Sparse rational vector indexed by edges."""

    __slots__ = ("_v",)

    def __init__(self, values: Mapping[EdgeId, object] | Iterable = ()):
        items = values.items() if isinstance(values, Mapping) else values
        v: dict[EdgeId, Fraction] = {}
        for e, x in items:
            e = EdgeId(*e)
            v[e] = v.get(e, Fraction(0)) + Fraction(x)
        self._v = {e: x for e, x in sorted(v.items()) if x}

    @property
    def values(self) -> dict[EdgeId, Fraction]:
        return dict(self._v)

    def __getitem__(self, e) -> Fraction:
        return self._v.get(EdgeId(*e), Fraction(0))

    def items(self):
        return self._v.items()

    def support(self) -> set[EdgeId]:
        return set(self._v)

    def is_zero(self) -> bool:
        return not self._v

    def __add__(self, other: "EdgeVector") -> "EdgeVector":
        return EdgeVector(list(self._v.items()) + list(other._v.items()))

    def __sub__(self, other: "EdgeVector") -> "EdgeVector":
        return self + other.scale(-1)

    def scale(self, c) -> "EdgeVector":
        c = Fraction(c)
        return EdgeVector({e: c * x for e, x in self._v.items()})

    def __rmul__(self, c) -> "EdgeVector":
        return self.scale(c)

    def dot(self, other: "EdgeVector") -> Fraction:
        return sum((x * other[e] for e, x in self._v.items()), Fraction(0))

    def __eq__(self, other) -> bool:
        return isinstance(other, EdgeVector) and self._v == other._v

    def __hash__(self):
        return hash(tuple(self._v.items()))

    def __repr__(self):
        body = ", ".join(f"{tuple(e)}: {x}" for e, x in self._v.items())
        return f"EdgeVector({{{body}}})"


def combine(terms: Iterable[tuple[object, EdgeVector]]) -> EdgeVector:
    acc: list = []
    for c, vec in terms:
        c = Fraction(c)
        acc.extend((e, c * x) for e, x in vec.items())
    return EdgeVector(acc)


@dataclass(frozen=True)
class IdentifiedGraph:
    format: tuple[int, ...]
    edges: tuple[EdgeId, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "format", check_format(self.format))
        if not self.edges:
            object.__setattr__(self, "edges", tuple(all_edges(self.format)))

    @property
    def degree(self) -> int:
        return len(self.format)

    @property
    def vertices(self) -> list[Vertex]:
        return [(i, j) for i in range(1, self.degree + 1) for j in range(1, self.format[i - 1] + 1)]

    def tail(self, e: EdgeId) -> Vertex:
        return (e.layer, e.src)

    def head(self, e: EdgeId) -> Vertex:
        return (e.layer % self.degree + 1, e.dst)

    def in_edges(self, v: Vertex) -> list[EdgeId]:
        return [e for e in self.edges if self.head(e) == v]

    def out_edges(self, v: Vertex) -> list[EdgeId]:
        return [e for e in self.edges if self.tail(e) == v]

    def digraph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(self.vertices)
        for e in self.edges:
            g.add_edge(self.tail(e), self.head(e), edge=e)
        return g

    def is_connected(self) -> bool:
        return nx.is_weakly_connected(self.digraph())

    def conservation_defect(self, vec: EdgeVector) -> dict[Vertex, Fraction]:
        """Inflow minus outflow at every vertex where it is nonzero."""
        bal: dict[Vertex, Fraction] = {}
        for e, x in vec.items():
            bal[self.head(e)] = bal.get(self.head(e), Fraction(0)) + x
            bal[self.tail(e)] = bal.get(self.tail(e), Fraction(0)) - x
        return {v: x for v, x in bal.items() if x}

    def is_flow(self, vec: EdgeVector) -> bool:
        return not self.conservation_defect(vec) and vec.support() <= set(self.edges)


class FlowVector(EdgeVector):
    """An edge vector checked for conservation on construction."""

    __slots__ = ()

    def __init__(self, values, graph: IdentifiedGraph):
        super().__init__(values)
        defect = graph.conservation_defect(self)
        if defect:
            raise ValueError(f"not a flow; unbalanced at {sorted(defect)}")


def incidence_rows(G: IdentifiedGraph) -> dict[Vertex, EdgeVector]:
    """r_v = sum of chi(e) over incoming e minus the same over outgoing e."""
    rows: dict[Vertex, list] = {v: [] for v in G.vertices}
    for e in G.edges:
        rows[G.head(e)].append((e, 1))
        rows[G.tail(e)].append((e, -1))
    return {v: EdgeVector(r) for v, r in rows.items()}


def _vector_rank(vectors: Iterable[EdgeVector]) -> int:
    return rank_of_rows(v.values for v in vectors)


def flow_space_dim(G: IdentifiedGraph) -> int:
    """|E| - |V| + 1, cross-checked against |E| - rank of the incidence matrix."""
    if not G.is_connected():
        raise Disconnected("the flow dimension formula needs a connected graph")
    n = len(G.edges) - len(G.vertices) + 1
    rk = _vector_rank(incidence_rows(G).values())
    if len(G.edges) - rk != n:
        raise AssertionError(f"incidence rank {rk} disagrees with |E|-|V|+1 = {n}")
    return n


def spanning_tree_tau(fmt: Sequence[int]) -> list[EdgeId]:
    """All out-edges of the first vertex of every layer, minus the edge from
    the first vertex of layer d back to the root."""
    fmt = check_format(fmt)
    d = len(fmt)
    root_return = EdgeId(d, 1, 1)
    return [e for i in range(1, d + 1) for e in layer_edges(fmt, i) if e.src == 1 and e != root_return]


def is_spanning_tree(G: IdentifiedGraph, tree: Iterable[EdgeId]) -> bool:
    t = nx.Graph()
    t.add_nodes_from(G.vertices)
    tree = list(tree)
    for e in tree:
        t.add_edge(G.tail(e), G.head(e))
    return len(tree) == len(G.vertices) - 1 and t.number_of_edges() == len(tree) and nx.is_tree(t)


def is_out_arborescence(G: IdentifiedGraph, tree: Iterable[EdgeId], root: Vertex = (1, 1)) -> bool:
    t = nx.DiGraph()
    t.add_nodes_from(G.vertices)
    for e in tree:
        t.add_edge(G.tail(e), G.head(e))
    return nx.is_arborescence(t) and t.in_degree(root) == 0


def fundamental_cycle(G: IdentifiedGraph, tree: Sequence[EdgeId], e: EdgeId) -> FlowVector:
    """Characteristic flow of the cycle made of ``e`` (used forwards) and the
    tree path from head(e) back to tail(e)."""
    t = nx.Graph()
    t.add_nodes_from(G.vertices)
    for f in tree:
        t.add_edge(G.tail(f), G.head(f), edge=f)
    path = nx.shortest_path(t, G.head(e), G.tail(e))
    vals = [(e, 1)]
    for u, v in zip(path, path[1:]):
        f = t.edges[u, v]["edge"]
        vals.append((f, 1 if G.tail(f) == u else -1))
    return FlowVector(vals, G)


def fundamental_cycle_basis(G: IdentifiedGraph, tree: Sequence[EdgeId]) -> dict[EdgeId, FlowVector]:
    tree = list(tree)
    if not is_spanning_tree(G, tree):
        raise ValueError("edge set is not a spanning tree")
    in_tree = set(tree)
    return {e: fundamental_cycle(G, tree, e) for e in G.edges if e not in in_tree}


def cycle_flow(fmt: Sequence[int], verts: Sequence[int]) -> EdgeVector:
    """Characteristic flow of the length-d directed cycle through vertex
    ``verts[i]`` of layer ``i + 1``."""
    d = len(fmt)
    return EdgeVector((EdgeId(i + 1, verts[i], verts[(i + 1) % d]), 1) for i in range(d))


def path_flow(path: Sequence[EdgeId]) -> EdgeVector:
    return EdgeVector((e, 1) for e in path)


def length_d_cycle_flows(G: IdentifiedGraph, check_span: bool = True) -> list[FlowVector]:
    """One characteristic flow per valid path; asserts that they span F."""
    flows = [FlowVector(path_flow(p).values, G) for p in valid_paths(G.format)]
    if check_span:
        rk = _vector_rank(flows)
        if rk != flow_space_dim(G):
            raise AssertionError(f"length-d cycles span only {rk} dimensions")
    return flows


def cycle_decomposition(fmt: Sequence[int], e: EdgeId) -> list[tuple[int, tuple[int, ...]]]:
    """Signed combination of length-d cycles (given by their vertex tuples)
    equal to the fundamental cycle of the non-tree edge ``e`` w.r.t. tau."""
    fmt = check_format(fmt)
    d = len(fmt)
    if d < 3:
        raise HypothesisViolated("the explicit decomposition needs d >= 3")
    ones = (1,) * d

    def tup(**at) -> tuple[int, ...]:
        v = list(ones)
        for k, x in at.items():
            v[int(k[1:]) - 1] = x
        return tuple(v)

    i, j1, j2 = e
    if e.src == 1 and not (i == d and j2 == 1):
        raise ValueError(f"{tuple(e)} is a tree edge")
    if i == 1:
        if j2 == 1:
            return [(1, tup(v1=j1))]
        # C2 - C1 + C3
        return [(1, tup(v1=j1, v2=j2)), (-1, tup(v2=j2)), (1, ones)]
    if i == d and j2 == 1:
        return [(1, tup(**{f"v{d}": j1}))]
    nxt = i % d + 1
    # C5 - C4: the two cycles differ only in the vertex of layer i
    c5 = tup(**{f"v{i}": j1, f"v{nxt}": j2})
    c4 = tup(**{f"v{nxt}": j2})
    return [(1, c5), (-1, c4)]


def decomposition_flow(fmt: Sequence[int], e: EdgeId) -> EdgeVector:
    return combine((c, cycle_flow(fmt, v)) for c, v in cycle_decomposition(fmt, e))


# rho and path tensors ----------------------------------------------------------


def rho(t: LayeredTensor, fmt: Sequence[int]) -> EdgeVector:
    """Linear map sending the monomial of (e_1, ..., e_d) to chi(e_1) + ... + chi(e_d)."""
    fmt = check_format(fmt)
    if t.alphabet_sizes != edge_alphabet_sizes(fmt):
        raise ShapeMismatch("tensor slots are not the edge alphabets of the format")
    acc: dict[EdgeId, Fraction] = {}
    for mono, c in t.items():
        c = Fraction(c)
        for i, k in enumerate(mono):
            e = edge_at(fmt, i + 1, k)
            acc[e] = acc.get(e, Fraction(0)) + c
    return EdgeVector(acc)


def psi(fmt: Sequence[int], e: EdgeId, base: LayeredTensor | None = None) -> LayeredTensor:
    """Sum of the monomials of valid paths through ``e`` (computed as the
    diagonal Lie action on ``base``, f_com by default)."""
    from .family import f_com

    if base is None:
        base = f_com(fmt)
    return lie_action(LieBasisElement(e.layer, e, e), base, fmt)


def psi_bar(fmt: Sequence[int], e: EdgeId, base: LayeredTensor | None = None) -> LayeredTensor:
    t = psi(fmt, e, base)
    return t.scale(Fraction(1, len(t)))


def psi_rows(fmt: Sequence[int], prime: bool = False) -> dict[EdgeId, dict]:
    """Edge -> row of monomial coefficients of psi(e) (or psi'(e))."""
    from .family import f0, f_com

    fmt = check_format(fmt)
    base = f0(fmt) if prime else f_com(fmt)
    by_letter: dict = {}
    for mono, c in base.items():
        for i, k in enumerate(mono):
            by_letter.setdefault(edge_at(fmt, i + 1, k), {})[mono] = c
    return {e: by_letter.get(e, {}) for e in all_edges(fmt)}


def apply_psi(rows: Mapping[EdgeId, dict], vec: EdgeVector) -> dict:
    acc: dict = {}
    for e, x in vec.items():
        for m, c in rows[e].items():
            acc[m] = acc.get(m, Fraction(0)) + x * c
    return {m: c for m, c in acc.items() if c}


def parity_vector(fmt: Sequence[int]) -> EdgeVector:
    """(d-1) * sum of chi over preserving edges minus the sum over changing edges."""
    d = len(fmt)
    return EdgeVector((e, d - 1 if is_parity_preserving(e) else -1) for e in all_edges(fmt))


def witness_cycle(fmt: Sequence[int]) -> EdgeVector:
    return cycle_flow(fmt, (1,) * len(fmt))


# telescoping -------------------------------------------------------------------


def telescoping_terms(fmt: Sequence[int], verts: Sequence[int], corrected: bool = True) -> list[tuple[Fraction, EdgeId]]:
    """Coefficients c_h such that sum c_h * rho(psi_bar(h)) builds the cycle flow.

    The first d-1 groups walk the cycle forward from e_1: start with
    psi_bar(e_1), then for k = 2..d-1 add ((w_{k+1}-1)/w_{k+1}) psi_bar(e_k)
    and subtract (1/w_{k+1}) psi_bar(h) for the other edges h leaving the
    start of e_k.  That alone leaves a rank-one residue on layer d; the
    corrected form cancels it with the layer-d edges h = (x, y), weighted by
    ([x = end e_{d-1}] - 1/w_d) * ([y = start e_1] - 1/w_1).
    """
    fmt = check_format(fmt)
    d = len(fmt)
    cyc = [EdgeId(i + 1, verts[i], verts[(i + 1) % d]) for i in range(d)]
    terms: list[tuple[Fraction, EdgeId]] = [(Fraction(1), cyc[0])]
    for k in range(2, d):
        e = cyc[k - 1]
        wn = width(fmt, k + 1)
        terms.append((Fraction(wn - 1, wn), e))
        for b in range(1, wn + 1):
            if b != e.dst:
                terms.append((Fraction(-1, wn), EdgeId(e.layer, e.src, b)))
    if corrected:
        wd, w1 = width(fmt, d), width(fmt, 1)
        end_prev, start_first = cyc[d - 2].dst, cyc[0].src
        for h in layer_edges(fmt, d):
            c = (Fraction(int(h.src == end_prev)) - Fraction(1, wd)) * (Fraction(int(h.dst == start_first)) - Fraction(1, w1))
            if c:
                terms.append((c, h))
    return terms


def telescoping_flow(fmt: Sequence[int], verts: Sequence[int], corrected: bool = True) -> EdgeVector:
    from .family import f_com

    base = f_com(fmt)
    cache: dict[EdgeId, EdgeVector] = {}

    def rpb(e: EdgeId) -> EdgeVector:
        if e not in cache:
            cache[e] = rho(psi_bar(fmt, e, base), fmt)
        return cache[e]

    return combine((c, rpb(h)) for c, h in telescoping_terms(fmt, verts, corrected))


def telescoping_residue(fmt: Sequence[int], verts: Sequence[int]) -> EdgeVector:
    """Uncorrected telescoping sum minus the cycle flow."""
    return telescoping_flow(fmt, verts, corrected=False) - cycle_flow(fmt, verts)


def predicted_residue(fmt: Sequence[int], verts: Sequence[int]) -> EdgeVector:
    """Closed form of the residue: -(a_x)(b_y) on each layer-d edge (x, y)."""
    d = len(fmt)
    wd, w1 = width(fmt, d), width(fmt, 1)
    end_prev, start_first = verts[d - 1], verts[0]
    return EdgeVector(
        (h, -(Fraction(int(h.src == end_prev)) - Fraction(1, wd)) * (Fraction(int(h.dst == start_first)) - Fraction(1, w1)))
        for h in layer_edges(fmt, d)
    )


# bounded cycle search ---------------------------------------------------------------


def directed_cycle_lengths(G: IdentifiedGraph, bound: int | None = None) -> dict[int, int]:
    """Histogram of simple directed cycle lengths up to ``bound`` (default 2d)."""
    bound = 2 * G.degree if bound is None else bound
    hist: dict[int, int] = {}
    for cyc in nx.simple_cycles(G.digraph(), length_bound=bound):
        hist[len(cyc)] = hist.get(len(cyc), 0) + 1
    return dict(sorted(hist.items()))


# dimension theorems ------------------------------------------------------------


def verify_dim_theorems(fmt: Sequence[int]) -> dict:
    """Exact checks of dim T = |E| - sum w + 1 and dim T' <= |E| - sum w."""
    fmt = check_format(fmt)
    if any(w < 2 for w in fmt):
        raise HypothesisViolated(f"all widths must be >= 2, got {fmt}")
    d = len(fmt)
    G = IdentifiedGraph(fmt)
    n_e, n_v = len(G.edges), len(G.vertices)
    rows = psi_rows(fmt)
    dim_t = rank_of_rows(rows.values())
    inc = incidence_rows(G)
    flows = flow_space_dim(G)
    rho_images = [rho(psi(fmt, e), fmt) for e in G.edges]
    report: dict = {
        "format": list(fmt),
        "edges": n_e,
        "vertices": n_v,
        "flow_dim": flows,
        "a_dim_T": dim_t,
        "a_expected": n_e - sum(fmt) + 1,
        "a_ok": dim_t == n_e - sum(fmt) + 1,
        "b_incidence_in_kernel": all(not apply_psi(rows, r) for r in inc.values()),
        "rank_nullity_ok": n_e - dim_t == n_v - 1,
        "rho_images_are_flows": all(G.is_flow(r) for r in rho_images),
        "rho_image_rank": _vector_rank(rho_images),
    }
    report["rho_image_ok"] = report["rho_image_rank"] == flows
    checks = ["a_ok", "b_incidence_in_kernel", "rank_nullity_ok", "rho_images_are_flows", "rho_image_ok"]

    if d % 2 == 1:
        prime = psi_rows(fmt, prime=True)
        par = parity_vector(fmt)
        wit = witness_cycle(fmt)
        tree_rows = [inc[v] for v in G.vertices if v != (1, 1)]
        ech = Echelon()
        independent_rows = sum(ech.add(r.values) for r in tree_rows)
        dim_tp = rank_of_rows(prime.values())
        report.update(
            {
                "c_parity_in_kernel": not apply_psi(prime, par),
                "c_incidence_in_kernel": all(not apply_psi(prime, r) for r in inc.values()),
                "d_witness_orthogonal_to_incidence": all(wit.dot(r) == 0 for r in inc.values()),
                "d_witness_pairing": str(wit.dot(par)),
                "d_independent": wit.dot(par) != 0 and not ech.contains(par.values),
                "kernel_vectors": independent_rows + int(not ech.contains(par.values)),
                "e_dim_T_prime": dim_tp,
                "e_bound": n_e - sum(fmt),
                "e_ok": dim_tp <= n_e - sum(fmt),
            }
        )
        report["kernel_prime_ok"] = report["kernel_vectors"] == n_v and n_e - dim_tp >= n_v
        checks += [
            "c_parity_in_kernel",
            "c_incidence_in_kernel",
            "d_witness_orthogonal_to_incidence",
            "d_independent",
            "e_ok",
            "kernel_prime_ok",
        ]
    else:
        report["prime_part"] = "skipped: even degree"
    report["verified"] = all(report[k] for k in checks)
    return report


def random_cycles(fmt: Sequence[int], count: int, seed: int = 0) -> list[tuple[int, ...]]:
    rng = random.Random(seed)
    return [tuple(rng.randint(1, w) for w in fmt) for _ in range(count)]
