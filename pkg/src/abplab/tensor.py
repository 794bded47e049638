"""Sparse homogeneous noncommutative polynomials as layered tensors.

A degree-d tensor lives in E_1 (x) ... (x) E_d where slot i has its own
alphabet of size m_i.  A monomial is a tuple (i_1, ..., i_d) of 0-based letter
indices, one per slot.  Coefficients are Fractions or LaurentEps values.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .errors import NegativeExponentPresent, ShapeMismatch
from .laurent import LaurentEps, as_laurent, simplify_scalar

Monomial = tuple


class LayeredTensor:
    """Immutable sparse element of a tensor product with per-slot alphabets."""

    __slots__ = ("degree", "alphabet_sizes", "_coeffs")

    def __init__(self, alphabet_sizes: Sequence[int], coeffs: Mapping[Monomial, object] | Iterable = ()):
        self.alphabet_sizes = tuple(int(m) for m in alphabet_sizes)
        if any(m < 0 for m in self.alphabet_sizes):
            raise ShapeMismatch("alphabet sizes must be nonnegative")
        self.degree = len(self.alphabet_sizes)
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[Monomial, object] = {}
        for mono, c in items:
            mono = tuple(int(k) for k in mono)
            self._check_monomial(mono)
            c = simplify_scalar(c)
            acc[mono] = acc[mono] + c if mono in acc else c
        self._coeffs = {k: simplify_scalar(v) for k, v in acc.items() if v != 0}

    def _check_monomial(self, mono: Monomial) -> None:
        if len(mono) != self.degree:
            raise ShapeMismatch(f"monomial {mono} has length {len(mono)}, expected {self.degree}")
        for k, m in zip(mono, self.alphabet_sizes):
            if not 0 <= k < m:
                raise ShapeMismatch(f"monomial {mono} out of range for alphabet sizes {self.alphabet_sizes}")

    @classmethod
    def zero(cls, alphabet_sizes: Sequence[int]) -> "LayeredTensor":
        return cls(alphabet_sizes, {})

    @classmethod
    def _trusted(cls, sizes: tuple, coeffs: dict) -> "LayeredTensor":
        t = object.__new__(cls)
        t.alphabet_sizes = sizes
        t.degree = len(sizes)
        t._coeffs = coeffs
        return t

    # mapping-like access --------------------------------------------------

    @property
    def coeffs(self) -> dict:
        return dict(self._coeffs)

    def __getitem__(self, mono: Monomial):
        return self._coeffs.get(tuple(mono), Fraction(0))

    def __contains__(self, mono) -> bool:
        return tuple(mono) in self._coeffs

    def __len__(self) -> int:
        return len(self._coeffs)

    def __iter__(self) -> Iterator[Monomial]:
        return iter(sorted(self._coeffs))

    def items(self):
        """Terms in canonical (lexicographic monomial) order."""
        return sorted(self._coeffs.items())

    def support(self) -> frozenset:
        return frozenset(self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    # arithmetic -----------------------------------------------------------

    def _same_shape(self, other: "LayeredTensor") -> None:
        if not isinstance(other, LayeredTensor):
            raise TypeError("expected a LayeredTensor")
        if self.alphabet_sizes != other.alphabet_sizes:
            raise ShapeMismatch(f"alphabet sizes {self.alphabet_sizes} != {other.alphabet_sizes}")

    def __add__(self, other: "LayeredTensor") -> "LayeredTensor":
        self._same_shape(other)
        acc = dict(self._coeffs)
        for k, v in other._coeffs.items():
            acc[k] = acc[k] + v if k in acc else v
        return LayeredTensor._trusted(self.alphabet_sizes, {k: simplify_scalar(v) for k, v in acc.items() if v != 0})

    def __neg__(self) -> "LayeredTensor":
        return LayeredTensor._trusted(self.alphabet_sizes, {k: -v for k, v in self._coeffs.items()})

    def __sub__(self, other: "LayeredTensor") -> "LayeredTensor":
        return self + (-other)

    def scale(self, c) -> "LayeredTensor":
        if c == 0:
            return LayeredTensor.zero(self.alphabet_sizes)
        out = {k: simplify_scalar(v * c) for k, v in self._coeffs.items()}
        return LayeredTensor._trusted(self.alphabet_sizes, {k: v for k, v in out.items() if v != 0})

    def __mul__(self, c):
        if isinstance(c, LayeredTensor):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, LayeredTensor):
            return NotImplemented
        return self.alphabet_sizes == other.alphabet_sizes and self._coeffs == other._coeffs

    def __hash__(self):
        return hash((self.alphabet_sizes, frozenset(self._coeffs.items())))

    def map_coeffs(self, fn: Callable) -> "LayeredTensor":
        return LayeredTensor(self.alphabet_sizes, ((k, fn(v)) for k, v in self._coeffs.items()))

    def map_monomials(self, fn: Callable[[Monomial], Monomial], alphabet_sizes=None) -> "LayeredTensor":
        sizes = self.alphabet_sizes if alphabet_sizes is None else alphabet_sizes
        return LayeredTensor(sizes, ((fn(k), v) for k, v in self._coeffs.items()))

    # eps handling ---------------------------------------------------------

    def is_eps_free(self) -> bool:
        return all(not isinstance(v, LaurentEps) for v in self._coeffs.values())

    def shift_eps(self, k: int) -> "LayeredTensor":
        """Multiply every coefficient by eps**k."""
        return self.map_coeffs(lambda v: as_laurent(v).shift(k))

    def min_eps_exponent(self) -> int | None:
        vals = [as_laurent(v).valuation() for v in self._coeffs.values()]
        return min(vals) if vals else None

    def has_negative_eps(self) -> bool:
        v = self.min_eps_exponent()
        return v is not None and v < 0

    def divisible_by_eps(self) -> bool:
        return all(as_laurent(v).divisible_by_eps() for v in self._coeffs.values())

    def eval_at_zero(self) -> "LayeredTensor":
        if self.has_negative_eps():
            raise NegativeExponentPresent("tensor has a coefficient with a pole at eps=0")
        return self.map_coeffs(lambda v: as_laurent(v).eval_at_zero())

    def eval_eps(self, eps0) -> "LayeredTensor":
        return self.map_coeffs(lambda v: as_laurent(v).evaluate(eps0))

    # numeric evaluation ---------------------------------------------------

    def evaluate_at(self, values: Sequence[Sequence]) -> object:
        """Substitute letter values: values[i][k] is the value of letter k in slot i."""
        total = Fraction(0)
        for mono, c in self._coeffs.items():
            term = c
            for i, k in enumerate(mono):
                term = term * values[i][k]
            total = total + term
        return simplify_scalar(total)

    def __repr__(self):
        return f"LayeredTensor(sizes={self.alphabet_sizes}, nnz={len(self._coeffs)})"


def tensor_add(a: LayeredTensor, b: LayeredTensor) -> LayeredTensor:
    return a + b


def tensor_scale(a: LayeredTensor, c) -> LayeredTensor:
    return a.scale(c)


def tensor_equal(a: LayeredTensor, b: LayeredTensor) -> bool:
    a._same_shape(b)
    return a == b
