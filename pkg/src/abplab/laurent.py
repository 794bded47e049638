"""Exact scalars: rationals and Laurent polynomials in a formal parameter eps.

Rationals are plain :class:`fractions.Fraction` values, which are always kept in
lowest terms with a positive denominator.  :class:`LaurentEps` is a sparse map
from integer exponent to rational coefficient and may carry poles at eps = 0.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Mapping, Union

from .errors import NegativeExponentPresent

Scalar = Union[int, Fraction, "LaurentEps"]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, LaurentEps):
        if not x.is_constant():
            raise ValueError(f"{x} depends on eps")
        return x.constant_term()
    if isinstance(x, _RationalABC):
        return Fraction(x.numerator, x.denominator)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


class LaurentEps:
    """Laurent polynomial sum_k c_k eps^k with rational c_k.

    Instances are immutable.  Zero coefficients are never stored.

    >>> L = LaurentEps({-1: 1, 1: -5})
    >>> L.is_nonneg_small_eps()
    True
    >>> (L * EPS).eval_at_zero()
    Fraction(1, 1)
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, object] | Iterable[tuple[int, object]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, Fraction] = {}
        for k, c in items:
            k = int(k)
            acc[k] = acc.get(k, Fraction(0)) + as_fraction(c)
        self._terms = {k: c for k, c in sorted(acc.items()) if c != 0}
        self._hash = None

    @classmethod
    def const(cls, c) -> "LaurentEps":
        return cls({0: c})

    @classmethod
    def monomial(cls, c, k: int) -> "LaurentEps":
        return cls({k: c})

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return all(k == 0 for k in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get(0, Fraction(0))

    def coefficient(self, k: int) -> Fraction:
        return self._terms.get(k, Fraction(0))

    def valuation(self) -> int | None:
        """Lowest exponent present, or None for zero."""
        return next(iter(self._terms), None)

    def degree(self) -> int | None:
        return max(self._terms) if self._terms else None

    def has_negative_exponent(self) -> bool:
        v = self.valuation()
        return v is not None and v < 0

    def is_nonneg_small_eps(self) -> bool:
        if not self._terms:
            return True
        return self._terms[self.valuation()] > 0

    def eval_at_zero(self) -> Fraction:
        if self.has_negative_exponent():
            raise NegativeExponentPresent(f"{self} has a pole at eps=0")
        return self.constant_term()

    def evaluate(self, eps0) -> Fraction:
        eps0 = as_fraction(eps0)
        if eps0 == 0:
            return self.eval_at_zero()
        return sum((c * eps0**k for k, c in self._terms.items()), Fraction(0))

    def shift(self, k: int) -> "LaurentEps":
        """Multiply by eps**k."""
        if k == 0:
            return self
        return LaurentEps({e + k: c for e, c in self._terms.items()})

    def divisible_by_eps(self) -> bool:
        v = self.valuation()
        return v is None or v >= 1

    # arithmetic -----------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "LaurentEps | None":
        if isinstance(other, LaurentEps):
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentEps.const(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        acc = dict(self._terms)
        for k, c in o._terms.items():
            acc[k] = acc.get(k, Fraction(0)) + c
        return LaurentEps(acc)

    __radd__ = __add__

    def __neg__(self):
        return LaurentEps({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        acc: dict[int, Fraction] = {}
        for k1, c1 in self._terms.items():
            for k2, c2 in o._terms.items():
                acc[k1 + k2] = acc.get(k1 + k2, Fraction(0)) + c1 * c2
        return LaurentEps(acc)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self._terms) != 1:
                raise ValueError("only eps-monomials are invertible")
            ((k, c),) = self._terms.items()
            return LaurentEps({k * n: c**n})
        out = LaurentEps.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __truediv__(self, other):
        c = as_fraction(other) if not isinstance(other, LaurentEps) else None
        if c is not None:
            return LaurentEps({k: v / c for k, v in self._terms.items()})
        return self * other**-1

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._terms == o._terms

    def __hash__(self):
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self.constant_term())
            else:
                self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __repr__(self):
        return f"LaurentEps({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for k, c in self._terms.items():
            if k == 0:
                parts.append(str(c))
            else:
                e = "eps" if k == 1 else f"eps^{k}"
                parts.append(e if c == 1 else f"{c}*{e}")
        return " + ".join(parts)


EPS = LaurentEps({1: 1})
ONE = LaurentEps.const(1)
ZERO = LaurentEps()


def as_laurent(x) -> LaurentEps:
    if isinstance(x, LaurentEps):
        return x
    return LaurentEps.const(as_fraction(x))


def laurent_is_nonneg_small_eps(L) -> bool:
    """True iff L is zero or its lowest-order coefficient is positive."""
    return as_laurent(L).is_nonneg_small_eps()


def laurent_eval_at_zero(L) -> Fraction:
    return as_laurent(L).eval_at_zero()


def simplify_scalar(x):
    """Collapse eps-free Laurent values to Fraction; leave the rest alone."""
    if isinstance(x, LaurentEps):
        return x.constant_term() if x.is_constant() else x
    return as_fraction(x)


def scalar_is_zero(x) -> bool:
    return x == 0
