from fractions import Fraction
import itertools

import pytest

from abplab.abp import TRACE, evaluate
from abplab.errors import EvenDegreeUnsupported, HypothesisViolated
from abplab.family import (
    f0,
    f_com,
    f_eps,
    f_eps_abp,
    f_eps_at,
    f_eps_prime,
    gamma_com,
    gamma_prime,
    gamma_prime_crossings,
    generate,
)
from abplab.formats import path_monomial, preserving_count, valid_paths
from abplab.laurent import LaurentEps


def _brute_paths(fmt):
    """All closed walks (a_1, ..., a_d) with a_{d+1} = a_1, independent of the library enumerator."""
    d = len(fmt)
    out = []
    for verts in itertools.product(*[range(1, w + 1) for w in fmt]):
        n_pres = sum((verts[i] % 2) == (verts[(i + 1) % d] % 2) for i in range(d))
        out.append((verts, n_pres))
    return out


def test_gamma_com_counts():
    abp = gamma_com((2, 2, 2))
    assert abp.model == TRACE
    assert len(abp.labels) == 12
    assert len({v for lab in abp.labels.values() for v, _ in lab.letters()}) == 12
    assert len(gamma_com((1, 1, 1)).labels) == 3


@pytest.mark.parametrize("fmt,count", [((2, 2, 2), 6), ((1, 1, 1), 0), ((2, 3, 2), 9), ((3, 3, 3), 18)])
def test_f0_counts(fmt, count):
    expected = sum(1 for _, n in _brute_paths(fmt) if n == 1)
    assert expected == count
    t = f0(fmt)
    assert len(t) == count
    assert all(c == 1 for _, c in t.items())
    assert t.support() <= f_com(fmt).support()


def test_f0_even_degree_rejected():
    with pytest.raises(EvenDegreeUnsupported):
        f0((2, 2))


@pytest.mark.parametrize("fmt", [(2, 2, 2), (3, 2, 3), (2, 2, 2, 2, 2), (1, 2, 3)])
def test_odd_degree_paths_always_preserve_somewhere(fmt):
    assert all(preserving_count(p) >= 1 for p in valid_paths(fmt))


def test_f_eps_prime_coefficients():
    fmt = (2, 2, 2)
    fp = f_eps_prime(fmt)
    for p in valid_paths(fmt):
        assert fp[path_monomial(fmt, p)] == LaurentEps({preserving_count(p): 1})


@pytest.mark.parametrize("fmt", [(2, 2, 2), (2, 3, 2), (3, 3, 3)])
def test_f_eps_limit_is_f0(fmt):
    assert not f_eps(fmt).has_negative_eps()
    assert f_eps(fmt).eval_at_zero() == f0(fmt)


def test_f_eps_converges_numerically():
    fmt = (2, 2, 2)
    target = f0(fmt)
    prev = None
    for e in (Fraction(1, 2), Fraction(1, 4), Fraction(1, 8)):
        diff = f_eps_at(fmt, e) - target
        err = max((abs(c) for _, c in diff.items()), default=0)
        # the only other paths carry eps^3 / eps = eps^2
        assert err == e * e
        if prev is not None:
            assert err < prev
        prev = err


@pytest.mark.parametrize("m,d", [(2, 3), (3, 3), (2, 5)])
def test_gamma_prime_computes_f0(m, d):
    abp = gamma_prime(m, d)
    assert abp.format == (2 * m,) * d
    assert evaluate(abp) == f0((m,) * d)


@pytest.mark.parametrize("m,d", [(2, 3), (3, 3), (2, 5)])
def test_gamma_prime_crosses_once(m, d):
    crossings = gamma_prime_crossings(m, d)
    assert crossings and all(c == 1 for c in crossings)


def test_gamma_prime_hypotheses():
    with pytest.raises(HypothesisViolated):
        gamma_prime(1, 3)
    with pytest.raises(EvenDegreeUnsupported):
        gamma_prime(2, 4)


def test_generate_dispatch():
    assert generate("f-com", (2, 2, 2)) == f_com((2, 2, 2))
    assert generate("f-eps", (2, 2, 2)).labels == f_eps_abp((2, 2, 2)).labels
    with pytest.raises(HypothesisViolated):
        generate("gamma-prime", (2, 3, 2))
    with pytest.raises(ValueError):
        generate("nope", (2,))
