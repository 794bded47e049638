import random
from fractions import Fraction

import pytest

from abplab.abp import EdgeId
from abplab.concise import apply_end
from abplab.errors import EvenDegreeUnsupported, HypothesisViolated, ShapeMismatch
from abplab.family import f0, f_com
from abplab.formats import valid_paths
from abplab.linalg import exact_rank
from abplab.tangent import (
    LieBasisElement,
    basis_elements,
    boundary_relation_holds,
    boundary_sums,
    certify_separation,
    check_separation_hypotheses,
    g0_fcom_formula,
    g1_formula,
    g2_columns_single,
    g2_formula,
    jump_paths,
    lie_action,
    supports_disjoint,
    tangent_dim,
    tangent_dims,
)
from abplab.tensor import LayeredTensor

# frozen from an independent dense-matrix oracle (exact sympy rank over Q)
FROZEN = {
    (2, 2, 2): ((7, 18, 12), (6, 18, 12)),
    (3, 3, 3): ((19, 90, 108), (18, 90, 108)),
    (2, 3, 2): ((10, 34, 28), (9, 34, 28)),
    (2, 2, 2, 2, 2): ((11, 30, 20), (10, 30, 20)),
}


@pytest.mark.parametrize("fmt", list(FROZEN))
def test_frozen_piece_dims(fmt):
    com, zero = FROZEN[fmt]
    dc, d0 = tangent_dims(f_com(fmt), fmt), tangent_dims(f0(fmt), fmt)
    assert (dc.g0, dc.g1, dc.g2) == com
    assert (d0.g0, d0.g1, d0.g2) == zero
    assert dc.stacked == dc.total and d0.stacked == d0.total


@pytest.mark.parametrize("fmt", list(FROZEN) + [(2, 3, 4), (3, 2, 2)])
def test_formulas(fmt):
    dc = tangent_dims(f_com(fmt), fmt)
    assert dc.g2 == g2_formula(fmt)
    assert dc.g1 == g1_formula(fmt)
    assert dc.g0 == g0_fcom_formula(fmt)


def test_lie_action_basics():
    fmt = (2, 2, 2)
    f = f_com(fmt)
    same = LieBasisElement(1, EdgeId(1, 1, 1), EdgeId(1, 1, 1))
    # identity action keeps exactly the monomials using that letter
    out = lie_action(same, f, fmt)
    assert len(out) == 2 and out.support() <= f.support()
    moved = lie_action(LieBasisElement(1, EdgeId(1, 1, 1), EdgeId(1, 2, 2)), f, fmt)
    assert len(moved) == 2 and not (moved.support() & f.support())
    assert [b.kind for b in (same, LieBasisElement(1, EdgeId(1, 1, 1), EdgeId(1, 1, 2)),
                             LieBasisElement(1, EdgeId(1, 1, 1), EdgeId(1, 2, 2)))] == ["g0", "g1", "g2"]


def test_basis_counts():
    fmt = (2, 2, 2)
    total = sum(1 for _ in basis_elements(fmt))
    assert total == 3 * 16
    assert sum(1 for _ in basis_elements(fmt, "g0")) == 12


def test_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        lie_action(LieBasisElement(1, EdgeId(1, 1, 1), EdgeId(1, 1, 1)), LayeredTensor.zero((2, 2, 2)), (2, 2, 2))
    with pytest.raises(ValueError):
        LieBasisElement(1, EdgeId(1, 1, 1), EdgeId(2, 1, 1))


@pytest.mark.parametrize("fmt", [(2, 2, 2), (2, 3, 2), (3, 3, 3)])
def test_structural_checks(fmt):
    for f in (f_com(fmt), f0(fmt)):
        assert supports_disjoint(f, fmt)
        assert g2_columns_single(f, fmt)
    assert boundary_relation_holds(f_com(fmt), fmt)


def test_boundary_relation_is_specific_to_fcom():
    assert not boundary_relation_holds(f0((2, 2, 2)), (2, 2, 2))


def test_boundary_sums_equal_jump_paths():
    fmt = (2, 3, 2)
    f = f_com(fmt)
    for i, a, b in [(1, 1, 2), (2, 3, 1), (3, 2, 1)]:
        left, right = boundary_sums(f, fmt, i, a, b)
        assert left == right == jump_paths(fmt, i, a, b)


def test_jump_paths_count():
    fmt = (2, 3, 2)
    # one near-path per valid path leaving from b at layer i
    t = jump_paths(fmt, 2, 1, 2)
    assert len(t) == sum(1 for p in valid_paths(fmt) if p[1].src == 2)


def _invertible(rng, n):
    while True:
        m = [[Fraction(rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)]
        if exact_rank(m) == n:
            return m


@pytest.mark.parametrize("seed", range(3))
def test_orbit_invariance(seed):
    rng = random.Random(seed)
    fmt = (2, 2, 2)
    for f in (f_com(fmt), f0(fmt)):
        g = [_invertible(rng, 4) for _ in range(3)]
        assert tangent_dims(apply_end(f, g), fmt).stacked == tangent_dim(f, fmt)


def test_certificate_222():
    cert = certify_separation((2, 2, 2))
    assert cert["verified"] and cert["separated"]
    assert (cert["dim_T_fcom"], cert["dim_T_f0"]) == (37, 36)
    assert all(c["ok"] for c in cert["checks"])


def test_hypotheses():
    with pytest.raises(HypothesisViolated):
        check_separation_hypotheses((2, 1, 2))
    with pytest.raises(EvenDegreeUnsupported):
        check_separation_hypotheses((2, 2, 2, 2))
    with pytest.raises(HypothesisViolated):
        check_separation_hypotheses((2,))
