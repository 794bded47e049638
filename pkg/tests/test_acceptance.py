"""One test per acceptance criterion; each records a PASS/FAIL line that the
terminal summary prints (see conftest.py)."""

import itertools
import json
import math
import random
import subprocess
import sys
import time
from fractions import Fraction

import pytest

from abplab.abp import SINGLE, evaluate, is_monotone_strict
from abplab.concise import apply_end, is_concise
from abplab.deborder import deborder
from abplab.family import f0, f_com, gamma_prime
from abplab.flow import (
    IdentifiedGraph,
    cycle_flow,
    decomposition_flow,
    flow_space_dim,
    fundamental_cycle_basis,
    incidence_rows,
    length_d_cycle_flows,
    psi_rows,
    random_cycles,
    spanning_tree_tau,
    telescoping_flow,
    verify_dim_theorems,
)
from abplab.linalg import exact_rank, rank_of_rows
from abplab.nisan import minimize, width_profile
from abplab.tangent import g1_formula, g2_formula, g_piece_dim

from helpers import hypothesis_eps_abps, random_abp, random_tensor

RESULTS: dict[str, tuple[bool, str]] = {}

FORMATS = [f for d in (3, 5) for f in itertools.product((2, 3), repeat=d)]


def record(key, ok, detail):
    RESULTS[key] = (bool(ok), detail)
    print(f"criterion {key}: {'PASS' if ok else 'FAIL'} ({detail})")


def n_edges(fmt):
    d = len(fmt)
    return sum(fmt[i] * fmt[(i + 1) % d] for i in range(d))


def test_criterion_1_dim_T():
    assert len(FORMATS) >= 12
    t0 = time.perf_counter()
    bad = [f for f in FORMATS if rank_of_rows(psi_rows(f).values()) != n_edges(f) - sum(f) + 1]
    dt = time.perf_counter() - t0
    ok = not bad and dt < 30
    record("1", ok, f"{len(FORMATS)} formats, {len(bad)} mismatches, {dt:.1f}s")
    assert ok, bad


def test_criterion_2_dim_T_prime():
    t0 = time.perf_counter()
    bad = []
    for f in FORMATS:
        rep = verify_dim_theorems(f)
        ok = rep["e_ok"] and rep["c_parity_in_kernel"] and rep["c_incidence_in_kernel"] and rep["kernel_prime_ok"]
        if not ok:
            bad.append(f)
    dt = time.perf_counter() - t0
    ok = not bad and dt < 30
    record("2", ok, f"{len(FORMATS)} formats, {len(bad)} failures, {dt:.1f}s")
    assert ok, bad


def test_criterion_3_certificate():
    t0 = time.perf_counter()
    res = subprocess.run(
        [sys.executable, "-m", "abplab", "certify-separation", "--format", "2,2,2"], capture_output=True, text=True
    )
    dt = time.perf_counter() - t0
    cert = json.loads(res.stdout)
    fmt = (2, 2, 2)
    # each piece checked against a fresh rank computation
    independent = [g_piece_dim(f_com(fmt), k, fmt) for k in ("g0", "g1", "g2")]
    ok = (
        res.returncode == 0
        and cert["concise"]["concise"]
        and cert["concise"]["mode_ranks"] == cert["concise"]["mode_sizes"]
        and cert["dim_T_fcom"] == 37
        and cert["dim_T_f0"] < cert["dim_T_fcom"]
        and sum(independent) == 37
        and all(c["ok"] for c in cert["checks"])
        and dt < 10
    )
    record("3", ok, f"exit {res.returncode}, dim T_fcom={cert['dim_T_fcom']}, dim T_f0={cert['dim_T_f0']}, {dt:.1f}s")
    assert ok


def test_criterion_4_piece_formulas():
    bad = []
    for fmt in FORMATS:
        for f in (f_com(fmt), f0(fmt)):
            if g_piece_dim(f, "g2", fmt) != g2_formula(fmt) or g_piece_dim(f, "g1", fmt) != g1_formula(fmt):
                bad.append(fmt)
    record("4", not bad, f"{2 * len(FORMATS)} tensors, {len(bad)} mismatches")
    assert not bad


def test_criterion_5_deborder_suite():
    formats = [(1, w) for w in range(1, 5)] + [(1, a, b) for a in range(1, 5) for b in range(1, 5)]
    cases = hypothesis_eps_abps(2024, 60, formats, lo=-3, hi=3)
    failures = 0
    for abp in cases:
        out = deborder(abp)
        if not (out.format == abp.format and is_monotone_strict(out) and evaluate(out) == evaluate(abp).eval_at_zero()):
            failures += 1
    ok = len(cases) >= 50 and failures == 0
    record("5", ok, f"{len(cases)} cases, {failures} failures, largest format (1,4,4)")
    assert ok


def test_criterion_6_nisan_round_trip():
    rng = random.Random(6)
    failures = 0
    for _ in range(60):
        sizes = tuple(rng.randint(1, 3) for _ in range(rng.randint(1, 4)))
        f = random_tensor(rng, sizes, density=rng.choice([0.2, 0.5, 0.9]))
        abp = minimize(f)
        if evaluate(abp) != f or tuple(abp.widths()) != width_profile(f).ranks:
            failures += 1
    over = 0
    for _ in range(40):
        fmt = (1,) + tuple(rng.randint(1, 3) for _ in range(rng.randint(1, 3)))
        abp = random_abp(rng, fmt, model=SINGLE)
        f = evaluate(abp)
        if not f.is_zero() and any(r > w for r, w in zip(width_profile(f), abp.widths())):
            over += 1
    ok = failures == 0 and over == 0
    record("6", ok, f"60 round trips, {failures} failures; 40 lower-bound checks, {over} violations")
    assert ok


def _singular_tuple(rng, n, d):
    g = []
    for _ in range(d):
        while True:
            m = [[Fraction(rng.randint(-3, 3)) for _ in range(n)] for _ in range(n)]
            if exact_rank(m) == n:
                break
        g.append(m)
    k = rng.randrange(d)
    coef = [rng.randint(-2, 2) for _ in range(n - 1)]
    g[k][-1] = [sum((coef[r] * g[k][r][c] for r in range(n - 1)), Fraction(0)) for c in range(n)]
    return g


def test_criterion_7_conciseness():
    odd = FORMATS
    pos = all(is_concise(f_com(f))[0] and is_concise(f0(f))[0] for f in odd)
    thin = [(2, 1, 2), (1, 2, 2), (2, 2, 1), (3, 1, 3), (2, 1, 2, 2, 2)]
    neg = not any(is_concise(f0(f))[0] for f in thin)
    rng = random.Random(7)
    fcom = f_com((2, 2, 2))
    singular = sum(not is_concise(apply_end(fcom, _singular_tuple(rng, 4, 3)))[0] for _ in range(20))
    ok = pos and neg and singular == 20
    record("7", ok, f"concise on {len(odd)} formats: {pos}; thin formats non-concise: {neg}; singular g: {singular}/20")
    assert ok


def _structure(fmt, cycles):
    G = IdentifiedGraph(fmt)
    span = len(length_d_cycle_flows(G)) > 0  # raises if the span is short
    basis = fundamental_cycle_basis(G, spanning_tree_tau(fmt))
    decomp = all(decomposition_flow(fmt, e) == c for e, c in basis.items())
    corrected = all(telescoping_flow(fmt, v) == cycle_flow(fmt, v) for v in cycles)
    literal = all(telescoping_flow(fmt, v, corrected=False) == cycle_flow(fmt, v) for v in cycles)
    return span, decomp, corrected, literal


def _criterion_8_cycles():
    return {
        (2, 2, 2): list(itertools.product((1, 2), repeat=3)),
        (4, 4, 4, 4, 4): random_cycles((4, 4, 4, 4, 4), 5, seed=8),
    }


def test_criterion_8_flow_structure():
    t0 = time.perf_counter()
    results = {fmt: _structure(fmt, cyc) for fmt, cyc in _criterion_8_cycles().items()}
    dt = time.perf_counter() - t0
    span = all(r[0] for r in results.values())
    decomp = all(r[1] for r in results.values())
    corrected = all(r[2] for r in results.values())
    literal = all(r[3] for r in results.values())
    ok = span and decomp and corrected and literal and dt < 60
    record(
        "8",
        ok,
        f"span {span}, three-cycle decomposition {decomp}, uncorrected telescoping {literal}, "
        f"telescoping with layer-d correction {corrected}, {dt:.1f}s",
    )
    # the structural parts and the corrected identity must hold
    assert span and decomp and corrected and dt < 60


@pytest.mark.xfail(strict=True, reason="the uncorrected telescoping sum leaves a rank-one residue on layer d")
def test_criterion_8_literal_telescoping():
    for fmt, cycles in _criterion_8_cycles().items():
        for v in cycles:
            assert telescoping_flow(fmt, v, corrected=False) == cycle_flow(fmt, v)


def test_criterion_9_gamma_prime():
    cases = [(2, 3), (3, 3), (2, 5)]
    ok = all(evaluate(gamma_prime(m, d)) == f0((m,) * d) for m, d in cases)
    record("9", ok, f"{cases}")
    assert ok
