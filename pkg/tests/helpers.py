"""Random generators shared by the test modules."""

import random
from fractions import Fraction

from abplab.abp import SINGLE, TRACE, Abp, EdgeId, LinearLabel, evaluate
from abplab.laurent import LaurentEps
from abplab.tensor import LayeredTensor


def rand_fraction(rng, lo=-5, hi=5, den=4):
    return Fraction(rng.randint(lo, hi), rng.randint(1, den))


def random_tensor(rng, sizes, density=0.5, nonzero=True):
    coeffs = {}
    while True:
        for mono in _monomials(sizes):
            if rng.random() < density:
                coeffs[mono] = rand_fraction(rng)
        t = LayeredTensor(sizes, coeffs)
        if not nonzero or not t.is_zero():
            return t


def _monomials(sizes):
    if not sizes:
        yield ()
        return
    for k in range(sizes[0]):
        for rest in _monomials(sizes[1:]):
            yield (k,) + rest


def random_abp(rng, fmt, variables=("x", "y", "z"), model=TRACE, density=0.7):
    labels = {}
    probe = Abp(fmt, {}, model, tuple(variables))
    for e in probe.all_edges():
        if rng.random() < density:
            terms = {v: rand_fraction(rng) for v in variables if rng.random() < 0.6}
            labels[e] = LinearLabel(terms)
    return Abp(fmt, labels, model, tuple(variables))


def random_eps_abp(rng, fmt, variables=("x", "y"), lo=-3, hi=3):
    """Single-(source,sink) ABP with eps-monotone labels."""
    labels = {}
    probe = Abp(fmt, {}, SINGLE, tuple(variables))
    for e in probe.all_edges():
        if rng.random() < 0.8:
            terms = {}
            for v in variables:
                if rng.random() < 0.7:
                    # leading coefficient positive, later terms of any sign
                    k = rng.randint(lo, hi)
                    c = {k: rng.randint(1, 3)}
                    if k < hi:
                        c[rng.randint(k + 1, hi)] = rng.randint(-2, 2)
                    terms[v] = LaurentEps(c)
            labels[e] = LinearLabel(terms)
    return Abp(fmt, labels, SINGLE, tuple(variables), tuple(tuple(variables) for _ in fmt))


def hypothesis_eps_abps(seed, count, formats, lo=-3, hi=3):
    """Eps-monotone ABPs whose output has no negative eps exponent and is nonzero."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        fmt = rng.choice(formats)
        abp = random_eps_abp(rng, fmt, lo=lo, hi=hi)
        f = evaluate(abp)
        if f.is_zero() or f.has_negative_eps():
            continue
        out.append(abp)
    return out


def path_abp(*labels):
    """Single-(source,sink) path ABP with the given labels, one per layer."""
    fmt = (1,) * len(labels)
    return Abp(fmt, {EdgeId(i + 1, 1, 1): lab for i, lab in enumerate(labels)}, SINGLE)


def eps_var(name, k, c=1):
    return LinearLabel({name: LaurentEps({k: c})})
