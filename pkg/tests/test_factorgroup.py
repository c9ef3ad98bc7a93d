import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import stats

from qsolvable import blackbox as bb
from qsolvable import corpus, factorgroup, qsim
from qsolvable.classical import closure, element_order
from qsolvable.errors import LayoutMismatch, NotAbelianQuotient, NotNormal
from qsolvable.factorgroup import (
    coset_multiply,
    in_kernel_perp,
    kernel,
    kernel_perp_distribution,
    prime_power_split,
    quotient_structure,
    sample_count,
    sample_kernel_perp,
)


def ustate(o, elems):
    return qsim.uniform_state(elems, qsim.group_register("R", o))


def perp_group(kern, k, N):
    return [b for b in itertools.product(range(N), repeat=k) if in_kernel_perp(b, kern, N)]


def _setup(case):
    o = corpus.oracle(case.group)
    gens = [g for g in case.gens if g != o.identity]
    H = closure(o, case.h_gens)
    orders = [element_order(o, g) for g in gens]
    N = math.lcm(*orders)
    return o, gens, H, orders, N


def test_prime_power_split():
    assert prime_power_split(1) == []
    assert prime_power_split(12) == [4, 3]
    assert prime_power_split(7) == [7]
    assert prime_power_split(360) == [8, 9, 5]


@given(st.integers(1, 5000))
def test_prime_power_split_property(d):
    parts = prime_power_split(d)
    assert math.prod(parts) == d
    for q in parts:
        p = min(f for f in range(2, q + 1) if q % f == 0)
        assert p ** round(math.log(q, p)) == q
    assert len({min(f for f in range(2, q + 1) if q % f == 0) for q in parts}) == len(parts)


def test_sample_count():
    assert sample_count(2, 0.05) == 13


def test_kernel_perp_examples(rng):
    z2 = bb.make_oracle(bb.cyclic(2))
    one = ustate(z2, [0])
    dist = kernel_perp_distribution(z2, [1, 1], one, [2, 2])
    assert set(dist) == {(0, 0), (1, 1)} and all(abs(p - 0.5) < 1e-12 for p in dist.values())
    v = bb.make_oracle(bb.direct_product(bb.cyclic(2), bb.cyclic(2)))
    dist = kernel_perp_distribution(v, list(v.generators), ustate(v, [0]), [2, 2])
    assert len(dist) == 4 and all(abs(p - 0.25) < 1e-12 for p in dist.values())
    s3 = corpus.oracle("S3")
    whole = ustate(s3, closure(s3, s3.generators))
    for _ in range(10):
        s = sample_kernel_perp(s3, list(s3.generators), whole, [2, 3], rng)
        assert s.vector == (0, 0) and s.N == 6


@pytest.mark.parametrize("case", corpus.quotient_cases(), ids=lambda c: c.label)
def test_samples_uniform_on_kernel_perp(case):
    o, gens, H, orders, N = _setup(case)
    if not gens:
        return
    k = len(gens)
    kern = kernel(o, gens, H, N)
    perp = perp_group(kern, k, N)
    # ker(f)^perp has the size of G/H
    assert len(perp) == len(closure(o, list(case.gens) + list(case.h_gens))) // len(H)
    # exact law: uniform on the perp group
    dist = kernel_perp_distribution(o, gens, ustate(o, H), orders)
    assert set(dist) == set(perp)
    assert all(abs(p - 1 / len(perp)) < 1e-9 for p in dist.values())
    # sampled law: measure the prepared state 1000 times
    state, names = factorgroup._sampling_state(o, gens, ustate(o, H), N)
    rng = np.random.default_rng(len(perp) * 31 + k)
    counts = dict.fromkeys(perp, 0)
    for _ in range(1000):
        s, vec = state, []
        for name in names:
            b, s = qsim.measure(s, name, rng)
            vec.append(b)
        vec = tuple(vec)
        assert in_kernel_perp(vec, kern, N)
        counts[vec] += 1
    if len(perp) > 1:
        assert stats.chisquare(list(counts.values())).pvalue > 0.01


@pytest.mark.parametrize("case", corpus.quotient_cases(), ids=lambda c: c.label)
def test_quotient_structure_corpus(case):
    o, gens, H, orders, N = _setup(case)
    G = closure(o, list(case.gens) + list(case.h_gens))
    rng = np.random.default_rng(5)
    hits = 0
    for _ in range(20):
        dec = quotient_structure(o, case.gens, case.h_gens, 0.05, rng, verify=True)
        assert dec.prime_powers == sorted(dec.prime_powers)
        ok = math.prod(dec.prime_powers) == len(G) // len(H)
        hits += ok
        if ok:
            # success branch: every sample lies in ker(f)^perp
            kern = kernel(o, gens, H, N) if gens else []
            assert all(in_kernel_perp(s.vector, kern, N) for s in dec.samples)
    assert hits >= 19


def test_quotient_structure_examples(rng):
    s3 = corpus.oracle("S3")
    a3 = [corpus.perm("S3", (0, 1, 2))]
    assert quotient_structure(s3, s3.generators, a3, 0.05, rng).prime_powers == [2]
    d4 = corpus.oracle("D4")
    assert quotient_structure(d4, d4.generators, [corpus.dih("D4", 2)], 0.05, rng).prime_powers == [2, 2]
    z6 = bb.make_oracle(bb.cyclic(6))
    assert quotient_structure(z6, [1], [], 0.05, rng).prime_powers == [2, 3]


def test_quotient_structure_precondition_checks(rng):
    s3 = corpus.oracle("S3")
    with pytest.raises(NotNormal):
        quotient_structure(s3, s3.generators, [corpus.perm("S3", (0, 1))], 0.05, rng, verify=True)
    d6 = corpus.oracle("D6")
    with pytest.raises(NotAbelianQuotient):
        quotient_structure(d6, d6.generators, [corpus.dih("D6", 3)], 0.05, rng, verify=True)


def second_factor(joint):
    _, second = qsim.split(joint, ["R"])
    return qsim.rename(second, {"R'": "R"})


def test_coset_multiply_examples():
    s3 = corpus.oracle("S3")
    A3 = closure(s3, [corpus.perm("S3", (0, 1, 2))])
    t = corpus.perm("S3", (0, 1))
    coset = ustate(s3, {s3.multiply(t, h) for h in A3})
    a3 = ustate(s3, A3)
    # identity coset leaves the second register alone
    out = coset_multiply(s3, a3, coset)
    assert qsim.factor_check(out, ["R"])
    first = qsim.split(out, ["R"])[0]
    assert qsim.trace_distance(first, a3) < 1e-9
    assert qsim.trace_distance(second_factor(out), coset) < 1e-9
    # (12)A3 * (12)A3 = A3
    second = second_factor(coset_multiply(s3, coset, coset))
    assert qsim.trace_distance(second, a3) < 1e-9
    # |gH>, |g^-1 H> -> |H>, and the inverse variant undoes multiplication
    q8 = corpus.oracle("Q8")
    Z = closure(q8, [corpus.quat("-1")])
    gi = ustate(q8, {q8.multiply(corpus.quat("i"), h) for h in Z})
    gmi = ustate(q8, {q8.multiply(corpus.quat("-i"), h) for h in Z})
    second = second_factor(coset_multiply(q8, gi, gmi))
    assert qsim.trace_distance(second, ustate(q8, Z)) < 1e-9
    second = second_factor(coset_multiply(q8, gi, gi, inverse=True))
    assert qsim.trace_distance(second, ustate(q8, Z)) < 1e-9


def test_coset_multiply_layout_checks():
    s3 = corpus.oracle("S3")
    a = ustate(s3, [0])
    with pytest.raises(LayoutMismatch):
        coset_multiply(s3, a, qsim.uniform_state([0], qsim.mod_register("A", 3)))
