import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import stats

from qsolvable import blackbox as bb
from qsolvable import corpus, qsim
from qsolvable.classical import closure, relative_order_bruteforce
from qsolvable.errors import InsufficientCopies, Unverified
from qsolvable.orderfind import (
    choose_modulus,
    continued_fraction,
    order_sample,
    order_sample_distribution,
    relative_order,
    repetitions,
    sample_progression_fourier,
)


def subgroup_state(o, gens):
    return qsim.uniform_state(closure(o, gens), qsim.group_register("R", o))


def analytic_cyclic_law(r, N):
    """P(b) for g of order r, H = {1}: sum_y |(1/N) sum_{a = y mod r} e_N(-ab)|^2."""
    probs = np.zeros(N)
    for b in range(N):
        for y in range(r):
            amp = sum(qsim.phase(N, -a * b) for a in range(y, N, r)) / N
            probs[b] += abs(amp) ** 2
    return probs


def chi2_pvalue(counts, probs, min_expected=5.0):
    """Goodness of fit with low-expectation bins pooled into one."""
    counts = np.asarray(counts, float)
    expected = np.asarray(probs, float) * counts.sum()
    big = expected >= min_expected
    obs = list(counts[big]) + [counts[~big].sum()]
    exp = list(expected[big]) + [expected[~big].sum()]
    if exp[-1] == 0:
        obs, exp = obs[:-1], exp[:-1]
    if len(obs) < 2:
        return 1.0
    return stats.chisquare(obs, exp).pvalue


def test_choose_modulus_examples():
    assert choose_modulus(3, 0.25) == 2 ** 10
    assert choose_modulus(1, 0.5) == 2 ** 5
    for n in range(1, 6):
        N = choose_modulus(n, 0.05)
        assert N & (N - 1) == 0


def test_repetitions():
    assert repetitions(0.05) == 9
    assert repetitions(0.5) == 5


def test_continued_fraction_examples():
    assert continued_fraction(0, 16, 8) == (0, 1)
    assert continued_fraction(85, 256, 16) == (1, 3)
    assert continued_fraction(12, 32, 32) == (3, 8)


@given(st.integers(1, 2000), st.data())
def test_continued_fraction_exact_within_bound(N, data):
    b = data.draw(st.integers(0, N - 1))
    f = Fraction(b, N)
    assert continued_fraction(b, N, N) == (f.numerator, f.denominator)


@given(st.integers(2, 4096), st.integers(1, 64), st.data())
def test_continued_fraction_is_best_convergent(N, bound, data):
    b = data.draw(st.integers(0, N - 1))
    u, v = continued_fraction(b, N, bound)
    assert 1 <= v <= bound and math.gcd(u, v) == 1
    # convergents are best approximations: no smaller denominator gets closer
    x = Fraction(b, N)
    err = abs(Fraction(u, v) - x)
    for d in range(1, v):
        assert abs(Fraction(round(x * d), d) - x) >= err


@pytest.mark.parametrize("r,N", [(2, 8), (3, 16), (4, 16), (6, 64)])
def test_sample_distribution_matches_analytic(r, N):
    o = bb.make_oracle(bb.cyclic(r))
    h = subgroup_state(o, [])
    sim = order_sample_distribution(o, 1, h, N)
    exact = analytic_cyclic_law(r, N)
    tv = 0.5 * sum(abs(sim.get(b, 0.0) - exact[b]) for b in range(N))
    assert tv < 1e-9


def test_order_sample_examples(rng):
    o = corpus.oracle("D4")
    h = subgroup_state(o, [corpus.dih("D4", 1)])
    for _ in range(20):
        assert order_sample(o, corpus.dih("D4", 2), h, 64, rng).b == 0
    z2 = bb.make_oracle(bb.cyclic(2))
    outcomes = {order_sample(z2, 1, subgroup_state(z2, []), 8, rng).b for _ in range(40)}
    assert outcomes == {0, 4}


def test_r3_distribution_peaks_near_thirds():
    o = bb.make_oracle(bb.cyclic(3))
    probs = order_sample_distribution(o, 1, subgroup_state(o, []), 16)
    top = sorted(probs, key=probs.get, reverse=True)[:3]
    assert sorted(top) == [0, 5, 11]


@pytest.mark.parametrize(
    "N,step,length",
    [(16, 1, 16), (64, 3, 22), (256, 5, 52), (128, 4, 31), (32, 6, 5), (2, 1, 2)],
)
def test_progression_sampler_matches_fourier_law(N, step, length):
    rng = np.random.default_rng(N * 1000 + step)
    offset = 2
    vec = np.zeros(N, complex)
    vec[[(offset + step * t) % N for t in range(length)]] = 1 / math.sqrt(length)
    exact = np.abs(qsim.qft_vector(vec, inverse=True)) ** 2
    counts = np.bincount([sample_progression_fourier(N, step, length, rng) for _ in range(4000)], minlength=N)
    assert chi2_pvalue(counts, exact) > 1e-3


CASES = [
    ("S3", [], ("S3", (0, 1, 2))),
    ("D4", ["r2"], ("D4", "s")),
    ("Q8", ["-1"], ("Q8", "i")),
    ("S3", ["t01"], ("S3", (0, 1, 2))),  # H not normalized by g
]


def _case(name, hgens, g):
    o = corpus.oracle(name)
    table = {"r2": corpus.dih("D4", 2), "-1": corpus.quat("-1"), "t01": corpus.perm("S3", (0, 1))}
    h = subgroup_state(o, [table[x] for x in hgens])
    if g[0] == "S3":
        ge = corpus.perm("S3", g[1])
    elif g[0] == "D4":
        ge = corpus.dih("D4", 0, 1)
    else:
        ge = corpus.quat(g[1])
    return o, ge, h


@pytest.mark.parametrize("case", CASES)
def test_traced_mode_matches_gate_level(case):
    o, g, h = _case(*case)
    N = 32
    exact = order_sample_distribution(o, g, h, N)
    rng = np.random.default_rng(7)
    draws = [order_sample(o, g, h, N, rng, mode="traced").b for _ in range(3000)]
    counts = np.bincount(draws, minlength=N)
    probs = np.array([exact.get(b, 0.0) for b in range(N)])
    assert counts[probs < 1e-12].sum() == 0
    assert chi2_pvalue(counts, probs) > 1e-3


def test_relative_order_examples(rng):
    o = corpus.oracle("Z12")
    one = subgroup_state(o, [])
    T = repetitions(0.05)
    assert relative_order(o, 0, [one] * T, 0.05, rng).r == 1
    assert relative_order(o, 1, [one] * T, 0.05, rng).r == 12
    d4 = corpus.oracle("D4")
    h = subgroup_state(d4, [corpus.dih("D4", 2)])
    assert relative_order(d4, corpus.dih("D4", 1), [h] * T, 0.05, rng).r == 2


def test_relative_order_errors(rng):
    o = corpus.oracle("Z12")
    one = subgroup_state(o, [])
    with pytest.raises(InsufficientCopies):
        relative_order(o, 1, [one] * 3, 0.05, rng)
    # N = 2 cannot resolve order 12, so the verification hook must object
    with pytest.raises(Unverified):
        relative_order(o, 1, [one] * 9, 0.05, rng, verify_subgroup=frozenset([0]), N=2)


RELATIVE_CASES = [
    ("Z12", (), 1), ("Z12", (), 5), ("Z16", (4,), 1), ("D6", ("r2",), "s"), ("D6", (), "r"),
    ("S4", ("v4a", "v4b"), "c3"), ("UT(3,3)", (corpus.E02,), corpus.E01), ("Q8", (), "i"),
]


def _resolve(name, item):
    if isinstance(item, int):
        return item
    return {
        "r2": corpus.dih("D6", 2) if name == "D6" else None,
        "s": corpus.dih("D6", 0, 1),
        "r": corpus.dih("D6", 1),
        "v4a": corpus.perm("S4", (0, 1), (2, 3)),
        "v4b": corpus.perm("S4", (0, 2), (1, 3)),
        "c3": corpus.perm("S4", (0, 1, 2)),
        "i": corpus.quat("i"),
    }[item]


@pytest.mark.parametrize("name,hgens,g", RELATIVE_CASES)
def test_relative_order_success_rate(name, hgens, g):
    o = corpus.oracle(name)
    H = closure(o, [_resolve(name, x) for x in hgens])
    h = qsim.uniform_state(H, qsim.group_register("R", o))
    ge = _resolve(name, g)
    truth = relative_order_bruteforce(o, ge, H)
    rng = np.random.default_rng(99)
    T = repetitions(0.05)
    hits = sum(relative_order(o, ge, [h] * T, 0.05, rng).r == truth for _ in range(200))
    assert hits >= 190
