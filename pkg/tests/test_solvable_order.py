import math

import numpy as np
import pytest

from qsolvable import corpus, qsim, solvable_order
from qsolvable.classical import closure, polycyclic_chain
from qsolvable.errors import BudgetExhausted, NotSolvable, Unverified
from qsolvable.orderfind import repetitions
from qsolvable.solvable_order import choose_k, group_order


def uniform_group(o, gens):
    return qsim.uniform_state(closure(o, gens), qsim.group_register("R", o))


def test_choose_k_examples():
    assert choose_k(1, 1, 0.5) >= 6
    ks = [choose_k(4, 3, eps) for eps in (0.5, 0.2, 0.1, 0.05, 0.01, 0.001)]
    assert ks == sorted(ks)
    # doubling m moves delta by a factor two: O(1) more copies
    for m in (1, 2, 4, 8):
        assert 0 <= choose_k(5, 2 * m, 0.05) - choose_k(5, m, 0.05) <= 4


def test_choose_k_covers_both_consumers():
    n, m, eps = 5, 4, 0.05
    delta = eps / (2 * m)
    k = choose_k(n, m, eps)
    assert k - 1 >= repetitions(delta)
    # conversion needs choose_l copies for every r <= 2^n
    from qsolvable.statesynth import choose_l
    assert all(k - repetitions(delta) >= choose_l(r, delta) for r in range(1, 2 ** n + 1))


def test_trivial_group(rng):
    o = corpus.oracle("S3")
    res = group_order(o, [], 0.05, rng)
    assert res.order == 1 and res.factors == []
    assert res.final_state.amps == {(o.identity,): 1}


@pytest.mark.parametrize("name,order", [("S3", 6), ("UT(3,2)", 8), ("D4", 8), ("Z13", 13)])
def test_examples(name, order, rng):
    o = corpus.oracle(name)
    res = group_order(o, o.generators, 0.05, rng)
    assert res.order == order == math.prod(res.factors)
    assert qsim.trace_distance(res.final_state, uniform_group(o, o.generators)) <= 1e-9
    assert res.failure_probability_bound == 0.05
    assert res.oracle_queries > 0


def test_copy_accounting(rng):
    o = corpus.oracle("S4")
    res = group_order(o, o.generators, 0.05, rng)
    m = len(polycyclic_chain(o, o.generators))
    if res.restarts == 0:
        assert res.copies_prepared == res.k * (m + 1)
        # each stage used k copies: k - 1 for order finding and one sacrificed
        assert len(res.survivors) == res.k
    for s in res.survivors:
        assert qsim.trace_distance(s, uniform_group(o, o.generators)) <= 1e-9


def test_surviving_copies(rng):
    o = corpus.oracle("D4")
    res = group_order(o, o.generators, 0.05, rng, surviving=40)
    assert len(res.survivors) >= 40
    res = group_order(o, [], 0.05, rng, surviving=5)
    assert len(res.survivors) == 5


def test_verify_mode(rng):
    o = corpus.oracle("Q8")
    assert group_order(o, o.generators, 0.05, rng, verify=True).order == 8


def test_subgroup_generators(rng):
    o = corpus.oracle("S4")
    v4 = [corpus.perm("S4", (0, 1), (2, 3)), corpus.perm("S4", (0, 2), (1, 3))]
    res = group_order(o, v4, 0.05, rng)
    assert res.order == 4
    assert qsim.trace_distance(res.final_state, uniform_group(o, v4)) <= 1e-9


def test_not_solvable(rng):
    o = corpus.oracle("S5")
    with pytest.raises(NotSolvable):
        group_order(o, o.generators, 0.05, rng)


def test_bad_epsilon(rng):
    with pytest.raises(ValueError):
        group_order(corpus.oracle("S3"), corpus.oracle("S3").generators, 1.5, rng)


def test_budget_exhausted(monkeypatch, rng):
    def always_wrong(*args, **kwargs):
        raise Unverified("forced")

    monkeypatch.setattr(solvable_order, "relative_order", always_wrong)
    o = corpus.oracle("S3")
    with pytest.raises(BudgetExhausted):
        group_order(o, o.generators, 0.05, rng)


def test_restart_rebuilds_state(monkeypatch):
    real = solvable_order.relative_order
    calls = {"n": 0}

    def flaky(*args, **kwargs):
        calls["n"] += 1
        if calls["n"] == 2:  # second stage fails once
            raise Unverified("forced")
        return real(*args, **kwargs)

    monkeypatch.setattr(solvable_order, "relative_order", flaky)
    o = corpus.oracle("D4")
    res = group_order(o, o.generators, 0.05, np.random.default_rng(1))
    assert res.restarts == 1 and res.order == 8
    assert qsim.trace_distance(res.final_state, uniform_group(o, o.generators)) <= 1e-9


@pytest.mark.parametrize("name", ["S3", "Q8", "D6", "Z6xZ4"])
def test_success_rate_small_batch(name):
    o = corpus.oracle(name)
    truth = len(closure(o, o.generators))
    rng = np.random.default_rng(2024)
    hits = sum(group_order(o, o.generators, 0.05, rng).order == truth for _ in range(20))
    assert hits >= 19
