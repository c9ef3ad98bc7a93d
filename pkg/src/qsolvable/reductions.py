"""Membership, containment, equality and normality from group orders."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .blackbox import Encoding, GroupOracle
from .classical import DEFAULT_SIZE_CAP, is_solvable
from .errors import NotSolvable, NotSubgroup
from .solvable_order import group_order


@dataclass
class DecisionReport:
    answer: bool
    orders: dict[str, int] = field(default_factory=dict)
    epsilon: float = 0.0
    queries: int = 0
    failure_bound: float = 0.0


def _require_solvable(oracle: GroupOracle, gens: Sequence[Encoding], cap: int) -> None:
    if not is_solvable(oracle, gens, cap):
        raise NotSolvable("group is not solvable")


def _order(oracle, gens, eps, rng, cap) -> int:
    return group_order(oracle, list(gens), eps, rng, cap=cap).order


def is_member(
    oracle: GroupOracle,
    generators: Sequence[Encoding],
    h: Encoding,
    epsilon: float = 0.05,
    rng: np.random.Generator | None = None,
    cap: int = DEFAULT_SIZE_CAP,
) -> DecisionReport:
    """h in <generators> iff adding h leaves the order unchanged."""
    rng = rng if rng is not None else np.random.default_rng()
    start = oracle.queries
    _require_solvable(oracle, generators, cap)
    extended = list(generators) + [h]
    if not is_solvable(oracle, extended, cap):
        return DecisionReport(False, {}, epsilon, oracle.queries - start, 0.0)
    a = _order(oracle, generators, epsilon / 2, rng, cap)
    b = _order(oracle, extended, epsilon / 2, rng, cap)
    return DecisionReport(a == b, {"G": a, "G+h": b}, epsilon, oracle.queries - start, epsilon)


def is_subgroup(
    oracle: GroupOracle,
    h_generators: Sequence[Encoding],
    g_generators: Sequence[Encoding],
    epsilon: float = 0.05,
    rng: np.random.Generator | None = None,
    cap: int = DEFAULT_SIZE_CAP,
) -> DecisionReport:
    """<h_generators> <= <g_generators>."""
    rng = rng if rng is not None else np.random.default_rng()
    start = oracle.queries
    _require_solvable(oracle, g_generators, cap)
    if not h_generators:
        return DecisionReport(True, {}, epsilon, 0, 0.0)
    union = list(g_generators) + list(h_generators)
    if not is_solvable(oracle, union, cap):
        return DecisionReport(False, {}, epsilon, oracle.queries - start, 0.0)
    a = _order(oracle, g_generators, epsilon / 2, rng, cap)
    b = _order(oracle, union, epsilon / 2, rng, cap)
    return DecisionReport(a == b, {"G": a, "G+H": b}, epsilon, oracle.queries - start, epsilon)


def groups_equal(
    oracle: GroupOracle,
    a_generators: Sequence[Encoding],
    b_generators: Sequence[Encoding],
    epsilon: float = 0.05,
    rng: np.random.Generator | None = None,
    cap: int = DEFAULT_SIZE_CAP,
) -> DecisionReport:
    rng = rng if rng is not None else np.random.default_rng()
    start = oracle.queries
    _require_solvable(oracle, a_generators, cap)
    _require_solvable(oracle, b_generators, cap)
    ab = is_subgroup(oracle, a_generators, b_generators, epsilon / 2, rng, cap)
    if not ab.answer:
        return DecisionReport(False, ab.orders, epsilon, oracle.queries - start, ab.failure_bound)
    ba = is_subgroup(oracle, b_generators, a_generators, epsilon / 2, rng, cap)
    orders = {f"a<=b:{k}": v for k, v in ab.orders.items()}
    orders.update({f"b<=a:{k}": v for k, v in ba.orders.items()})
    return DecisionReport(
        ba.answer, orders, epsilon, oracle.queries - start, ab.failure_bound + ba.failure_bound
    )


def is_normal(
    oracle: GroupOracle,
    h_generators: Sequence[Encoding],
    g_generators: Sequence[Encoding],
    epsilon: float = 0.05,
    rng: np.random.Generator | None = None,
    cap: int = DEFAULT_SIZE_CAP,
) -> DecisionReport:
    """Every g_i^-1 h_j g_i lies in <h_generators>.

    Raises :class:`NotSubgroup` if H is not contained in G.  The budget is
    split evenly over the two orders of the containment test, the order of H
    (shared by all memberships) and the k*l extended orders.
    """
    rng = rng if rng is not None else np.random.default_rng()
    start = oracle.queries
    _require_solvable(oracle, g_generators, cap)
    h_gens = list(h_generators)
    pairs = [(g, h) for g in g_generators for h in h_gens]
    calls = 3 + len(pairs)
    share = epsilon / calls
    sub = is_subgroup(oracle, h_gens, g_generators, 2 * share, rng, cap)
    if not sub.answer:
        raise NotSubgroup("H is not a subgroup of G")
    orders = dict(sub.orders)
    spent = sub.failure_bound
    if not pairs:
        return DecisionReport(True, orders, epsilon, oracle.queries - start, spent)
    h_order = _order(oracle, h_gens, share, rng, cap)
    orders["H"] = h_order
    spent += share
    for i, (g, h) in enumerate(pairs):
        conj = oracle.multiply(oracle.multiply(oracle.inverse(g), h), g)
        o = _order(oracle, h_gens + [conj], share, rng, cap)
        orders[f"H+c{i}"] = o
        spent += share
        if o != h_order:
            return DecisionReport(False, orders, epsilon, oracle.queries - start, spent)
    return DecisionReport(True, orders, epsilon, oracle.queries - start, spent)
