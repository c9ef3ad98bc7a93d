"""Classical scaffolding: closure enumeration, derived series, polycyclic chains.

Closure enumeration is exponential in the encoding length and only meant for
desk-scale groups; it is the brute-force reference every quantum routine is
checked against.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .blackbox import Encoding, GroupOracle
from .errors import NotSolvable, SizeLimitExceeded

DEFAULT_SIZE_CAP = 10_000


def closure(
    oracle: GroupOracle,
    generators: Iterable[Encoding],
    cap: int = DEFAULT_SIZE_CAP,
) -> frozenset[Encoding]:
    """All elements of the subgroup generated by ``generators``.

    Worklist closure under right multiplication by generators, which suffices
    for finite groups.
    """
    gens = [g for g in dict.fromkeys(generators) if g != oracle.identity]
    for g in gens:
        oracle._check(g)
    seen = {oracle.identity}
    frontier = [oracle.identity]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = oracle.multiply(x, g)
            if y not in seen:
                seen.add(y)
                if len(seen) > cap:
                    raise SizeLimitExceeded(f"subgroup exceeds {cap} elements")
                frontier.append(y)
    return frozenset(seen)


def commutator(oracle: GroupOracle, g: Encoding, h: Encoding) -> Encoding:
    """``[g, h] = g^-1 h^-1 g h``."""
    gi = oracle.inverse(g)
    hi = oracle.inverse(h)
    return oracle.multiply(oracle.multiply(gi, hi), oracle.multiply(g, h))


def minimal_generators(
    oracle: GroupOracle,
    candidates: Iterable[Encoding],
    start: Sequence[Encoding] = (),
    cap: int = DEFAULT_SIZE_CAP,
) -> list[Encoding]:
    """Greedy subset of ``candidates`` that, together with ``start``, generates
    the same group as all of them.  Only candidates that enlarge the current
    subgroup are kept, in the order given.
    """
    chosen: list[Encoding] = []
    current = closure(oracle, start, cap)
    for c in candidates:
        if c not in current:
            chosen.append(c)
            current = closure(oracle, list(start) + chosen, cap)
    return chosen


@dataclass(frozen=True)
class DerivedSeries:
    """Generator sets for G^(0), G^(1), ...; stops at {1} or at a perfect group."""

    levels: tuple[tuple[Encoding, ...], ...]
    orders: tuple[int, ...]

    @property
    def solvable(self) -> bool:
        return self.orders[-1] == 1


def derived_series(
    oracle: GroupOracle,
    generators: Iterable[Encoding],
    cap: int = DEFAULT_SIZE_CAP,
) -> DerivedSeries:
    """Exact derived series by enumeration.

    Each next level is generated by the commutators of all pairs of elements
    of the current level, pruned greedily to a small generating set.
    """
    level = tuple(minimal_generators(oracle, generators, cap=cap))
    elems = closure(oracle, level, cap)
    levels = [level]
    orders = [len(elems)]
    while len(elems) > 1:
        ordered = sorted(elems)
        comms = sorted({commutator(oracle, a, b) for a in ordered for b in ordered} - {oracle.identity})
        nxt = tuple(minimal_generators(oracle, comms, cap=cap))
        nxt_elems = closure(oracle, nxt, cap)
        if len(nxt_elems) == len(elems):
            break  # perfect subgroup: the series has stabilised above {1}
        levels.append(nxt)
        orders.append(len(nxt_elems))
        elems = nxt_elems
    return DerivedSeries(tuple(levels), tuple(orders))


def is_solvable(oracle: GroupOracle, generators: Iterable[Encoding], cap: int = DEFAULT_SIZE_CAP) -> bool:
    return derived_series(oracle, generators, cap).solvable


@dataclass(frozen=True)
class PolycyclicChain:
    """Elements g_1..g_m such that H_j = <g_1..g_j> is a subnormal chain from
    {1} to G with cyclic factors."""

    elements: tuple[Encoding, ...]

    def __len__(self):
        return len(self.elements)

    def prefix(self, j: int) -> tuple[Encoding, ...]:
        return self.elements[:j]

    def subgroup_orders(self, oracle: GroupOracle, cap: int = DEFAULT_SIZE_CAP) -> list[int]:
        return [len(closure(oracle, self.elements[:j], cap)) for j in range(len(self.elements) + 1)]


def polycyclic_chain(
    oracle: GroupOracle,
    generators: Iterable[Encoding],
    cap: int = DEFAULT_SIZE_CAP,
) -> PolycyclicChain:
    """Relabel the derived-series generators, deepest level first.

    Elements that do not enlarge the preceding subgroup are dropped, so every
    factor H_j / H_{j-1} is nontrivial.
    """
    series = derived_series(oracle, generators, cap)
    if not series.solvable:
        raise NotSolvable("derived series does not reach the trivial group")
    ordered = [g for level in reversed(series.levels) for g in level]
    return PolycyclicChain(tuple(minimal_generators(oracle, ordered, cap=cap)))


def normalizes(
    oracle: GroupOracle,
    g: Encoding,
    subgroup_generators: Iterable[Encoding],
    cap: int = DEFAULT_SIZE_CAP,
) -> bool:
    """True iff ``g H g^-1 = H`` for H generated by ``subgroup_generators``."""
    H = closure(oracle, subgroup_generators, cap)
    gi = oracle.inverse(g)
    return all(oracle.multiply(oracle.multiply(g, h), gi) in H for h in H)


def element_order(oracle: GroupOracle, g: Encoding, cap: int = DEFAULT_SIZE_CAP) -> int:
    return relative_order_bruteforce(oracle, g, frozenset([oracle.identity]), cap)


def relative_order_bruteforce(
    oracle: GroupOracle,
    g: Encoding,
    subgroup: frozenset[Encoding],
    cap: int = DEFAULT_SIZE_CAP,
) -> int:
    """Smallest r > 0 with g^r in ``subgroup`` (an enumerated subgroup)."""
    x = g
    r = 1
    while x not in subgroup:
        x = oracle.multiply(x, g)
        r += 1
        if r > cap:
            raise SizeLimitExceeded("relative order exceeds the size cap")
    return r
