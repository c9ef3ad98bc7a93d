"""Order of a solvable group by walking a polycyclic chain.

Start from many copies of |{1}>.  At stage j, k-1 copies of |H_{j-1}> give
r_j = r_{H_{j-1}}(g_j); the remaining copies are converted to |H_j>.  The
order is the product of the r_j and a surviving copy approximates |G>.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import qsim
from .blackbox import Encoding, GroupOracle
from .classical import DEFAULT_SIZE_CAP, PolycyclicChain, closure, polycyclic_chain
from .errors import BudgetExhausted, FactorizationError, NoCoprimeOutcome, Unverified
from .orderfind import relative_order, repetitions
from .statesynth import choose_l, convert_copies

MAX_RESTARTS = 3


@dataclass(frozen=True)
class Budget:
    k: int
    delta: float


def _worst_case_l(n: int, delta: float) -> int:
    """max_{r <= 2^n} choose_l(r, delta); phi(r)/r is smallest at primorials."""
    bound = 1 << n
    primorial, p = 1, 2
    while True:
        if all(p % q for q in range(2, math.isqrt(p) + 1)):
            if primorial * p > bound:
                break
            primorial *= p
        p += 1
    return choose_l(primorial, delta)


def choose_k(n: int, m: int, epsilon: float) -> int:
    """Copies consumed per stage: order finding + worst-case conversion + 1."""
    if n < 1 or m < 1 or not 0 < epsilon < 1:
        raise ValueError("need n, m >= 1 and 0 < epsilon < 1")
    delta = epsilon / (2 * m)
    return repetitions(delta) + _worst_case_l(n, delta) + 1


@dataclass
class OrderResult:
    order: int
    factors: list[int]
    final_state: qsim.QState
    failure_probability_bound: float
    oracle_queries: int
    chain: tuple[Encoding, ...] = ()
    survivors: list[qsim.QState] = field(default_factory=list, repr=False)
    copies_prepared: int = 0
    restarts: int = 0
    k: int = 0


def identity_state(oracle: GroupOracle, name: str = "R") -> qsim.QState:
    return qsim.uniform_state([oracle.identity], qsim.group_register(name, oracle))


def group_order(
    oracle: GroupOracle,
    generators,
    epsilon: float = 0.05,
    rng: np.random.Generator | None = None,
    *,
    verify: bool = False,
    surviving: int = 1,
    chain: PolycyclicChain | None = None,
    cap: int = DEFAULT_SIZE_CAP,
) -> OrderResult:
    """|<generators>| for a solvable group, with a copy of the group state.

    ``surviving`` asks for at least that many final copies of |G> (extra
    copies are carried through every stage).  With ``verify`` each r_j is
    checked by enumeration and a failed check restarts the stage.
    Raises :class:`NotSolvable` for non-solvable input and
    :class:`BudgetExhausted` when a stage fails more than three times.
    """
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    if rng is None:
        rng = np.random.default_rng()
    start_queries = oracle.queries
    if chain is None:
        chain = polycyclic_chain(oracle, list(generators), cap)
    m = len(chain)
    if m == 0:
        state = identity_state(oracle)
        return OrderResult(1, [], state, 0.0, oracle.queries - start_queries,
                           survivors=[state] * max(1, surviving), copies_prepared=max(1, surviving))

    delta = epsilon / (2 * m)
    k = choose_k(oracle.n, m, epsilon)
    tail = max(k, surviving)
    base = identity_state(oracle)
    prepared = k * m + tail
    pool = [base] * prepared
    factors: list[int] = []
    restarts = 0

    def rebuild(count: int) -> list[qsim.QState]:
        """Fresh copies of |H_{j-1}> from |{1}> using the known r's."""
        nonlocal prepared
        copies = [base] * (count + len(factors))
        prepared += len(copies)
        for g_i, r_i in zip(chain.elements, factors):
            if r_i > 1:
                copies = convert_copies(oracle, g_i, r_i, copies, delta, rng)
        return copies

    for j, g in enumerate(chain.elements, start=1):
        needed = k * (m - j) + tail + 1  # copies that must survive to be converted
        h_prev = closure(oracle, chain.prefix(j - 1), cap) if verify else None
        for attempt in range(MAX_RESTARTS + 1):
            try:
                if attempt:
                    pool = rebuild(needed + k - 1)
                order_copies, rest = pool[: k - 1], pool[k - 1:]
                r = relative_order(oracle, g, order_copies, delta, rng, verify_subgroup=h_prev).r
                if r > 1:
                    rest = convert_copies(oracle, g, r, rest, delta, rng)
                pool = rest
                factors.append(r)
                break
            except (NoCoprimeOutcome, FactorizationError, Unverified):
                restarts += 1
        else:
            raise BudgetExhausted(f"stage {j} failed {MAX_RESTARTS + 1} times")

    return OrderResult(
        order=math.prod(factors),
        factors=factors,
        final_state=pool[0],
        failure_probability_bound=epsilon,
        oracle_queries=oracle.queries - start_queries,
        chain=chain.elements,
        survivors=pool,
        copies_prepared=prepared,
        restarts=restarts,
        k=k,
    )
