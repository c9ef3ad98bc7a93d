"""Structure of an abelian factor group G/H.

With f(a_1..a_k) = g_1^a_1 ... g_k^a_k H on Z_N^k (N = lcm of the generator
orders), Fourier sampling the state sum_a |a>|f(a)> yields uniform elements
of ker(f)^perp, which is isomorphic to G/H.  A few samples generate it; the
Smith normal form of [B | N I] then gives the cyclic factors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

import numpy as np

from . import qsim
from .blackbox import Encoding, GroupOracle
from .classical import DEFAULT_SIZE_CAP, closure
from .errors import LayoutMismatch, NotAbelianQuotient, NotNormal
from .orderfind import relative_order, repetitions
from .snf import SNFResult, smith_normal_form
from .solvable_order import group_order, identity_state


@dataclass(frozen=True)
class KernelPerpSample:
    vector: tuple[int, ...]
    N: int


@dataclass
class AbelianDecomposition:
    prime_powers: list[int]
    invariant_factors: list[int] = field(default_factory=list)
    samples: list[KernelPerpSample] = field(default_factory=list, repr=False)
    orders: list[int] = field(default_factory=list)
    N: int = 1
    snf: SNFResult | None = field(default=None, repr=False)
    oracle_queries: int = 0

    @property
    def quotient_order(self) -> int:
        return math.prod(self.prime_powers)


def prime_power_split(d: int) -> list[int]:
    """d = prod of prime powers, by trial division."""
    if d < 1:
        raise ValueError("need a positive integer")
    out, p = [], 2
    while p * p <= d:
        if d % p == 0:
            q = 1
            while d % p == 0:
                d //= p
                q *= p
            out.append(q)
        p += 1
    if d > 1:
        out.append(d)
    return out


def _sampling_state(
    oracle: GroupOracle, generators: Sequence[Encoding], h_state: qsim.QState, N: int
) -> tuple[qsim.QState, list[str]]:
    if len(h_state.layout) != 1:
        raise LayoutMismatch("subgroup state must have exactly one register")
    target = h_state.layout[0].name
    names = [f"A{j + 1}" for j in range(len(generators))]
    state = h_state
    for name in reversed(names):
        state = qsim.tensor(qsim.uniform_state(range(N), qsim.mod_register(name, N)), state)
    # R <- g_1^a_1 ... g_k^a_k R, innermost factor first
    for name, g in reversed(list(zip(names, generators))):
        state = qsim.controlled_left_multiply(state, name, target, g, oracle)
    for name in names:
        state = qsim.qft(state, name, N)
    return state, names


def kernel_perp_distribution(
    oracle: GroupOracle, generators: Sequence[Encoding], h_state: qsim.QState, orders: Sequence[int]
) -> dict[tuple[int, ...], float]:
    """Exact joint law of the measured (A_1..A_k)."""
    N = math.lcm(*orders) if orders else 1
    state, names = _sampling_state(oracle, generators, h_state, N)
    idx = [state.index(nm) for nm in names]
    probs: dict[tuple[int, ...], float] = {}
    for k, a in state.amps.items():
        key = tuple(k[i] for i in idx)
        probs[key] = probs.get(key, 0.0) + abs(a) ** 2
    return dict(sorted(probs.items()))


def sample_kernel_perp(
    oracle: GroupOracle,
    generators: Sequence[Encoding],
    h_state: qsim.QState,
    orders: Sequence[int],
    rng: np.random.Generator,
) -> KernelPerpSample:
    """One run of the sampling circuit; the A_j are measured in turn."""
    if len(orders) != len(generators):
        raise ValueError("one order per generator")
    N = math.lcm(*orders) if orders else 1
    state, names = _sampling_state(oracle, generators, h_state, N)
    vec = []
    for name in names:
        b, state = qsim.measure(state, name, rng)
        vec.append(b)
    return KernelPerpSample(tuple(vec), N)


def kernel(
    oracle: GroupOracle,
    generators: Sequence[Encoding],
    subgroup: frozenset[Encoding],
    N: int,
) -> list[tuple[int, ...]]:
    """ker(f) in Z_N^k by enumeration (reference only)."""
    powers = [[oracle.power(g, a) for a in range(N)] for g in generators]
    out = []
    for a in product(range(N), repeat=len(generators)):
        x = oracle.identity
        for j, aj in enumerate(a):
            x = oracle.multiply(x, powers[j][aj])
        if x in subgroup:
            out.append(a)
    return out


def in_kernel_perp(vector: Sequence[int], kernel_vectors: Sequence[Sequence[int]], N: int) -> bool:
    return all(sum(a * b for a, b in zip(av, vector)) % N == 0 for av in kernel_vectors)


def structure_from_samples(samples: Sequence[KernelPerpSample], k: int, N: int) -> tuple[list[int], SNFResult]:
    """Invariant factors of the subgroup of Z_N^k spanned by the samples."""
    cols = [list(s.vector) for s in samples]
    B = [[c[i] for c in cols] + [N * int(i == j) for j in range(k)] for i in range(k)]
    res = smith_normal_form(B)
    factors = [N // d for d in res.diagonal if d < N]
    return factors, res


def check_normal_abelian(
    oracle: GroupOracle,
    generators: Sequence[Encoding],
    h_generators: Sequence[Encoding],
    cap: int = DEFAULT_SIZE_CAP,
) -> None:
    """Closure checks: H normal in G and G/H abelian."""
    H = closure(oracle, h_generators, cap)
    G = closure(oracle, list(generators) + list(h_generators), cap)
    for g in generators:
        gi = oracle.inverse(g)
        for h in h_generators:
            if oracle.multiply(oracle.multiply(gi, h), g) not in H:
                raise NotNormal("subgroup is not normal in the group")
    if len(G) != len(closure(oracle, list(generators), cap)):
        raise NotNormal("subgroup is not contained in the group")
    for x in generators:
        for y in generators:
            c = oracle.multiply(oracle.multiply(oracle.inverse(x), oracle.inverse(y)), oracle.multiply(x, y))
            if c not in H:
                raise NotAbelianQuotient("generators do not commute modulo the subgroup")


def sample_count(k: int, epsilon: float) -> int:
    return 4 * k + math.ceil(math.log2(1 / epsilon))


def quotient_structure(
    oracle: GroupOracle,
    generators: Sequence[Encoding],
    h_generators: Sequence[Encoding],
    epsilon: float = 0.05,
    rng: np.random.Generator | None = None,
    *,
    verify: bool = False,
    cap: int = DEFAULT_SIZE_CAP,
) -> AbelianDecomposition:
    """Prime powers q_i with G/H = Z_q1 x ... x Z_qm.

    The error budget is split in thirds between preparing |H>, the k
    generator orders, and the sampling step.  ``verify`` runs the closure
    checks for normality and commutativity first.
    """
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    if rng is None:
        rng = np.random.default_rng()
    start = oracle.queries
    if verify:
        check_normal_abelian(oracle, generators, h_generators, cap)
    gens = [g for g in dict.fromkeys(generators) if g != oracle.identity]
    if not gens:
        return AbelianDecomposition([], oracle_queries=oracle.queries - start)
    k = len(gens)
    S = sample_count(k, epsilon)

    h_copies = group_order(oracle, h_generators, epsilon / 3, rng, surviving=S, cap=cap).survivors[:S]
    one = identity_state(oracle)
    eps_order = epsilon / (3 * k)
    orders = [relative_order(oracle, g, [one] * repetitions(eps_order), eps_order, rng).r for g in gens]
    N = math.lcm(*orders)
    samples = [sample_kernel_perp(oracle, gens, h, orders, rng) for h in h_copies]
    factors, res = structure_from_samples(samples, k, N)
    q = sorted(pp for d in factors for pp in prime_power_split(d))
    return AbelianDecomposition(
        prime_powers=q,
        invariant_factors=sorted(factors),
        samples=samples,
        orders=orders,
        N=N,
        snf=res,
        oracle_queries=oracle.queries - start,
    )


def coset_multiply(
    oracle: GroupOracle, state_a: qsim.QState, state_b: qsim.QState, inverse: bool = False
) -> qsim.QState:
    """U_G on |gH>|g'H> -> |gH>|gg'H> (|g^-1 g'H> if ``inverse``).

    Returns the joint two-register state; it factors as a product whenever
    H is normal.  If both inputs use the same register name, the second
    register is renamed with a trailing prime.
    """
    if len(state_a.layout) != 1 or len(state_b.layout) != 1:
        raise LayoutMismatch("coset states are single-register states")
    ra, rb = state_a.layout[0], state_b.layout[0]
    if ra.kind != "group" or rb.kind != "group" or ra.size != rb.size:
        raise LayoutMismatch("both states must be group registers of one oracle")
    if ra.name == rb.name:
        state_b = qsim.rename(state_b, {rb.name: rb.name + "'"})
        rb = state_b.layout[0]
    joint = qsim.tensor(state_a, state_b)
    return qsim.group_multiply(joint, ra.name, rb.name, oracle, inverse=inverse)
