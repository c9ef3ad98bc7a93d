"""Order of an element relative to a subgroup, from copies of the subgroup state.

Shor-style: QFT_N on an ancilla, controlled left multiplication of the
subgroup register by g^a, inverse QFT_N, measure; continued fractions turn
each outcome b into a denominator v, and the lcm of the v's is r_H(g).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import qsim
from .blackbox import Encoding, GroupOracle
from .classical import relative_order_bruteforce
from .errors import InsufficientCopies, LayoutMismatch, Unverified

# Joint (ancilla x subgroup) supports up to this size are simulated gate by gate.
DENSE_LIMIT = 1 << 12


def choose_modulus(n: int, epsilon: float) -> int:
    """N = 2^t with t = 2n + ceil(log2(1/epsilon)) + 2."""
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    return 1 << (2 * n + math.ceil(math.log2(1 / epsilon)) + 2)


def repetitions(epsilon: float) -> int:
    """Number of order samples whose denominators are lcm-combined."""
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    return math.ceil(math.log2(1 / epsilon)) + 4


def continued_fraction(b: int, N: int, denominator_bound: int) -> tuple[int, int]:
    """Last convergent u/v of b/N with v <= ``denominator_bound``."""
    if not 0 <= b < N or denominator_bound < 1:
        raise ValueError("need 0 <= b < N and a positive bound")
    frac = Fraction(b, N)
    num, den = frac.numerator, frac.denominator
    h1, h2 = 1, 0  # numerators of the two previous convergents
    k1, k2 = 0, 1  # denominators
    best = (0, 1)
    while den:
        a, rem = divmod(num, den)
        h, k = a * h1 + h2, a * k1 + k2
        if k > denominator_bound:
            break
        best = (h, k)
        h1, h2, k1, k2 = h, h1, k, k1
        num, den = den, rem
    return best


@dataclass(frozen=True)
class OrderSample:
    b: int
    N: int
    v: int


@dataclass(frozen=True)
class RelativeOrder:
    r: int
    samples: tuple[OrderSample, ...]
    copies_used: int


def _only_register(state: qsim.QState) -> qsim.Register:
    if len(state.layout) != 1:
        raise LayoutMismatch("subgroup state must have exactly one register")
    return state.layout[0]


def prepare_sample_state(oracle: GroupOracle, g: Encoding, h_state: qsim.QState, N: int) -> qsim.QState:
    """Joint (A, R) state just before A is measured, built gate by gate."""
    reg = _only_register(h_state)
    anc = qsim.mod_register("A", N)
    state = qsim.tensor(qsim.basis_state([anc], [0]), h_state)
    state = qsim.qft(state, "A", N)
    state = qsim.controlled_left_multiply(state, "A", reg.name, g, oracle)
    return qsim.qft(state, "A", N, inverse=True)


def order_sample_distribution(oracle: GroupOracle, g: Encoding, h_state: qsim.QState, N: int) -> dict[int, float]:
    """Exact outcome distribution of one order sample (gate-level simulation)."""
    return qsim.marginal(prepare_sample_state(oracle, g, h_state, N), "A")


def sample_progression_fourier(N: int, step: int, length: int, rng: np.random.Generator) -> int:
    """Measure QFT_N^dagger applied to the uniform state on {c + step*t : t < length}.

    The outcome law P(b) = sin^2(pi L theta) / (N L sin^2(pi theta)) with
    theta = step*b/N mod 1 does not depend on the offset c.  It is sampled
    exactly by rejection against the envelope min(L^2, M^2 / (4 d^2)), where
    M = N / gcd(step, N) and d is the distance of step*b/gcd mod M from 0.
    """
    g = math.gcd(step, N)
    M = N // g
    L = length
    if M == 1:
        i = 0
    else:
        s1 = (step // g) % M
        D = M // 2
        x0 = M / (2 * L)
        LL = float(L * L)
        quarter = M * M / 4

        def F(x: float) -> float:
            if x <= x0:
                return LL * (x + 1)
            return LL * (x0 + 1) + quarter * (1 / x0 - 1 / x)

        def weight(d: int) -> float:
            if d == 0:
                return LL
            num = math.sin(math.pi * ((L * d) % M) / M)
            den = math.sin(math.pi * d / M)
            return (num * num) / (den * den)

        total = F(D)
        flat = F(min(x0, D))
        while True:
            u = rng.random() * total
            if u <= flat:
                x = -1 + u / LL
            else:
                x = 1 / (1 / x0 - (u - flat) / quarter)
            d = min(D, max(0, math.ceil(x)))
            mult = 1 if d == 0 or 2 * d == M else 2
            envelope = F(d) - F(d - 1) if d > 0 else F(0)
            if rng.random() * 2 * envelope < mult * weight(d):
                break
        if mult == 2 and rng.random() < 0.5:
            d = M - d
        i = (d * pow(s1, -1, M)) % M
    return i + M * int(rng.integers(g))


def _traced_outcome(oracle: GroupOracle, g: Encoding, h_state: qsim.QState, N: int, rng: np.random.Generator) -> int:
    """Sample b with the subgroup register measured first.

    The subgroup register is discarded after the ancilla is measured, so
    measuring it beforehand in the computational basis leaves the ancilla's
    outcome law unchanged.  Given the result y, the ancilla holds
    sum_a psi(g^-a y)|a>, which is periodic in a with period ord(g).
    """
    labels = list(h_state.amps)
    weights = np.array([abs(h_state.amps[k]) ** 2 for k in labels])
    cdf = np.cumsum(weights)
    x = labels[min(int(np.searchsorted(cdf, rng.random() * cdf[-1], side="right")), len(labels) - 1)][0]
    a = int(rng.integers(N))
    y = oracle.multiply(oracle.power(g, a), x)

    g_inv = oracle.inverse(g)
    pattern = []
    z = y
    while True:
        pattern.append(h_state.amps.get((z,), 0j))
        z = oracle.multiply(g_inv, z)
        if z == y:
            break
    period = len(pattern)
    support = [s for s, p in enumerate(pattern) if abs(p) > qsim.PRUNE]
    vals = [pattern[s] for s in support]
    step = support[1] - support[0] if len(support) > 1 else period
    is_comb = (
        period % step == 0
        and support == list(range(support[0], period, step))
        and all(abs(v - vals[0]) <= qsim.PRUNE for v in vals)
    )
    if is_comb:
        length = len(range(support[0], N, step))
        return sample_progression_fourier(N, step, length, rng)
    vec = np.resize(np.array(pattern, dtype=complex), N)
    vec /= np.linalg.norm(vec)
    probs = np.abs(qsim.qft_vector(vec, inverse=True)) ** 2
    cdf = np.cumsum(probs)
    return int(min(np.searchsorted(cdf, rng.random() * cdf[-1], side="right"), N - 1))


def order_sample(
    oracle: GroupOracle,
    g: Encoding,
    h_state: qsim.QState,
    N: int,
    rng: np.random.Generator,
    mode: str = "auto",
) -> OrderSample:
    """One run of the relative order-finding circuit on one copy of |H>.

    ``mode`` selects gate-level simulation ("dense"), the traced sampler
    ("traced"), or whichever fits ("auto").  Both give the same outcome law.
    """
    if mode == "dense" or (mode == "auto" and N * len(h_state) <= DENSE_LIMIT):
        b, _ = qsim.measure(prepare_sample_state(oracle, g, h_state, N), "A", rng)
    elif mode in ("auto", "traced"):
        b = _traced_outcome(oracle, g, h_state, N, rng)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    _, v = continued_fraction(b, N, 1 << oracle.n)
    return OrderSample(b, N, v)


def relative_order(
    oracle: GroupOracle,
    g: Encoding,
    h_state_copies: Sequence[qsim.QState],
    epsilon: float,
    rng: np.random.Generator,
    verify_subgroup: frozenset[Encoding] | None = None,
    N: int | None = None,
    mode: str = "auto",
) -> RelativeOrder:
    """r_H(g) as the lcm of continued-fraction denominators.

    Uses ``repetitions(epsilon)`` copies.  If ``verify_subgroup`` (the
    enumerated H) is given, the answer is checked classically and
    :class:`Unverified` is raised on a mismatch.
    """
    T = repetitions(epsilon)
    if len(h_state_copies) < T:
        raise InsufficientCopies(f"need {T} copies of |H>, got {len(h_state_copies)}")
    if N is None:
        N = choose_modulus(oracle.n, epsilon)
    samples = tuple(order_sample(oracle, g, h_state_copies[i], N, rng, mode) for i in range(T))
    r = 1
    for s in samples:
        r = math.lcm(r, s.v)
    if verify_subgroup is not None:
        truth = relative_order_bruteforce(oracle, g, verify_subgroup)
        if r != truth:
            raise Unverified(f"computed relative order {r}, closure says {truth}")
    return RelativeOrder(r, samples, T)
