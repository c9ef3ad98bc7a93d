"""Turn l copies of |H> into l-1 copies of |<g>H>.

Each copy is phase-kicked with QFT_r / controlled g^a / QFT_r and its ancilla
measured, leaving (1/sqrt r) sum_a e_r(a b_i)|g^a H>.  One copy whose b_k is
a unit mod r is an eigenvector of every left multiplication by g^j h, so
multiplying it by f^c (f read from another copy, c = b_i b_k^-1 mod r)
cancels that copy's phases and leaves it in |<g>H>.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import qsim
from .blackbox import Encoding, GroupOracle
from .errors import FactorizationError, InsufficientCopies, LayoutMismatch, NoCoprimeOutcome


def totient(r: int) -> int:
    result, m, p = r, r, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def choose_l(r: int, delta: float) -> int:
    """Smallest l with (1 - phi(r)/r)^l <= delta."""
    if r < 1 or not 0 < delta < 1:
        raise ValueError("need r >= 1 and 0 < delta < 1")
    miss = 1 - totient(r) / r
    if miss == 0:
        return 1
    l = max(1, math.ceil(math.log(delta) / math.log(miss)))
    while miss ** l > delta:
        l += 1
    while l > 1 and miss ** (l - 1) <= delta:
        l -= 1
    return l


@dataclass
class ConversionBatch:
    """Bookkeeping of one conversion: measured b_i, chosen k, exponents c_i."""

    r: int
    outcomes: list[int] = field(default_factory=list)
    k: int | None = None
    corrections: dict[int, int] = field(default_factory=dict)


def kickback(
    oracle: GroupOracle, g: Encoding, r: int, copy: qsim.QState, rng: np.random.Generator
) -> tuple[int, qsim.QState]:
    """QFT_r, controlled g^a, QFT_r on a fresh ancilla; measure it.

    Returns (b, psi) with psi = (1/sqrt r) sum_a e_r(a b)|g^a H>.
    """
    (reg,) = copy.layout
    anc = qsim.mod_register("A", r)
    state = qsim.tensor(qsim.basis_state([anc], [0]), copy)
    state = qsim.qft(state, "A", r)
    state = qsim.controlled_left_multiply(state, "A", reg.name, g, oracle)
    state = qsim.qft(state, "A", r)
    b, state = qsim.measure(state, "A", rng)
    return b, qsim.discard(state, "A")


def eigenvector_state(oracle: GroupOracle, g: Encoding, r: int, b: int, h_state: qsim.QState) -> qsim.QState:
    """(1/sqrt r) sum_a e_r(a b)|g^a H>, built directly from |H>."""
    (reg,) = h_state.layout
    amps: dict[tuple, complex] = {}
    scale = 1 / math.sqrt(r)
    for a in range(r):
        ga = oracle.power(g, a)
        ph = qsim.phase(r, a * b) * scale
        for (x,), amp in h_state.amps.items():
            key = (oracle.multiply(ga, x),)
            amps[key] = amps.get(key, 0j) + ph * amp
    return qsim.QState([reg], qsim._pruned(amps))


def left_multiply_state(oracle: GroupOracle, state: qsim.QState, x: Encoding) -> qsim.QState:
    """M_x: multiply the single register of ``state`` by x on the left."""
    return qsim.permute_basis(state, lambda k: (oracle.multiply(x, k[0]),))


def eigenphase_check(
    oracle: GroupOracle,
    psi_k: qsim.QState,
    g: Encoding,
    h: Encoding,
    j: int,
    b_k: int,
    r: int,
) -> complex:
    """Rayleigh quotient <psi_k| M_{g^j h} |psi_k>; equals e_r(-j b_k) when g normalizes H."""
    moved = left_multiply_state(oracle, psi_k, oracle.multiply(oracle.power(g, j), h))
    return qsim.inner(psi_k, moved)


def correct_pair(
    oracle: GroupOracle,
    r_i: qsim.QState,
    r_k: qsim.QState,
    c: int,
) -> tuple[qsim.QState, qsim.QState]:
    """Multiply R_k by f^c (f = content of R_i) on the joint pair, then split.

    Raises :class:`FactorizationError` if the pair does not come out as a
    product with a flat R_i factor, which is what happens when g fails to
    normalize H.
    """
    (reg_i,) = r_i.layout
    (reg_k,) = r_k.layout
    if reg_i.name == reg_k.name:
        r_k = qsim.rename(r_k, {reg_k.name: reg_k.name + "'"})
        reg_k = r_k.layout[0]
    joint = qsim.tensor(r_i, r_k)
    joint = qsim.element_power_multiply(joint, reg_i.name, reg_k.name, c, oracle)
    if not qsim.factor_check(joint, [reg_i.name]):
        raise FactorizationError("correction left the pair entangled; does g normalize H?")
    new_i, new_k = qsim.split(joint, [reg_i.name])
    # a product can still carry uncancelled phases on R_i
    if not qsim.is_flat(new_i):
        raise FactorizationError("correction did not cancel the phases; does g normalize H?")
    return new_i, qsim.rename(new_k, {reg_k.name: r_i.layout[0].name})


def convert_copies(
    oracle: GroupOracle,
    g: Encoding,
    r: int,
    copies: Sequence[qsim.QState],
    delta: float,
    rng: np.random.Generator,
    batch: ConversionBatch | None = None,
) -> list[qsim.QState]:
    """l copies of |H> to l-1 copies of |<g>H>, given r = r_H(g).

    With r = 1 the copies are returned unchanged.  Raises
    :class:`NoCoprimeOutcome` when no measured b_i is a unit mod r.
    """
    if not copies:
        raise InsufficientCopies("no copies to convert")
    for c in copies:
        if len(c.layout) != 1:
            raise LayoutMismatch("each copy must be a single-register state")
    if r == 1:
        return list(copies)
    need = choose_l(r, delta)
    if len(copies) < need:
        raise InsufficientCopies(f"need at least {need} copies for r={r}, delta={delta}")
    if batch is None:
        batch = ConversionBatch(r)
    kicked = [kickback(oracle, g, r, c, rng) for c in copies]
    batch.outcomes = [b for b, _ in kicked]
    k = next((i for i, b in enumerate(batch.outcomes) if math.gcd(b, r) == 1), None)
    if k is None:
        raise NoCoprimeOutcome(f"all {len(copies)} outcomes share a factor with r={r}")
    batch.k = k
    inv_bk = pow(batch.outcomes[k], -1, r)
    psi_k = kicked[k][1]
    out = []
    for i, (b_i, psi_i) in enumerate(kicked):
        if i == k:
            continue
        c = (b_i * inv_bk) % r
        batch.corrections[i] = c
        fixed, psi_k = correct_pair(oracle, psi_i, psi_k, c)
        out.append(fixed)
    return out
