"""Sparse pure-state simulator over group-element and Z_N registers.

A :class:`QState` is an ordered tuple of registers plus a sparse map from
basis-label tuples to complex amplitudes.  Group registers hold encodings of
one oracle; modular registers hold integers in ``range(N)``.  Gates are pure
functions returning new states, so a state may be shared freely (identical
copies of a subgroup state cost nothing).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .blackbox import Encoding, GroupOracle
from .errors import DomainMismatch, EmptySet, FactorizationError, LayoutMismatch

TOL = 1e-9
PRUNE = 1e-12


@dataclass(frozen=True)
class Register:
    name: str
    kind: str  # "group" or "mod"
    size: int  # encoding length for group registers, modulus for mod registers

    def check(self, value) -> bool:
        if self.kind == "mod":
            return 0 <= value < self.size
        return 0 <= value < (1 << self.size)

    def fmt(self, value) -> str:
        if self.kind == "mod":
            return str(value).zfill(len(str(self.size - 1)))
        return format(value, "0{}x".format((self.size + 3) // 4))


def group_register(name: str, oracle: GroupOracle) -> Register:
    return Register(name, "group", oracle.n)


def mod_register(name: str, modulus: int) -> Register:
    if modulus < 1:
        raise DomainMismatch("modulus must be positive")
    return Register(name, "mod", modulus)


class QState:
    __slots__ = ("layout", "amps")

    def __init__(self, layout: Sequence[Register], amps: Mapping[tuple, complex]):
        self.layout = tuple(layout)
        names = [r.name for r in self.layout]
        if len(set(names)) != len(names):
            raise LayoutMismatch(f"duplicate register names {names}")
        self.amps = dict(amps)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(r.name for r in self.layout)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise LayoutMismatch(f"no register named {name!r}") from None

    def register(self, name: str) -> Register:
        return self.layout[self.index(name)]

    def norm(self) -> float:
        return math.sqrt(sum(abs(a) ** 2 for a in self.amps.values()))

    def support(self, name: str | None = None) -> set:
        if name is None:
            return set(self.amps)
        i = self.index(name)
        return {k[i] for k in self.amps}

    def __len__(self):
        return len(self.amps)

    def __repr__(self):
        return f"QState({list(self.names)}, support={len(self.amps)})"


def phase(m: int, k: int) -> complex:
    """e_m(k) = exp(2 pi i k / m), exactly 1 when m divides k."""
    k %= m
    if k == 0:
        return 1 + 0j
    return cmath.exp(2j * math.pi * k / m)


def _pruned(amps: Mapping[tuple, complex]) -> dict[tuple, complex]:
    return {k: a for k, a in amps.items() if abs(a) > PRUNE}


def basis_state(layout: Sequence[Register], labels: Sequence) -> QState:
    layout = tuple(layout)
    if len(labels) != len(layout):
        raise LayoutMismatch("one label per register required")
    for reg, v in zip(layout, labels):
        if not reg.check(v):
            raise DomainMismatch(f"{v!r} outside the domain of register {reg.name}")
    return QState(layout, {tuple(labels): 1 + 0j})


def uniform_state(labels: Iterable, register: Register) -> QState:
    """|S> = |S|^{-1/2} sum_{s in S} |s> on a single register."""
    labels = sorted(set(labels))
    if not labels:
        raise EmptySet("uniform superposition over an empty set")
    for v in labels:
        if not register.check(v):
            raise DomainMismatch(f"{v!r} outside the domain of register {register.name}")
    amp = 1 / math.sqrt(len(labels))
    return QState((register,), {(v,): complex(amp) for v in labels})


def tensor(a: QState, b: QState) -> QState:
    if set(a.names) & set(b.names):
        raise LayoutMismatch("tensor factors share register names")
    return QState(
        a.layout + b.layout,
        {ka + kb: x * y for ka, x in a.amps.items() for kb, y in b.amps.items()},
    )


def rename(state: QState, mapping: Mapping[str, str]) -> QState:
    layout = [Register(mapping.get(r.name, r.name), r.kind, r.size) for r in state.layout]
    return QState(layout, state.amps)


def permute_basis(state: QState, fn: Callable[[tuple], tuple]) -> QState:
    """Apply a basis permutation ``|k> -> |fn(k)>``; collisions are an error."""
    out: dict[tuple, complex] = {}
    for k, a in state.amps.items():
        k2 = fn(k)
        if k2 in out:
            raise FactorizationError("basis map is not injective on the support")
        out[k2] = a
    return QState(state.layout, out)


def qft_vector(vec: np.ndarray, inverse: bool = False) -> np.ndarray:
    """QFT_N on a dense amplitude vector: |a> -> N^-1/2 sum_b e_N(+-ab) |b>."""
    n = len(vec)
    if inverse:
        return np.fft.fft(vec) / math.sqrt(n)
    return np.fft.ifft(vec) * math.sqrt(n)


def qft(state: QState, register: str, modulus: int | None = None, inverse: bool = False) -> QState:
    """Quantum Fourier transform modulo N on one register (adjoint if ``inverse``)."""
    i = state.index(register)
    reg = state.layout[i]
    if reg.kind != "mod" or (modulus is not None and modulus != reg.size):
        raise DomainMismatch(f"register {register} is not a Z_{modulus} register")
    N = reg.size
    buckets: dict[tuple, dict[int, complex]] = {}
    for k, a in state.amps.items():
        buckets.setdefault(k[:i] + k[i + 1:], {})[k[i]] = a
    out: dict[tuple, complex] = {}
    for rest, col in buckets.items():
        vec = np.zeros(N, dtype=complex)
        vec[list(col)] = list(col.values())
        res = qft_vector(vec, inverse)
        for b in np.flatnonzero(np.abs(res) > PRUNE):
            b = int(b)
            out[rest[:i] + (b,) + rest[i:]] = complex(res[b])
    return QState(state.layout, out)


def _check_kinds(state: QState, pairs: Iterable[tuple[str, str]]) -> None:
    for name, kind in pairs:
        if state.register(name).kind != kind:
            raise DomainMismatch(f"register {name} must be a {kind} register")


def controlled_left_multiply(
    state: QState,
    control: str,
    target: str,
    g: Encoding,
    oracle: GroupOracle,
    inverse: bool = False,
) -> QState:
    """|a>|x> -> |a>|g^a x> (or |g^-a x> if ``inverse``)."""
    _check_kinds(state, [(control, "mod"), (target, "group")])
    ci, ti = state.index(control), state.index(target)
    powers: dict[int, Encoding] = {}

    def fn(k):
        a = k[ci]
        if a not in powers:
            powers[a] = oracle.power(g, -a if inverse else a)
        k = list(k)
        k[ti] = oracle.multiply(powers[a], k[ti])
        return tuple(k)

    return permute_basis(state, fn)


def element_power_multiply(
    state: QState,
    source: str,
    target: str,
    c: int,
    oracle: GroupOracle,
) -> QState:
    """|f>|x> -> |f>|f^c x>."""
    _check_kinds(state, [(source, "group"), (target, "group")])
    si, ti = state.index(source), state.index(target)
    powers: dict[Encoding, Encoding] = {}

    def fn(k):
        f = k[si]
        if f not in powers:
            powers[f] = oracle.power(f, c)
        k = list(k)
        k[ti] = oracle.multiply(powers[f], k[ti])
        return tuple(k)

    return permute_basis(state, fn)


def group_multiply(state: QState, source: str, target: str, oracle: GroupOracle, inverse: bool = False) -> QState:
    """U_G on a register pair: |g>|h> -> |g>|gh> (U_G^-1: |g>|g^-1 h>)."""
    _check_kinds(state, [(source, "group"), (target, "group")])
    si, ti = state.index(source), state.index(target)

    def fn(k):
        g = k[si]
        if inverse:
            g = oracle.inverse(g)
        k = list(k)
        k[ti] = oracle.multiply(g, k[ti])
        return tuple(k)

    return permute_basis(state, fn)


def marginal(state: QState, register: str) -> dict:
    """Outcome distribution of measuring ``register`` in the computational basis."""
    i = state.index(register)
    probs: dict = {}
    for k, a in state.amps.items():
        probs[k[i]] = probs.get(k[i], 0.0) + abs(a) ** 2
    return dict(sorted(probs.items()))


def measure(state: QState, register: str, rng: np.random.Generator):
    """Sample an outcome from the exact marginal and collapse onto it."""
    probs = marginal(state, register)
    labels = list(probs)
    weights = np.fromiter(probs.values(), dtype=float)
    cdf = np.cumsum(weights)
    j = int(np.searchsorted(cdf, rng.random() * cdf[-1], side="right"))
    outcome = labels[min(j, len(labels) - 1)]
    i = state.index(register)
    kept = {k: a for k, a in state.amps.items() if k[i] == outcome}
    scale = 1 / math.sqrt(probs[outcome])
    return outcome, QState(state.layout, {k: a * scale for k, a in kept.items()})


def inner(a: QState, b: QState) -> complex:
    """<a|b>."""
    if a.layout != b.layout:
        raise LayoutMismatch(f"{a.names} vs {b.names}")
    bamps = b.amps
    total = sum(x.conjugate() * bamps[k] for k, x in a.amps.items() if k in bamps)
    return complex(total)


def fidelity(a: QState, b: QState) -> float:
    return abs(inner(a, b)) ** 2


def trace_distance(a: QState, b: QState) -> float:
    """Trace distance between pure states, sqrt(1 - |<a|b>|^2).

    Evaluated as the norm of the component of b orthogonal to a, which
    avoids the cancellation in 1 - |<a|b>|^2 near zero.
    """
    na, nb = a.norm(), b.norm()
    c = inner(a, b) / (na * na)
    keys = set(a.amps) | set(b.amps)
    resid = sum(abs(b.amps.get(k, 0j) - c * a.amps.get(k, 0j)) ** 2 for k in keys)
    return min(1.0, math.sqrt(resid) / nb)


def is_flat(state: QState, tol: float = TOL) -> bool:
    """True iff all amplitudes on the support are equal (a uniform state up to phase)."""
    vals = list(state.amps.values())
    if not vals:
        return False
    a0 = vals[0]
    return all(abs(a - a0) <= tol for a in vals)


def _matrix(state: QState, names: Sequence[str]):
    left = [state.index(n) for n in names]
    if not left or len(left) == len(state.layout):
        raise LayoutMismatch("split must leave registers on both sides")
    right = [i for i in range(len(state.layout)) if i not in left]
    rows: dict[tuple, int] = {}
    cols: dict[tuple, int] = {}
    entries = []
    for k, a in state.amps.items():
        rk = tuple(k[i] for i in left)
        ck = tuple(k[i] for i in right)
        entries.append((rows.setdefault(rk, len(rows)), cols.setdefault(ck, len(cols)), a))
    mat = np.zeros((len(rows), len(cols)), dtype=complex)
    for r, c, a in entries:
        mat[r, c] = a
    return mat, list(rows), list(cols), left, right


def factor_check(state: QState, names: Sequence[str], tol: float = TOL) -> bool:
    """True iff the state is a product across (``names``, the rest)."""
    mat, *_ = _matrix(state, names)
    s = np.linalg.svd(mat, compute_uv=False)
    return len(s) < 2 or s[1] <= tol


def split(state: QState, names: Sequence[str], tol: float = TOL) -> tuple[QState, QState]:
    """Factor a product state into (state on ``names``, state on the rest).

    The global phase is placed on the second factor.
    """
    mat, rows, cols, left, right = _matrix(state, names)
    u, s, vh = np.linalg.svd(mat)
    if len(s) > 1 and s[1] > tol:
        raise FactorizationError(f"state is entangled across {list(names)} (s1={s[1]:.3g})")
    a_vec = u[:, 0]
    b_vec = s[0] * vh[0, :]
    # fix the phase of the first factor: largest entry real positive
    j = int(np.argmax(np.abs(a_vec)))
    ph = a_vec[j] / abs(a_vec[j])
    a_vec = a_vec / ph
    b_vec = b_vec * ph
    b_vec = b_vec / np.linalg.norm(b_vec)
    la = tuple(state.layout[i] for i in left)
    lb = tuple(state.layout[i] for i in right)
    a_state = QState(la, _pruned({rk: complex(v) for rk, v in zip(rows, a_vec)}))
    b_state = QState(lb, _pruned({ck: complex(v) for ck, v in zip(cols, b_vec)}))
    return a_state, b_state


def discard(state: QState, register: str, rng: np.random.Generator | None = None) -> QState:
    """Drop a register.

    A register in product with the rest is simply removed.  An entangled
    register can only be dropped along a measurement trajectory, which needs
    ``rng``.
    """
    if not factor_check(state, [register]):
        if rng is None:
            raise FactorizationError(f"register {register} is entangled; pass rng to trace it out")
        _, state = measure(state, register, rng)
    _, rest = split(state, [register])
    return rest


def dump(state: QState) -> str:
    """One line per basis tuple, ``labels... re im``, sorted lexicographically."""
    lines = []
    for k, a in state.amps.items():
        labels = " ".join(reg.fmt(v) for reg, v in zip(state.layout, k))
        lines.append(f"{labels} {a.real:+.15e} {a.imag:+.15e}")
    header = "# " + " ".join(f"{r.name}:{r.kind}{r.size}" for r in state.layout)
    return "\n".join([header] + sorted(lines)) + "\n"
