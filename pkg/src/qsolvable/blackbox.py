"""Black-box groups over fixed-length bitstring encodings.

Every element of a group is an ``int`` whose binary expansion, zero-padded to
``oracle.n`` bits, is its encoding.  The oracle is the only way to combine
elements; every ``multiply``/``inverse`` call is counted.

Encoding rules (bit-exact, most significant bit first):

* ``cyclic(q)``: the residue ``x`` in binary, ``n = max(1, bitlen(q - 1))``.
* ``dihedral(q)``: ``r^i s^e`` is ``e * q + i``, ``n = bitlen(2q - 1)``.
  Multiplication is ``r^i s^e * r^j s^f = r^(i + (-1)^e j) s^(e + f)``.
* ``quaternion8``: ``1, -1, i, -i, j, -j, k, -k`` are ``0..7``, ``n = 3``.
* ``symmetric(t)``: a permutation ``p`` of ``0..t-1`` (as an image tuple) is
  its Lehmer-code rank in lexicographic order; ``n = max(1, bitlen(t! - 1))``.
  Products compose right to left: ``(p * q)(x) = p(q(x))``.
* ``unitriangular(dim, p)``: the strictly upper entries, row-major, each in
  ``bitlen(p - 1)`` bits with the first entry in the most significant field.
* ``direct_product(specs)``: factor encodings concatenated, first factor in
  the most significant bits.
* ``table``: row/column index into the given multiplication table.
"""

from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Sequence

from .errors import BadSpec, InvalidEncoding

Encoding = int

_MEMO_LIMIT = 1_000_000


def _bitlen(x: int) -> int:
    return max(1, int(x).bit_length())


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, math.isqrt(p) + 1))


class GroupOracle:
    """A group given only through encoded elements and a counting oracle.

    The oracle is immutable after construction apart from its query
    counters, which are guarded by a lock so an oracle can be shared
    between threads.
    """

    def __init__(
        self,
        n: int,
        identity: Encoding,
        mul: Callable[[int, int], int],
        inv: Callable[[int], int],
        valid: Callable[[int], bool],
        generators: Sequence[Encoding] = (),
        name: str = "group",
        encode: Callable[[Any], int] | None = None,
        decode: Callable[[int], Any] | None = None,
    ):
        if n < 1:
            raise BadSpec("encoding length must be positive")
        self.n = n
        self.identity = identity
        self.name = name
        self.generators = tuple(generators)
        self._mul = mul
        self._inv = inv
        self._valid = valid
        self._encode = encode
        self._decode = decode
        self._memo: dict[tuple[int, int], int] = {}
        self._lock = threading.Lock()
        self.queries = 0
        self.invalid_queries = 0

    def __repr__(self):
        return f"GroupOracle({self.name}, n={self.n})"

    def is_valid(self, x: Encoding) -> bool:
        return isinstance(x, int) and 0 <= x < (1 << self.n) and self._valid(x)

    def _check(self, *xs: Encoding) -> None:
        for x in xs:
            if not self.is_valid(x):
                with self._lock:
                    self.invalid_queries += 1
                raise InvalidEncoding(f"{x!r} is not a valid encoding for {self.name}")

    def _count(self) -> None:
        with self._lock:
            self.queries += 1

    def multiply(self, g: Encoding, h: Encoding) -> Encoding:
        """Encoding of ``g * h`` (the classical action of U_G)."""
        self._check(g, h)
        self._count()
        key = (g, h)
        out = self._memo.get(key)
        if out is None:
            out = self._mul(g, h)
            if len(self._memo) < _MEMO_LIMIT:
                self._memo[key] = out
        return out

    def inverse(self, g: Encoding) -> Encoding:
        self._check(g)
        self._count()
        return self._inv(g)

    def power(self, g: Encoding, a: int) -> Encoding:
        """``g**a`` by repeated squaring; negative exponents go through ``inverse``."""
        self._check(g)
        if a < 0:
            g, a = self.inverse(g), -a
        result = self.identity
        base = g
        while a:
            if a & 1:
                result = self.multiply(result, base)
            a >>= 1
            if a:
                base = self.multiply(base, base)
        return result

    def reset_counters(self) -> None:
        with self._lock:
            self.queries = 0
            self.invalid_queries = 0

    def encode(self, native: Any) -> Encoding:
        """Family-specific native value (residue, permutation, ...) to encoding."""
        if self._encode is None:
            raise NotImplementedError(f"{self.name} has no native encoder")
        return self._encode(native)

    def decode(self, x: Encoding) -> Any:
        self._check(x)
        if self._decode is None:
            return x
        return self._decode(x)

    def to_hex(self, x: Encoding) -> str:
        return format(x, "0{}x".format((self.n + 3) // 4))

    def from_hex(self, text: str) -> Encoding:
        try:
            x = int(text, 16)
        except ValueError:
            raise InvalidEncoding(f"not a hex literal: {text!r}") from None
        self._check(x)
        return x


def multiply(oracle: GroupOracle, g: Encoding, h: Encoding) -> Encoding:
    return oracle.multiply(g, h)


def inverse(oracle: GroupOracle, g: Encoding) -> Encoding:
    return oracle.inverse(g)


def power(oracle: GroupOracle, g: Encoding, a: int) -> Encoding:
    return oracle.power(g, a)


# ---------------------------------------------------------------------------
# Group specifications


@dataclass(frozen=True)
class GroupSpec:
    family: str
    params: dict = field(default_factory=dict)
    table: tuple[tuple[int, ...], ...] | None = None
    generators: tuple[str, ...] | None = None

    def to_dict(self) -> dict:
        d: dict[str, Any] = {"family": self.family, "params": _params_to_json(self.params)}
        if self.table is not None:
            d["table"] = [list(row) for row in self.table]
        if self.generators is not None:
            d["generators"] = list(self.generators)
        return d

    def label(self) -> str:
        if self.family == "direct_product":
            return "x".join(f.label() for f in self.params["factors"])
        if self.family == "table":
            return f"table{len(self.table or ())}"
        args = ",".join(str(v) for v in self.params.values())
        return f"{self.family}({args})" if args else self.family


def _params_to_json(params: dict) -> dict:
    out = {}
    for k, v in params.items():
        if k == "factors":
            out[k] = [f.to_dict() for f in v]
        else:
            out[k] = v
    return out


def cyclic(q: int) -> GroupSpec:
    return GroupSpec("cyclic", {"q": q})


def dihedral(q: int) -> GroupSpec:
    return GroupSpec("dihedral", {"q": q})


def quaternion8() -> GroupSpec:
    return GroupSpec("quaternion8")


def symmetric(t: int) -> GroupSpec:
    return GroupSpec("symmetric", {"t": t})


def unitriangular(dim: int, p: int) -> GroupSpec:
    return GroupSpec("unitriangular", {"dim": dim, "p": p})


def direct_product(*factors: GroupSpec) -> GroupSpec:
    return GroupSpec("direct_product", {"factors": tuple(factors)})


def table_group(rows: Sequence[Sequence[int]]) -> GroupSpec:
    return GroupSpec("table", table=tuple(tuple(int(v) for v in row) for row in rows))


def spec_from_dict(data: dict) -> GroupSpec:
    if not isinstance(data, dict) or "family" not in data:
        raise BadSpec("group spec needs a 'family' field")
    family = data["family"]
    params = dict(data.get("params") or {})
    if family == "direct_product":
        factors = params.get("factors")
        if not factors:
            raise BadSpec("direct_product needs a non-empty 'factors' list")
        params["factors"] = tuple(spec_from_dict(f) for f in factors)
    table = data.get("table")
    if table is not None:
        table = tuple(tuple(int(v) for v in row) for row in table)
    gens = data.get("generators")
    if gens is not None:
        gens = tuple(str(g) for g in gens)
    return GroupSpec(family, params, table, gens)


def load_spec(path: str | Path) -> GroupSpec:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise BadSpec(f"cannot read group spec {path}: {exc}") from exc
    return spec_from_dict(data)


# ---------------------------------------------------------------------------
# Families


def _int_param(spec: GroupSpec, key: str, lo: int) -> int:
    try:
        v = spec.params[key]
    except KeyError:
        raise BadSpec(f"{spec.family} needs parameter {key!r}") from None
    if not isinstance(v, int) or isinstance(v, bool) or v < lo:
        raise BadSpec(f"{spec.family}: {key} must be an integer >= {lo}, got {v!r}")
    return v


def _cyclic(spec: GroupSpec) -> GroupOracle:
    q = _int_param(spec, "q", 1)
    return GroupOracle(
        n=_bitlen(q - 1),
        identity=0,
        mul=lambda a, b: (a + b) % q,
        inv=lambda a: (-a) % q,
        valid=lambda x: x < q,
        generators=[1] if q > 1 else [],
        name=spec.label(),
        encode=lambda v: int(v) % q,
    )


def _dihedral(spec: GroupSpec) -> GroupOracle:
    q = _int_param(spec, "q", 1)

    def split(x):
        return x % q, x // q

    def mul(a, b):
        i, e = split(a)
        j, f = split(b)
        return ((e ^ f) * q) + (i + (-j if e else j)) % q

    def inv(a):
        i, e = split(a)
        return a if e else (-i) % q

    gens = [x for x in (1 % q, q) if x != 0]
    return GroupOracle(
        n=_bitlen(2 * q - 1),
        identity=0,
        mul=mul,
        inv=inv,
        valid=lambda x: x < 2 * q,
        generators=gens,
        name=spec.label(),
        encode=lambda v: (v[1] % 2) * q + v[0] % q,
        decode=split,
    )


# unit table for {1, i, j, k}: (unit_a, unit_b) -> (sign, unit)
_Q_UNITS = {
    (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
    (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
    (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
    (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
}


def _quaternion8(spec: GroupSpec) -> GroupOracle:
    def mul(a, b):
        sign, unit = _Q_UNITS[a // 2, b // 2]
        if (a & 1) ^ (b & 1):
            sign = -sign
        return 2 * unit + (sign < 0)

    def inv(a):
        return a if a < 2 else a ^ 1

    names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    return GroupOracle(
        n=3,
        identity=0,
        mul=mul,
        inv=inv,
        valid=lambda x: x < 8,
        generators=[2, 4],
        name=spec.label(),
        encode=names.index,
        decode=names.__getitem__,
    )


def lehmer_rank(perm: Sequence[int]) -> int:
    t = len(perm)
    rank = 0
    remaining = list(range(t))
    for i, v in enumerate(perm):
        idx = remaining.index(v)
        rank += idx * math.factorial(t - 1 - i)
        remaining.pop(idx)
    return rank


def lehmer_unrank(rank: int, t: int) -> tuple[int, ...]:
    remaining = list(range(t))
    out = []
    for i in range(t):
        f = math.factorial(t - 1 - i)
        idx, rank = divmod(rank, f)
        out.append(remaining.pop(idx))
    return tuple(out)


def perm_from_cycles(t: int, *cycles: Sequence[int]) -> tuple[int, ...]:
    """Image tuple on ``0..t-1`` of a product of disjoint cycles (0-based)."""
    img = list(range(t))
    for cyc in cycles:
        for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
            img[a] = b
    return tuple(img)


def _symmetric(spec: GroupSpec) -> GroupOracle:
    t = _int_param(spec, "t", 1)
    if t > 7:
        raise BadSpec("symmetric(t) is limited to t <= 7 at desk scale")
    size = math.factorial(t)
    perms = [lehmer_unrank(r, t) for r in range(size)]
    rank = {p: r for r, p in enumerate(perms)}

    def mul(a, b):
        p, q = perms[a], perms[b]
        return rank[tuple(p[q[x]] for x in range(t))]

    def inv(a):
        p = perms[a]
        out = [0] * t
        for x, y in enumerate(p):
            out[y] = x
        return rank[tuple(out)]

    gens = []
    if t >= 2:
        gens.append(rank[perm_from_cycles(t, (0, 1))])
        long_cycle = rank[perm_from_cycles(t, tuple(range(t)))]
        if long_cycle not in gens:
            gens.append(long_cycle)
    return GroupOracle(
        n=_bitlen(size - 1),
        identity=0,
        mul=mul,
        inv=inv,
        valid=lambda x: x < size,
        generators=gens,
        name=spec.label(),
        encode=lambda p: rank[tuple(p)],
        decode=perms.__getitem__,
    )


def _unitriangular(spec: GroupSpec) -> GroupOracle:
    dim = _int_param(spec, "dim", 1)
    p = _int_param(spec, "p", 2)
    if not _is_prime(p):
        raise BadSpec(f"unitriangular needs a prime p, got {p}")
    pos = [(i, j) for i in range(dim) for j in range(i + 1, dim)]
    w = _bitlen(p - 1)
    nf = len(pos)
    mask = (1 << w) - 1

    def unpack(x):
        fields = [(x >> (w * (nf - 1 - f))) & mask for f in range(nf)]
        m = [[int(i == j) for j in range(dim)] for i in range(dim)]
        for (i, j), v in zip(pos, fields):
            m[i][j] = v
        return m

    def pack(m):
        x = 0
        for i, j in pos:
            x = (x << w) | (m[i][j] % p)
        return x

    def mul(a, b):
        A, B = unpack(a), unpack(b)
        return pack([[sum(A[i][k] * B[k][j] for k in range(dim)) % p for j in range(dim)] for i in range(dim)])

    def inv(a):
        # I + N with N nilpotent: inverse is sum_{s} (-N)^s
        A = unpack(a)
        N = [[(A[i][j] - (i == j)) % p for j in range(dim)] for i in range(dim)]
        acc = [[int(i == j) for j in range(dim)] for i in range(dim)]
        term = [row[:] for row in acc]
        for _ in range(dim):
            term = [[-sum(term[i][k] * N[k][j] for k in range(dim)) % p for j in range(dim)] for i in range(dim)]
            acc = [[(acc[i][j] + term[i][j]) % p for j in range(dim)] for i in range(dim)]
        return pack(acc)

    def valid(x):
        if nf == 0:
            return x == 0
        return all(((x >> (w * f)) & mask) < p for f in range(nf))

    gens = []
    for i in range(dim - 1):
        m = [[int(a == b) for b in range(dim)] for a in range(dim)]
        m[i][i + 1] = 1
        gens.append(pack(m))
    return GroupOracle(
        n=max(1, w * nf),
        identity=0,
        mul=mul,
        inv=inv,
        valid=valid,
        generators=gens,
        name=spec.label(),
        encode=pack,
        decode=unpack,
    )


def _direct_product(spec: GroupSpec) -> GroupOracle:
    factors = spec.params.get("factors")
    if not factors:
        raise BadSpec("direct_product needs factors")
    parts = [make_oracle(f) for f in factors]
    widths = [o.n for o in parts]
    shifts = [sum(widths[i + 1:]) for i in range(len(parts))]

    def split(x):
        return [(x >> s) & ((1 << w) - 1) for s, w in zip(shifts, widths)]

    def join(xs):
        return sum(x << s for x, s in zip(xs, shifts))

    def mul(a, b):
        return join([o._mul(x, y) for o, x, y in zip(parts, split(a), split(b))])

    def inv(a):
        return join([o._inv(x) for o, x in zip(parts, split(a))])

    def valid(x):
        return x < (1 << sum(widths)) and all(o.is_valid(y) for o, y in zip(parts, split(x)))

    identity = join([o.identity for o in parts])
    gens = []
    for idx, o in enumerate(parts):
        for g in o.generators:
            xs = [p.identity for p in parts]
            xs[idx] = g
            gens.append(join(xs))
    return GroupOracle(
        n=sum(widths),
        identity=identity,
        mul=mul,
        inv=inv,
        valid=valid,
        generators=gens,
        name=spec.label(),
        encode=lambda natives: join([o.encode(v) for o, v in zip(parts, natives)]),
        decode=lambda x: tuple(o.decode(y) for o, y in zip(parts, split(x))),
    )


def _table(spec: GroupSpec) -> GroupOracle:
    rows = spec.table
    if not rows:
        raise BadSpec("table family needs a non-empty 'table'")
    size = len(rows)
    if any(len(r) != size for r in rows):
        raise BadSpec("multiplication table must be square")
    if any(not (0 <= v < size) for r in rows for v in r):
        raise BadSpec("table entries must be element indices")
    ids = [e for e in range(size) if all(rows[e][x] == x and rows[x][e] == x for x in range(size))]
    if not ids:
        raise BadSpec("table has no identity element")
    e = ids[0]
    inverses = []
    for x in range(size):
        cands = [y for y in range(size) if rows[x][y] == e and rows[y][x] == e]
        if not cands:
            raise BadSpec(f"element {x} has no inverse")
        inverses.append(cands[0])
    for a in range(size):
        for b in range(size):
            ab = rows[a][b]
            for c in range(size):
                if rows[ab][c] != rows[a][rows[b][c]]:
                    raise BadSpec("table is not associative")
    # greedy generating set in index order
    gens: list[int] = []
    seen = {e}
    for x in range(size):
        if x in seen:
            continue
        gens.append(x)
        frontier = list(seen)
        seen = set(seen)
        while frontier:
            y = frontier.pop()
            for g in gens:
                for z in (rows[y][g], rows[g][y]):
                    if z not in seen:
                        seen.add(z)
                        frontier.append(z)
    return GroupOracle(
        n=_bitlen(size - 1),
        identity=e,
        mul=lambda a, b: rows[a][b],
        inv=inverses.__getitem__,
        valid=lambda x: x < size,
        generators=gens,
        name=spec.label(),
        encode=int,
    )


_FAMILIES = {
    "cyclic": _cyclic,
    "dihedral": _dihedral,
    "quaternion8": _quaternion8,
    "symmetric": _symmetric,
    "unitriangular": _unitriangular,
    "direct_product": _direct_product,
    "table": _table,
}


def make_oracle(spec: GroupSpec) -> GroupOracle:
    """Instantiate the oracle described by ``spec``.

    If the group spec lists explicit generators (hex), they replace the family's
    default generating set.
    """
    try:
        build = _FAMILIES[spec.family]
    except KeyError:
        raise BadSpec(f"unknown group family {spec.family!r}") from None
    oracle = build(spec)
    if spec.generators is not None:
        try:
            oracle.generators = tuple(oracle.from_hex(g) for g in spec.generators)
        except Exception as exc:
            raise BadSpec(f"bad generator literal: {exc}") from exc
    return oracle


def all_elements(oracle: GroupOracle) -> list[Encoding]:
    """Every valid encoding, by scanning the 2^n bitstrings (desk scale only)."""
    return [x for x in range(1 << oracle.n) if oracle.is_valid(x)]
