"""Named desk-scale groups and labelled test instances.

Ground truth is never stored here; callers compute it by closure.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import blackbox as bb
from .blackbox import Encoding, GroupOracle, GroupSpec
from .classical import closure


def order_corpus() -> dict[str, GroupSpec]:
    """Groups whose orders are checked end to end."""
    groups = {f"Z{q}": bb.cyclic(q) for q in range(2, 17)}
    groups.update(
        {
            "Z6xZ4": bb.direct_product(bb.cyclic(6), bb.cyclic(4)),
            "D3": bb.dihedral(3),
            "D4": bb.dihedral(4),
            "D6": bb.dihedral(6),
            "Q8": bb.quaternion8(),
            "S3": bb.symmetric(3),
            "S4": bb.symmetric(4),
            "UT(3,2)": bb.unitriangular(3, 2),
            "UT(3,3)": bb.unitriangular(3, 3),
        }
    )
    return groups


_ORACLES: dict[str, GroupOracle] = {}


def oracle(name: str) -> GroupOracle:
    """Shared oracle for a named group (created once per process)."""
    if name not in _ORACLES:
        specs = order_corpus()
        specs["S5"] = bb.symmetric(5)
        _ORACLES[name] = bb.make_oracle(specs[name])
    return _ORACLES[name]


def loaded_oracles() -> dict[str, GroupOracle]:
    return dict(_ORACLES)


def perm(name: str, *cycles) -> Encoding:
    o = oracle(name)
    t = int(name[1:])
    return o.encode(bb.perm_from_cycles(t, *cycles))


def dih(name: str, i: int, e: int = 0) -> Encoding:
    return oracle(name).encode((i, e))


def quat(label: str) -> Encoding:
    return oracle("Q8").encode(label)


# UT(3,3): strictly upper entries (0,1), (0,2), (1,2) in 2-bit fields
E01, E02, E12 = 16, 4, 1


@dataclass(frozen=True)
class QuotientCase:
    """G = <gens>, H = <h_gens> normal in G with G/H abelian."""

    label: str
    group: str
    gens: tuple[Encoding, ...]
    h_gens: tuple[Encoding, ...]


def quotient_cases() -> list[QuotientCase]:
    s3 = (perm("S3", (0, 1)), perm("S3", (0, 1, 2)))
    a4 = (perm("S4", (0, 1, 2)), perm("S4", (0, 1, 3)))
    v4 = (perm("S4", (0, 1), (2, 3)), perm("S4", (0, 2), (1, 3)))
    s4 = oracle("S4").generators
    cases = [
        QuotientCase("S3/A3", "S3", s3, (perm("S3", (0, 1, 2)),)),
        QuotientCase("D4/center", "D4", oracle("D4").generators, (dih("D4", 2),)),
        QuotientCase("Z6/1", "Z6", (1,), ()),
        QuotientCase("S3/S3", "S3", s3, s3),
        QuotientCase("S4/A4", "S4", tuple(s4), a4),
        QuotientCase("A4/V4", "S4", a4, v4),
        QuotientCase("V4/1", "S4", v4, ()),
        QuotientCase("D3/rot", "D3", oracle("D3").generators, (dih("D3", 1),)),
        QuotientCase("D4/rot", "D4", oracle("D4").generators, (dih("D4", 1),)),
        QuotientCase("D6/<r^2>", "D6", oracle("D6").generators, (dih("D6", 2),)),
        QuotientCase("D6/rot", "D6", oracle("D6").generators, (dih("D6", 1),)),
        QuotientCase("Q8/center", "Q8", oracle("Q8").generators, (quat("-1"),)),
        QuotientCase("Q8/<i>", "Q8", oracle("Q8").generators, (quat("i"),)),
        QuotientCase("UT(3,2)/center", "UT(3,2)", oracle("UT(3,2)").generators, (2,)),
        QuotientCase("UT(3,3)/center", "UT(3,3)", (E01, E12), (E02,)),
        QuotientCase("Z6xZ4/1", "Z6xZ4", oracle("Z6xZ4").generators, ()),
        QuotientCase("Z6xZ4/<(3,2)>", "Z6xZ4", oracle("Z6xZ4").generators, (oracle("Z6xZ4").encode((3, 2)),)),
        QuotientCase("Z16/<4>", "Z16", (1,), (4,)),
        QuotientCase("Z12/1", "Z12", (1,), ()),
    ]
    return cases


@dataclass(frozen=True)
class DecisionCase:
    """One labelled instance for the reductions.

    ``kind`` is member / subgroup / equal / normal.  For member, ``first`` is
    the generating set and ``second`` holds the single element h.  For
    subgroup and normal, ``first`` generates H and ``second`` generates G.
    For equal, the two sets generate the groups being compared.
    """

    label: str
    kind: str
    group: str
    first: tuple[Encoding, ...]
    second: tuple[Encoding, ...]


def decision_cases() -> list[DecisionCase]:
    p3 = lambda *c: perm("S3", *c)  # noqa: E731
    p4 = lambda *c: perm("S4", *c)  # noqa: E731
    s3 = (p3((0, 1)), p3((0, 2)))
    a3 = (p3((0, 1, 2)),)
    a4 = (p4((0, 1, 2)), p4((0, 1, 3)))
    v4 = (p4((0, 1), (2, 3)), p4((0, 2), (1, 3)))
    s4 = (p4((0, 1)), p4((0, 1, 2, 3)))
    r, s = dih("D4", 1), dih("D4", 0, 1)
    ut = (E01, E12)
    zz = oracle("Z6xZ4")
    D = DecisionCase
    return [
        D("member: identity in S3", "member", "S3", s3, (0,)),
        D("member: (012) in <(01),(02)>", "member", "S3", s3, a3),
        D("member: reflection in <rotation>", "member", "D4", (r,), (s,)),
        D("member: r^2 in <r>", "member", "D4", (r,), (dih("D4", 2),)),
        D("member: 3-cycle in S4", "member", "S4", s4, (p4((0, 1, 2)),)),
        D("member: transposition in A4", "member", "S4", a4, (p4((0, 1)),)),
        D("member: 8 in <4> < Z12", "member", "Z12", (4,), (8,)),
        D("member: 6 in <4> < Z12", "member", "Z12", (4,), (6,)),
        D("member: j in <i>", "member", "Q8", (quat("i"),), (quat("j"),)),
        D("member: k in <i, j>", "member", "Q8", (quat("i"), quat("j")), (quat("k"),)),
        D("member: E12 in <E01>", "member", "UT(3,3)", (E01,), (E12,)),
        D("member: (3,0) in <(1,0)>", "member", "Z6xZ4", (zz.encode((1, 0)),), (zz.encode((3, 0)),)),
        D("member: (01)(23) in V4", "member", "S4", v4, (p4((0, 1), (2, 3)),)),
        D("member: (01) in V4", "member", "S4", v4, (p4((0, 1)),)),
        D("member: (01) with 5-cycle is S5", "member", "S5", (perm("S5", (0, 1, 2, 3, 4)),), (perm("S5", (0, 1)),)),
        D("subgroup: empty in S3", "subgroup", "S3", (), s3),
        D("subgroup: A3 in S3", "subgroup", "S3", a3, s3),
        D("subgroup: <(01)> in <(012)>", "subgroup", "S3", (p3((0, 1)),), a3),
        D("subgroup: V4 in A4", "subgroup", "S4", v4, a4),
        D("subgroup: A4 in V4", "subgroup", "S4", a4, v4),
        D("subgroup: <r^2> in <s>", "subgroup", "D4", (dih("D4", 2),), (s,)),
        D("subgroup: <r^2> in <r>", "subgroup", "D4", (dih("D4", 2),), (r,)),
        D("subgroup: <-1> in <j>", "subgroup", "Q8", (quat("-1"),), (quat("j"),)),
        D("equal: identical S3 lists", "equal", "S3", s3, s3),
        D("equal: two S3 generating sets", "equal", "S3", s3, (p3((0, 1, 2)), p3((0, 1)))),
        D("equal: <(01)> vs <(02)>", "equal", "S3", (p3((0, 1)),), (p3((0, 2)),)),
        D("equal: <r, s> vs <rs, s>", "equal", "D4", (r, s), (dih("D4", 1, 1), s)),
        D("equal: <4> vs <8> in Z12", "equal", "Z12", (4,), (8,)),
        D("equal: <i> vs <-i>", "equal", "Q8", (quat("i"),), (quat("-i"),)),
        D("equal: <i> vs <j>", "equal", "Q8", (quat("i"),), (quat("j"),)),
        D("normal: S3 in S3", "normal", "S3", s3, s3),
        D("normal: A3 in S3", "normal", "S3", a3, s3),
        D("normal: <(01)> in S3", "normal", "S3", (p3((0, 1)),), s3),
        D("normal: V4 in S4", "normal", "S4", v4, s4),
        D("normal: center of D4", "normal", "D4", (dih("D4", 2),), (r, s)),
        D("normal: <s> in D4", "normal", "D4", (s,), (r, s)),
        D("normal: <i> in Q8", "normal", "Q8", (quat("i"),), (quat("i"), quat("j"))),
        D("normal: center of UT(3,3)", "normal", "UT(3,3)", (E02,), ut),
        D("normal: <E01> in UT(3,3)", "normal", "UT(3,3)", (E01,), ut),
    ]


def decision_truth(case: DecisionCase) -> bool:
    """Closure ground truth for a decision case."""
    o = oracle(case.group)
    if case.kind == "member":
        return case.second[0] in closure(o, case.first)
    A, B = closure(o, case.first), closure(o, case.second)
    if case.kind == "subgroup":
        return A <= B
    if case.kind == "equal":
        return A == B
    if case.kind == "normal":
        return all(o.multiply(o.multiply(o.inverse(g), h), g) in A for g in B for h in A)
    raise ValueError(case.kind)
