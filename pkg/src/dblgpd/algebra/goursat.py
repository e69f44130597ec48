"""Subgroups of direct products via Goursat quintuples (A, A0, B, B0, theta)."""

from __future__ import annotations

from dataclasses import dataclass

from .builders import direct_product, product_index, product_pair
from .group import CapExceeded, FiniteGroup, GroupError, GroupHom, Subgroup
from .iso import isomorphisms
from .subgroups import quotient, subgroups_all

GOURSAT_CAP = 4096


@dataclass(eq=False)
class GoursatQuintuple:
    """theta identifies A/A0 with B/B0; ``proj_a``/``proj_b`` map A, B onto the quotients."""

    A: Subgroup
    A0: Subgroup
    B: Subgroup
    B0: Subgroup
    theta: GroupHom
    proj_a: dict[int, int]
    proj_b: dict[int, int]

    def key(self) -> tuple:
        return (self.A.members, self.A0.members, self.B.members, self.B0.members, self.theta.map)

    def __eq__(self, other) -> bool:
        return isinstance(other, GoursatQuintuple) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def to_dict(self) -> dict:
        return {
            "A": list(self.A.members),
            "A0": list(self.A0.members),
            "B": list(self.B.members),
            "B0": list(self.B0.members),
            "theta": list(self.theta.map),
        }


def _relative_quotient(a: Subgroup, a0: Subgroup) -> tuple[FiniteGroup, dict[int, int]]:
    ga, incl = a.as_group()
    pos = {x: i for i, x in enumerate(incl.map)}
    n = Subgroup(ga, [pos[x] for x in a0.members], validate=False)
    q, proj = quotient(ga, n)
    return q, {x: proj.map[pos[x]] for x in a.members}


def subgroup_from_quintuple(p: FiniteGroup, q: GoursatQuintuple) -> Subgroup:
    """{(a, b) : theta(a A0) = b B0} inside the product ``p``."""
    members = [
        product_index(p, a, b)
        for a in q.A.members
        for b in q.B.members
        if q.theta.map[q.proj_a[a]] == q.proj_b[b]
    ]
    return Subgroup(p, members, validate=False)


def quintuple_from_subgroup(s: Subgroup) -> GoursatQuintuple:
    """Read off the Goursat data of a subgroup of a direct product."""
    p = s.parent
    if p.factors is None:
        raise GroupError("subgroup must live in a group built by direct_product")
    h, k = p.factors
    pairs = [product_pair(p, x) for x in s.members]
    a = Subgroup(h, {x for x, _ in pairs}, validate=False)
    b = Subgroup(k, {y for _, y in pairs}, validate=False)
    a0 = Subgroup(h, {x for x, y in pairs if y == 0}, validate=False)
    b0 = Subgroup(k, {y for x, y in pairs if x == 0}, validate=False)
    qa, proj_a = _relative_quotient(a, a0)
    qb, proj_b = _relative_quotient(b, b0)
    theta = [0] * qa.order
    for x, y in pairs:
        theta[proj_a[x]] = proj_b[y]
    return GoursatQuintuple(a, a0, b, b0, GroupHom(qa, qb, theta), proj_a, proj_b)


def _normal_in(sub: Subgroup, subs: list[Subgroup]) -> list[Subgroup]:
    return [n for n in subs if n.issubset(sub) and n.is_normal_in(sub)]


def goursat_subgroups(
    h: FiniteGroup, k: FiniteGroup, *, cap: int = GOURSAT_CAP
) -> list[tuple[Subgroup, GoursatQuintuple]]:
    """Every subgroup of h x k paired with its quintuple, built from the factors."""
    if h.order * k.order > cap:
        raise CapExceeded(f"goursat_subgroups supports |H||K| <= {cap}")
    p = direct_product(h, k)
    subs_h = subgroups_all(h, cap=cap)
    subs_k = subgroups_all(k, cap=cap)
    sections_h = [(a, a0) + _relative_quotient(a, a0) for a in subs_h for a0 in _normal_in(a, subs_h)]
    sections_k = [(b, b0) + _relative_quotient(b, b0) for b in subs_k for b0 in _normal_in(b, subs_k)]
    out = []
    for a, a0, qa, pa in sections_h:
        for b, b0, qb, pb in sections_k:
            if qa.order != qb.order:
                continue
            for theta in isomorphisms(qa, qb):
                quint = GoursatQuintuple(a, a0, b, b0, theta, pa, pb)
                out.append((subgroup_from_quintuple(p, quint), quint))
    return out
