"""Subgroup lattices, normal subgroups and quotients."""

from __future__ import annotations

from typing import Iterable

from .group import CapExceeded, FiniteGroup, GroupError, GroupHom, Subgroup

DEFAULT_SUBGROUP_CAP = 200


def closure(g: FiniteGroup, gens: Iterable[int]) -> frozenset[int]:
    """Elements of the subgroup generated by ``gens``."""
    gens = [x for x in set(gens) if x != 0]
    t = g.table
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = t[x][s]
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def generated(g: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    return Subgroup(g, closure(g, gens), validate=False)


def subgroups_all(g: FiniteGroup, *, cap: int = DEFAULT_SUBGROUP_CAP) -> list[Subgroup]:
    """Every subgroup of ``g``, sorted by order then members.

    Works by joining cyclic subgroups until nothing new appears.
    """
    if g.order > cap:
        raise CapExceeded(f"subgroups_all supports order <= {cap}, got {g.order}")
    cyclic_by_gen: dict[frozenset[int], int] = {}
    for x in g.elements():
        c = closure(g, [x])
        cyclic_by_gen.setdefault(c, x)
    reps = list(cyclic_by_gen.items())
    found: dict[frozenset[int], list[int]] = {frozenset([0]): []}
    queue = [frozenset([0])]
    while queue:
        nxt = []
        for u in queue:
            gens = found[u]
            for c, x in reps:
                if c <= u:
                    continue
                v = closure(g, gens + [x])
                if v not in found:
                    found[v] = gens + [x]
                    nxt.append(v)
        queue = nxt
    subs = [Subgroup(g, s, validate=False) for s in found]
    subs.sort(key=lambda s: (s.order, s.members))
    return subs


def trivial_subgroup(g: FiniteGroup) -> Subgroup:
    return Subgroup(g, [0], validate=False)


def whole(g: FiniteGroup) -> Subgroup:
    return Subgroup(g, g.elements(), validate=False)


def center_subgroup(g: FiniteGroup) -> Subgroup:
    return Subgroup(g, g.center, validate=False)


def normal_subgroups(g: FiniteGroup, *, cap: int = DEFAULT_SUBGROUP_CAP) -> list[Subgroup]:
    return [s for s in subgroups_all(g, cap=cap) if s.is_normal_in()]


def right_cosets(g: FiniteGroup, n: Subgroup) -> list[tuple[int, ...]]:
    """Cosets N x ordered by their smallest element (so N itself is first)."""
    t = g.table
    seen: set[int] = set()
    cosets = []
    for x in g.elements():
        if x in seen:
            continue
        coset = tuple(sorted(t[m][x] for m in n.members))
        seen.update(coset)
        cosets.append(coset)
    return cosets


def quotient(g: FiniteGroup, n: Subgroup) -> tuple[FiniteGroup, GroupHom]:
    """``g / n`` with cosets as elements, and the projection homomorphism."""
    if n.parent is not g:
        raise GroupError("normal subgroup must belong to the group being divided")
    w = n.normality_witness()
    if w is not None:
        x, m = w
        raise GroupError(
            f"subgroup is not normal: {x} * {m} * {x}^-1 = {g.conj(x, m)} lies outside it"
        )
    cosets = right_cosets(g, n)
    which = [0] * g.order
    for i, c in enumerate(cosets):
        for x in c:
            which[x] = i
    t = g.table
    table = [[which[t[a[0]][b[0]]] for b in cosets] for a in cosets]
    q = FiniteGroup(table, name=f"{g.name}/N" if g.name else "", validate=False)
    return q, GroupHom(g, q, which, validate=False)


def intersect(a: Subgroup, b: Subgroup) -> Subgroup:
    return Subgroup(a.parent, set(a.members) & set(b.members), validate=False)


def product_set(a: Subgroup, b: Subgroup) -> frozenset[int]:
    t = a.parent.table
    return frozenset(t[x][y] for x in a.members for y in b.members)


def exact_factorizations(g: FiniteGroup, *, cap: int = DEFAULT_SUBGROUP_CAP) -> list[tuple[Subgroup, Subgroup]]:
    """Ordered pairs (H, K) with H n K trivial and HK = G."""
    subs = subgroups_all(g, cap=cap)
    out = []
    for h in subs:
        for k in subs:
            if h.order * k.order != g.order:
                continue
            if set(h.members) & set(k.members) == {0}:
                out.append((h, k))
    return out
