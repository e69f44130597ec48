"""Witness-producing isomorphism search for small groups."""

from __future__ import annotations

from collections import Counter
from typing import Iterator

from .group import FiniteGroup, GroupHom

DEFAULT_ISO_CAP = 60


def generating_set(g: FiniteGroup) -> list[int]:
    """A short generating list, preferring elements of large order."""
    from .subgroups import closure

    gens: list[int] = []
    current = frozenset([0])
    for x in sorted(g.elements(), key=lambda x: (-g.element_order(x), x)):
        if x in current:
            continue
        gens.append(x)
        current = closure(g, gens)
        if len(current) == g.order:
            break
    return gens


def _invariants(g: FiniteGroup):
    return (g.order, g.order_profile, len(g.center), g.is_abelian)


def _extend(g1: FiniteGroup, g2: FiniteGroup, gens: list[int], images: list[int]) -> list[int] | None:
    """Extend generator images to a homomorphism table, or None on conflict."""
    t1, t2 = g1.table, g2.table
    f = [-1] * g1.order
    f[0] = 0
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            fx = f[x]
            for s, fs in zip(gens, images):
                y = t1[x][s]
                fy = t2[fx][fs]
                if f[y] == -1:
                    f[y] = fy
                    nxt.append(y)
                elif f[y] != fy:
                    return None
        frontier = nxt
    return f


def homomorphisms(g1: FiniteGroup, g2: FiniteGroup, *, injective: bool = False) -> Iterator[GroupHom]:
    """All homomorphisms g1 -> g2, by backtracking over generator images."""
    gens = generating_set(g1)
    o1 = g1.element_orders
    o2 = g2.element_orders
    cands = [[y for y in g2.elements() if o1[s] % o2[y] == 0 and (not injective or o2[y] == o1[s])] for s in gens]
    t1, t2 = g1.table, g2.table
    images: list[int] = []

    def rec(i: int):
        if i == len(gens):
            f = _extend(g1, g2, gens, images)
            if f is None:
                return
            if injective and len(set(f)) != g1.order:
                return
            yield GroupHom(g1, g2, f, validate=False)
            return
        for y in cands[i]:
            ok = True
            for j in range(i):
                # orders of pairwise products must be compatible
                a = o1[t1[gens[j]][gens[i]]]
                b = o2[t2[images[j]][y]]
                if a % b or (injective and a != b):
                    ok = False
                    break
            if not ok:
                continue
            images.append(y)
            yield from rec(i + 1)
            images.pop()

    yield from rec(0)


def isomorphisms(g1: FiniteGroup, g2: FiniteGroup) -> Iterator[GroupHom]:
    if _invariants(g1) != _invariants(g2):
        return
    for f in homomorphisms(g1, g2, injective=True):
        yield f


def is_isomorphic(g1: FiniteGroup, g2: FiniteGroup, *, cap: int = DEFAULT_ISO_CAP) -> GroupHom | None:
    """An isomorphism g1 -> g2 if one exists, else None.

    The identity map is returned when both arguments are the same object.
    """
    if g1 is g2:
        return GroupHom.identity(g1)
    if max(g1.order, g2.order) > cap:
        from .group import CapExceeded

        raise CapExceeded(f"is_isomorphic supports order <= {cap}")
    return next(isomorphisms(g1, g2), None)


def automorphisms(g: FiniteGroup) -> list[GroupHom]:
    return list(isomorphisms(g, g))


def order_multiset(g: FiniteGroup) -> Counter:
    return Counter(g.element_orders)
