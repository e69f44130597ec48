"""Constructors for the concrete group families used throughout the package."""

from __future__ import annotations

import itertools
from math import factorial
from typing import Sequence

import numpy as np

from .group import CapExceeded, FiniteGroup, GroupError, GroupHom, Subgroup

DEFAULT_GENERATION_CAP = 10000
MAX_SYMMETRIC_DEGREE = 6
SL2_PRIMES = (2, 3, 5, 7, 11, 13)


def _perm_table(perms: np.ndarray) -> np.ndarray:
    """Cayley table of a list of permutations closed under composition.

    ``perms[i]`` is a permutation as an array of images; the product of
    ``i`` then ``j`` sends ``x`` to ``perms[j][perms[i][x]]``.
    """
    perms = np.ascontiguousarray(perms, dtype=np.int64)
    m, n = perms.shape
    if n == 0:
        return np.zeros((m, m), dtype=np.int64)
    void = np.dtype((np.void, perms.dtype.itemsize * n))
    keys = perms.view(void).ravel()
    order = np.argsort(keys)
    sorted_keys = keys[order]
    table = np.empty((m, m), dtype=np.int64)
    for i in range(m):
        composed = np.ascontiguousarray(perms[:, perms[i]])  # row j: perms[j][perms[i][x]]
        pos = np.searchsorted(sorted_keys, composed.view(void).ravel())
        table[i] = order[pos]
    return table


def group_from_generators(
    perms: Sequence[Sequence[int]],
    n: int | None = None,
    *,
    cap: int = DEFAULT_GENERATION_CAP,
    name: str = "",
) -> FiniteGroup:
    """Close a set of permutations of ``{0..n-1}`` under composition.

    Element 0 of the result is the identity permutation.
    """
    gens = [tuple(int(x) for x in p) for p in perms]
    if n is None:
        n = len(gens[0]) if gens else 0
    for p in gens:
        if len(p) != n or sorted(p) != list(range(n)):
            raise GroupError(f"{p} is not a permutation of {n} points")
    ident = tuple(range(n))
    seen = {ident: 0}
    elems = [ident]
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple(g[x[i]] for i in range(n))
                if y not in seen:
                    if len(elems) >= cap:
                        raise CapExceeded(f"generation cap exceeded ({cap} elements)")
                    seen[y] = len(elems)
                    elems.append(y)
                    nxt.append(y)
        frontier = nxt
    arr = np.array(elems, dtype=np.int64).reshape(len(elems), n)
    return FiniteGroup(_perm_table(arr), [str(e) for e in elems], name=name, validate=False)


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupError("cyclic(n) needs n >= 1")
    idx = np.arange(n)
    return FiniteGroup((idx[:, None] + idx[None, :]) % n, name=f"C{n}", validate=False)


def dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order 2n; element ``i + n*j`` is r^i s^j."""
    if n < 1:
        raise GroupError("dihedral(n) needs n >= 1")
    table = np.empty((2 * n, 2 * n), dtype=np.int64)
    labels = []
    for j in range(2):
        for i in range(n):
            labels.append(f"r{i}" + ("s" if j else ""))
    for j in range(2):
        for i in range(n):
            for l in range(2):
                for k in range(n):
                    r = (i + (k if j == 0 else -k)) % n
                    table[i + n * j, k + n * l] = r + n * ((j + l) % 2)
    return FiniteGroup(table, labels, name=f"D{2 * n}", validate=False)


def dicyclic(n: int) -> FiniteGroup:
    """Dicyclic group of order 4n in normal form a^i b^j.

    Relations: a^(2n) = 1, b^2 = a^n, b a b^-1 = a^-1.
    """
    if n < 1:
        raise GroupError("dicyclic(n) needs n >= 1")
    m = 2 * n
    size = 2 * m
    table = np.empty((size, size), dtype=np.int64)
    for j in range(2):
        for i in range(m):
            for l in range(2):
                for k in range(m):
                    if j == 0:
                        res = ((i + k) % m, l)
                    elif l == 0:
                        res = ((i - k) % m, 1)
                    else:
                        res = ((i - k + n) % m, 0)
                    table[i + m * j, k + m * l] = res[0] + m * res[1]
    labels = [f"a{i}" + ("b" if j else "") for j in range(2) for i in range(m)]
    return FiniteGroup(table, labels, name=f"Dic{n}", validate=False)


def _all_perms(n: int, even_only: bool = False) -> np.ndarray:
    perms = []
    for p in itertools.permutations(range(n)):
        if even_only:
            inversions = sum(1 for a in range(n) for b in range(a + 1, n) if p[a] > p[b])
            if inversions % 2:
                continue
        perms.append(p)
    return np.array(perms, dtype=np.int64).reshape(len(perms), n)


def symmetric(n: int) -> FiniteGroup:
    if not 1 <= n <= MAX_SYMMETRIC_DEGREE:
        raise GroupError(f"symmetric(n) supports 1 <= n <= {MAX_SYMMETRIC_DEGREE}")
    perms = _all_perms(n)
    return FiniteGroup(_perm_table(perms), [str(tuple(p)) for p in perms.tolist()], name=f"S{n}", validate=False)


def alternating(n: int) -> FiniteGroup:
    if not 1 <= n <= MAX_SYMMETRIC_DEGREE:
        raise GroupError(f"alternating(n) supports 1 <= n <= {MAX_SYMMETRIC_DEGREE}")
    perms = _all_perms(n, even_only=True)
    return FiniteGroup(_perm_table(perms), [str(tuple(p)) for p in perms.tolist()], name=f"A{n}", validate=False)


def sl2_matrices(p: int) -> list[tuple[int, int, int, int]]:
    """All (a, b, c, d) over F_p with ad - bc = 1, identity first."""
    mats = [
        m
        for m in itertools.product(range(p), repeat=4)
        if (m[0] * m[3] - m[1] * m[2]) % p == 1
    ]
    mats.sort(key=lambda m: m != (1, 0, 0, 1))
    return mats


def sl2(p: int) -> FiniteGroup:
    """SL(2, p) as 2x2 determinant-one matrices over the prime field."""
    if p not in SL2_PRIMES:
        raise GroupError(f"sl2(p) supports primes {SL2_PRIMES}")
    mats = np.array(sl2_matrices(p), dtype=np.int64)
    a, b, c, d = mats.T
    code = np.full(p**4, -1, dtype=np.int64)
    code[((a * p + b) * p + c) * p + d] = np.arange(len(mats))
    A, B, C, D = (v[:, None] for v in (a, b, c, d))
    a2, b2, c2, d2 = (v[None, :] for v in (a, b, c, d))
    pa = (A * a2 + B * c2) % p
    pb = (A * b2 + B * d2) % p
    pc = (C * a2 + D * c2) % p
    pd = (C * b2 + D * d2) % p
    table = code[((pa * p + pb) * p + pc) * p + pd]
    labels = [f"[[{m[0]},{m[1]}],[{m[2]},{m[3]}]]" for m in mats.tolist()]
    return FiniteGroup(table, labels, name=f"SL(2,{p})", validate=False)


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    """g x h with element ``x * |h| + y`` for the pair (x, y)."""
    m = h.order
    gi = np.repeat(np.arange(g.order), m)
    hi = np.tile(np.arange(m), g.order)
    table = g.mul[gi[:, None], gi[None, :]] * m + h.mul[hi[:, None], hi[None, :]]
    labels = [f"({g.label(x)},{h.label(y)})" for x in range(g.order) for y in range(m)]
    name = f"{g.name or 'G'}x{h.name or 'H'}"
    return FiniteGroup(table, labels, name=name, validate=False, factors=(g, h))


def product_pair(p: FiniteGroup, x: int) -> tuple[int, int]:
    m = p.factors[1].order
    return divmod(x, m)


def product_index(p: FiniteGroup, a: int, b: int) -> int:
    return a * p.factors[1].order + b


def semidirect_product(
    normal: FiniteGroup,
    acting: FiniteGroup,
    action: Sequence[Sequence[int]],
    *,
    name: str = "",
) -> FiniteGroup:
    """normal x| acting, element ``n + |normal| * q`` for the pair (n, q).

    ``action[q]`` is an automorphism of ``normal`` given by its image table,
    with ``action[q1 q2] = action[q1] o action[q2]`` (apply q2 first).
    Multiplication: (n1, q1)(n2, q2) = (n1 * action[q1](n2), q1 q2).
    """
    act = np.asarray(action, dtype=np.int64)
    N, Q = normal.order, acting.order
    for q in range(Q):
        GroupHom(normal, normal, act[q])
    for q1 in range(Q):
        for q2 in range(Q):
            if not np.array_equal(act[acting.table[q1][q2]], act[q1][act[q2]]):
                raise GroupError(f"action is not a homomorphism at ({q1}, {q2})")
    ni = np.tile(np.arange(N), Q)
    qi = np.repeat(np.arange(Q), N)
    twisted = act[qi[:, None], ni[None, :]]
    table = normal.mul[ni[:, None], twisted] + N * acting.mul[qi[:, None], qi[None, :]]
    return FiniteGroup(table, name=name or f"{normal.name}:{acting.name}", validate=False)


def z3_semidirect_klein() -> tuple[FiniteGroup, Subgroup, Subgroup, Subgroup]:
    """Z3 x| (Z2 x Z2) where the first Z2 inverts Z3 and the second acts trivially.

    Returns the group with its two Z2 factors and the normal Z3.
    """
    z3 = cyclic(3)
    v4 = direct_product(cyclic(2), cyclic(2))
    inversion = [0, 2, 1]
    ident = [0, 1, 2]
    action = [inversion if product_pair(v4, q)[0] else ident for q in range(4)]
    g = semidirect_product(z3, v4, action, name="C3:(C2xC2)")
    first = Subgroup(g, [0, 3 * product_index(v4, 1, 0)])
    second = Subgroup(g, [0, 3 * product_index(v4, 0, 1)])
    normal = Subgroup(g, [0, 1, 2])
    return g, first, second, normal


def build(name: str, *args: int) -> FiniteGroup:
    """Look up a builder by name, e.g. ``build("dihedral", 4)``."""
    builders = {
        "cyclic": cyclic,
        "dihedral": dihedral,
        "dicyclic": dicyclic,
        "symmetric": symmetric,
        "alternating": alternating,
        "sl2": sl2,
    }
    if name == "z3_semidirect_klein":
        return z3_semidirect_klein()[0]
    if name not in builders:
        raise GroupError(f"unknown group family {name!r}")
    return builders[name](*args)


def expected_order(name: str, n: int) -> int:
    return {
        "cyclic": n,
        "dihedral": 2 * n,
        "dicyclic": 4 * n,
        "symmetric": factorial(n),
        "alternating": max(1, factorial(n) // 2),
        "sl2": n * (n * n - 1),
    }[name]
