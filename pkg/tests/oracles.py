"""Brute-force reference computations that share no code with the package.

Each oracle works from raw tables or permutations and uses the most direct
method available, so agreement with the library is evidence rather than
an echo.
"""

from __future__ import annotations

import itertools
import math


def perm_compose(p, q):
    """p then q."""
    return tuple(q[p[i]] for i in range(len(p)))


def all_perms(n):
    return list(itertools.permutations(range(n)))


def is_closed_subset(table, subset):
    s = set(subset)
    if 0 not in s:
        return False
    return all(table[a][b] in s for a in s for b in s)


def subgroups_by_subsets(table):
    """Every subset containing 0 that is closed under the product (finite => subgroup)."""
    n = len(table)
    rest = list(range(1, n))
    out = []
    for r in range(len(rest) + 1):
        for combo in itertools.combinations(rest, r):
            s = (0,) + combo
            if is_closed_subset(table, s):
                out.append(tuple(sorted(s)))
    return out


def element_order(table, x):
    k, y = 1, x
    while y != 0:
        y = table[y][x]
        k += 1
    return k


def order_multiset(table):
    return sorted(element_order(table, x) for x in range(len(table)))


def center(table):
    n = len(table)
    return [z for z in range(n) if all(table[z][g] == table[g][z] for g in range(n))]


def sl2_count(p):
    return sum(1 for a, b, c, d in itertools.product(range(p), repeat=4) if (a * d - b * c) % p == 1)


def associative(table):
    n = len(table)
    return all(table[table[a][b]][c] == table[a][table[b][c]] for a in range(n) for b in range(n) for c in range(n))


def is_hom(t1, t2, f):
    n = len(t1)
    return all(f[t1[a][b]] == t2[f[a]][f[b]] for a in range(n) for b in range(n))


def brute_isomorphic(t1, t2):
    """Search all bijections fixing 0; only for orders up to about 8."""
    n = len(t1)
    if n != len(t2):
        return False
    for rest in itertools.permutations(range(1, n)):
        f = (0,) + rest
        if is_hom(t1, t2, f):
            return True
    return False


def gamma_square_scan(table, H, K):
    """All (h, k, h', k') with h k' = k h', by scanning every quadruple."""
    return [
        (h, k, h2, k2)
        for h in H
        for k in K
        for h2 in H
        for k2 in K
        if table[h][k2] == table[k][h2]
    ]


def exp_series(m, terms=60):
    """Taylor series of the matrix exponential in plain Python floats."""
    n = len(m)
    out = [[float(i == j) for j in range(n)] for i in range(n)]
    term = [row[:] for row in out]
    for k in range(1, terms):
        term = [[sum(term[i][r] * m[r][j] for r in range(n)) / k for j in range(n)] for i in range(n)]
        out = [[out[i][j] + term[i][j] for j in range(n)] for i in range(n)]
    return out


def cosh_sinh(t):
    return math.cosh(t), math.sinh(t)


def slim_square_sets(ht, vt):
    """Every set of quadruples (top, left, bottom, right) that is a slim double group.

    Brute force over all subsets of the non-identity quadruples; the set must
    contain the identity squares and be closed under both compositions and
    both inverses.  Only feasible when |H|^2 |V|^2 is about 16.
    """
    nh, nv = len(ht), len(vt)
    hinv = [next(y for y in range(nh) if ht[x][y] == 0) for x in range(nh)]
    vinv = [next(y for y in range(nv) if vt[x][y] == 0) for x in range(nv)]
    quads = list(itertools.product(range(nh), range(nv), range(nh), range(nv)))
    forced = {(h, 0, h, 0) for h in range(nh)} | {(0, k, 0, k) for k in range(nv)}
    free = [q for q in quads if q not in forced]
    out = []
    for mask in range(1 << len(free)):
        s = set(forced) | {q for i, q in enumerate(free) if mask >> i & 1}
        ok = True
        for x in s:
            if (hinv[x[0]], x[3], hinv[x[2]], x[1]) not in s or (x[2], vinv[x[1]], x[0], vinv[x[3]]) not in s:
                ok = False
                break
            for y in s:
                if x[3] == y[1] and (ht[x[0]][y[0]], x[1], ht[x[2]][y[2]], y[3]) not in s:
                    ok = False
                    break
                if x[2] == y[0] and (x[0], vt[x[1]][y[1]], y[2], vt[x[3]][y[3]]) not in s:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(frozenset(s))
    return out


def exclusive_square_set(s):
    """No square with identity bottom and right other than the double identity."""
    return all(not (q[2] == 0 and q[3] == 0) or q == (0, 0, 0, 0) for q in s)


def maximal_square_set(s, nh, nv):
    return {(q[2], q[3]) for q in s} == set(itertools.product(range(nh), range(nv)))
