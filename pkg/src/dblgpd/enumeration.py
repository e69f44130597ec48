"""Exhaustive search for double groups over fixed boundary groups.

Slim double groups with boundary groups H and V are the same thing as sets
of quadruples (top, left, bottom, right) in H x V x H x V that contain the
identity squares and are closed under both compositions and both inverses.
The search grows such sets one quadruple at a time, keeping one set per
orbit of Aut(H) x Aut(V).  Exclusivity can only be lost by adding squares,
so non-exclusive sets are pruned when exclusivity is requested.

With a nontrivial core A every square fiber is an A-torsor.  After fixing a
base square per realized boundary, squares are pairs (b, a) and

    (b, a) across (b', a') = (b b', a + alpha_top(b)(a') + ch(b, b'))
    (b, a) down   (b', a') = (b b', a + beta_left(b)(a') + cv(b, b'))

with alpha, beta actions of H, V on A.  Every candidate is run through
``verify`` before it is kept.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

from .algebra.group import CapExceeded, FiniteGroup
from .algebra.iso import automorphisms, homomorphisms
from .double import (
    DoubleGroupoid,
    double_group_isomorphism,
    is_exclusive,
    is_maximal,
    is_slim,
    verify,
)
from .groupoid import FiniteGroupoid

Quad = tuple[int, int, int, int]


@dataclass
class EnumerationTask:
    horizontal: FiniteGroup
    vertical: FiniteGroup
    core: FiniteGroup
    require_slim: bool = False
    require_exclusive: bool = False
    require_maximal: bool = False
    max_squares: int = 4096
    max_candidates: int = 1 << 20
    time_budget: float = 60.0
    max_boundary_order: int = 6

    def __post_init__(self):
        if min(self.max_squares, self.max_candidates) <= 0 or self.time_budget <= 0:
            raise ValueError("caps must be positive")
        if max(self.horizontal.order, self.vertical.order) > self.max_boundary_order:
            raise CapExceeded(f"boundary groups above order {self.max_boundary_order} need an explicit override")
        if self.require_slim and self.core.order != 1:
            raise ValueError("a slim double group has trivial core; drop require_slim or the core")


@dataclass
class EnumerationResult:
    classes: list[DoubleGroupoid]
    raw_count: int
    stats: dict = field(default_factory=dict)
    incomplete: bool = False

    def to_dict(self, *, include_tables: bool = True) -> dict:
        d = {
            "classes": len(self.classes),
            "raw_count": self.raw_count,
            "incomplete": self.incomplete,
            "stats": self.stats,
            "class_sizes": [dg.squares for dg in self.classes],
        }
        if include_tables:
            d["double_groups"] = [dg.to_dict() for dg in self.classes]
        return d


class _Budget:
    def __init__(self, task: EnumerationTask):
        self.task = task
        self.start = time.monotonic()
        self.candidates = 0
        self.pruned = 0
        self.exhausted = False

    def tick(self) -> bool:
        self.candidates += 1
        if self.candidates > self.task.max_candidates or time.monotonic() - self.start > self.task.time_budget:
            self.exhausted = True
        return not self.exhausted


# -- slim frames -----------------------------------------------------------


class _SlimSpace:
    def __init__(self, H: FiniteGroup, V: FiniteGroup):
        self.H, self.V = H, V
        self.quads: list[Quad] = list(itertools.product(H.elements(), V.elements(), H.elements(), V.elements()))
        self.autos = [(a.map, b.map) for a in automorphisms(H) for b in automorphisms(V)]
        self.base = self.close({(h, 0, h, 0) for h in H.elements()} | {(0, k, 0, k) for k in V.elements()})

    def close(self, seed: set[Quad]) -> frozenset[Quad]:
        th, tv = self.H.table, self.V.table
        ih, iv = self.H.inverse, self.V.inverse
        s = set(seed)
        frontier = list(s)
        while frontier:
            new = []
            for x in frontier:
                new.append((ih[x[0]], x[3], ih[x[2]], x[1]))
                new.append((x[2], iv[x[1]], x[0], iv[x[3]]))
                for y in list(s):
                    for a, b in ((x, y), (y, x)):
                        if a[3] == b[1]:
                            new.append((th[a[0]][b[0]], a[1], th[a[2]][b[2]], b[3]))
                        if a[2] == b[0]:
                            new.append((a[0], tv[a[1]][b[1]], b[2], tv[a[3]][b[3]]))
            frontier = [q for q in set(new) if q not in s]
            s.update(frontier)
        return frozenset(s)

    def canonical(self, s: frozenset[Quad]) -> tuple[Quad, ...]:
        return min(tuple(sorted((fh[t], fv[l], fh[b], fv[r]) for t, l, b, r in s)) for fh, fv in self.autos)


def _exclusive_set(s) -> bool:
    return all(t == 0 and l == 0 for t, l, b, r in s if b == 0 and r == 0)


def _maximal_set(s, H: FiniteGroup, V: FiniteGroup) -> bool:
    return {(b, r) for _, _, b, r in s} == {(h, k) for h in H.elements() for k in V.elements()}


def enumerate_slim_frames(task: EnumerationTask, budget: _Budget) -> list[frozenset[Quad]]:
    """One representative per Aut(H) x Aut(V) orbit of closed quadruple sets."""
    space = _SlimSpace(task.horizontal, task.vertical)
    prune = task.require_exclusive
    seen = {space.canonical(space.base)}
    found = [space.base]
    queue = [space.base]
    while queue and not budget.exhausted:
        nxt = []
        for s in queue:
            for q in space.quads:
                if q in s:
                    continue
                if not budget.tick():
                    break
                t = space.close(s | {q})
                if prune and not _exclusive_set(t):
                    budget.pruned += 1
                    continue
                if len(t) > task.max_squares:
                    budget.pruned += 1
                    continue
                key = space.canonical(t)
                if key in seen:
                    continue
                seen.add(key)
                found.append(t)
                nxt.append(t)
        queue = nxt
    return found


def slim_double_group(H: FiniteGroup, V: FiniteGroup, quads) -> DoubleGroupoid:
    quads = sorted(quads)
    th, tv = H.table, V.table
    return DoubleGroupoid.from_squares(
        FiniteGroupoid.from_group(H),
        FiniteGroupoid.from_group(V),
        quads,
        lambda x: x,
        lambda x, y: (th[x[0]][y[0]], x[1], th[x[2]][y[2]], y[3]),
        lambda x, y: (x[0], tv[x[1]][y[1]], y[2], tv[x[3]][y[3]]),
        lambda k: (0, k, 0, k),
        lambda h: (h, 0, h, 0),
        name="slim",
    )


# -- fibers over a frame -----------------------------------------------------


def fibered_candidates(frame: DoubleGroupoid, A: FiniteGroup, budget: _Budget):
    """Yield double groups (frame square, a) for every admissible gluing datum."""
    H, V = frame.H.to_group()[0], frame.V.to_group()[0]
    alphas = list(homomorphisms(H, _aut_group(A)[0]))
    betas = list(homomorphisms(V, _aut_group(A)[0]))
    auts = _aut_group(A)[1]
    is_hunit = set(frame.i2h)
    is_vunit = set(frame.i2v)
    free_h = [p for p in frame.c2h if not (p[0] in is_hunit or p[1] in is_hunit or (p[0] in is_vunit and p[1] in is_vunit))]
    free_v = [p for p in frame.c2v if not (p[0] in is_vunit or p[1] in is_vunit or (p[0] in is_hunit and p[1] in is_hunit))]
    hpos = {x: i for i, x in enumerate(frame.H.to_group()[1])}
    vpos = {x: i for i, x in enumerate(frame.V.to_group()[1])}
    ta = A.table
    squares = [(b, a) for b in range(frame.squares) for a in A.elements()]
    for alpha in alphas:
        for beta in betas:
            for ch_vals in itertools.product(A.elements(), repeat=len(free_h)):
                for cv_vals in itertools.product(A.elements(), repeat=len(free_v)):
                    if not budget.tick():
                        return
                    ch = dict(zip(free_h, ch_vals))
                    cv = dict(zip(free_v, cv_vals))

                    def hcompose(x, y, ch=ch, alpha=alpha):
                        act = auts[alpha.map[hpos[frame.s2v[x[0]]]]]
                        return (frame.c2h[(x[0], y[0])], ta[ta[x[1]][act[y[1]]]][ch.get((x[0], y[0]), 0)])

                    def vcompose(x, y, cv=cv, beta=beta):
                        act = auts[beta.map[vpos[frame.s2h[x[0]]]]]
                        return (frame.c2v[(x[0], y[0])], ta[ta[x[1]][act[y[1]]]][cv.get((x[0], y[0]), 0)])

                    yield DoubleGroupoid.from_squares(
                        frame.H,
                        frame.V,
                        squares,
                        lambda x: frame.boundary(x[0]),
                        hcompose,
                        vcompose,
                        lambda k: (frame.i2h[k], 0),
                        lambda h: (frame.i2v[h], 0),
                        name="fibered",
                    )


_AUT_CACHE: dict[tuple, tuple[FiniteGroup, list[tuple[int, ...]]]] = {}


def _aut_group(A: FiniteGroup) -> tuple[FiniteGroup, list[tuple[int, ...]]]:
    """Aut(A) as a group (identity first) and the table of each automorphism."""
    key = tuple(map(tuple, A.table))
    if key not in _AUT_CACHE:
        maps = sorted((f.map for f in automorphisms(A)), key=lambda m: (m != tuple(A.elements()), m))
        pos = {m: i for i, m in enumerate(maps)}
        # left action: apply g's map after h's, so (g h)(a) = g(h(a))
        table = [[pos[tuple(g[h[a]] for a in A.elements())] for h in maps] for g in maps]
        _AUT_CACHE[key] = (FiniteGroup(table), maps)
    return _AUT_CACHE[key]


# -- driver -----------------------------------------------------------------


def _flags_ok(task: EnumerationTask, dg: DoubleGroupoid) -> bool:
    if task.require_slim and not is_slim(dg):
        return False
    if task.require_exclusive and not is_exclusive(dg):
        return False
    if task.require_maximal and not is_maximal(dg):
        return False
    return True


def enumerate_double_groups(task: EnumerationTask) -> EnumerationResult:
    """All double groups with the given boundary groups and core, up to isomorphism."""
    budget = _Budget(task)
    H, V, A = task.horizontal, task.vertical, task.core
    frames = enumerate_slim_frames(task, budget)
    stats = {"frames": len(frames)}
    raw = 0
    classes: list[DoubleGroupoid] = []
    failed_verify = 0
    if A.order == 1:
        for quads in frames:
            dg = slim_double_group(H, V, quads)
            if not verify(dg).ok:
                failed_verify += 1
                continue
            if _flags_ok(task, dg):
                raw += 1
                classes.append(dg)
    else:
        for quads in frames:
            frame = slim_double_group(H, V, quads)
            if frame.squares * A.order > task.max_squares:
                budget.pruned += 1
                continue
            for dg in fibered_candidates(frame, A, budget):
                if not verify(dg).ok:
                    failed_verify += 1
                    continue
                if not _flags_ok(task, dg):
                    continue
                raw += 1
                if not any(double_group_isomorphism(dg, c) is not None for c in classes):
                    classes.append(dg)
    stats.update(
        {
            "candidates_examined": budget.candidates,
            "pruned": budget.pruned,
            "failed_verify": failed_verify,
            "seconds": round(time.monotonic() - budget.start, 3),
        }
    )
    return EnumerationResult(classes, raw, stats, incomplete=budget.exhausted)


def brute_force_bundle_count(A_order: int) -> int:
    """Double groups with trivial boundaries and |A| squares, by direct table search.

    Both compositions range over every unital table on the squares; pairs that
    pass ``verify`` are deduplicated by isomorphism.  Only for tiny |A|.
    """
    if A_order > 3:
        raise CapExceeded("direct table search is limited to at most 3 squares")
    trivial = FiniteGroupoid.from_group(FiniteGroup([[0]]))
    n = A_order
    free = [(x, y) for x in range(1, n) for y in range(1, n)]
    tables = []
    for vals in itertools.product(range(n), repeat=len(free)):
        t = {(x, y): (y if x == 0 else x if y == 0 else 0) for x in range(n) for y in range(n)}
        t.update(dict(zip(free, vals)))
        tables.append(t)
    found: list[DoubleGroupoid] = []
    for th in tables:
        for tv in tables:
            dg = DoubleGroupoid(
                trivial, trivial, s2v=[0] * n, t2v=[0] * n, s2h=[0] * n, t2h=[0] * n, i2v=[0], i2h=[0], c2h=th, c2v=tv
            )
            if verify(dg).ok and not any(double_group_isomorphism(dg, c) is not None for c in found):
                found.append(dg)
    return len(found)
