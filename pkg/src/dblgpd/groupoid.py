"""Finite groupoids, their frame and core, and section-based decomposition.

Composition is diagrammatic: ``comp[(f, g)]`` is "f then g" and is defined
exactly when ``tgt[f] == src[g]``.

A connected groupoid with a section ``pick`` of its frame is recorded as
cocycle data ``(B, G, rho, phi)`` with

    phi(a, b, c)  = pick(a,b) pick(b,c) pick(a,c)^-1
    rho(a, b)(g)  = pick(a,b) g pick(a,b)^-1

both read in the vertex group at the lowest object, and the groupoid is
rebuilt from the data with

    (u, ab) # (v, bc) = (u rho(a,b)(v) phi(a,b,c), ac).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .algebra.group import FiniteGroup, GroupHom


class GroupoidError(ValueError):
    pass


@dataclass
class Violation:
    stage: str
    axiom: str
    witness: tuple

    def __str__(self) -> str:
        return f"[{self.stage}] {self.axiom} at {self.witness}"


class FiniteGroupoid:
    """Objects ``0..objects-1`` and arrows ``0..arrows-1`` with partial composition."""

    def __init__(
        self,
        objects: int,
        src: Sequence[int],
        tgt: Sequence[int],
        comp: dict[tuple[int, int], int],
        ident: Sequence[int],
        inv: Sequence[int] | None = None,
        *,
        labels: Sequence[str] | None = None,
        validate: bool = True,
    ):
        self.objects = int(objects)
        self.src = tuple(int(x) for x in src)
        self.tgt = tuple(int(x) for x in tgt)
        self.comp = dict(comp)
        self.ident = tuple(int(x) for x in ident)
        self.arrows = len(self.src)
        self.labels = tuple(labels) if labels is not None else None
        if inv is None:
            inv = self._search_inverses()
        self.inv = tuple(int(x) for x in inv)
        if validate:
            problems = self.check()
            if problems:
                raise GroupoidError(str(problems[0]))

    def __repr__(self) -> str:
        return f"FiniteGroupoid(objects={self.objects}, arrows={self.arrows})"

    def _search_inverses(self) -> list[int]:
        out = []
        for f in range(self.arrows):
            a, b = self.src[f], self.tgt[f]
            found = -1
            for g in self._homs.get((b, a), []):
                if self.comp.get((f, g)) == self.ident[a] and self.comp.get((g, f)) == self.ident[b]:
                    found = g
                    break
            out.append(found)
        return out

    @cached_property
    def _homs(self) -> dict[tuple[int, int], list[int]]:
        homs: dict[tuple[int, int], list[int]] = {}
        for f in range(self.arrows):
            homs.setdefault((self.src[f], self.tgt[f]), []).append(f)
        return homs

    def hom(self, a: int, b: int) -> list[int]:
        return self._homs.get((a, b), [])

    def out_of(self, a: int) -> list[int]:
        return [f for f in range(self.arrows) if self.src[f] == a]

    def compose(self, *fs: int) -> int:
        acc = fs[0]
        for f in fs[1:]:
            acc = self.comp[(acc, f)]
        return acc

    # -- validation ----------------------------------------------------

    def check(self, stage_prefix: str = "") -> list[Violation]:
        """All axiom failures, staged; later stages are skipped once one fails."""
        for stage, fn in (
            ("well-formedness", self._check_wellformed),
            ("compatibility", self._check_boundaries),
            ("units", self._check_units),
            ("associativity", self._check_assoc),
            ("inverses", self._check_inverses),
        ):
            found = fn()
            if found:
                return [Violation(stage, stage_prefix + a, w) for a, w in found]
        return []

    def _check_wellformed(self):
        n, m = self.objects, self.arrows
        out = []
        if len(self.tgt) != m or len(self.inv) != m or len(self.ident) != n:
            return [("table lengths", (len(self.src), len(self.tgt), len(self.ident), len(self.inv)))]
        for f in range(m):
            if not (0 <= self.src[f] < n and 0 <= self.tgt[f] < n):
                return [("boundary in range", (f,))]
            if not 0 <= self.inv[f] < m:
                return [("inverse in range", (f,))]
        for a in range(n):
            if not 0 <= self.ident[a] < m:
                return [("identity in range", (a,))]
        for (f, g), h in self.comp.items():
            if not (0 <= f < m and 0 <= g < m and 0 <= h < m):
                return [("composition in range", (f, g, h))]
            if self.tgt[f] != self.src[g]:
                out.append(("composition defined only on composable pairs", (f, g)))
        for g in range(m):
            for f in self.hom_into(self.src[g]):
                if (f, g) not in self.comp:
                    out.append(("composition defined on every composable pair", (f, g)))
                    return out
        return out

    def hom_into(self, b: int) -> list[int]:
        return [f for f in range(self.arrows) if self.tgt[f] == b]

    def _check_boundaries(self):
        out = []
        for a in range(self.objects):
            i = self.ident[a]
            if self.src[i] != a or self.tgt[i] != a:
                out.append(("identity boundary", (a,)))
        for (f, g), h in self.comp.items():
            if self.src[h] != self.src[f] or self.tgt[h] != self.tgt[g]:
                out.append(("composite boundary", (f, g)))
        return out

    def _check_units(self):
        out = []
        for f in range(self.arrows):
            if self.comp[(self.ident[self.src[f]], f)] != f:
                out.append(("left unit", (f,)))
            if self.comp[(f, self.ident[self.tgt[f]])] != f:
                out.append(("right unit", (f,)))
        return out

    def _check_assoc(self):
        c = self.comp
        by_src: dict[int, list[int]] = {}
        for g in range(self.arrows):
            by_src.setdefault(self.src[g], []).append(g)
        for (f, g), fg in c.items():
            for h in by_src.get(self.tgt[g], []):
                if c[(fg, h)] != c[(f, c[(g, h)])]:
                    return [("associativity", (f, g, h))]
        return []

    def _check_inverses(self):
        out = []
        for f in range(self.arrows):
            g = self.inv[f]
            if self.comp.get((f, g)) != self.ident[self.src[f]] or self.comp.get((g, f)) != self.ident[self.tgt[f]]:
                out.append(("inverse", (f,)))
        return out

    def validate(self) -> "FiniteGroupoid":
        problems = self.check()
        if problems:
            raise GroupoidError(str(problems[0]))
        return self

    # -- structure -----------------------------------------------------

    def vertex_group(self, a: int) -> tuple[FiniteGroup, list[int]]:
        """The group of loops at ``a`` (identity first) and the arrow behind each element."""
        loops = sorted(self.hom(a, a), key=lambda f: (f != self.ident[a], f))
        pos = {f: i for i, f in enumerate(loops)}
        table = [[pos[self.comp[(f, g)]] for g in loops] for f in loops]
        return FiniteGroup(table, validate=False), loops

    def connected_components(self) -> list[list[int]]:
        """Blocks of objects joined by arrows, found by union-find over all arrows."""
        parent = list(range(self.objects))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for f in range(self.arrows):
            ra, rb = find(self.src[f]), find(self.tgt[f])
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
        blocks: dict[int, list[int]] = {}
        for a in range(self.objects):
            blocks.setdefault(find(a), []).append(a)
        comps = sorted(blocks.values())
        for block in comps:
            for a in block:
                for b in block:
                    if not self.hom(a, b):
                        raise GroupoidError(f"reachability is not symmetric/transitive between {a} and {b}")
        return comps

    def is_connected(self) -> bool:
        return all(self.hom(a, b) for a in range(self.objects) for b in range(self.objects))

    def is_slim(self) -> bool:
        return all(len(v) == 1 for v in self._homs.values())

    def restrict(self, arrows: Iterable[int], objects: Sequence[int] | None = None) -> tuple["FiniteGroupoid", list[int]]:
        """The subgroupoid on a set of arrows, reindexed, with the old arrow per new index."""
        keep = sorted(set(arrows))
        if objects is None:
            objects = sorted({self.src[f] for f in keep} | {self.tgt[f] for f in keep})
        opos = {a: i for i, a in enumerate(objects)}
        apos = {f: i for i, f in enumerate(keep)}
        comp = {}
        for f in keep:
            for g in keep:
                if self.tgt[f] == self.src[g]:
                    h = self.comp[(f, g)]
                    if h not in apos:
                        raise GroupoidError(f"arrow set not closed under composition at ({f}, {g})")
                    comp[(apos[f], apos[g])] = apos[h]
        try:
            ident = [apos[self.ident[a]] for a in objects]
            inv = [apos[self.inv[f]] for f in keep]
        except KeyError as exc:
            raise GroupoidError(f"arrow set is missing an identity or inverse ({exc})") from None
        sub = FiniteGroupoid(
            len(objects),
            [opos[self.src[f]] for f in keep],
            [opos[self.tgt[f]] for f in keep],
            comp,
            ident,
            inv,
            validate=False,
        )
        return sub, keep

    # -- groups --------------------------------------------------------

    @classmethod
    def from_group(cls, g: FiniteGroup) -> "FiniteGroupoid":
        """One-object groupoid whose arrow ``x`` is the element ``x``."""
        t = g.table
        comp = {(x, y): t[x][y] for x in g.elements() for y in g.elements()}
        return cls(1, [0] * g.order, [0] * g.order, comp, [0], g.inverse, labels=g.labels, validate=False)

    def to_group(self) -> tuple[FiniteGroup, list[int]]:
        if self.objects != 1:
            raise GroupoidError("only one-object groupoids are groups")
        return self.vertex_group(0)

    # -- serialization -------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "kind": "groupoid",
            "objects": self.objects,
            "arrows": self.arrows,
            "src": list(self.src),
            "tgt": list(self.tgt),
            "id": list(self.ident),
            "inv": list(self.inv),
            "comp": sorted([f, g, h] for (f, g), h in self.comp.items()),
        }

    @classmethod
    def from_dict(cls, d: dict, *, validate: bool = True) -> "FiniteGroupoid":
        try:
            g = cls(
                d["objects"],
                d["src"],
                d["tgt"],
                {(f, g): h for f, g, h in d["comp"]},
                d["id"],
                d.get("inv"),
                validate=False,
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise GroupoidError(f"malformed groupoid JSON: {exc}") from None
        if d.get("arrows", g.arrows) != g.arrows:
            raise GroupoidError("declared arrow count does not match tables")
        return g.validate() if validate else g

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


# -- constructions ------------------------------------------------------


def coarse_groupoid(n: int) -> FiniteGroupoid:
    """n objects with exactly one arrow a -> b for every ordered pair; arrow ``a*n + b``."""
    if n < 1:
        raise GroupoidError("coarse_groupoid needs n >= 1")
    src = [a for a in range(n) for _ in range(n)]
    tgt = [b for _ in range(n) for b in range(n)]
    comp = {(a * n + b, b * n + c): a * n + c for a in range(n) for b in range(n) for c in range(n)}
    return FiniteGroupoid(n, src, tgt, comp, [a * n + a for a in range(n)], [b * n + a for a in range(n) for b in range(n)])


def disjoint_union(*parts: FiniteGroupoid) -> FiniteGroupoid:
    src, tgt, ident, inv = [], [], [], []
    comp = {}
    obj_off = arr_off = 0
    for p in parts:
        src += [x + obj_off for x in p.src]
        tgt += [x + obj_off for x in p.tgt]
        ident += [x + arr_off for x in p.ident]
        inv += [x + arr_off for x in p.inv]
        comp.update({(f + arr_off, g + arr_off): h + arr_off for (f, g), h in p.comp.items()})
        obj_off += p.objects
        arr_off += p.arrows
    return FiniteGroupoid(obj_off, src, tgt, comp, ident, inv, validate=False)


def group_times_coarse(g: FiniteGroup, n: int) -> FiniteGroupoid:
    """G x coarse(n): arrow ``(a*n + b)*|G| + x`` is (x, a -> b)."""
    return groupoid_from_cocycle(trivial_cocycle(g, n))


def frame(g: FiniteGroupoid) -> tuple[FiniteGroupoid, list[int]]:
    """The slim image of ``g`` and the projection sending each arrow to its class."""
    classes = sorted(g._homs)
    pos = {ab: i for i, ab in enumerate(classes)}
    comp = {}
    for (a, b) in classes:
        for (b2, c) in classes:
            if b == b2:
                comp[(pos[(a, b)], pos[(b, c)])] = pos[(a, c)]
    fr = FiniteGroupoid(
        g.objects,
        [a for a, _ in classes],
        [b for _, b in classes],
        comp,
        [pos[(a, a)] for a in range(g.objects)],
        [pos[(b, a)] for a, b in classes],
        validate=False,
    )
    proj = [pos[(g.src[f], g.tgt[f])] for f in range(g.arrows)]
    return fr, proj


def core_bundle(g: FiniteGroupoid) -> dict[int, tuple[FiniteGroup, list[int]]]:
    """Vertex group at every object."""
    return {a: g.vertex_group(a) for a in range(g.objects)}


def conjugation_witness(g: FiniteGroupoid, a: int, b: int) -> GroupHom | None:
    """The isomorphism G(a) -> G(b), x -> f^-1 x f, for the first f: a -> b."""
    arrows = g.hom(a, b)
    if not arrows:
        return None
    f = arrows[0]
    ga, la = g.vertex_group(a)
    gb, lb = g.vertex_group(b)
    pos_b = {x: i for i, x in enumerate(lb)}
    images = [pos_b[g.compose(g.inv[f], x, f)] for x in la]
    return GroupHom(ga, gb, images)


# -- sections and cocycles ----------------------------------------------


@dataclass
class Section:
    """A choice of arrow in every nonempty homset, identity on objects."""

    groupoid: FiniteGroupoid
    pick: dict[tuple[int, int], int]

    def __post_init__(self):
        g = self.groupoid
        for (a, b), f in self.pick.items():
            if g.src[f] != a or g.tgt[f] != b:
                raise GroupoidError(f"section picks arrow {f} outside Hom({a}, {b})")
        for ab in g._homs:
            if ab not in self.pick:
                raise GroupoidError(f"section misses the nonempty homset {ab}")

    def normalized(self) -> "Section":
        pick = dict(self.pick)
        for a in range(self.groupoid.objects):
            pick[(a, a)] = self.groupoid.ident[a]
        return Section(self.groupoid, pick)

    @classmethod
    def first(cls, g: FiniteGroupoid) -> "Section":
        """Lowest-index arrow per homset, identities on the diagonal."""
        pick = {ab: arrows[0] for ab, arrows in g._homs.items()}
        return cls(g, pick).normalized()

    def to_dict(self) -> dict:
        return {"kind": "section", "pick": sorted([a, b, f] for (a, b), f in self.pick.items())}

    @classmethod
    def from_dict(cls, g: FiniteGroupoid, d: dict) -> "Section":
        return cls(g, {(a, b): f for a, b, f in d["pick"]})


@dataclass
class CocycleData:
    """Connected groupoid structure on ``B`` objects with fiber ``G``.

    ``phi[a][b][c]`` is an element of G; ``rho[a][b]`` an automorphism table of G.
    """

    B: int
    G: FiniteGroup
    phi: list[list[list[int]]]
    rho: list[list[tuple[int, ...]]]

    def violations(self) -> list[Violation]:
        """Failures of the three cocycle identities (and of rho being automorphisms)."""
        G, phi, rho, n = self.G, self.phi, self.rho, self.B
        t, inv = G.table, G.inverse
        out = []
        for a in range(n):
            for b in range(n):
                r = rho[a][b]
                if sorted(r) != list(G.elements()) or GroupHom(G, G, r, validate=False).violation() is not None:
                    out.append(Violation("cocycle", "rho(a,b) is an automorphism", (a, b)))
        if out:
            return out
        for a, b, c in itertools.product(range(n), repeat=3):
            p = phi[a][b][c]
            for g in G.elements():
                lhs = rho[a][b][rho[b][c][g]]
                rhs = t[t[p][rho[a][c][g]]][inv[p]]
                if lhs != rhs:
                    out.append(Violation("cocycle", "rho(a,b) rho(b,c) = phi(a,b,c) rho(a,c) phi(a,b,c)^-1", (a, b, c, g)))
                    break
        for a, b, c, d in itertools.product(range(n), repeat=4):
            lhs = rho[a][b][phi[b][c][d]]
            rhs = t[t[phi[a][b][c]][phi[a][c][d]]][inv[phi[a][b][d]]]
            if lhs != rhs:
                out.append(Violation("cocycle", "rho(a,b)(phi(b,c,d)) = phi(a,b,c) phi(a,c,d) phi(a,b,d)^-1", (a, b, c, d)))
        for a, b in itertools.product(range(n), repeat=2):
            if phi[a][a][b] != phi[a][a][a]:
                out.append(Violation("cocycle", "phi(a,a,b) = phi(a,a,a)", (a, a, b)))
        return out

    def validate(self) -> "CocycleData":
        v = self.violations()
        if v:
            raise GroupoidError(f"cocycle identity fails: {v[0]}")
        return self

    def with_fiber(self, iso: GroupHom) -> "CocycleData":
        """Pull the data back along an isomorphism ``iso: H -> self.G``."""
        back = iso.inverse().map
        fwd = iso.map
        n = self.B
        phi = [[[back[self.phi[a][b][c]] for c in range(n)] for b in range(n)] for a in range(n)]
        rho = [[tuple(back[self.rho[a][b][fwd[h]]] for h in iso.domain.elements()) for b in range(n)] for a in range(n)]
        return CocycleData(n, iso.domain, phi, rho)

    def to_dict(self) -> dict:
        return {
            "kind": "cocycle",
            "B": self.B,
            "G": self.G.to_dict(),
            "phi": self.phi,
            "rho": [[list(r) for r in row] for row in self.rho],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CocycleData":
        return cls(d["B"], FiniteGroup.from_dict(d["G"]), d["phi"], [[tuple(r) for r in row] for row in d["rho"]])


def trivial_cocycle(g: FiniteGroup, n: int) -> CocycleData:
    ident = tuple(g.elements())
    return CocycleData(n, g, [[[0] * n for _ in range(n)] for _ in range(n)], [[ident] * n for _ in range(n)])


def twist(data: CocycleData, gamma: dict[tuple[int, int], int]) -> CocycleData:
    """The data obtained by changing the section by ``gamma``.

    rho~(a,b) = Gamma(a,b) rho(a,b) Gamma(a,b)^-1 and
    phi~(a,b,c) = Gamma(a,b) rho(a,b)(Gamma(b,c)) phi(a,b,c) Gamma(a,c)^-1.
    """
    G, n = data.G, data.B
    inv = G.inverse
    rho = [[tuple(G.conj(gamma[a, b], data.rho[a][b][x]) for x in G.elements()) for b in range(n)] for a in range(n)]
    phi = [
        [
            [G.product(gamma[a, b], data.rho[a][b][gamma[b, c]], data.phi[a][b][c], inv[gamma[a, c]]) for c in range(n)]
            for b in range(n)
        ]
        for a in range(n)
    ]
    return CocycleData(n, G, phi, rho)


def groupoid_from_cocycle(data: CocycleData) -> FiniteGroupoid:
    """Arrows (u, a -> b) indexed ``(a*B + b)*|G| + u`` under the twisted product."""
    data.validate()
    G, n = data.G, data.B
    m = G.order
    t, inv = G.table, G.inverse
    phi, rho = data.phi, data.rho

    def idx(u, a, b):
        return (a * n + b) * m + u

    src, tgt = [], []
    for a in range(n):
        for b in range(n):
            src += [a] * m
            tgt += [b] * m
    comp = {}
    for a, b, c in itertools.product(range(n), repeat=3):
        p, r = phi[a][b][c], rho[a][b]
        for u in range(m):
            for v in range(m):
                comp[(idx(u, a, b), idx(v, b, c))] = idx(t[t[u][r[v]]][p], a, c)
    ident = [idx(inv[phi[a][a][a]], a, a) for a in range(n)]
    g = FiniteGroupoid(n, src, tgt, comp, ident, validate=False)
    g.validate()
    return g


@dataclass
class Decomposition:
    """Cocycle data of a connected groupoid plus the isomorphism Phi.

    ``coords[f] = (u, a, b)`` with u an element of ``data.G``;
    ``fiber_arrows[u]`` is the loop at the basepoint behind u.
    """

    data: CocycleData
    section: Section
    basepoint: int
    fiber_arrows: list[int]
    coords: list[tuple[int, int, int]]
    report: dict = field(default_factory=dict)

    def arrow_of(self, u: int, a: int, b: int) -> int:
        return self._inverse[(u, a, b)]

    @cached_property
    def _inverse(self) -> dict[tuple[int, int, int], int]:
        return {c: f for f, c in enumerate(self.coords)}


def decompose_via_section(g: FiniteGroupoid, s: Section | None = None) -> Decomposition:
    """Split a connected groupoid into fiber, frame and the pair (rho, phi)."""
    if not g.is_connected():
        raise GroupoidError("decompose_via_section needs a connected groupoid; use decompose_components")
    s = (s or Section.first(g)).normalized()
    n = g.objects
    base = 0
    fiber, loops = g.vertex_group(base)
    pos0 = {f: i for i, f in enumerate(loops)}
    pick = s.pick
    c, inv = g.comp, g.inv

    def to_fiber(a: int, loop: int) -> int:
        # transport a loop at a to the basepoint along pick(base, a)
        p = pick[(base, a)]
        return pos0[g.compose(p, loop, inv[p])]

    def from_fiber(a: int, u: int) -> int:
        p = pick[(base, a)]
        return g.compose(inv[p], loops[u], p)

    phi = [[[0] * n for _ in range(n)] for _ in range(n)]
    for a, b, cc in itertools.product(range(n), repeat=3):
        phi[a][b][cc] = to_fiber(a, g.compose(pick[(a, b)], pick[(b, cc)], inv[pick[(a, cc)]]))
    rho = [[None] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            p = pick[(a, b)]
            rho[a][b] = tuple(to_fiber(a, g.compose(p, from_fiber(b, u), inv[p])) for u in range(fiber.order))
    data = CocycleData(n, fiber, phi, rho)

    coords = []
    for f in range(g.arrows):
        a, b = g.src[f], g.tgt[f]
        coords.append((to_fiber(a, c[(f, inv[pick[(a, b)]])]), a, b))
    dec = Decomposition(data, s, base, loops, coords)
    dec.report = verify_decomposition(g, dec)
    return dec


def decompose_components(g: FiniteGroupoid, s: Section | None = None) -> list[tuple[list[int], Decomposition]]:
    """Run the decomposition on each connected component separately."""
    s = s or Section.first(g)
    out = []
    for block in g.connected_components():
        arrows = [f for f in range(g.arrows) if g.src[f] in block]
        sub, keep = g.restrict(arrows, block)
        back = {old: new for new, old in enumerate(keep)}
        opos = {a: i for i, a in enumerate(block)}
        pick = {(opos[a], opos[b]): back[f] for (a, b), f in s.pick.items() if a in opos}
        out.append((block, decompose_via_section(sub, Section(sub, pick))))
    return out


def sharp(data: CocycleData, x: tuple[int, int, int], y: tuple[int, int, int]) -> tuple[int, int, int]:
    """(u, ab) # (v, bc) = (u rho(a,b)(v) phi(a,b,c), ac)."""
    u, a, b = x
    v, b2, c = y
    if b != b2:
        raise GroupoidError("arrows are not composable")
    t = data.G.table
    return (t[t[u][data.rho[a][b][v]]][data.phi[a][b][c]], a, c)


def verify_decomposition(g: FiniteGroupoid, dec: Decomposition) -> dict:
    """Check Phi is a bijection carrying composition to # and identities to (phi(a,a,a)^-1, aa)."""
    data = dec.data
    inv = data.G.inverse
    coords = dec.coords
    bijective = len(set(coords)) == g.arrows == data.B * data.B * data.G.order
    multiplicative = all(coords[h] == sharp(data, coords[f], coords[k]) for (f, k), h in g.comp.items())
    identities = all(coords[g.ident[a]] == (inv[data.phi[a][a][a]], a, a) for a in range(g.objects))
    cocycle = not data.violations()
    return {
        "bijective": bijective,
        "multiplicative": multiplicative,
        "identities": identities,
        "cocycle_identities": cocycle,
        "ok": bijective and multiplicative and identities and cocycle,
    }


def _conj_candidates(G: FiniteGroup, r: Sequence[int], r2: Sequence[int]) -> list[int]:
    """Gamma with Gamma r(g) Gamma^-1 = r2(g) for every g."""
    return [x for x in G.elements() if all(G.conj(x, r[g]) == r2[g] for g in G.elements())]


def cocycles_equivalent(d1: CocycleData, d2: CocycleData) -> dict[tuple[int, int], int] | None:
    """A twist Gamma carrying ``d1`` to ``d2`` (so that ``twist(d1, Gamma) == d2``), or None.

    A solution is fixed by its row Gamma(0, .), since
    Gamma(b,c) = rho(0,b)^-1(Gamma(0,b)^-1 phi2(0,b,c) Gamma(0,c) phi1(0,b,c)^-1);
    the search runs over that row and checks every relation.
    """
    if d1.B != d2.B or d1.G.order != d2.G.order:
        return None
    G, n = d1.G, d1.B
    inv = G.inverse
    cands = {(a, b): _conj_candidates(G, d1.rho[a][b], d2.rho[a][b]) for a in range(n) for b in range(n)}
    if any(not v for v in cands.values()):
        return None
    rho_inv = [[GroupHom(G, G, d1.rho[a][b], validate=False).inverse().map for b in range(n)] for a in range(n)]
    for row in itertools.product(*(cands[(0, b)] for b in range(n))):
        gamma = {(0, b): row[b] for b in range(n)}
        ok = True
        for b in range(1, n):
            for c in range(n):
                val = rho_inv[0][b][G.product(inv[row[b]], d2.phi[0][b][c], row[c], inv[d1.phi[0][b][c]])]
                if val not in cands[(b, c)]:
                    ok = False
                    break
                gamma[(b, c)] = val
            if not ok:
                break
        if ok and _is_twist(d1, d2, gamma):
            return gamma
    return None


def _is_twist(d1: CocycleData, d2: CocycleData, gamma: dict[tuple[int, int], int]) -> bool:
    tw = twist(d1, gamma)
    return tw.phi == d2.phi and [list(r) for r in tw.rho] == [list(r) for r in d2.rho]
