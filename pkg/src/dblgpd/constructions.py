"""Double groupoids from subgroupoid pairs, and back.

``gamma`` turns (G, H, K) into the slim double groupoid whose squares are
quadruples (h, k, h', k') with h k' = k h'.  ``lambda_triple`` recovers a
groupoid with two subgroupoids from a vacant double groupoid, and
``quadruple_construct`` / ``lambda_section`` do the same for maximal
exclusive double groups carrying an abelian core.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .algebra.group import FiniteGroup, GroupHom, Subgroup
from .algebra.iso import is_isomorphic
from .double import (
    DoubleFunctor,
    DoubleGroupoid,
    bundle_squares,
    frame_double,
    is_exclusive,
    is_maximal,
    is_vacant,
    require_valid,
    section_functor,
)
from .groupoid import FiniteGroupoid, GroupoidError


class ConstructionError(ValueError):
    pass


# -- triples ------------------------------------------------------------


@dataclass
class MatchedTriple:
    """A groupoid with two wide subgroupoids given as arrow sets."""

    G: FiniteGroupoid
    H: tuple[int, ...]
    K: tuple[int, ...]
    group: FiniteGroup | None = None

    def __post_init__(self):
        self.H = tuple(sorted(set(self.H)))
        self.K = tuple(sorted(set(self.K)))
        for name, arrows in (("H", self.H), ("K", self.K)):
            try:
                self.G.restrict(arrows, range(self.G.objects))
            except GroupoidError as exc:
                raise ConstructionError(f"{name} is not a wide subgroupoid: {exc}") from None

    @classmethod
    def from_group(cls, g: FiniteGroup, h: Subgroup | Sequence[int], k: Subgroup | Sequence[int]) -> "MatchedTriple":
        hm = h.members if isinstance(h, Subgroup) else tuple(h)
        km = k.members if isinstance(k, Subgroup) else tuple(k)
        return cls(FiniteGroupoid.from_group(g), hm, km, group=g)

    def products(self, first: Sequence[int], second: Sequence[int]) -> set[int]:
        G = self.G
        return {G.comp[(x, y)] for x in first for y in second if G.tgt[x] == G.src[y]}

    @property
    def discrete_intersection(self) -> bool:
        return set(self.H) & set(self.K) <= set(self.G.ident)

    @property
    def commuting_products(self) -> bool:
        return self.products(self.H, self.K) == self.products(self.K, self.H)

    @property
    def exact_factorization(self) -> bool:
        """Every arrow is h k for exactly one composable pair."""
        G = self.G
        seen: dict[int, int] = {}
        for h in self.H:
            for k in self.K:
                if G.tgt[h] == G.src[k]:
                    g = G.comp[(h, k)]
                    seen[g] = seen.get(g, 0) + 1
        return len(seen) == G.arrows and all(v == 1 for v in seen.values())

    def flags(self) -> dict:
        return {
            "discrete_intersection": self.discrete_intersection,
            "commuting_products": self.commuting_products,
            "exact_factorization": self.exact_factorization,
        }

    def as_group(self) -> tuple[FiniteGroup, Subgroup, Subgroup, list[int]]:
        """For one-object triples: the group, H and K inside it, and the arrow per element."""
        g, arrows = self.G.to_group()
        pos = {a: i for i, a in enumerate(arrows)}
        return g, Subgroup(g, [pos[x] for x in self.H]), Subgroup(g, [pos[x] for x in self.K]), arrows


def gamma(t: MatchedTriple) -> DoubleGroupoid:
    """Squares (h, k, h', k') with h k' = k h'; every entry an arrow of G."""
    G = t.G
    H, hk = G.restrict(t.H, range(G.objects))
    V, vk = G.restrict(t.K, range(G.objects))
    hpos = {x: i for i, x in enumerate(hk)}
    vpos = {x: i for i, x in enumerate(vk)}
    hset = set(t.H)
    squares = []
    for h in t.H:
        for k2 in t.K:
            if G.tgt[h] != G.src[k2]:
                continue
            g = G.comp[(h, k2)]
            for k in t.K:
                if G.src[k] != G.src[h]:
                    continue
                h2 = G.comp[(G.inv[k], g)]
                if h2 in hset:
                    squares.append((h, k, h2, k2))
    c = G.comp

    def boundary(x):
        h, k, h2, k2 = x
        return (hpos[h], vpos[k], hpos[h2], vpos[k2])

    def hcompose(x, y):
        return (c[(x[0], y[0])], x[1], c[(x[2], y[2])], y[3])

    def vcompose(x, y):
        return (x[0], c[(x[1], y[1])], y[2], c[(x[3], y[3])])

    def hident(k):
        k = vk[k]
        return (G.ident[G.src[k]], k, G.ident[G.tgt[k]], k)

    def vident(h):
        h = hk[h]
        return (h, G.ident[G.src[h]], h, G.ident[G.tgt[h]])

    return DoubleGroupoid.from_squares(H, V, squares, boundary, hcompose, vcompose, hident, vident, name="gamma")


def gamma_predicates(t: MatchedTriple) -> tuple[bool, bool]:
    """(exclusive, maximal) read off the triple: H n K discrete, HK = KH."""
    return t.discrete_intersection, t.commuting_products


def _unique(dg: DoubleGroupoid, pool: dict, key, what: str) -> int:
    xs = pool.get(key, [])
    if len(xs) != 1:
        raise ConstructionError(f"expected a unique square with {what} {key}, found {len(xs)}")
    return xs[0]


def lambda_product(dg: DoubleGroupoid, x: int, y: int, left_bottom: dict, top_right: dict) -> int:
    """XY: the square subdivided as [X, Z1; Z2, Y]."""
    z1 = _unique(dg, left_bottom, (dg.t2h[x], dg.s2v[y]), "left/bottom")
    z2 = _unique(dg, top_right, (dg.t2v[x], dg.s2h[y]), "top/right")
    return dg.grid(x, z1, z2, y)


def _lambda_groupoid(dg: DoubleGroupoid, product) -> FiniteGroupoid:
    src = [dg.corner(x) for x in range(dg.squares)]
    tgt = [dg.far_corner(x) for x in range(dg.squares)]
    by_src: dict[int, list[int]] = {}
    for x, a in enumerate(src):
        by_src.setdefault(a, []).append(x)
    comp = {(x, y): product(x, y) for x in range(dg.squares) for y in by_src.get(tgt[x], [])}
    ident = [dg.i2v[dg.H.ident[a]] for a in range(dg.objects)]
    g = FiniteGroupoid(dg.objects, src, tgt, comp, ident, validate=False)
    problems = g.check()
    if problems:
        raise ConstructionError(f"square groupoid fails an axiom: {problems[0]}")
    return g


def lambda_triple(dg: DoubleGroupoid) -> MatchedTriple:
    """The groupoid of squares of a vacant double groupoid, with H~ = i2v(H), K~ = i2h(V)."""
    if not is_vacant(dg):
        raise ConstructionError("lambda needs a vacant double groupoid")
    lb: dict[tuple[int, int], list[int]] = {}
    tr: dict[tuple[int, int], list[int]] = {}
    for x in range(dg.squares):
        lb.setdefault((dg.s2h[x], dg.t2v[x]), []).append(x)
        tr.setdefault((dg.s2v[x], dg.t2h[x]), []).append(x)
    g = _lambda_groupoid(dg, lambda x, y: lambda_product(dg, x, y, lb, tr))
    t = MatchedTriple(g, dg.i2v, dg.i2h)
    if not t.exact_factorization:
        raise ConstructionError("lambda output is not an exact factorization")
    return t


def counit_map(t: MatchedTriple, dg: DoubleGroupoid) -> list[int]:
    """eta: square (h, k, h', k') of gamma(t) -> the arrow h k'."""
    return [t.G.comp[(h, k2)] for h, _, _, k2 in dg.labels]


def check_equivalence_vacant(t: MatchedTriple) -> dict:
    """Unit and counit of the gamma/lambda adjunction are isomorphisms on this instance."""
    if not t.exact_factorization:
        raise ConstructionError("check_equivalence_vacant needs an exact factorization")
    dg = gamma(t)
    lam = lambda_triple(dg)
    G, L = t.G, lam.G
    eta = counit_map(t, dg)
    eta_bij = len(set(eta)) == G.arrows == L.arrows
    eta_functor = all(G.comp[(eta[x], eta[y])] == eta[z] for (x, y), z in L.comp.items())
    eta_subs = sorted(eta[x] for x in lam.H) == list(t.H) and sorted(eta[x] for x in lam.K) == list(t.K)

    dg2 = gamma(lam)
    # nu: X -> (i2v top, i2h left, i2v bottom, i2h right) in gamma(lambda(dg))
    pos2 = {lab: i for i, lab in enumerate(dg2.labels)}
    hpos = {x: i for i, x in enumerate(lam.H)}
    vpos = {x: i for i, x in enumerate(lam.K)}
    try:
        sq = [pos2[(dg.i2v[a], dg.i2h[b], dg.i2v[c], dg.i2h[d])] for a, b, c, d in (dg.boundary(x) for x in range(dg.squares))]
        nu = DoubleFunctor(
            dg,
            dg2,
            list(range(dg.objects)),
            [hpos[dg.i2v[h]] for h in range(dg.H.arrows)],
            [vpos[dg.i2h[k]] for k in range(dg.V.arrows)],
            sq,
        )
        nu_ok = nu.is_isomorphism()
        nu_problems = nu.violations()[:3]
    except KeyError as exc:
        nu_ok, nu_problems = False, [f"unit misses a square: {exc}"]
    report = {
        "counit_bijective": eta_bij,
        "counit_functor": eta_functor,
        "counit_preserves_subgroupoids": eta_subs,
        "unit_isomorphism": nu_ok,
        "ok": eta_bij and eta_functor and eta_subs and nu_ok,
    }
    if nu_problems:
        report["unit_problems"] = nu_problems
    return report


# -- quadruples ---------------------------------------------------------


@dataclass
class SemiQuadruple:
    G: FiniteGroup
    H: Subgroup
    K: Subgroup
    A: Subgroup

    def violations(self) -> list[str]:
        G, H, K, A = self.G, self.H, self.K, self.A
        out = []
        if not A.is_abelian:
            out.append("A is not abelian")
        for name, S in (("H", H), ("K", K)):
            for s in S.members:
                bad = next((a for a in A.members if G.conj(s, a) not in A), None)
                if bad is not None:
                    out.append(f"{name} does not normalize A: {s} * {bad} * {s}^-1 lies outside A")
                    break
        for name, S, T in (("A n H", A, H), ("A n K", A, K), ("H n K", H, K)):
            if set(S.members) & set(T.members) != {0}:
                out.append(f"{name} is not trivial")
        t = G.table
        hk = {t[h][k] for h in H.members for k in K.members}
        kh = {t[k][h] for h in H.members for k in K.members}
        if hk != kh:
            out.append("HK differs from KH")
        return out

    @property
    def full_factorization(self) -> bool:
        """G = A H K with unique factors."""
        G = self.G
        seen = {G.product(a, h, k) for a in self.A.members for h in self.H.members for k in self.K.members}
        return len(seen) == G.order == len(self.A) * len(self.H) * len(self.K)

    def validate(self) -> "SemiQuadruple":
        v = self.violations()
        if v:
            raise ConstructionError(f"invalid quadruple: {v[0]}")
        return self


@dataclass
class QuadrupleResult:
    dg: DoubleGroupoid
    section: DoubleFunctor
    quadruple: SemiQuadruple
    to_group: list[int] = field(default_factory=list)  # square -> a h k'


def quadruple_construct(q: SemiQuadruple) -> QuadrupleResult:
    """Squares ((h, k, h', k'), a), composed with a h b h^-1 across and a k b k^-1 down."""
    q.validate()
    G = q.G
    base = gamma(MatchedTriple.from_group(G, q.H, q.K))
    vac = base.labels
    squares = [(i, a) for i in range(base.squares) for a in q.A.members]
    t = G.table

    def boundary(x):
        return base.boundary(x[0])

    def hcompose(x, y):
        h = vac[x[0]][0]
        return (base.c2h[(x[0], y[0])], t[x[1]][G.conj(h, y[1])])

    def vcompose(x, y):
        k = vac[x[0]][1]
        return (base.c2v[(x[0], y[0])], t[x[1]][G.conj(k, y[1])])

    def hident(k):
        return (base.i2h[k], 0)

    def vident(h):
        return (base.i2v[h], 0)

    dg = DoubleGroupoid.from_squares(base.H, base.V, squares, boundary, hcompose, vcompose, hident, vident, name="quadruple")
    dg.labels = [vac[i] + (a,) for i, a in squares]
    require_valid(dg)
    pos = {x: i for i, x in enumerate(squares)}
    fr, proj = frame_double(dg)
    pick = [-1] * fr.squares
    for i in range(base.squares):
        x = pos[(i, 0)]
        pick[proj[x]] = x
    sec = section_functor(dg, pick)
    if not sec.check():
        raise ConstructionError(f"canonical section is not a double functor: {sec.violations()[0]}")
    to_group = [G.product(a, h, k2) for h, _, _, k2, a in dg.labels]
    return QuadrupleResult(dg, sec, q, to_group)


@dataclass
class LambdaSectionResult:
    quadruple: SemiQuadruple
    groupoid: FiniteGroupoid
    element_square: list[int]  # group element -> square


def lambda_section(dg: DoubleGroupoid, s: DoubleFunctor) -> LambdaSectionResult:
    """The group of squares under section-insertion composition, with its three subgroups."""
    if dg.objects != 1:
        raise ConstructionError("lambda_section is implemented for double groups")
    if not (is_maximal(dg) and is_exclusive(dg)):
        raise ConstructionError("lambda_section needs a maximal exclusive double group")
    fr = s.source
    if s.target is not dg:
        raise ConstructionError("section must land in the given double groupoid")
    bad = s.violations()
    if bad:
        raise ConstructionError(f"section is not a double functor: {bad[0]}")
    for i in range(fr.squares):
        if dg.boundary(s.sq[i]) != fr.boundary(i):
            raise ConstructionError(f"section moves the boundary of frame square {i}")
    lb: dict[tuple[int, int], list[int]] = {}
    tr: dict[tuple[int, int], list[int]] = {}
    for i in range(fr.squares):
        lb.setdefault((fr.s2h[i], fr.t2v[i]), []).append(s.sq[i])
        tr.setdefault((fr.s2v[i], fr.t2h[i]), []).append(s.sq[i])
    g = _lambda_groupoid(dg, lambda x, y: lambda_product(dg, x, y, lb, tr))
    grp, arrows = g.to_group()
    pos = {x: i for i, x in enumerate(arrows)}
    q = SemiQuadruple(
        grp,
        Subgroup(grp, [pos[x] for x in dg.i2v]),
        Subgroup(grp, [pos[x] for x in dg.i2h]),
        Subgroup(grp, [pos[x] for x in bundle_squares(dg, 0)]),
    )
    v = q.violations()
    if v:
        raise ConstructionError(f"lambda_section output is not a quadruple: {v[0]}")
    if not q.full_factorization:
        raise ConstructionError("lambda_section output does not factor as A H K")
    return LambdaSectionResult(q, g, arrows)


def quadruple_round_trip(q: SemiQuadruple) -> dict:
    """Build, take lambda_section with the canonical section, and compare with q."""
    res = quadruple_construct(q)
    back = lambda_section(res.dg, res.section)
    q2 = back.quadruple
    # explicit map: element -> square -> a h k'
    psi = [res.to_group[x] for x in back.element_square]
    hom = GroupHom(q2.G, q.G, psi, validate=False)
    iso = hom.violation() is None and hom.is_bijective
    subs = all(
        sorted(psi[x] for x in S2.members) == list(S.members)
        for S2, S in ((q2.H, q.H), (q2.K, q.K), (q2.A, q.A))
    )
    oracle = is_isomorphic(q2.G, q.G, cap=max(60, q.G.order)) is not None
    return {
        "squares": res.dg.squares,
        "explicit_isomorphism": iso,
        "subgroups_match": subs,
        "isomorphic_oracle": oracle,
        "ok": iso and subs and oracle,
    }
