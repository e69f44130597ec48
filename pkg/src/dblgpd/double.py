"""Finite double groupoids.

A square X is drawn with its horizontal arrows on top and bottom and its
vertical arrows on the left and right::

        top
      a ----> b
 left |   X   | right
      v       v
      c ----> d
       bottom

so ``s2v`` = top, ``t2v`` = bottom (both in H) and ``s2h`` = left,
``t2h`` = right (both in V).  ``c2h(X, Y)`` glues Y to the right of X and
needs ``right(X) == left(Y)``; ``c2v(X, Y)`` puts Y below X and needs
``bottom(X) == top(Y)``.  ``i2v(h)`` is the square with top and bottom h;
``i2h(k)`` the square with left and right k.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .algebra.group import FiniteGroup
from .algebra.iso import isomorphisms
from .groupoid import FiniteGroupoid, Violation

STAGES = ("well-formedness", "compatibility", "units", "associativity", "interchange", "inverses")


class DoubleGroupoidError(ValueError):
    pass


class PredicateMismatch(AssertionError):
    """Two characterizations of the same predicate disagreed."""


def _triples(d: dict) -> list[list[int]]:
    return sorted([f, g, h] for (f, g), h in d.items())


class DoubleGroupoid:
    def __init__(
        self,
        H: FiniteGroupoid,
        V: FiniteGroupoid,
        *,
        s2v: Sequence[int],
        t2v: Sequence[int],
        s2h: Sequence[int],
        t2h: Sequence[int],
        i2v: Sequence[int],
        i2h: Sequence[int],
        c2h: dict[tuple[int, int], int],
        c2v: dict[tuple[int, int], int],
        labels: Sequence | None = None,
        name: str = "",
    ):
        if H.objects != V.objects:
            raise DoubleGroupoidError("horizontal and vertical groupoids must share their objects")
        self.H = H
        self.V = V
        self.objects = H.objects
        self.s2v = tuple(s2v)
        self.t2v = tuple(t2v)
        self.s2h = tuple(s2h)
        self.t2h = tuple(t2h)
        self.i2v = tuple(i2v)
        self.i2h = tuple(i2h)
        self.c2h = dict(c2h)
        self.c2v = dict(c2v)
        self.squares = len(self.s2v)
        self.labels = list(labels) if labels is not None else None
        self.name = name

    def __repr__(self) -> str:
        return f"DoubleGroupoid({self.name or 'anonymous'}: {self.objects} objects, {self.H.arrows} h, {self.V.arrows} v, {self.squares} squares)"

    # -- boundary access -----------------------------------------------

    def top(self, x: int) -> int:
        return self.s2v[x]

    def bottom(self, x: int) -> int:
        return self.t2v[x]

    def left(self, x: int) -> int:
        return self.s2h[x]

    def right(self, x: int) -> int:
        return self.t2h[x]

    def boundary(self, x: int) -> tuple[int, int, int, int]:
        """(top, left, bottom, right)."""
        return (self.s2v[x], self.s2h[x], self.t2v[x], self.t2h[x])

    def corner(self, x: int) -> int:
        """The top-left object of a square."""
        return self.H.src[self.s2v[x]]

    def far_corner(self, x: int) -> int:
        return self.H.tgt[self.t2v[x]]

    def hcomp(self, *xs: int) -> int:
        acc = xs[0]
        for x in xs[1:]:
            acc = self.c2h[(acc, x)]
        return acc

    def vcomp(self, *xs: int) -> int:
        acc = xs[0]
        for x in xs[1:]:
            acc = self.c2v[(acc, x)]
        return acc

    def grid(self, a: int, b: int, c: int, d: int) -> int:
        """The composite of the arrangement [a b; c d], rows first."""
        return self.c2v[(self.c2h[(a, b)], self.c2h[(c, d)])]

    @cached_property
    def by_boundary(self) -> dict[tuple[int, int, int, int], list[int]]:
        out: dict[tuple[int, int, int, int], list[int]] = {}
        for x in range(self.squares):
            out.setdefault(self.boundary(x), []).append(x)
        return out

    @cached_property
    def by_left(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for x in range(self.squares):
            out.setdefault(self.s2h[x], []).append(x)
        return out

    @cached_property
    def by_top(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for x in range(self.squares):
            out.setdefault(self.s2v[x], []).append(x)
        return out

    @cached_property
    def by_top_left(self) -> dict[tuple[int, int], list[int]]:
        out: dict[tuple[int, int], list[int]] = {}
        for x in range(self.squares):
            out.setdefault((self.s2v[x], self.s2h[x]), []).append(x)
        return out

    def squares_over(self, top: int, left: int, bottom: int, right: int) -> list[int]:
        return self.by_boundary.get((top, left, bottom, right), [])

    # -- inverses --------------------------------------------------------

    def _find_inverse(self, x: int, horizontal: bool) -> int | None:
        H, V = self.H, self.V
        t, l, b, r = self.boundary(x)
        if horizontal:
            want = (H.inv[t], r, H.inv[b], l)
            for y in self.by_boundary.get(want, []):
                if self.c2h.get((x, y)) == self.i2h[l] and self.c2h.get((y, x)) == self.i2h[r]:
                    return y
        else:
            want = (b, V.inv[l], t, V.inv[r])
            for y in self.by_boundary.get(want, []):
                if self.c2v.get((x, y)) == self.i2v[t] and self.c2v.get((y, x)) == self.i2v[b]:
                    return y
        return None

    @cached_property
    def hinv(self) -> tuple[int, ...]:
        out = []
        for x in range(self.squares):
            y = self._find_inverse(x, True)
            if y is None:
                raise DoubleGroupoidError(f"square {x} has no horizontal inverse")
            out.append(y)
        return tuple(out)

    @cached_property
    def vinv(self) -> tuple[int, ...]:
        out = []
        for x in range(self.squares):
            y = self._find_inverse(x, False)
            if y is None:
                raise DoubleGroupoidError(f"square {x} has no vertical inverse")
            out.append(y)
        return tuple(out)

    # -- serialization ------------------------------------------------

    def to_dict(self) -> dict:
        H, V = self.H, self.V
        d = {
            "kind": "double_groupoid",
            "objects": self.objects,
            "h_arrows": H.arrows,
            "v_arrows": V.arrows,
            "squares": self.squares,
            "s1h": list(H.src),
            "t1h": list(H.tgt),
            "s1v": list(V.src),
            "t1v": list(V.tgt),
            "i1h": list(H.ident),
            "i1v": list(V.ident),
            "inv1h": list(H.inv),
            "inv1v": list(V.inv),
            "c1h": _triples(H.comp),
            "c1v": _triples(V.comp),
            "s2h": list(self.s2h),
            "t2h": list(self.t2h),
            "s2v": list(self.s2v),
            "t2v": list(self.t2v),
            "i2h": list(self.i2h),
            "i2v": list(self.i2v),
            "c2h": _triples(self.c2h),
            "c2v": _triples(self.c2v),
        }
        if self.name:
            d["name"] = self.name
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "DoubleGroupoid":
        """Load without checking axioms; run ``verify`` on the result."""
        try:
            n = d["objects"]
            H = FiniteGroupoid(
                n, d["s1h"], d["t1h"], {(f, g): h for f, g, h in d["c1h"]}, d["i1h"], d.get("inv1h"), validate=False
            )
            V = FiniteGroupoid(
                n, d["s1v"], d["t1v"], {(f, g): h for f, g, h in d["c1v"]}, d["i1v"], d.get("inv1v"), validate=False
            )
            dg = cls(
                H,
                V,
                s2v=d["s2v"],
                t2v=d["t2v"],
                s2h=d["s2h"],
                t2h=d["t2h"],
                i2v=d["i2v"],
                i2h=d["i2h"],
                c2h={(f, g): h for f, g, h in d["c2h"]},
                c2v={(f, g): h for f, g, h in d["c2v"]},
                name=d.get("name", ""),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise DoubleGroupoidError(f"malformed double groupoid JSON: {exc!r}") from None
        for key, count in (("h_arrows", H.arrows), ("v_arrows", V.arrows), ("squares", dg.squares)):
            if key in d and d[key] != count:
                raise DoubleGroupoidError(f"declared {key}={d[key]} does not match tables ({count})")
        return dg

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_squares(
        cls,
        H: FiniteGroupoid,
        V: FiniteGroupoid,
        squares: Sequence,
        boundary,
        hcompose,
        vcompose,
        hident,
        vident,
        *,
        name: str = "",
    ) -> "DoubleGroupoid":
        """Build tables from a list of hashable square descriptions.

        ``boundary(x) -> (top, left, bottom, right)``; ``hcompose``/``vcompose``
        return the description of a composite; ``hident(k)``/``vident(h)``
        the identity squares.
        """
        pos = {x: i for i, x in enumerate(squares)}
        if len(pos) != len(squares):
            raise DoubleGroupoidError("square descriptions must be distinct")
        bd = [boundary(x) for x in squares]
        by_left: dict[int, list[int]] = {}
        by_top: dict[int, list[int]] = {}
        for i, (t, l, b, r) in enumerate(bd):
            by_left.setdefault(l, []).append(i)
            by_top.setdefault(t, []).append(i)

        def lookup(x, what):
            try:
                return pos[x]
            except KeyError:
                raise DoubleGroupoidError(f"{what} {x!r} is not among the squares") from None

        c2h, c2v = {}, {}
        for i, x in enumerate(squares):
            for j in by_left.get(bd[i][3], []):
                c2h[(i, j)] = lookup(hcompose(x, squares[j]), "horizontal composite")
            for j in by_top.get(bd[i][2], []):
                c2v[(i, j)] = lookup(vcompose(x, squares[j]), "vertical composite")
        return cls(
            H,
            V,
            s2v=[b[0] for b in bd],
            s2h=[b[1] for b in bd],
            t2v=[b[2] for b in bd],
            t2h=[b[3] for b in bd],
            i2v=[lookup(vident(h), "identity") for h in range(H.arrows)],
            i2h=[lookup(hident(k), "identity") for k in range(V.arrows)],
            c2h=c2h,
            c2v=c2v,
            labels=list(squares),
            name=name,
        )


# -- verification -------------------------------------------------------


@dataclass
class StageResult:
    stage: str
    status: str  # pass, fail, skipped
    checked: int = 0
    violations: list[Violation] = field(default_factory=list)

    def to_dict(self) -> dict:
        d = {"stage": self.stage, "status": self.status, "checked": self.checked}
        if self.violations:
            d["violations"] = [{"axiom": v.axiom, "witness": list(v.witness)} for v in self.violations]
        return d


@dataclass
class VerifyReport:
    stages: list[StageResult]

    @property
    def ok(self) -> bool:
        return all(s.status == "pass" for s in self.stages)

    @property
    def first_failure(self) -> Violation | None:
        for s in self.stages:
            if s.status == "fail":
                return s.violations[0]
        return None

    @property
    def failed_stage(self) -> str | None:
        v = self.first_failure
        return v.stage if v else None

    def to_dict(self) -> dict:
        d = {"ok": self.ok, "stages": [s.to_dict() for s in self.stages]}
        v = self.first_failure
        if v is not None:
            d["first_failure"] = {"stage": v.stage, "axiom": v.axiom, "witness": list(v.witness)}
        return d


class _Checker:
    def __init__(self, dg: DoubleGroupoid, limit: int):
        self.dg = dg
        self.limit = limit

    def _lift(self, stage: str, found) -> list[tuple[str, tuple]]:
        return [(v.axiom, v.witness) for v in found]

    def _oned(self, method: str):
        out = []
        for tag, g in (("H", self.dg.H), ("V", self.dg.V)):
            for axiom, w in getattr(g, method)():
                out.append((f"{tag}: {axiom}", w))
        return out

    def wellformed(self):
        dg = self.dg
        H, V = dg.H, dg.V
        out = self._oned("_check_wellformed")
        if out:
            return out, 0
        n = dg.squares
        for name, table, size in (("s2v", dg.s2v, H.arrows), ("t2v", dg.t2v, H.arrows), ("s2h", dg.s2h, V.arrows), ("t2h", dg.t2h, V.arrows)):
            if len(table) != n:
                return [(f"{name} has one entry per square", (len(table), n))], 0
            for x, val in enumerate(table):
                if not 0 <= val < size:
                    return [(f"{name} in range", (x, val))], 0
        if len(dg.i2v) != H.arrows or len(dg.i2h) != V.arrows:
            return [("identity tables have one entry per arrow", (len(dg.i2v), len(dg.i2h)))], 0
        for name, table in (("i2v", dg.i2v), ("i2h", dg.i2h)):
            for x, val in enumerate(table):
                if not 0 <= val < n:
                    return [(f"{name} in range", (x, val))], 0
        checked = 0
        for name, comp, edge_out, index in (
            ("c2h", dg.c2h, dg.t2h, dg.by_left),
            ("c2v", dg.c2v, dg.t2v, dg.by_top),
        ):
            edge_in = dg.s2h if name == "c2h" else dg.s2v
            for (x, y), z in comp.items():
                checked += 1
                if not (0 <= x < n and 0 <= y < n and 0 <= z < n):
                    return [(f"{name} entry in range", (x, y, z))], checked
                if edge_out[x] != edge_in[y]:
                    out.append((f"{name} defined only on composable pairs", (x, y)))
                    if len(out) >= self.limit:
                        return out, checked
            for x in range(n):
                for y in index.get(edge_out[x], []):
                    if (x, y) not in comp:
                        out.append((f"{name} defined on every composable pair", (x, y)))
                        if len(out) >= self.limit:
                            return out, checked
        return out, checked

    def compatibility(self):
        dg = self.dg
        H, V = dg.H, dg.V
        out = self._oned("_check_boundaries")
        checked = 0
        for x in range(dg.squares):
            t, l, b, r = dg.boundary(x)
            checked += 4
            if V.src[l] != H.src[t]:
                out.append(("corner: src(left) = src(top)", (x,)))
            if V.tgt[l] != H.src[b]:
                out.append(("corner: tgt(left) = src(bottom)", (x,)))
            if V.src[r] != H.tgt[t]:
                out.append(("corner: src(right) = tgt(top)", (x,)))
            if V.tgt[r] != H.tgt[b]:
                out.append(("corner: tgt(right) = tgt(bottom)", (x,)))
        for (x, y), z in dg.c2h.items():
            checked += 1
            want = (H.comp[(dg.s2v[x], dg.s2v[y])], dg.s2h[x], H.comp[(dg.t2v[x], dg.t2v[y])], dg.t2h[y])
            if dg.boundary(z) != want:
                out.append(("boundary of a horizontal composite", (x, y)))
        for (x, y), z in dg.c2v.items():
            checked += 1
            want = (dg.s2v[x], V.comp[(dg.s2h[x], dg.s2h[y])], dg.t2v[y], V.comp[(dg.t2h[x], dg.t2h[y])])
            if dg.boundary(z) != want:
                out.append(("boundary of a vertical composite", (x, y)))
        for h in range(H.arrows):
            checked += 1
            if dg.boundary(dg.i2v[h]) != (h, V.ident[H.src[h]], h, V.ident[H.tgt[h]]):
                out.append(("boundary of the vertical identity square", (h,)))
        for k in range(V.arrows):
            checked += 1
            if dg.boundary(dg.i2h[k]) != (H.ident[V.src[k]], k, H.ident[V.tgt[k]], k):
                out.append(("boundary of the horizontal identity square", (k,)))
        return out[: self.limit], checked

    def units(self):
        dg = self.dg
        H, V = dg.H, dg.V
        out = self._oned("_check_units")
        checked = 0
        for x in range(dg.squares):
            t, l, b, r = dg.boundary(x)
            checked += 4
            if dg.c2h[(dg.i2h[l], x)] != x:
                out.append(("left unit for c2h", (x,)))
            if dg.c2h[(x, dg.i2h[r])] != x:
                out.append(("right unit for c2h", (x,)))
            if dg.c2v[(dg.i2v[t], x)] != x:
                out.append(("top unit for c2v", (x,)))
            if dg.c2v[(x, dg.i2v[b])] != x:
                out.append(("bottom unit for c2v", (x,)))
        for (h1, h2), h in H.comp.items():
            checked += 1
            if dg.c2h[(dg.i2v[h1], dg.i2v[h2])] != dg.i2v[h]:
                out.append(("i2v respects composition", (h1, h2)))
        for (k1, k2), k in V.comp.items():
            checked += 1
            if dg.c2v[(dg.i2h[k1], dg.i2h[k2])] != dg.i2h[k]:
                out.append(("i2h respects composition", (k1, k2)))
        for a in range(dg.objects):
            checked += 1
            if dg.i2h[V.ident[a]] != dg.i2v[H.ident[a]]:
                out.append(("double identity i2h(i1v a) = i2v(i1h a)", (a,)))
        return out[: self.limit], checked

    def associativity(self):
        dg = self.dg
        out = self._oned("_check_assoc")
        checked = 0
        c = dg.c2h
        for (x, y), xy in c.items():
            for z in dg.by_left.get(dg.t2h[y], []):
                checked += 1
                if c[(xy, z)] != c[(x, c[(y, z)])]:
                    out.append(("c2h associativity", (x, y, z)))
                    if len(out) >= self.limit:
                        return out, checked
        c = dg.c2v
        for (x, y), xy in c.items():
            for z in dg.by_top.get(dg.t2v[y], []):
                checked += 1
                if c[(xy, z)] != c[(x, c[(y, z)])]:
                    out.append(("c2v associativity", (x, y, z)))
                    if len(out) >= self.limit:
                        return out, checked
        return out, checked

    def interchange(self):
        dg = self.dg
        ch, cv = dg.c2h, dg.c2v
        out = []
        checked = 0
        for (a, b), ab in ch.items():
            bb = dg.t2v[b]
            for c in dg.by_top.get(dg.t2v[a], []):
                ac = cv[(a, c)]
                for d in dg.by_top_left.get((bb, dg.t2h[c]), []):
                    checked += 1
                    if cv[(ab, ch[(c, d)])] != ch[(ac, cv[(b, d)])]:
                        out.append(("interchange", (a, b, c, d)))
                        if len(out) >= self.limit:
                            return out, checked
        return out, checked

    def inverses(self):
        dg = self.dg
        out = self._oned("_check_inverses")
        for x in range(dg.squares):
            if dg._find_inverse(x, True) is None:
                out.append(("horizontal inverse exists", (x,)))
            if dg._find_inverse(x, False) is None:
                out.append(("vertical inverse exists", (x,)))
        return out[: self.limit], 2 * dg.squares


def verify(dg: DoubleGroupoid, *, limit: int = 5) -> VerifyReport:
    """Run the axiom stages in order; the first failing stage skips the rest."""
    checker = _Checker(dg, limit)
    steps = [
        ("well-formedness", checker.wellformed),
        ("compatibility", checker.compatibility),
        ("units", checker.units),
        ("associativity", checker.associativity),
        ("interchange", checker.interchange),
        ("inverses", checker.inverses),
    ]
    results = []
    failed = False
    for stage, fn in steps:
        if failed:
            results.append(StageResult(stage, "skipped"))
            continue
        found, checked = fn()
        if found:
            failed = True
            results.append(StageResult(stage, "fail", checked, [Violation(stage, a, tuple(w)) for a, w in found]))
        else:
            results.append(StageResult(stage, "pass", checked))
    return VerifyReport(results)


def require_valid(dg: DoubleGroupoid) -> DoubleGroupoid:
    rep = verify(dg)
    if not rep.ok:
        raise DoubleGroupoidError(f"double groupoid axiom fails: {rep.first_failure}")
    return dg


# -- functors -----------------------------------------------------------


@dataclass
class DoubleFunctor:
    source: DoubleGroupoid
    target: DoubleGroupoid
    obj: Sequence[int]
    h: Sequence[int]
    v: Sequence[int]
    sq: Sequence[int]

    def violations(self) -> list[str]:
        S, T = self.source, self.target
        o, h, v, s = self.obj, self.h, self.v, self.sq
        out = []
        for f in range(S.H.arrows):
            if T.H.src[h[f]] != o[S.H.src[f]] or T.H.tgt[h[f]] != o[S.H.tgt[f]]:
                out.append(f"horizontal arrow {f}: boundary not preserved")
        for f in range(S.V.arrows):
            if T.V.src[v[f]] != o[S.V.src[f]] or T.V.tgt[v[f]] != o[S.V.tgt[f]]:
                out.append(f"vertical arrow {f}: boundary not preserved")
        for a in range(S.objects):
            if h[S.H.ident[a]] != T.H.ident[o[a]] or v[S.V.ident[a]] != T.V.ident[o[a]]:
                out.append(f"object {a}: arrow identities not preserved")
        for (f, g), fg in S.H.comp.items():
            if T.H.comp.get((h[f], h[g])) != h[fg]:
                out.append(f"horizontal composite ({f}, {g}) not preserved")
        for (f, g), fg in S.V.comp.items():
            if T.V.comp.get((v[f], v[g])) != v[fg]:
                out.append(f"vertical composite ({f}, {g}) not preserved")
        for x in range(S.squares):
            t, l, b, r = S.boundary(x)
            if T.boundary(s[x]) != (h[t], v[l], h[b], v[r]):
                out.append(f"square {x}: boundary not preserved")
        for f in range(S.H.arrows):
            if s[S.i2v[f]] != T.i2v[h[f]]:
                out.append(f"i2v({f}) not preserved")
        for f in range(S.V.arrows):
            if s[S.i2h[f]] != T.i2h[v[f]]:
                out.append(f"i2h({f}) not preserved")
        for (x, y), z in S.c2h.items():
            if T.c2h.get((s[x], s[y])) != s[z]:
                out.append(f"horizontal composite of squares ({x}, {y}) not preserved")
        for (x, y), z in S.c2v.items():
            if T.c2v.get((s[x], s[y])) != s[z]:
                out.append(f"vertical composite of squares ({x}, {y}) not preserved")
        return out

    def check(self) -> bool:
        return not self.violations()

    def is_isomorphism(self) -> bool:
        S, T = self.source, self.target
        sizes = (S.objects == T.objects and S.H.arrows == T.H.arrows and S.V.arrows == T.V.arrows and S.squares == T.squares)
        bij = all(len(set(m)) == len(m) for m in (self.obj, self.h, self.v, self.sq))
        return sizes and bij and self.check()


def frame_double(dg: DoubleGroupoid) -> tuple[DoubleGroupoid, list[int]]:
    """The slim image: one square per realized boundary, and the projection."""
    bds = sorted(dg.by_boundary)
    pos = {b: i for i, b in enumerate(bds)}
    proj = [pos[dg.boundary(x)] for x in range(dg.squares)]
    rep = [dg.by_boundary[b][0] for b in bds]
    fr = DoubleGroupoid(
        dg.H,
        dg.V,
        s2v=[b[0] for b in bds],
        s2h=[b[1] for b in bds],
        t2v=[b[2] for b in bds],
        t2h=[b[3] for b in bds],
        i2v=[proj[x] for x in dg.i2v],
        i2h=[proj[x] for x in dg.i2h],
        c2h={(i, j): proj[dg.c2h[(rep[i], rep[j])]] for i in range(len(bds)) for j in range(len(bds)) if bds[i][3] == bds[j][1]},
        c2v={(i, j): proj[dg.c2v[(rep[i], rep[j])]] for i in range(len(bds)) for j in range(len(bds)) if bds[i][2] == bds[j][0]},
        name=f"frame({dg.name})" if dg.name else "",
    )
    return fr, proj


def section_functor(dg: DoubleGroupoid, pick: Sequence[int]) -> DoubleFunctor:
    """Wrap a choice of square per frame square as a map frame -> dg (identity on boundaries)."""
    fr, proj = frame_double(dg)
    for i, x in enumerate(pick):
        if proj[x] != i:
            raise DoubleGroupoidError(f"section picks square {x} outside its frame class {i}")
    return DoubleFunctor(fr, dg, range(dg.objects), range(dg.H.arrows), range(dg.V.arrows), list(pick))


# -- core ---------------------------------------------------------------


def core_squares(dg: DoubleGroupoid) -> list[int]:
    """Squares whose bottom and right are identities."""
    H, V = dg.H, dg.V
    idh, idv = set(H.ident), set(V.ident)
    return [x for x in range(dg.squares) if dg.t2v[x] in idh and dg.t2h[x] in idv]


def core_product(dg: DoubleGroupoid, x: int, y: int) -> int:
    """X then Y in the core groupoid; Y may be any square starting where X ends."""
    return dg.grid(x, dg.i2v[dg.s2v[y]], dg.i2h[dg.s2h[y]], y)


def core_inverse(dg: DoubleGroupoid, x: int) -> int:
    """Horizontal inverse of X stacked on the identity square of left(X)^-1."""
    return dg.c2v[(dg.hinv[x], dg.i2h[dg.V.inv[dg.s2h[x]]])]


def core_groupoid(dg: DoubleGroupoid) -> tuple[FiniteGroupoid, list[int]]:
    """The core groupoid and the square behind each of its arrows.

    An arrow runs from the top-left corner to the bottom-right corner.
    """
    sq = core_squares(dg)
    pos = {x: i for i, x in enumerate(sq)}
    src = [dg.corner(x) for x in sq]
    tgt = [dg.far_corner(x) for x in sq]
    by_src: dict[int, list[int]] = {}
    for i, a in enumerate(src):
        by_src.setdefault(a, []).append(i)
    comp = {}
    for i, x in enumerate(sq):
        for j in by_src.get(tgt[i], []):
            z = core_product(dg, x, sq[j])
            if z not in pos:
                raise DoubleGroupoidError(f"core product of squares {x}, {sq[j]} left the core")
            comp[(i, j)] = pos[z]
    ident = [pos[dg.i2v[dg.H.ident[a]]] for a in range(dg.objects)]
    inv = [pos[core_inverse(dg, x)] for x in sq]
    g = FiniteGroupoid(dg.objects, src, tgt, comp, ident, inv, validate=False)
    problems = g.check()
    if problems:
        raise DoubleGroupoidError(f"core groupoid fails a groupoid axiom: {problems[0]}")
    return g, sq


def bundle_squares(dg: DoubleGroupoid, a: int) -> list[int]:
    H, V = dg.H, dg.V
    want = (H.ident[a], V.ident[a], H.ident[a], V.ident[a])
    out = dg.by_boundary.get(want, [])
    e = dg.i2v[H.ident[a]]
    return sorted(out, key=lambda x: (x != e, x))


def core_bundle(dg: DoubleGroupoid) -> dict[int, tuple[FiniteGroup, list[int]]]:
    """Per object: the group of squares with all boundaries identities (under c2h)."""
    out = {}
    for a in range(dg.objects):
        sq = bundle_squares(dg, a)
        pos = {x: i for i, x in enumerate(sq)}
        table = [[pos[dg.c2h[(x, y)]] for y in sq] for x in sq]
        out[a] = (FiniteGroup(table), sq)
    return out


def eckmann_hilton_check(dg: DoubleGroupoid) -> dict:
    """On every bundle group, horizontal and vertical composition agree and commute."""
    agree = abelian = True
    witness = None
    checked = 0
    for a in range(dg.objects):
        sq = bundle_squares(dg, a)
        for x in sq:
            for y in sq:
                checked += 1
                if dg.c2h[(x, y)] != dg.c2v[(x, y)]:
                    agree = False
                    witness = witness or ("compositions differ", a, x, y)
                if dg.c2h[(x, y)] != dg.c2h[(y, x)]:
                    abelian = False
                    witness = witness or ("not commutative", a, x, y)
    d = {"compositions_agree": agree, "abelian": abelian, "pairs_checked": checked, "ok": agree and abelian}
    if witness:
        d["witness"] = list(witness)
    return d


def fiber_size_check(dg: DoubleGroupoid) -> dict:
    """Every realized boundary carries exactly |bundle at its top-left corner| squares."""
    sizes = {a: len(bundle_squares(dg, a)) for a in range(dg.objects)}
    bad = [
        (bd, len(xs), sizes[dg.corner(xs[0])])
        for bd, xs in dg.by_boundary.items()
        if len(xs) != sizes[dg.corner(xs[0])]
    ]
    return {"ok": not bad, "boundaries": len(dg.by_boundary), "bad": [list(b) for b in bad[:5]]}


# -- translation lemmas ---------------------------------------------------


def _transport_formula(dg: DoubleGroupoid, x: int, y: int) -> int:
    # (X over Y^-v), then the vertical identity on top(Y)^-1 to the right
    z = dg.c2v[(x, dg.vinv[y])]
    return dg.c2h[(z, dg.i2v[dg.H.inv[dg.s2v[y]]])]


def core_action(dg: DoubleGroupoid, t: int, y: int) -> int:
    """t acting on Y: the arrangement [t, i2v(top Y); i2h(left Y), Y]."""
    return core_product(dg, t, y)


def target_transport(dg: DoubleGroupoid, x: int, y: int) -> int:
    """The unique core square t with t acting on Y giving X, for X, Y with equal targets."""
    if dg.t2v[x] != dg.t2v[y] or dg.t2h[x] != dg.t2h[y]:
        raise DoubleGroupoidError(f"squares {x} and {y} do not share their targets")
    t = _transport_formula(dg, x, y)
    _check_unique(dg, core_squares(dg), x, y, t)
    return t


def translation_element(dg: DoubleGroupoid, x: int, y: int) -> int:
    """The unique bundle square u with u acting on Y giving X, for X, Y with equal boundaries."""
    if dg.boundary(x) != dg.boundary(y):
        raise DoubleGroupoidError(f"squares {x} and {y} have different boundaries")
    u = _transport_formula(dg, x, y)
    _check_unique(dg, bundle_squares(dg, dg.corner(x)), x, y, u)
    return u


def _check_unique(dg: DoubleGroupoid, pool: Iterable[int], x: int, y: int, t: int) -> None:
    corner = dg.corner(y)
    hits = [s for s in pool if dg.far_corner(s) == corner and core_action(dg, s, y) == x]
    if hits != [t]:
        raise DoubleGroupoidError(f"transport between {x} and {y} is not unique: {hits}")


# -- predicates -----------------------------------------------------------


def _composable_pairs(dg: DoubleGroupoid, first: str) -> Iterable[tuple[int, int]]:
    H, V = dg.H, dg.V
    if first == "targets":
        # (bottom, right) meeting at the bottom-right corner
        for h in range(H.arrows):
            for k in range(V.arrows):
                if H.tgt[h] == V.tgt[k]:
                    yield h, k
    else:
        # (left, bottom) meeting at the bottom-left corner
        for k in range(V.arrows):
            for h in range(H.arrows):
                if V.tgt[k] == H.src[h]:
                    yield k, h


def slim_by_bundle(dg: DoubleGroupoid) -> bool:
    return all(len(bundle_squares(dg, a)) == 1 for a in range(dg.objects))


def slim_by_boundary(dg: DoubleGroupoid) -> bool:
    return all(len(xs) == 1 for xs in dg.by_boundary.values())


def exclusive_by_core(dg: DoubleGroupoid) -> bool:
    H, V = dg.H, dg.V
    return all(dg.s2v[x] in H.ident and dg.s2h[x] in V.ident for x in core_squares(dg))


def exclusive_by_boundary(dg: DoubleGroupoid) -> bool:
    """Each of (top,left), (top,right), (bottom,left), (bottom,right) fixes the whole boundary."""
    for pick in ((0, 1), (0, 3), (2, 1), (2, 3)):
        seen: dict[tuple[int, int], tuple] = {}
        for bd in dg.by_boundary:
            key = (bd[pick[0]], bd[pick[1]])
            if seen.setdefault(key, bd) != bd:
                return False
    return True


def is_maximal(dg: DoubleGroupoid) -> bool:
    """Every (bottom, right) pair with a common endpoint bounds a square."""
    realized = {(bd[2], bd[3]) for bd in dg.by_boundary}
    return all(p in realized for p in _composable_pairs(dg, "targets"))


def vacant_direct(dg: DoubleGroupoid) -> bool:
    """Every composable (left, bottom) pair bounds exactly one square."""
    counts: dict[tuple[int, int], int] = {}
    for x in range(dg.squares):
        key = (dg.s2h[x], dg.t2v[x])
        counts[key] = counts.get(key, 0) + 1
    return all(counts.get(p, 0) == 1 for p in _composable_pairs(dg, "left-bottom"))


def predicate_report(dg: DoubleGroupoid) -> dict:
    slim = (slim_by_bundle(dg), slim_by_boundary(dg))
    excl = (exclusive_by_core(dg), exclusive_by_boundary(dg))
    maxi = is_maximal(dg)
    vac = vacant_direct(dg)
    return {
        "slim": slim[0],
        "exclusive": excl[0],
        "maximal": maxi,
        "vacant": vac,
        "slim_characterizations_agree": slim[0] == slim[1],
        "exclusive_characterizations_agree": excl[0] == excl[1],
        "vacant_iff_slim_exclusive_maximal": vac == (slim[0] and excl[0] and maxi),
    }


def is_slim(dg: DoubleGroupoid) -> bool:
    a, b = slim_by_bundle(dg), slim_by_boundary(dg)
    if a != b:
        raise PredicateMismatch(f"slim: bundle test says {a}, boundary test says {b}")
    return a


def is_exclusive(dg: DoubleGroupoid) -> bool:
    a, b = exclusive_by_core(dg), exclusive_by_boundary(dg)
    if a != b:
        raise PredicateMismatch(f"exclusive: core test says {a}, boundary test says {b}")
    return a


def is_vacant(dg: DoubleGroupoid) -> bool:
    a = vacant_direct(dg)
    b = is_slim(dg) and is_exclusive(dg) and is_maximal(dg)
    if a != b:
        raise PredicateMismatch(f"vacant: direct test says {a}, slim/exclusive/maximal says {b}")
    return a


# -- core diagram ---------------------------------------------------------


@dataclass
class CoreDiagram:
    """Bundle -> (top kernel, left kernel) -> core groupoid -> (H, V).

    Arrows of every groupoid here are listed by the squares (or boundary
    arrows) that carry them; ``top``/``left`` send core arrows to H and V.
    """

    bundle: dict[int, tuple[FiniteGroup, list[int]]]
    core: FiniteGroupoid
    core_squares: list[int]
    H: FiniteGroupoid
    V: FiniteGroupoid
    top: list[int]
    left: list[int]
    source: DoubleGroupoid | None = None

    @property
    def top_kernel(self) -> list[int]:
        return [i for i, h in enumerate(self.top) if h in self.H.ident]

    @property
    def left_kernel(self) -> list[int]:
        return [i for i, k in enumerate(self.left) if k in self.V.ident]

    def bundle_arrows(self) -> list[int]:
        pos = {x: i for i, x in enumerate(self.core_squares)}
        return sorted(pos[x] for _, sq in self.bundle.values() for x in sq)

    def summary(self) -> dict:
        orders = {str(a): g.order for a, (g, _) in self.bundle.items()}
        return {
            "bundle_orders": orders,
            "core_arrows": self.core.arrows,
            "top_kernel": len(self.top_kernel),
            "left_kernel": len(self.left_kernel),
            "h_arrows": self.H.arrows,
            "v_arrows": self.V.arrows,
            "core_is_bundle": self.core.arrows == sum(g.order for g, _ in self.bundle.values()),
            "vertex_groups": {str(a): self.core.vertex_group(a)[0].order for a in range(self.core.objects)},
        }


def core_diagram(dg: DoubleGroupoid) -> CoreDiagram:
    core, sq = core_groupoid(dg)
    return CoreDiagram(core_bundle(dg), core, sq, dg.H, dg.V, [dg.s2v[x] for x in sq], [dg.s2h[x] for x in sq], dg)


def exactness_check(cd: CoreDiagram) -> dict:
    """The paired projection to H x V is a functor whose kernel is exactly the bundle."""
    g = cd.core
    functor = all(
        cd.H.comp[(cd.top[f], cd.top[k])] == cd.top[h] and cd.V.comp[(cd.left[f], cd.left[k])] == cd.left[h]
        for (f, k), h in g.comp.items()
    )
    boundaries = all(
        cd.H.src[cd.top[f]] == g.src[f] and cd.H.tgt[cd.top[f]] == g.tgt[f]
        and cd.V.src[cd.left[f]] == g.src[f] and cd.V.tgt[cd.left[f]] == g.tgt[f]
        for f in range(g.arrows)
    )
    kernel = sorted(set(cd.top_kernel) & set(cd.left_kernel))
    bundle = cd.bundle_arrows()
    abelian = all(grp.is_abelian for grp, _ in cd.bundle.values())
    return {
        "projections_are_functors": functor and boundaries,
        "kernel_equals_bundle": kernel == bundle,
        "bundle_abelian": abelian,
        "kernel_size": len(kernel),
        "ok": functor and boundaries and kernel == bundle and abelian,
    }


# -- isomorphism ----------------------------------------------------------


def one_object_groups(dg: DoubleGroupoid) -> tuple[FiniteGroup, FiniteGroup]:
    if dg.objects != 1:
        raise DoubleGroupoidError("only double groups (one object) are supported here")
    return dg.H.to_group()[0], dg.V.to_group()[0]


def double_group_isomorphism(d1: DoubleGroupoid, d2: DoubleGroupoid) -> DoubleFunctor | None:
    """A structure-preserving bijection d1 -> d2 of double groups, or None.

    Boundary isomorphisms are enumerated; for each, squares are matched by
    backtracking with forced propagation through both compositions.
    """
    if d1.squares != d2.squares or d1.H.arrows != d2.H.arrows or d1.V.arrows != d2.V.arrows:
        return None
    (g1h, l1h), (g1v, l1v) = d1.H.to_group(), d1.V.to_group()
    (g2h, l2h), (g2v, l2v) = d2.H.to_group(), d2.V.to_group()
    hisos = list(isomorphisms(g1h, g2h))
    visos = list(isomorphisms(g1v, g2v))
    for fh in hisos:
        hmap = [0] * d1.H.arrows
        for i, x in enumerate(l1h):
            hmap[x] = l2h[fh.map[i]]
        for fv in visos:
            vmap = [0] * d1.V.arrows
            for i, x in enumerate(l1v):
                vmap[x] = l2v[fv.map[i]]
            sq = _match_squares(d1, d2, hmap, vmap)
            if sq is not None:
                return DoubleFunctor(d1, d2, [0], hmap, vmap, sq)
    return None


def _match_squares(d1: DoubleGroupoid, d2: DoubleGroupoid, hmap, vmap) -> list[int] | None:
    n = d1.squares
    want = [(hmap[t], vmap[l], hmap[b], vmap[r]) for t, l, b, r in (d1.boundary(x) for x in range(n))]
    if sorted(len(d1.by_boundary[d1.boundary(x)]) for x in range(n)) != sorted(
        len(d2.by_boundary.get(w, [])) for w in want
    ):
        return None
    f = [-1] * n
    used = [False] * n
    trail: list[int] = []

    def assign(x: int, y: int) -> bool:
        if f[x] != -1:
            return f[x] == y
        if used[y] or d2.boundary(y) != want[x]:
            return False
        f[x] = y
        used[y] = True
        trail.append(x)
        return True

    def propagate() -> bool:
        changed = True
        while changed:
            changed = False
            for comp1, comp2 in ((d1.c2h, d2.c2h), (d1.c2v, d2.c2v)):
                for (x, y), z in comp1.items():
                    if f[x] != -1 and f[y] != -1:
                        w = comp2[(f[x], f[y])]
                        if f[z] == -1:
                            if not assign(z, w):
                                return False
                            changed = True
                        elif f[z] != w:
                            return False
        return True

    def undo(mark: int) -> None:
        while len(trail) > mark:
            x = trail.pop()
            used[f[x]] = False
            f[x] = -1

    for h in range(d1.H.arrows):
        if not assign(d1.i2v[h], d2.i2v[hmap[h]]):
            return None
    for k in range(d1.V.arrows):
        if not assign(d1.i2h[k], d2.i2h[vmap[k]]):
            return None
    if not propagate():
        return None

    def rec() -> bool:
        try:
            x = f.index(-1)
        except ValueError:
            return True
        for y in d2.by_boundary.get(want[x], []):
            if used[y]:
                continue
            mark = len(trail)
            if assign(x, y) and propagate() and rec():
                return True
            undo(mark)
        return False

    return list(f) if rec() else None
