"""Core diagrams from exact sequences, Goursat data, and the finite spin covers."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .algebra.builders import alternating, cyclic, direct_product, product_index, product_pair, sl2
from .algebra.goursat import GoursatQuintuple, goursat_subgroups, quintuple_from_subgroup, subgroup_from_quintuple
from .algebra.group import FiniteGroup, GroupError, GroupHom, Subgroup
from .algebra.iso import is_isomorphic
from .algebra.subgroups import center_subgroup, quotient
from .double import core_diagram, exactness_check, predicate_report
from .enumeration import EnumerationTask, enumerate_double_groups


class ExactnessError(ValueError):
    pass


@dataclass
class CoreDiagramSkeleton:
    """A -> G -> H x K with the two kernels of the factor projections."""

    A: FiniteGroup
    G: FiniteGroup
    H: FiniteGroup
    K: FiniteGroup
    emb: GroupHom
    top: GroupHom
    left: GroupHom

    @property
    def top_kernel(self) -> Subgroup:
        return self.top.kernel()

    @property
    def left_kernel(self) -> Subgroup:
        return self.left.kernel()

    def check(self) -> dict:
        kernel = set(self.top_kernel.members) & set(self.left_kernel.members)
        image = set(self.emb.map)
        return {
            "embedding_injective": self.emb.is_injective,
            "bundle_abelian": self.A.is_abelian,
            "kernel_equals_bundle": kernel == image,
            "kernel_size": len(kernel),
            "top_kernel": len(self.top_kernel),
            "left_kernel": len(self.left_kernel),
            "ok": self.emb.is_injective and self.A.is_abelian and kernel == image,
        }


def core_group_from_exact_sequence(A: FiniteGroup, G: FiniteGroup, emb: GroupHom, proj: GroupHom) -> CoreDiagramSkeleton:
    """Split proj: G -> H x K into its two components and check {e} -> A -> G -> H x K."""
    P = proj.codomain
    if P.factors is None:
        raise ExactnessError("proj must land in a group built by direct_product")
    H, K = P.factors
    if emb.codomain is not G or proj.domain is not G:
        raise ExactnessError("emb must land in G and proj must start at G")
    if not emb.is_injective:
        kernel = [x for x in A.elements() if emb.map[x] == 0 and x != 0]
        raise ExactnessError(f"emb is not injective: {kernel[0]} maps to the identity")
    if not A.is_abelian:
        raise ExactnessError("the bundle group A must be abelian")
    ker = set(proj.kernel().members)
    img = set(emb.map)
    if ker != img:
        extra = sorted(ker ^ img)[0]
        where = "kernel of proj" if extra in ker else "image of emb"
        raise ExactnessError(f"sequence is not exact at G: element {extra} lies only in the {where}")
    top = GroupHom(G, H, [product_pair(P, y)[0] for y in proj.map])
    left = GroupHom(G, K, [product_pair(P, y)[1] for y in proj.map])
    sk = CoreDiagramSkeleton(A, G, H, K, emb, top, left)
    rep = sk.check()
    if not rep["ok"]:
        raise ExactnessError(f"exactness fails: {rep}")
    return sk


def duval_classify(s: Subgroup) -> GoursatQuintuple:
    """Goursat data of a subgroup of H x K, checked to rebuild the subgroup exactly."""
    q = quintuple_from_subgroup(s)
    back = subgroup_from_quintuple(s.parent, q)
    if back.members != s.members:
        raise GroupError("quintuple does not rebuild the subgroup")
    return q


def spin_cover_case_study() -> dict:
    """Binary tetrahedral and icosahedral groups, their central quotients, and 2T x 2T."""
    t2, i2 = sl2(3), sl2(5)
    out: dict = {}
    for name, g, target in (("2T", t2, alternating(4)), ("2I", i2, alternating(5))):
        z = center_subgroup(g)
        q, _ = quotient(g, z)
        iso = is_isomorphic(q, target, cap=60)
        out[name] = {
            "order": g.order,
            "center_order": z.order,
            "quotient_order": q.order,
            "quotient_isomorphic_to": f"A{4 if name == '2T' else 5}" if iso is not None else None,
            "witness": list(iso.map) if iso is not None else None,
        }
    P = direct_product(t2, t2)
    zt = center_subgroup(t2).members[1]
    diag = product_index(P, zt, zt)
    pairs = goursat_subgroups(t2, t2)
    containing = [s for s, _ in pairs if diag in s]
    side_orders = Counter(s.order // 2 for s in containing)
    central = Subgroup(P, [0, diag])
    so4, _ = quotient(P, central)
    out["pairs"] = {
        "product_order": P.order,
        "subgroups": len(pairs),
        "containing_diagonal_center": len(containing),
        "so4_side_orders": {str(k): v for k, v in sorted(side_orders.items())},
        "full_quotient_order": so4.order,
    }
    out["ok"] = (
        out["2T"]["center_order"] == 2
        and out["2T"]["quotient_isomorphic_to"] == "A4"
        and out["2I"]["quotient_isomorphic_to"] == "A5"
        and so4.order == 288
    )
    return out


def z2_example_case_study() -> dict:
    """Exclusive double groups with both boundary groups Z2 and trivial core."""
    z2, e = cyclic(2), cyclic(1)
    res = enumerate_double_groups(EnumerationTask(z2, z2, e, require_exclusive=True))
    classes = []
    for dg in res.classes:
        cd = core_diagram(dg)
        classes.append(
            {
                "squares": dg.squares,
                "boundaries": [list(x) for x in dg.labels],
                "predicates": predicate_report(dg),
                "core_diagram": cd.summary(),
                "exactness": exactness_check(cd)["ok"],
            }
        )
    return {"classes": len(res.classes), "incomplete": res.incomplete, "details": classes, "ok": len(res.classes) == 2}
