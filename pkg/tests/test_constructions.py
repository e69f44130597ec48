import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import fixture_dg, semi_quadruples, z3_quadruple
from dblgpd.algebra import (
    Subgroup,
    cyclic,
    dicyclic,
    dihedral,
    direct_product,
    is_isomorphic,
    subgroups_all,
    symmetric,
    z3_semidirect_klein,
)
from dblgpd.constructions import (
    ConstructionError,
    MatchedTriple,
    SemiQuadruple,
    check_equivalence_vacant,
    gamma,
    gamma_predicates,
    lambda_section,
    lambda_triple,
    quadruple_construct,
    quadruple_round_trip,
)
from dblgpd.double import (
    bundle_squares,
    core_bundle,
    eckmann_hilton_check,
    frame_double,
    is_exclusive,
    is_maximal,
    is_slim,
    is_vacant,
    section_functor,
    verify,
)

Z6_H, Z6_K = [0, 3], [0, 2, 4]
S3_A3, S3_T = [0, 3, 4], [0, 1]


def test_s3_labelling():
    s3 = symmetric(3)
    assert sorted(Subgroup(s3, S3_A3).members) == S3_A3
    assert [oracles.element_order(s3.table, x) for x in S3_A3] == [1, 3, 3]
    assert oracles.element_order(s3.table, 1) == 2


# -- gamma ----------------------------------------------------------------------


@pytest.mark.parametrize("g,h,k", [(cyclic(6), Z6_H, Z6_K), (symmetric(3), S3_A3, S3_T)])
def test_gamma_vacant_six_squares(g, h, k):
    scan = oracles.gamma_square_scan(g.table, h, k)
    assert len(scan) == 6
    dg = gamma(MatchedTriple.from_group(g, h, k))
    assert verify(dg).ok
    assert sorted(dg.labels) == sorted(scan)
    assert is_vacant(dg)


def test_gamma_g_equals_h_equals_k():
    s3 = symmetric(3)
    t = MatchedTriple.from_group(s3, range(6), range(6))
    dg = gamma(t)
    assert dg.squares == len(oracles.gamma_square_scan(s3.table, range(6), range(6))) == 216
    assert verify(dg).ok and is_slim(dg)
    assert not is_exclusive(dg)
    assert gamma_predicates(t) == (False, True)


def test_gamma_predicates_examples():
    s3 = symmetric(3)
    assert gamma_predicates(MatchedTriple.from_group(s3, S3_A3, S3_T)) == (True, True)
    two = MatchedTriple.from_group(s3, [0, 1], [0, 2])
    hk = {s3.table[h][k] for h in [0, 1] for k in [0, 2]}
    kh = {s3.table[k][h] for h in [0, 1] for k in [0, 2]}
    assert hk != kh
    assert gamma_predicates(two)[1] is False
    assert is_maximal(gamma(two)) is False
    triv = MatchedTriple.from_group(s3, [0], [0])
    assert gamma_predicates(triv) == (True, True)
    dg = gamma(triv)
    assert dg.squares == 1 and dg.H.arrows == dg.V.arrows == 1


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([cyclic(4), cyclic(6), symmetric(3), dihedral(4), dicyclic(2), z3_semidirect_klein()[0]]), st.data())
def test_gamma_predicates_agree_with_direct(g, data):
    subs = subgroups_all(g)
    h = data.draw(st.sampled_from(subs))
    k = data.draw(st.sampled_from(subs))
    t = MatchedTriple.from_group(g, h, k)
    dg = gamma(t)
    assert verify(dg).ok
    assert is_slim(dg)
    assert gamma_predicates(t) == (is_exclusive(dg), is_maximal(dg))
    assert dg.squares == len(oracles.gamma_square_scan(g.table, h.members, k.members))
    assert is_vacant(dg) == (t.discrete_intersection and t.commuting_products)


def test_matched_triple_rejects_non_subgroup():
    with pytest.raises(ConstructionError):
        MatchedTriple.from_group(symmetric(3), [0, 1, 2], [0])


# -- lambda and the equivalence -------------------------------------------------------


@pytest.mark.parametrize("g,h,k", [(cyclic(6), Z6_H, Z6_K), (symmetric(3), S3_A3, S3_T)])
def test_lambda_of_gamma(g, h, k):
    lam = lambda_triple(gamma(MatchedTriple.from_group(g, h, k)))
    grp, H, K, _ = lam.as_group()
    assert grp.order == g.order
    assert oracles.brute_isomorphic(grp.table, g.table)
    assert is_isomorphic(grp, g) is not None
    assert (H.order, K.order) == (len(h), len(k))
    assert lam.exact_factorization


def test_lambda_trivial():
    lam = lambda_triple(fixture_dg("trivial.json"))
    assert lam.G.arrows == 1 and lam.H == lam.K == (0,)


def test_lambda_requires_vacant():
    with pytest.raises(ConstructionError, match="vacant"):
        lambda_triple(fixture_dg("z2_example_identities.json"))


@pytest.mark.parametrize(
    "t",
    [
        MatchedTriple.from_group(cyclic(6), Z6_H, Z6_K),
        MatchedTriple.from_group(symmetric(3), S3_A3, S3_T),
        MatchedTriple.from_group(cyclic(1), [0], [0]),
    ],
)
def test_equivalence_vacant(t):
    rep = check_equivalence_vacant(t)
    assert rep["ok"], rep


def test_equivalence_needs_exact_factorization():
    with pytest.raises(ConstructionError):
        check_equivalence_vacant(MatchedTriple.from_group(symmetric(3), [0, 1], [0, 2]))


def test_maximal_example_lambda_is_klein():
    lam = lambda_triple(fixture_dg("z2_example_extra.json"))
    grp, _, _, _ = lam.as_group()
    assert oracles.order_multiset(grp.table) == [1, 2, 2, 2]
    assert is_isomorphic(grp, direct_product(cyclic(2), cyclic(2))) is not None


# -- quadruples ------------------------------------------------------------------------


def test_quadruple_example():
    res = quadruple_construct(z3_quadruple())
    dg = res.dg
    assert dg.squares == 12 == 4 * 3
    assert verify(dg).ok
    assert is_exclusive(dg) and is_maximal(dg) and not is_slim(dg)
    g, _ = core_bundle(dg)[0]
    assert is_isomorphic(g, cyclic(3)) is not None
    assert res.section.check()
    assert all(dg.labels[x][4] == 0 for x in res.section.sq)


def test_quadruple_trivial_core_is_gamma():
    for name, q in semi_quadruples():
        if q.A.order != 1:
            continue
        dg = quadruple_construct(q).dg
        assert is_vacant(dg), name
        base = gamma(MatchedTriple.from_group(q.G, q.H, q.K))
        assert dg.squares == base.squares


def test_quadruple_pure_bundle():
    z3 = cyclic(3)
    q = SemiQuadruple(z3, Subgroup(z3, [0]), Subgroup(z3, [0]), Subgroup(z3, [0, 1, 2]))
    dg = quadruple_construct(q).dg
    assert dg.squares == 3
    g, _ = core_bundle(dg)[0]
    assert g.table == z3.table


@pytest.mark.parametrize("name,q", semi_quadruples())
def test_quadruple_invariants(name, q):
    res = quadruple_construct(q)
    dg = res.dg
    base = gamma(MatchedTriple.from_group(q.G, q.H, q.K))
    assert dg.squares == base.squares * q.A.order
    assert eckmann_hilton_check(dg)["ok"]
    assert is_exclusive(dg) and is_maximal(dg)
    assert quadruple_round_trip(q)["ok"]


def test_quadruple_violations_named():
    s3 = symmetric(3)
    bad = SemiQuadruple(s3, Subgroup(s3, [0]), Subgroup(s3, [0]), Subgroup(s3, range(6)))
    with pytest.raises(ConstructionError, match="abelian"):
        quadruple_construct(bad)
    g, h, k, a = z3_semidirect_klein()
    with pytest.raises(ConstructionError, match="A n H"):
        quadruple_construct(SemiQuadruple(g, h, k, Subgroup(g, h.members)))
    d4 = dihedral(4)
    t = d4.table
    # two non-commuting involutions: <r><s> = {e, r, s, rs} differs from <s><r>
    invols = [x for x in range(1, 8) if t[x][x] == 0]
    r, s = next((r, s) for r, s in itertools.combinations(invols, 2) if t[r][s] != t[s][r])
    q = SemiQuadruple(d4, Subgroup(d4, [0, r]), Subgroup(d4, [0, s]), Subgroup(d4, [0]))
    with pytest.raises(ConstructionError, match="HK"):
        quadruple_construct(q)


def test_a_coordinate_associativity_exhaustive():
    g, H, K, A = z3_semidirect_klein()
    t, c = g.table, g.conj
    for h, h2 in itertools.product(H.members, repeat=2):
        for b, cc in itertools.product(A.members, repeat=2):
            lhs = c(h, t[b][c(h2, cc)])
            rhs = t[c(h, b)][c(t[h][h2], cc)]
            assert lhs == rhs


def test_lambda_section_round_trip():
    q = z3_quadruple()
    res = quadruple_construct(q)
    back = lambda_section(res.dg, res.section).quadruple
    assert is_isomorphic(back.G, q.G) is not None
    assert (back.H.order, back.K.order, back.A.order) == (2, 2, 3)
    assert back.full_factorization
    assert quadruple_round_trip(q) == {
        "squares": 12,
        "explicit_isomorphism": True,
        "subgroups_match": True,
        "isomorphic_oracle": True,
        "ok": True,
    }


def test_lambda_section_vacant_reduces_to_lambda():
    dg = gamma(MatchedTriple.from_group(symmetric(3), S3_A3, S3_T))
    fr, proj = frame_double(dg)
    pick = [proj.index(i) for i in range(fr.squares)]
    out = lambda_section(dg, section_functor(dg, pick))
    assert out.quadruple.A.order == 1
    lam = lambda_triple(dg)
    assert is_isomorphic(out.quadruple.G, lam.as_group()[0]) is not None


def test_lambda_section_maximal_example():
    dg = fixture_dg("z2_example_extra.json")
    fr, proj = frame_double(dg)
    out = lambda_section(dg, section_functor(dg, [proj.index(i) for i in range(fr.squares)]))
    assert oracles.order_multiset(out.quadruple.G.table) == [1, 2, 2, 2]


def test_lambda_section_rejects_bad_section():
    res = quadruple_construct(z3_quadruple())
    dg = res.dg
    pick = list(res.section.sq)
    # move one non-identity frame square off the zero coordinate
    fr = res.section.source
    i = next(i for i in range(fr.squares) if i not in set(fr.i2h) | set(fr.i2v))
    x = pick[i]
    pick[i] = next(y for y in dg.by_boundary[dg.boundary(x)] if y != x)
    with pytest.raises(ConstructionError, match="double functor"):
        lambda_section(dg, section_functor(dg, pick))


def test_lambda_section_requires_maximal_exclusive():
    dg = fixture_dg("z2_example_identities.json")
    fr, proj = frame_double(dg)
    with pytest.raises(ConstructionError, match="maximal exclusive"):
        lambda_section(dg, section_functor(dg, [proj.index(i) for i in range(fr.squares)]))


def test_bundle_squares_are_a():
    res = quadruple_construct(z3_quadruple())
    labels = [res.dg.labels[x] for x in bundle_squares(res.dg, 0)]
    assert sorted(l[4] for l in labels) == sorted(res.quadruple.A.members)


def test_quadruple_inverse_labels():
    # across: a h b h^-1 = e forces b = h^-1 a^-1 h; down likewise with k
    res = quadruple_construct(z3_quadruple())
    dg, G = res.dg, res.quadruple.G
    inv = G.inverse
    hinv, vinv = dg.hinv, dg.vinv
    for x in range(dg.squares):
        h, k, _, _, a = dg.labels[x]
        assert dg.labels[hinv[x]][4] == G.conj(inv[h], inv[a])
        assert dg.labels[vinv[x]][4] == G.conj(inv[k], inv[a])
    # with b = h^-1 a h the composite label is a a, not e, for any a of order 3
    a = next(lab[4] for lab in dg.labels if lab[4] != 0)
    assert G.table[a][a] != 0
