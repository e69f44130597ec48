import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from dblgpd.algebra import (
    CapExceeded,
    FiniteGroup,
    GroupError,
    GroupHom,
    Subgroup,
    alternating,
    automorphisms,
    build,
    center_subgroup,
    cyclic,
    dicyclic,
    dihedral,
    direct_product,
    goursat_subgroups,
    group_from_generators,
    is_isomorphic,
    quintuple_from_subgroup,
    quotient,
    sl2,
    subgroup_from_quintuple,
    subgroups_all,
    symmetric,
    trivial_subgroup,
    whole,
    z3_semidirect_klein,
)
from dblgpd.algebra.builders import expected_order
from dblgpd.algebra.group import table_violations
from dblgpd.casestudies import duval_classify

BUILT = [
    ("cyclic", n) for n in (1, 2, 5, 12)
] + [("dihedral", n) for n in (1, 3, 6)] + [("dicyclic", n) for n in (1, 2, 3)] + [
    ("symmetric", n) for n in (1, 3, 4, 5)
] + [("alternating", n) for n in (3, 4, 5)] + [("sl2", p) for p in (2, 3, 5)]


# -- generation and builders --------------------------------------------


def test_single_involution():
    assert group_from_generators([(1, 0)]).order == 2


def test_s3_from_generators_matches_permutation_count():
    g = group_from_generators([(1, 2, 0), (1, 0, 2)])
    assert g.order == len(oracles.all_perms(3)) == 6
    assert g.check() == []


def test_empty_generating_set_is_trivial():
    g = group_from_generators([])
    assert g.order == 1


def test_generation_cap():
    with pytest.raises(CapExceeded, match="generation cap exceeded"):
        group_from_generators([(1, 2, 3, 4, 0), (1, 0, 2, 3, 4)], cap=50)


def test_non_permutation_rejected():
    with pytest.raises(GroupError):
        group_from_generators([(0, 0, 1)])


@pytest.mark.parametrize("family,n", BUILT)
def test_builders_orders_and_axioms(family, n):
    g = build(family, n)
    assert g.order == expected_order(family, n)
    assert oracles.associative(g.table)
    t = g.table
    for x in g.elements():
        assert t[0][x] == t[x][0] == x
        assert t[x][g.inverse[x]] == 0
    # Lagrange
    orders = oracles.order_multiset(t)
    assert all(g.order % k == 0 for k in orders)


def test_sl2_3_matches_matrix_count():
    assert sl2(3).order == oracles.sl2_count(3) == 24


def test_dicyclic_2_is_quaternion():
    q = dicyclic(2)
    assert q.order == 8
    # one involution, six elements of order four
    assert oracles.order_multiset(q.table) == [1, 2, 4, 4, 4, 4, 4, 4]


def test_cyclic_1_trivial():
    assert cyclic(1).order == 1


@pytest.mark.parametrize("bad", [("cyclic", 0), ("sl2", 4), ("sl2", 17), ("symmetric", 0)])
def test_builder_ranges(bad):
    with pytest.raises((GroupError, ValueError)):
        build(*bad)


def test_unknown_family():
    with pytest.raises(GroupError):
        build("octahedral", 2)


def test_table_violations_detects_nonassociative():
    # a Latin square with identity 0 (an order-5 loop) that is not associative
    t = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    assert all(sorted(row) == list(range(5)) for row in t)
    assert all(sorted(col) == list(range(5)) for col in zip(*t))
    assert not oracles.associative(t)
    assert table_violations(np.array(t))
    with pytest.raises(GroupError):
        FiniteGroup(t)


def test_group_json_round_trip():
    g = dihedral(4)
    h = FiniteGroup.from_dict(g.to_dict())
    assert h.table == g.table
    assert list(h.inverse) == list(g.inverse)


# -- subgroups ----------------------------------------------------------


@pytest.mark.parametrize(
    "g,expected",
    [
        (direct_product(cyclic(2), cyclic(2)), 5),
        (cyclic(1), 1),
        (symmetric(3), 6),
    ],
)
def test_subgroups_all_against_subset_oracle(g, expected):
    subs = subgroups_all(g)
    assert len(subs) == expected
    assert sorted(s.members for s in subs) == sorted(oracles.subgroups_by_subsets(g.table))


@pytest.mark.parametrize("g", [cyclic(8), dihedral(4), dicyclic(2), alternating(4)])
def test_subgroups_all_larger_oracle(g):
    assert sorted(s.members for s in subgroups_all(g)) == sorted(oracles.subgroups_by_subsets(g.table))


def test_subgroup_cap():
    with pytest.raises(CapExceeded):
        subgroups_all(symmetric(4), cap=10)


def test_subgroup_must_be_closed():
    with pytest.raises(GroupError):
        Subgroup(symmetric(3), [0, 1, 2])


# -- quotients ----------------------------------------------------------


def test_sl2_3_center_quotient():
    g = sl2(3)
    z = center_subgroup(g)
    assert list(z.members) == oracles.center(g.table)
    assert z.order == 2
    q, proj = quotient(g, z)
    assert q.order == 12
    assert proj.violation() is None
    assert sorted(proj.kernel().members) == list(z.members)


def test_quotient_by_trivial_and_whole():
    g = dihedral(3)
    q, _ = quotient(g, trivial_subgroup(g))
    assert is_isomorphic(q, g) is not None
    q, _ = quotient(g, whole(g))
    assert q.order == 1


def test_quotient_requires_normal():
    g = symmetric(3)
    with pytest.raises(GroupError, match=r"not normal: \d+ \* \d+ \* \d+\^-1"):
        quotient(g, Subgroup(g, [0, 1]))


@pytest.mark.parametrize("g", [dihedral(4), alternating(4), dicyclic(3)])
def test_quotients_are_homomorphisms(g):
    for n in subgroups_all(g):
        if not n.is_normal_in():
            continue
        q, proj = quotient(g, n)
        assert oracles.is_hom(g.table, q.table, proj.map)
        assert q.order * n.order == g.order


# -- isomorphism ----------------------------------------------------------


def test_binary_tetrahedral_quotient_is_a4():
    g = sl2(3)
    q, _ = quotient(g, center_subgroup(g))
    iso = is_isomorphic(q, alternating(4))
    assert iso is not None
    assert oracles.is_hom(q.table, alternating(4).table, iso.map)
    assert sorted(iso.map) == list(range(12))


def test_z4_not_klein():
    assert oracles.order_multiset(cyclic(4).table) != oracles.order_multiset(direct_product(cyclic(2), cyclic(2)).table)
    assert is_isomorphic(cyclic(4), direct_product(cyclic(2), cyclic(2))) is None


def test_self_isomorphism():
    g = dicyclic(2)
    iso = is_isomorphic(g, g)
    assert iso is not None and iso.violation() is None


@pytest.mark.parametrize(
    "a,b",
    [
        (symmetric(3), dihedral(3)),
        (cyclic(6), direct_product(cyclic(2), cyclic(3))),
        (dihedral(4), dicyclic(2)),
        (cyclic(8), direct_product(cyclic(4), cyclic(2))),
    ],
)
def test_isomorphism_against_bijection_search(a, b):
    assert (is_isomorphic(a, b) is not None) == oracles.brute_isomorphic(a.table, b.table)


def test_isomorphism_order_cap():
    with pytest.raises(CapExceeded):
        is_isomorphic(symmetric(5), symmetric(5), cap=60)


def test_automorphism_counts():
    assert len(automorphisms(cyclic(5))) == 4
    assert len(automorphisms(direct_product(cyclic(2), cyclic(2)))) == 6
    assert len(automorphisms(symmetric(3))) == 6


def test_hom_rejects_non_hom():
    with pytest.raises(GroupError):
        GroupHom(cyclic(2), cyclic(3), [0, 1])


# -- Goursat ------------------------------------------------------------


@pytest.mark.parametrize(
    "h,k",
    [
        (cyclic(2), cyclic(2)),
        (cyclic(3), cyclic(3)),
        (cyclic(1), symmetric(3)),
        (cyclic(2), cyclic(4)),
        (symmetric(3), cyclic(2)),
        (cyclic(4), cyclic(4)),
    ],
)
def test_goursat_matches_subset_enumeration(h, k):
    p = direct_product(h, k)
    pairs = goursat_subgroups(h, k)
    assert sorted(s.members for s, _ in pairs) == sorted(oracles.subgroups_by_subsets(p.table))
    for s, q in pairs:
        assert subgroup_from_quintuple(s.parent, q).members == s.members
        assert quintuple_from_subgroup(s) == q


def test_goursat_z2_z2_count():
    assert len(goursat_subgroups(cyclic(2), cyclic(2))) == 5


def test_goursat_trivial_factor_matches_subgroups():
    k = dihedral(4)
    assert len(goursat_subgroups(cyclic(1), k)) == len(subgroups_all(k))


def test_goursat_cap():
    with pytest.raises(CapExceeded):
        goursat_subgroups(sl2(5), sl2(5))


def test_duval_diagonal():
    p = direct_product(cyclic(2), cyclic(2))
    diag = Subgroup(p, [0, 3])
    q = duval_classify(diag)
    assert q.A.order == 2 and q.A0.order == 1
    assert q.B.order == 2 and q.B0.order == 1
    assert list(q.theta.map) == [0, 1]


def test_duval_full_product():
    p = direct_product(cyclic(2), cyclic(3))
    q = duval_classify(whole(p))
    assert q.A.order == q.A0.order == 2
    assert q.B.order == q.B0.order == 3
    assert q.theta.domain.order == q.theta.codomain.order == 1


def test_duval_graph_of_automorphism():
    z3 = cyclic(3)
    p = direct_product(z3, z3)
    graph = Subgroup(p, [x * 3 + (2 * x) % 3 for x in range(3)])
    q = duval_classify(graph)
    assert q.A0.order == 1 and q.B0.order == 1
    assert q.A.order == q.B.order == 3
    # theta sends the coset of 1 to the coset of 2
    dom, cod = q.theta.domain, q.theta.codomain
    assert dom.order == cod.order == 3
    assert sorted(q.theta.map) == [0, 1, 2] and q.theta.map != (0, 1, 2)


# -- properties -----------------------------------------------------------

small_groups = st.sampled_from(
    [cyclic(n) for n in (1, 2, 3, 4, 6)] + [dihedral(3), dihedral(4), dicyclic(2), alternating(4), z3_semidirect_klein()[0]]
)


@settings(max_examples=40, deadline=None)
@given(small_groups, st.data())
def test_random_triples_associate(g, data):
    x, y, z = (data.draw(st.integers(0, g.order - 1)) for _ in range(3))
    t = g.table
    assert t[t[x][y]][z] == t[x][t[y][z]]


@settings(max_examples=25, deadline=None)
@given(small_groups, small_groups)
def test_goursat_round_trip_property(h, k):
    if h.order * k.order > 64:
        return
    for s, q in goursat_subgroups(h, k):
        assert subgroup_from_quintuple(s.parent, q).members == s.members


@settings(max_examples=30, deadline=None)
@given(st.lists(st.permutations(range(5)), max_size=3))
def test_generated_groups_are_groups(perms):
    g = group_from_generators([tuple(p) for p in perms], 5)
    assert g.check() == []
    assert 120 % g.order == 0


@settings(max_examples=20, deadline=None)
@given(small_groups)
def test_element_orders_divide(g):
    assert all(g.order % k == 0 for k in g.element_orders)


def test_inverse_table_consistent_everywhere():
    for fam, n in BUILT:
        g = build(fam, n)
        t = g.table
        assert all(t[x][g.inverse[x]] == 0 == t[g.inverse[x]][x] for x in g.elements())


def test_product_pairs_cover_product():
    h, k = cyclic(2), cyclic(3)
    p = direct_product(h, k)
    for (a, b), (c, d) in itertools.product(itertools.product(range(2), range(3)), repeat=2):
        x, y = a * 3 + b, c * 3 + d
        assert p.table[x][y] == h.table[a][c] * 3 + k.table[b][d]
