"""Exact finite group machinery on integer-indexed Cayley tables."""

from .builders import (
    alternating,
    build,
    cyclic,
    dicyclic,
    dihedral,
    direct_product,
    group_from_generators,
    product_index,
    product_pair,
    semidirect_product,
    sl2,
    symmetric,
    z3_semidirect_klein,
)
from .goursat import GoursatQuintuple, goursat_subgroups, quintuple_from_subgroup, subgroup_from_quintuple
from .group import CapExceeded, FiniteGroup, GroupError, GroupHom, Subgroup
from .iso import automorphisms, homomorphisms, is_isomorphic, isomorphisms
from .subgroups import (
    center_subgroup,
    closure,
    exact_factorizations,
    generated,
    intersect,
    normal_subgroups,
    product_set,
    quotient,
    subgroups_all,
    trivial_subgroup,
    whole,
)
