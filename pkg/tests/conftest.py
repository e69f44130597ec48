import functools
import json
from importlib import resources

import pytest

from dblgpd.algebra import (
    alternating,
    cyclic,
    dihedral,
    exact_factorizations,
    sl2,
    symmetric,
    z3_semidirect_klein,
)
from dblgpd.algebra.group import Subgroup
from dblgpd.constructions import MatchedTriple, SemiQuadruple, gamma, quadruple_construct
from dblgpd.double import DoubleGroupoid
from dblgpd.enumeration import EnumerationTask, enumerate_double_groups
from dblgpd.groupoid import FiniteGroupoid

ACCEPTANCE_LINES: list[str] = []


def fixture_dict(name: str) -> dict:
    path = resources.files("dblgpd") / "fixtures" / name
    return json.loads(path.read_text())


def fixture_dg(name: str) -> DoubleGroupoid:
    return DoubleGroupoid.from_dict(fixture_dict(name))


def bundle_dg(h_table, v_table) -> DoubleGroupoid:
    """Trivial boundaries, squares composed by the two given tables."""
    n = len(h_table)
    triv = FiniteGroupoid.from_group(cyclic(1))
    return DoubleGroupoid(
        triv,
        triv,
        s2v=[0] * n,
        t2v=[0] * n,
        s2h=[0] * n,
        t2h=[0] * n,
        i2v=[0],
        i2h=[0],
        c2h={(x, y): h_table[x][y] for x in range(n) for y in range(n)},
        c2v={(x, y): v_table[x][y] for x in range(n) for y in range(n)},
    )


def z3_quadruple() -> SemiQuadruple:
    g, h, k, a = z3_semidirect_klein()
    return SemiQuadruple(g, h, k, a)


def group_library():
    """Named groups of order at most 48 used by the factorization sweeps."""
    lib = [(f"cyclic({n})", cyclic(n)) for n in range(1, 13)]
    lib += [(f"dihedral({n})", dihedral(n)) for n in range(2, 13)]
    lib += [
        ("symmetric(3)", symmetric(3)),
        ("symmetric(4)", symmetric(4)),
        ("alternating(4)", alternating(4)),
        ("z3_semidirect_klein", z3_semidirect_klein()[0]),
        ("sl2(3)", sl2(3)),
    ]
    return lib


@functools.lru_cache(maxsize=None)
def factorization_triples():
    out = []
    for name, g in group_library():
        for h, k in exact_factorizations(g):
            out.append((name, MatchedTriple.from_group(g, h, k)))
    return tuple(out)


def semi_quadruples():
    """Valid quadruples: the Z3 example, its degenerations and a dicyclic one."""
    g, h, k, a = z3_semidirect_klein()
    out = [("z3_semidirect_klein", SemiQuadruple(g, h, k, a))]
    # A = {e}: keep only HK, which is the Klein four group here
    hk = sorted({g.table[x][y] for x in h.members for y in k.members})
    sub, emb = Subgroup(g, hk).as_group()
    back = {emb.map[i]: i for i in range(sub.order)}
    out.append(
        (
            "klein, A trivial",
            SemiQuadruple(sub, Subgroup(sub, [back[x] for x in h.members]), Subgroup(sub, [back[x] for x in k.members]), Subgroup(sub, [0])),
        )
    )
    z3 = cyclic(3)
    out.append(("Z3 bundle, H = K = e", SemiQuadruple(z3, Subgroup(z3, [0]), Subgroup(z3, [0]), Subgroup(z3, [0, 1, 2]))))
    s3 = symmetric(3)
    a3 = [0, 3, 4]
    out.append(("S3 = A3 x| <(0 1)>", SemiQuadruple(s3, Subgroup(s3, [0, 1]), Subgroup(s3, [0]), Subgroup(s3, a3))))
    z6 = cyclic(6)
    out.append(("Z6, H = Z2, A = Z3", SemiQuadruple(z6, Subgroup(z6, [0, 3]), Subgroup(z6, [0]), Subgroup(z6, [0, 2, 4]))))
    return out


@functools.lru_cache(maxsize=None)
def produced_double_groupoids():
    """Every double groupoid the suite builds, with a short description."""
    out = []
    for name in ("s3_factorization.json", "z2_example_identities.json", "z2_example_extra.json", "trivial.json"):
        out.append((f"fixture {name}", fixture_dg(name)))
    for name, t in factorization_triples():
        out.append((f"gamma on {name} |H|={len(t.H)} |K|={len(t.K)}", gamma(t)))
    s3 = symmetric(3)
    for h, k in (([0, 1], [0, 2]), (list(range(6)), list(range(6))), ([0, 3, 4], [0, 3, 4])):
        out.append((f"gamma on S3 {h} {k}", gamma(MatchedTriple.from_group(s3, h, k))))
    for name, q in semi_quadruples():
        out.append((f"quadruple {name}", quadruple_construct(q).dg))
    z2, e = cyclic(2), cyclic(1)
    for label, task in (
        ("Z2 Z2 e", EnumerationTask(z2, z2, e)),
        ("Z2 Z2 Z2 exclusive", EnumerationTask(z2, z2, z2, require_exclusive=True)),
        ("e e Z3", EnumerationTask(e, e, cyclic(3))),
    ):
        for i, dg in enumerate(enumerate_double_groups(task).classes):
            out.append((f"enumerated {label} #{i}", dg))
    return tuple(out)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def record_acceptance():
    def record(number: int, ok: bool, detail: str) -> None:
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)

    return record
