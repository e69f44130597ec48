"""Regenerate the bundled JSON fixtures under src/dblgpd/fixtures."""

import json
from pathlib import Path

from dblgpd.algebra import cyclic, symmetric
from dblgpd.constructions import MatchedTriple, gamma
from dblgpd.double import DoubleGroupoid
from dblgpd.enumeration import slim_double_group
from dblgpd.groupoid import FiniteGroupoid, trivial_cocycle, groupoid_from_cocycle

OUT = Path(__file__).resolve().parents[1] / "src" / "dblgpd" / "fixtures"


def write(name, data):
    (OUT / name).write_text(json.dumps(data, sort_keys=True, indent=1) + "\n")


def bundle_dg(h_table, v_table, name):
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
        name=name,
    )


def main():
    OUT.mkdir(exist_ok=True)
    s3 = symmetric(3)
    # A3 = {0, 3, 4}, (0 1) = 1 in the builder's labelling
    write("s3_triple.json", {"kind": "gamma", "group": "symmetric:3", "H": [0, 3, 4], "K": [0, 1]})
    write("s3_factorization.json", gamma(MatchedTriple.from_group(s3, [0, 3, 4], [0, 1])).to_dict())
    write("quadruple_z3.json", {"kind": "quadruple", "group": "z3_semidirect_klein", "H": [0, 6], "K": [0, 3], "A": [0, 1, 2]})
    z2 = cyclic(2)
    write("z2_example_identities.json", slim_double_group(z2, z2, [(0, 0, 0, 0), (0, 1, 0, 1), (1, 0, 1, 0)]).to_dict())
    write("z2_example_extra.json", slim_double_group(z2, z2, [(0, 0, 0, 0), (0, 1, 0, 1), (1, 0, 1, 0), (1, 1, 1, 1)]).to_dict())
    write("trivial.json", slim_double_group(cyclic(1), cyclic(1), [(0, 0, 0, 0)]).to_dict())
    z4 = [[(x + y) % 4 for y in range(4)] for x in range(4)]
    klein = [[x ^ y for y in range(4)] for x in range(4)]
    write("broken_interchange.json", bundle_dg(z4, klein, "broken_interchange").to_dict())
    write("z3_coarse2.json", groupoid_from_cocycle(trivial_cocycle(cyclic(3), 2)).to_dict())
    write("z2_task.json", {"horizontal": "cyclic:2", "vertical": "cyclic:2", "core": "cyclic:1", "require_exclusive": True})


if __name__ == "__main__":
    main()
