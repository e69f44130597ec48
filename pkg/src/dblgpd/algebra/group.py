"""Finite groups as dense Cayley tables.

Elements are the integers ``0..order-1`` and the identity is always ``0``.
Products are read left to right: ``g.mul[x, y]`` is "x then y".
"""

from __future__ import annotations

import json
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

EXHAUSTIVE_ASSOC_LIMIT = 200


class GroupError(ValueError):
    """Raised when a table or map violates a group axiom."""


class CapExceeded(RuntimeError):
    """Raised when a search or closure exceeds its configured cap."""


def _as_table(mul) -> np.ndarray:
    table = np.asarray(mul, dtype=np.int64)
    if table.ndim != 2 or table.shape[0] != table.shape[1]:
        raise GroupError("multiplication table must be square")
    return table


def table_violations(table: np.ndarray, *, seed: int = 0, samples: int = 20000) -> list[str]:
    """Return human-readable axiom violations of a Cayley table with identity 0.

    Associativity is checked exhaustively up to ``EXHAUSTIVE_ASSOC_LIMIT``
    elements and on random triples above that.
    """
    n = table.shape[0]
    problems: list[str] = []
    if n == 0:
        return ["empty group"]
    if table.min() < 0 or table.max() >= n:
        return ["table entry out of range"]
    idx = np.arange(n)
    bad = np.nonzero((table[0] != idx) | (table[:, 0] != idx))[0]
    if bad.size:
        problems.append(f"0 is not a two-sided identity (element {int(bad[0])})")
    for x in range(n):
        if len(np.unique(table[x])) != n:
            problems.append(f"row {x} is not a permutation")
            break
    if problems:
        return problems
    if n <= EXHAUSTIVE_ASSOC_LIMIT:
        left = table[table]  # left[x, y, z] = (x y) z
        right = table[:, table]  # right[x, y, z] = x (y z)
        diff = np.argwhere(left != right)
        if diff.size:
            x, y, z = (int(v) for v in diff[0])
            problems.append(f"associativity fails at ({x}, {y}, {z})")
    else:
        rng = np.random.default_rng(seed)
        x, y, z = rng.integers(0, n, size=(3, samples))
        bad = np.nonzero(table[table[x, y], z] != table[x, table[y, z]])[0]
        if bad.size:
            i = bad[0]
            problems.append(f"associativity fails at ({x[i]}, {y[i]}, {z[i]})")
    return problems


class FiniteGroup:
    """A finite group given by its Cayley table.

    ``factors`` is set on direct products so projections can be recovered.
    """

    identity = 0

    def __init__(
        self,
        mul,
        labels: Sequence[str] | None = None,
        *,
        name: str = "",
        validate: bool = True,
        factors: tuple["FiniteGroup", "FiniteGroup"] | None = None,
    ):
        table = _as_table(mul)
        n = table.shape[0]
        if validate:
            problems = table_violations(table)
            if problems:
                raise GroupError("; ".join(problems))
        inv = np.empty(n, dtype=np.int64)
        rows, cols = np.nonzero(table == 0)
        inv[rows] = cols
        table.setflags(write=False)
        inv.setflags(write=False)
        self.mul = table
        self.inv = inv
        self.order = n
        self.labels = tuple(labels) if labels is not None else None
        if self.labels is not None and len(self.labels) != n:
            raise GroupError("labels length does not match order")
        self.name = name
        self.factors = factors

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name or 'anonymous'}, order={self.order})"

    def __len__(self) -> int:
        return self.order

    @cached_property
    def table(self) -> list[list[int]]:
        """The Cayley table as nested lists; faster than numpy for scalar lookups."""
        return self.mul.tolist()

    @cached_property
    def inverse(self) -> list[int]:
        return self.inv.tolist()

    def elements(self) -> range:
        return range(self.order)

    def label(self, x: int) -> str:
        return self.labels[x] if self.labels else str(x)

    def product(self, *xs: int) -> int:
        t = self.table
        acc = 0
        for x in xs:
            acc = t[acc][x]
        return acc

    def conj(self, g: int, x: int) -> int:
        """g x g^-1."""
        t = self.table
        return t[t[g][x]][self.inverse[g]]

    def power(self, x: int, k: int) -> int:
        if k < 0:
            x, k = self.inverse[x], -k
        acc = 0
        t = self.table
        for _ in range(k):
            acc = t[acc][x]
        return acc

    @cached_property
    def element_orders(self) -> tuple[int, ...]:
        t = self.table
        out = []
        for x in range(self.order):
            k, y = 1, x
            while y != 0:
                y = t[y][x]
                k += 1
            out.append(k)
        return tuple(out)

    def element_order(self, x: int) -> int:
        return self.element_orders[x]

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    @cached_property
    def center(self) -> tuple[int, ...]:
        commuting = np.all(self.mul == self.mul.T, axis=1)
        return tuple(int(i) for i in np.nonzero(commuting)[0])

    @cached_property
    def order_profile(self) -> tuple[int, ...]:
        return tuple(sorted(self.element_orders))

    def check(self) -> list[str]:
        return table_violations(np.array(self.mul))

    # -- serialization -------------------------------------------------

    def to_dict(self) -> dict:
        d = {"kind": "group", "order": self.order, "identity": 0, "mul": self.table}
        if self.labels is not None:
            d["labels"] = list(self.labels)
        if self.name:
            d["name"] = self.name
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "FiniteGroup":
        if "mul" not in d:
            raise GroupError("group JSON needs a 'mul' table")
        table = _as_table(d["mul"])
        n = table.shape[0]
        if d.get("order", n) != n:
            raise GroupError(f"declared order {d['order']} does not match table size {n}")
        if d.get("identity", 0) != 0:
            raise GroupError("identity must be element 0")
        g = cls(table, d.get("labels"), name=d.get("name", ""))
        if "inv" in d and list(d["inv"]) != g.inverse:
            raise GroupError("stored inverse table disagrees with the multiplication table")
        return g

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def relabel(table: np.ndarray, order: Sequence[int]) -> np.ndarray:
    """Reindex a Cayley table so that old element ``order[i]`` becomes ``i``."""
    order = np.asarray(order, dtype=np.int64)
    pos = np.full(table.shape[0], -1, dtype=np.int64)
    pos[order] = np.arange(len(order))
    return pos[table[np.ix_(order, order)]]


class Subgroup:
    """A subgroup recorded as a sorted tuple of parent element indices."""

    def __init__(self, parent: FiniteGroup, members: Iterable[int], *, validate: bool = True):
        self.parent = parent
        self.members = tuple(sorted(set(int(m) for m in members)))
        self._set = frozenset(self.members)
        if validate:
            problem = self._violation()
            if problem:
                raise GroupError(problem)

    def _violation(self) -> str | None:
        if 0 not in self._set:
            return "subgroup does not contain the identity"
        t = self.parent.table
        inv = self.parent.inverse
        for x in self.members:
            if inv[x] not in self._set:
                return f"subgroup not closed under inverse at {x}"
            for y in self.members:
                if t[x][y] not in self._set:
                    return f"subgroup not closed under product at ({x}, {y})"
        return None

    @property
    def order(self) -> int:
        return len(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, x: int) -> bool:
        return x in self._set

    def __iter__(self):
        return iter(self.members)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subgroup)
            and other.parent is self.parent
            and other.members == self.members
        )

    def __hash__(self) -> int:
        return hash((id(self.parent), self.members))

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order} of {self.parent!r})"

    def issubset(self, other: "Subgroup") -> bool:
        return self._set <= other._set

    def is_normal_in(self, other: "Subgroup | None" = None) -> bool:
        return self.normality_witness(other) is None

    def normality_witness(self, other: "Subgroup | None" = None) -> tuple[int, int] | None:
        """A pair ``(g, n)`` with ``g n g^-1`` outside the subgroup, or None."""
        ambient = other.members if other is not None else self.parent.elements()
        for g in ambient:
            for n in self.members:
                if self.parent.conj(g, n) not in self._set:
                    return (g, n)
        return None

    @cached_property
    def is_abelian(self) -> bool:
        t = self.parent.table
        return all(t[x][y] == t[y][x] for x in self.members for y in self.members)

    def as_group(self) -> tuple[FiniteGroup, "GroupHom"]:
        """The subgroup as a standalone group with its inclusion into the parent."""
        sub = relabel(self.parent.mul, self.members)
        labels = None
        if self.parent.labels:
            labels = [self.parent.labels[m] for m in self.members]
        g = FiniteGroup(sub, labels, validate=False)
        return g, GroupHom(g, self.parent, self.members, validate=False)


class GroupHom:
    """A homomorphism stored as an image table over the domain."""

    def __init__(self, domain: FiniteGroup, codomain: FiniteGroup, images: Sequence[int], *, validate: bool = True):
        self.domain = domain
        self.codomain = codomain
        self.map = tuple(int(x) for x in images)
        if len(self.map) != domain.order:
            raise GroupError("homomorphism table has the wrong length")
        if validate:
            w = self.violation()
            if w is not None:
                raise GroupError(f"not a homomorphism at {w}")

    def violation(self) -> tuple[int, int] | None:
        if self.map[0] != 0:
            return (0, 0)
        f = self.map
        dt, ct = self.domain.table, self.codomain.table
        for x in self.domain.elements():
            for y in self.domain.elements():
                if f[dt[x][y]] != ct[f[x]][f[y]]:
                    return (x, y)
        return None

    def __call__(self, x: int) -> int:
        return self.map[x]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GroupHom)
            and other.domain is self.domain
            and other.codomain is self.codomain
            and other.map == self.map
        )

    def __hash__(self) -> int:
        return hash(self.map)

    def kernel(self) -> Subgroup:
        return Subgroup(self.domain, [x for x, y in enumerate(self.map) if y == 0], validate=False)

    def image(self) -> Subgroup:
        return Subgroup(self.codomain, set(self.map), validate=False)

    @property
    def is_injective(self) -> bool:
        return len(set(self.map)) == len(self.map)

    @property
    def is_bijective(self) -> bool:
        return self.is_injective and self.domain.order == self.codomain.order

    def then(self, other: "GroupHom") -> "GroupHom":
        """Diagrammatic composite: apply self, then other."""
        return GroupHom(self.domain, other.codomain, [other.map[y] for y in self.map], validate=False)

    def inverse(self) -> "GroupHom":
        if not self.is_bijective:
            raise GroupError("only bijective homomorphisms can be inverted")
        inv = [0] * len(self.map)
        for x, y in enumerate(self.map):
            inv[y] = x
        return GroupHom(self.codomain, self.domain, inv, validate=False)

    @classmethod
    def identity(cls, g: FiniteGroup) -> "GroupHom":
        return cls(g, g, range(g.order), validate=False)
