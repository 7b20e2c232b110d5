"""Mednykh's formula for finite groups, checked against the 1+1 state sum.

#hom(pi_1(S), G) * |G|^(E-1) = sum_j d_j^E  with E = 2 - 2*genus.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Sequence

__all__ = ["GroupTable", "GroupError", "parse_group", "load_group", "bundled_groups", "count_homs",
           "count_commuting_pairs", "conjugacy_classes", "state_sum_side", "mednykh_check", "MAX_TUPLES"]

MAX_TUPLES = 10 ** 8


class GroupError(ValueError):
    """Malformed group table or a request beyond the enumeration cap."""


@dataclass(frozen=True)
class GroupTable:
    order: int
    mul: tuple[tuple[int, ...], ...]
    identity: int
    inverse: tuple[int, ...]
    irreps: tuple[int, ...] = ()
    name: str = ""

    @classmethod
    def from_table(cls, mul: Sequence[Sequence[int]], identity: int, irreps: Sequence[int] = (),
                   name: str = "") -> "GroupTable":
        n = len(mul)
        table = tuple(tuple(int(x) for x in row) for row in mul)
        if any(len(row) != n or any(not 0 <= x < n for x in row) for row in table):
            raise GroupError("multiplication table must be n x n with entries in 0..n-1")
        if not 0 <= identity < n or any(table[identity][a] != a or table[a][identity] != a for a in range(n)):
            raise GroupError(f"element {identity} is not a two-sided identity")
        inverse = []
        for a in range(n):
            inv = [b for b in range(n) if table[a][b] == identity]
            if len(inv) != 1 or table[inv[0]][a] != identity:
                raise GroupError(f"element {a} has no two-sided inverse")
            inverse.append(inv[0])
        for a, b, c in itertools.product(range(n), repeat=3):
            if table[table[a][b]][c] != table[a][table[b][c]]:
                raise GroupError(f"associativity fails at ({a}, {b}, {c})")
        if irreps and sum(d * d for d in irreps) != n:
            raise GroupError(f"irrep dimensions {tuple(irreps)} do not square-sum to {n}")
        if any(d <= 0 for d in irreps):
            raise GroupError("irrep dimensions must be positive")
        return cls(n, table, identity, tuple(inverse), tuple(int(d) for d in irreps), name)


def parse_group(text: str, name: str = "") -> GroupTable:
    rows: list[list[int]] = []
    order = identity = None
    irreps: list[int] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        if head == "order":
            order = int(rest[0])
        elif head == "identity":
            identity = int(rest[0])
        elif head == "irreps":
            irreps = [int(x) for x in rest]
        elif head.lstrip("-").isdigit():
            rows.append([int(x) for x in line.split()])
        else:
            raise GroupError(f"unrecognized line {raw!r}")
    if order is None or identity is None:
        raise GroupError("group file needs 'order' and 'identity' lines")
    if len(rows) != order:
        raise GroupError(f"expected {order} table rows, found {len(rows)}")
    return GroupTable.from_table(rows, identity, irreps, name)


BUNDLED = ("Z2", "Z3", "Z4", "Z2xZ2", "S3", "Q8", "D4")


def bundled_groups() -> tuple[str, ...]:
    return BUNDLED


def load_group(path_or_name: str | Path) -> GroupTable:
    """Load a group file, or a bundled group by name (e.g. "S3")."""
    name = str(path_or_name)
    if name in BUNDLED:
        text = resources.files(__package__).joinpath("data").joinpath("groups").joinpath(f"{name}.txt").read_text()
        return parse_group(text, name)
    p = Path(path_or_name)
    return parse_group(p.read_text(), p.stem)


def _commutator_table(g: GroupTable) -> list[list[int]]:
    m, inv = g.mul, g.inverse
    return [[m[m[m[a][b]][inv[a]]][inv[b]] for b in range(g.order)] for a in range(g.order)]


def count_homs(g: GroupTable, genus: int) -> int:
    """Number of tuples (a1, b1, ..., ag, bg) with prod [ai, bi] = 1, by exhaustive enumeration."""
    if genus < 0:
        raise ValueError("genus must be nonnegative")
    if g.order ** (2 * genus) > MAX_TUPLES:
        raise GroupError(f"|G|^(2g) = {g.order ** (2 * genus)} exceeds the enumeration cap {MAX_TUPLES}")
    if genus == 0:
        return 1
    comm = _commutator_table(g)
    m, e, n = g.mul, g.identity, g.order
    count = 0
    for tup in itertools.product(range(n), repeat=2 * genus):
        acc = e
        for i in range(0, 2 * genus, 2):
            acc = m[acc][comm[tup[i]][tup[i + 1]]]
        if acc == e:
            count += 1
    return count


def count_commuting_pairs(g: GroupTable) -> int:
    m = g.mul
    return sum(1 for a in range(g.order) for b in range(g.order) if m[a][b] == m[b][a])


def conjugacy_classes(g: GroupTable) -> list[frozenset[int]]:
    m, inv = g.mul, g.inverse
    seen: set[int] = set()
    classes = []
    for a in range(g.order):
        if a in seen:
            continue
        cls = frozenset(m[m[x][a]][inv[x]] for x in range(g.order))
        seen |= cls
        classes.append(cls)
    return classes


def state_sum_side(dims: Sequence[int], genus: int) -> Fraction:
    """sum_j d_j^(2 - 2*genus)."""
    euler = 2 - 2 * genus
    return sum((Fraction(d) ** euler for d in dims), Fraction(0))


def mednykh_check(g: GroupTable, dims: Sequence[int] | None = None, genus: int = 0) -> bool:
    dims = g.irreps if dims is None else tuple(dims)
    euler = 2 - 2 * genus
    lhs = count_homs(g, genus) * Fraction(g.order) ** (euler - 1)
    return lhs == state_sum_side(dims, genus)
