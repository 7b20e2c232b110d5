"""Pairing calculus of surfaces in the 3-sphere at the level of connected types.

A closed surface with components of Euler numbers e_i evaluates to
prod 2^(1 - e_i/4).  A surface with m boundary circles is recorded by which
circles share a component (a set partition of 1..m) plus per-component genus
and red-tube counts.  Gluing two such surfaces along their circles gives a
closed surface whose components are found by union-find.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from .exactnum import AlgMatrix, AlgNum, is_psd, kernel_basis, pow2_quarter, rank

__all__ = ["ConnectedType", "GramProblem", "closed_z", "pair", "set_partitions", "gram_problem",
           "gram_matrix", "quotient_dim", "kernel_relations", "rp_check", "type_label"]


@dataclass(frozen=True)
class ConnectedType:
    m: int
    blocks: tuple[tuple[int, ...], ...]
    extra_genus: tuple[int, ...] = ()
    red_tubes: tuple[int, ...] = ()

    def __post_init__(self):
        blocks = tuple(sorted(tuple(sorted(b)) for b in self.blocks))
        flat = sorted(i for b in blocks for i in b)
        if flat != list(range(1, self.m + 1)) or any(not b for b in blocks):
            raise ValueError(f"blocks {self.blocks!r} do not partition 1..{self.m}")
        # per-block decorations follow the block order given by the caller
        order = sorted(range(len(blocks)), key=lambda i: tuple(sorted(self.blocks[i])))
        genus = self.extra_genus or (0,) * len(blocks)
        tubes = self.red_tubes or (0,) * len(blocks)
        if len(genus) != len(blocks) or len(tubes) != len(blocks):
            raise ValueError("decorations must give one entry per block")
        if min(genus) < 0 or min(tubes) < 0:
            raise ValueError("genus and red-tube counts are nonnegative")
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "extra_genus", tuple(genus[i] for i in order))
        object.__setattr__(self, "red_tubes", tuple(tubes[i] for i in order))

    @classmethod
    def planar(cls, blocks: Sequence[Sequence[int]]) -> "ConnectedType":
        blocks = [tuple(b) for b in blocks]
        return cls(sum(len(b) for b in blocks), tuple(blocks))

    def euler(self, i: int) -> int:
        return 2 - len(self.blocks[i]) - 2 * self.extra_genus[i] - 2 * self.red_tubes[i]

    def euler_numbers(self) -> list[int]:
        return [self.euler(i) for i in range(len(self.blocks))]

    def with_handle(self, block: int, handles: int = 1) -> "ConnectedType":
        genus = list(self.extra_genus)
        genus[block] += handles
        return ConnectedType(self.m, self.blocks, tuple(genus), self.red_tubes)


def closed_z(euler_numbers: Sequence[int]) -> AlgNum:
    """prod 2^(1 - e/4) over the components."""
    return pow2_quarter(sum(4 - e for e in euler_numbers))


def pair(a: ConnectedType, b: ConnectedType) -> AlgNum:
    """Value of the closed surface obtained by gluing a and b along their circles."""
    if a.m != b.m:
        raise ValueError(f"cannot glue types with {a.m} and {b.m} boundary circles")
    na = len(a.blocks)
    parent = list(range(na + len(b.blocks)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    where_a = {c: i for i, blk in enumerate(a.blocks) for c in blk}
    where_b = {c: na + i for i, blk in enumerate(b.blocks) for c in blk}
    for c in range(1, a.m + 1):
        ra, rb = find(where_a[c]), find(where_b[c])
        if ra != rb:
            parent[ra] = rb
    pieces = a.euler_numbers() + b.euler_numbers()
    components: dict[int, int] = {}
    for node, e in enumerate(pieces):
        root = find(node)
        components[root] = components.get(root, 0) + e
    # circles have Euler number zero, so gluing is additive
    assert sum(components.values()) == sum(pieces)
    return closed_z(list(components.values()))


def set_partitions(m: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """All set partitions of 1..m (restricted-growth enumeration)."""
    def grow(i, blocks):
        if i > m:
            yield tuple(tuple(b) for b in blocks)
            return
        for b in blocks:
            b.append(i)
            yield from grow(i + 1, blocks)
            b.pop()
        blocks.append([i])
        yield from grow(i + 1, blocks)
        blocks.pop()

    if m == 0:
        yield ()
        return
    yield from grow(1, [])


@dataclass(frozen=True)
class GramProblem:
    m: int
    basis: tuple[ConnectedType, ...]


@lru_cache(maxsize=None)
def gram_problem(m: int) -> GramProblem:
    """Planar types ordered by block count, then lexicographically by sorted blocks."""
    if m < 1:
        raise ValueError("need at least one boundary circle")
    parts = sorted((tuple(sorted(p)) for p in set_partitions(m)), key=lambda p: (len(p), p))
    return GramProblem(m, tuple(ConnectedType(m, p) for p in parts))


def gram_matrix(p: GramProblem | int) -> AlgMatrix:
    if isinstance(p, int):
        p = gram_problem(p)
    n = len(p.basis)
    rows = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            rows[i][j] = rows[j][i] = pair(p.basis[i], p.basis[j])
    return AlgMatrix.from_rows(rows)


def quotient_dim(m: int) -> int:
    return rank(gram_matrix(m))


def kernel_relations(m: int) -> list[list[AlgNum]]:
    return kernel_basis(gram_matrix(m))


def rp_check(m: int) -> bool:
    return is_psd(gram_matrix(m))


def type_label(t: ConnectedType) -> str:
    """Compact rendering such as (12,3)."""
    return "(" + ",".join("".join(map(str, b)) for b in t.blocks) + ")"
