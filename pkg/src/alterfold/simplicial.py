"""Oriented combinatorial simplicial complexes and bistellar (Pachner) moves.

Simplices are sorted vertex tuples.  A facet carries a sign relative to the
orientation given by its sorted vertex order.  The face obtained by deleting
the i-th vertex of an oriented facet inherits the sign ``sign * (-1)**i``.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping, Sequence

__all__ = [
    "Simplex",
    "Triangulation",
    "PachnerMove",
    "TriangulationError",
    "boundary_of_simplex",
    "cone",
    "single_simplex",
    "isomorphic",
    "faces",
    "link",
    "star",
    "pachner_split",
    "apply_move",
    "find_locations",
    "disjoint_union",
    "parse_triangulation",
    "format_triangulation",
    "read_triangulation",
]

Simplex = tuple


class TriangulationError(ValueError):
    """Invalid triangulation or inapplicable move."""


def perm_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting ``seq`` (distinct entries)."""
    s = 1
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                s = -s
    return s


def oriented(verts: Sequence[int], sign: int = 1) -> tuple[Simplex, int]:
    """Normalize an ordered vertex list with a sign to (sorted tuple, sign)."""
    return tuple(sorted(verts)), sign * perm_sign(verts)


@dataclass(frozen=True)
class Triangulation:
    dim: int
    facets: tuple[tuple[Simplex, int], ...]
    boundary_colors: tuple[tuple[Simplex, str], ...] = ()
    check: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        norm = []
        for verts, sgn in self.facets:
            if len(verts) != self.dim + 1 or len(set(verts)) != len(verts):
                raise TriangulationError(f"facet {verts} is not a {self.dim}-simplex")
            if sgn not in (1, -1):
                raise TriangulationError(f"facet {verts}: sign must be +1 or -1")
            norm.append(oriented(verts, sgn))
        if len({v for v, _ in norm}) != len(norm):
            raise TriangulationError("repeated facet")
        object.__setattr__(self, "facets", tuple(sorted(norm)))
        object.__setattr__(self, "boundary_colors", tuple(sorted(
            (tuple(sorted(s)), lab) for s, lab in self.boundary_colors)))
        if self.check:
            problems = self.problems()
            if problems:
                raise TriangulationError("; ".join(problems[:3]))

    # derived structure
    @cached_property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted({v for f, _ in self.facets for v in f}))

    @cached_property
    def _skeleta(self) -> dict[int, tuple[Simplex, ...]]:
        sk = {}
        for k in range(self.dim + 1):
            sk[k] = tuple(sorted({c for f, _ in self.facets for c in itertools.combinations(f, k + 1)}))
        return sk

    def skeleton(self, k: int) -> tuple[Simplex, ...]:
        if not 0 <= k <= self.dim:
            return ()
        return self._skeleta[k]

    @cached_property
    def _codim1(self) -> dict[Simplex, list[int]]:
        inc: dict[Simplex, list[int]] = {}
        for f, sgn in self.facets:
            for i in range(len(f)):
                face = f[:i] + f[i + 1:]
                inc.setdefault(face, []).append(sgn * (-1) ** i)
        return inc

    @cached_property
    def boundary(self) -> tuple[Simplex, ...]:
        return tuple(sorted(s for s, signs in self._codim1.items() if len(signs) == 1))

    @cached_property
    def boundary_complex(self) -> frozenset:
        """All simplices (every dimension) lying in the boundary."""
        return frozenset(c for s in self.boundary for k in range(len(s))
                         for c in itertools.combinations(s, k + 1))

    def is_closed(self) -> bool:
        return not self.boundary

    def problems(self) -> list[str]:
        out = []
        for face, signs in self._codim1.items():
            if len(signs) > 2:
                out.append(f"face {face} lies in {len(signs)} facets")
            elif len(signs) == 2 and signs[0] == signs[1]:
                out.append(f"face {face}: neighbouring facets induce the same orientation")
        return out

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * len(self.skeleton(k)) for k in range(self.dim + 1))

    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(self.skeleton(k)) for k in range(self.dim + 1))

    def reversed(self) -> "Triangulation":
        return Triangulation(self.dim, tuple((f, -s) for f, s in self.facets), self.boundary_colors)

    def with_boundary_colors(self, colors: Mapping[Simplex, str] | Iterable) -> "Triangulation":
        items = colors.items() if isinstance(colors, Mapping) else colors
        return Triangulation(self.dim, self.facets, tuple(items), check=False)

    def relabeled(self, mapping: Mapping[int, int]) -> "Triangulation":
        facets = tuple(oriented([mapping[v] for v in f], s) for f, s in self.facets)
        colors = tuple((tuple(sorted(mapping[v] for v in s)), lab) for s, lab in self.boundary_colors)
        return Triangulation(self.dim, facets, colors)


# ---------------------------------------------------------------- constructors

def boundary_of_simplex(m: int) -> Triangulation:
    """The m+1 oriented facets of the boundary of the standard m-simplex."""
    if m <= 0:
        raise ValueError("boundary_of_simplex needs m >= 1")
    verts = tuple(range(m + 1))
    facets = tuple((verts[:i] + verts[i + 1:], (-1) ** i) for i in range(m + 1))
    return Triangulation(m - 1, facets)


def single_simplex(m: int) -> Triangulation:
    return Triangulation(m, ((tuple(range(m + 1)), 1),))


def cone(t: Triangulation, apex: int | None = None) -> Triangulation:
    """Cone over a closed triangulation; the apex becomes the first vertex of every facet."""
    if apex is None:
        apex = max(t.vertices) + 1
    return Triangulation(t.dim + 1, tuple(oriented((apex,) + f, s) for f, s in t.facets))


def disjoint_union(a: Triangulation, b: Triangulation) -> Triangulation:
    if a.dim != b.dim:
        raise TriangulationError("dimension mismatch")
    shift = max(a.vertices) + 1 - min(b.vertices)
    moved = b.relabeled({v: v + shift for v in b.vertices})
    return Triangulation(a.dim, a.facets + moved.facets, a.boundary_colors + moved.boundary_colors)


# ---------------------------------------------------------------- queries

def faces(t: Triangulation, k: int) -> list[Simplex]:
    return list(t.skeleton(k))


def _require(t: Triangulation, s: Simplex) -> Simplex:
    s = tuple(sorted(s))
    if not s or s not in set(t.skeleton(len(s) - 1)):
        raise KeyError(f"simplex {s} is not in the triangulation")
    return s


def star(t: Triangulation, s: Simplex) -> Triangulation:
    s = _require(t, s)
    return Triangulation(t.dim, tuple((f, sg) for f, sg in t.facets if set(s) <= set(f)), check=False)


def link(t: Triangulation, s: Simplex) -> Triangulation:
    """Link of s, oriented so that s followed by the link facet gives the facet orientation."""
    s = _require(t, s)
    out = []
    for f, sg in t.facets:
        if set(s) <= set(f):
            rest = tuple(v for v in f if v not in s)
            out.append((rest, sg * perm_sign(s + rest)))
    return Triangulation(t.dim - len(s), tuple(out), check=False)


# ---------------------------------------------------------------- Pachner moves

@dataclass(frozen=True)
class PachnerMove:
    """Replace ``old_facets`` by ``new_facets``; together they form the boundary of a simplex.

    Vertices are 0..m+1; the facet omitting vertex i has index i.  New facets
    carry the orientation that continues the old side's boundary orientation.
    """

    m: int
    k: int
    old_facets: tuple[tuple[Simplex, int], ...]
    new_facets: tuple[tuple[Simplex, int], ...]

    @property
    def type(self) -> tuple[int, int]:
        return (self.k, self.m + 2 - self.k)

    def old_side(self) -> Triangulation:
        return Triangulation(self.m, self.old_facets)

    def new_side(self) -> Triangulation:
        return Triangulation(self.m, self.new_facets)

    def inverse(self) -> "PachnerMove":
        return PachnerMove(self.m, self.m + 2 - self.k, self.new_facets, self.old_facets)


def pachner_split(m: int, k: int) -> PachnerMove:
    """Split the boundary of the (m+1)-simplex into the first k facets and the rest."""
    if not 1 <= k <= m + 1:
        raise ValueError(f"move index k must lie in 1..{m + 1}")
    whole = boundary_of_simplex(m + 1)
    by_omitted = {next(iter(set(range(m + 2)) - set(f))): (f, s) for f, s in whole.facets}
    old = tuple(by_omitted[i] for i in range(k))
    new = tuple((by_omitted[i][0], -by_omitted[i][1]) for i in range(k, m + 2))
    return PachnerMove(m, k, old, new)


def _interior(side: Triangulation) -> set:
    bnd = side.boundary_complex
    return {c for k in range(side.dim + 1) for c in side.skeleton(k) if c not in bnd}


def apply_move(t: Triangulation, location: Mapping[int, int], mv: PachnerMove) -> Triangulation:
    """Apply ``mv`` with move vertex i sent to ``location[i]``.

    Move vertices missing from ``location`` (those created by the move) get
    fresh ids starting at max(vertex)+1.
    """
    if t.dim != mv.m:
        raise TriangulationError("move dimension does not match the triangulation")
    old_verts = {v for f, _ in mv.old_facets for v in f}
    loc = {v: w for v, w in location.items() if v in old_verts}
    if not old_verts <= set(loc):
        raise TriangulationError("location must map every vertex of the old facets")
    if len(set(loc.values())) != len(loc):
        raise TriangulationError("location is not injective")
    fresh = max(t.vertices) + 1
    for v in sorted({v for f, _ in mv.new_facets for v in f} - set(loc)):
        loc[v] = fresh
        fresh += 1
    present = dict(t.facets)
    mapped_old = [oriented([loc[v] for v in f], s) for f, s in mv.old_facets]
    flips = set()
    for f, s in mapped_old:
        if f not in present:
            raise TriangulationError(f"old facet {f} is not in the triangulation")
        flips.add(present[f] * s)
    if len(flips) != 1:
        raise TriangulationError("old facets have inconsistent orientation at this location")
    flip = flips.pop()
    old_side = mv.old_side()
    rest = [(f, s) for f, s in t.facets if f not in {g for g, _ in mapped_old}]
    rest_simplices = {c for f, _ in rest for k in range(len(f)) for c in itertools.combinations(f, k + 1)}
    for c in _interior(old_side):
        img = tuple(sorted(loc[v] for v in c))
        if img in rest_simplices:
            raise TriangulationError(f"interior simplex {img} of the old side is shared")
    for c in _interior(mv.new_side()):
        img = tuple(sorted(loc[v] for v in c))
        if img in rest_simplices:
            raise TriangulationError(f"new simplex {img} already exists")
    new = [oriented([loc[v] for v in f], s * flip) for f, s in mv.new_facets]
    return Triangulation(t.dim, tuple(rest + new), t.boundary_colors)


def find_locations(t: Triangulation, mv: PachnerMove, limit: int | None = None) -> list[dict[int, int]]:
    """Vertex maps at which ``mv`` applies, in deterministic order."""
    out = []
    old_verts = sorted({v for f, _ in mv.old_facets for v in f})
    facet_set = {f for f, _ in t.facets}
    first = mv.old_facets[0][0]
    for anchor in sorted(facet_set):
        for perm in itertools.permutations(anchor):
            loc = dict(zip(first, perm))
            extra = [v for v in old_verts if v not in loc]
            candidates = [v for v in t.vertices if v not in loc.values()]
            for choice in itertools.permutations(candidates, len(extra)):
                full = dict(loc)
                full.update(zip(extra, choice))
                if not all(tuple(sorted(full[v] for v in f)) in facet_set for f, _ in mv.old_facets):
                    continue
                try:
                    apply_move(t, full, mv)
                except TriangulationError:
                    continue
                out.append(full)
                if limit is not None and len(out) >= limit:
                    return out
    return out


# ---------------------------------------------------------------- text format

def parse_triangulation(text: str) -> Triangulation:
    dim = None
    facets = []
    colors = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        try:
            if head == "dim":
                dim = int(rest[0])
            elif head == "simplex":
                sign = 1
                if rest and rest[-1] in ("+", "-"):
                    sign = 1 if rest[-1] == "+" else -1
                    rest = rest[:-1]
                facets.append((tuple(int(v) for v in rest), sign))
            elif head == "boundary-color":
                colors.append((tuple(sorted(int(v) for v in rest[:-1])), rest[-1]))
            else:
                raise TriangulationError(f"unknown directive {head!r}")
        except (ValueError, IndexError) as exc:
            raise TriangulationError(f"line {lineno}: {exc}") from None
    if dim is None:
        raise TriangulationError("missing 'dim' line")
    return Triangulation(dim, tuple(oriented(f, s) for f, s in facets), tuple(colors))


def format_triangulation(t: Triangulation) -> str:
    out = [f"dim {t.dim}"]
    for f, s in t.facets:
        out.append("simplex " + " ".join(map(str, f)) + (" +" if s > 0 else " -"))
    for s, lab in t.boundary_colors:
        out.append("boundary-color " + " ".join(map(str, s)) + f" {lab}")
    return "\n".join(out) + "\n"


def read_triangulation(path: str | Path) -> Triangulation:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise OSError(f"cannot read triangulation {path}: {exc.strerror}") from exc
    return parse_triangulation(text)


def isomorphic(a: Triangulation, b: Triangulation) -> bool:
    """Brute-force oriented isomorphism test (small complexes only)."""
    if a.dim != b.dim or a.f_vector() != b.f_vector():
        return False
    fa = set(a.facets)
    fb = dict(b.facets)
    if Counter(len([f for f, _ in a.facets if v in f]) for v in a.vertices) != \
            Counter(len([f for f, _ in b.facets if v in f]) for v in b.vertices):
        return False
    for perm in itertools.permutations(b.vertices):
        m = dict(zip(a.vertices, perm))
        images = [oriented([m[v] for v in f], s) for f, s in fa]
        if all(f in fb for f, _ in images):
            signs = {fb[f] * s for f, s in images}
            if len(signs) == 1:
                return True
    return False
