"""Spherical n-category data: labels, traces, global dimensions, F-symbols.

A labeled simplex of dimension m is stored as a tuple of label names, one per
face, in *face layout* order: faces of dimension 0, then 1, ... up to the top
labeled dimension, each dimension in lexicographic order of its sorted vertex
tuple (see :func:`face_layout`).
"""
from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

from .exactnum import AlgNum, ONE, ZERO, parse

__all__ = [
    "Label",
    "FRow",
    "SymmetryRule",
    "CategoryData",
    "DataError",
    "face_layout",
    "load_dataset",
    "parse_dataset",
    "dump_dataset",
    "load_ising3",
    "load_toy_n1",
    "load_ising3_table",
    "trace",
    "globaldim",
    "admissible",
    "fsymbol",
    "validate",
]


class DataError(ValueError):
    """Malformed or internally inconsistent category data."""


class Label(NamedTuple):
    dim: int
    name: str


@dataclass(frozen=True)
class FRow:
    row_id: str
    labels: tuple[str, ...]
    value: AlgNum


@dataclass(frozen=True)
class SymmetryRule:
    """One generator family of the closure action.

    kind ``vertex-permutations``: relabel vertices, labels unchanged.
    kind ``edge-flip``: for an edge carrying ``edge_label``, toggle the listed
    pairs of triangle labels on every triangle through that edge, then rename
    the top labels of the affected tetrahedra from their new boundaries.
    """

    kind: str
    edge_label: str | None = None
    pairs: tuple[tuple[str, str], ...] = ()

    def to_line(self) -> str:
        if self.kind == "vertex-permutations":
            return "symmetry vertex-permutations"
        body = " ".join(f"{a}:{b}" for a, b in self.pairs)
        return f"symmetry edge-flip {self.edge_label} {body}".rstrip()


@lru_cache(maxsize=None)
def face_layout(m: int, top: int | None = None) -> tuple[tuple[int, ...], ...]:
    """Faces of the standard m-simplex of dimension 0..top, by dimension then lexicographically."""
    if top is None:
        top = m
    out = []
    for k in range(top + 1):
        out.extend(itertools.combinations(range(m + 1), k + 1))
    return tuple(out)


@lru_cache(maxsize=None)
def _layout_index(m: int, top: int) -> dict:
    return {f: i for i, f in enumerate(face_layout(m, top))}


@lru_cache(maxsize=None)
def _restrict_map(m: int, top: int, verts: tuple[int, ...], sub_top: int) -> tuple[int, ...]:
    idx = _layout_index(m, top)
    return tuple(idx[tuple(verts[i] for i in f)] for f in face_layout(len(verts) - 1, sub_top))


def _restrict(key: Sequence[str], m: int, top: int, verts: tuple[int, ...], sub_top: int) -> tuple[str, ...]:
    """Labels of the sub-simplex on ``verts`` (sorted), in its own face layout up to sub_top."""
    return tuple(key[i] for i in _restrict_map(m, top, tuple(verts), sub_top))


@lru_cache(maxsize=None)
def _permute_map(m: int, top: int, perm: tuple[int, ...]) -> tuple[int, ...]:
    idx = _layout_index(m, top)
    src = [0] * len(idx)
    for i, f in enumerate(face_layout(m, top)):
        src[idx[tuple(sorted(perm[v] for v in f))]] = i
    return tuple(src)


def _permute(key: Sequence[str], m: int, top: int, perm: Sequence[int]) -> tuple[str, ...]:
    """Relabel vertex i as perm[i]; returns the key of the image in face layout order."""
    return tuple(key[i] for i in _permute_map(m, top, tuple(perm)))


@dataclass(frozen=True, eq=False)
class CategoryData:
    n: int
    labels: dict[int, tuple[str, ...]]
    trace: dict[str, AlgNum]
    globaldim: dict[str, AlgNum]
    rows: tuple[FRow, ...]
    symmetry: tuple[SymmetryRule, ...]
    fsymbols: dict[tuple[str, ...], AlgNum] = field(default_factory=dict)
    provenance: dict[tuple[str, ...], str] = field(default_factory=dict)
    # per dimension k>=1: boundary labels (face layout k, k-1) -> admissible k-labels
    admissible_table: dict[int, dict[tuple[str, ...], tuple[str, ...]]] = field(default_factory=dict)
    # merge conflicts found while closing the rows (key, row_a, row_b)
    conflicts: tuple[tuple[tuple[str, ...], str, str], ...] = ()

    @property
    def facet_dim(self) -> int:
        return self.n + 1

    def dim_of(self, name: str) -> int:
        for k, names in self.labels.items():
            if name in names:
                return k
        raise KeyError(f"unknown label {name!r}")

    def is_empty(self) -> bool:
        return not any(self.labels.values())


# ---------------------------------------------------------------- file format

def parse_dataset(text: str, *, close: bool = True) -> CategoryData:
    labels: dict[int, tuple[str, ...]] = {}
    trace_map: dict[str, AlgNum] = {}
    gdim_map: dict[str, AlgNum] = {}
    rows: list[FRow] = []
    rules: list[SymmetryRule] = []
    seen_ids: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        try:
            if head == "labels":
                k = int(rest[0])
                if k in labels:
                    raise DataError(f"labels for dimension {k} given twice")
                labels[k] = tuple(rest[1:])
            elif head in ("trace", "gdim"):
                name, value = rest[0], " ".join(rest[1:])
                (trace_map if head == "trace" else gdim_map)[name] = parse(value)
            elif head == "frow":
                row_id = rest[0]
                if row_id in seen_ids:
                    raise DataError(f"duplicate row id {row_id}")
                seen_ids.add(row_id)
                n = max(labels) if labels else 0
                width = len(face_layout(n + 1, n))
                labs = tuple(rest[1:1 + width])
                if len(labs) != width or len(rest) < 2 + width:
                    raise DataError(f"row {row_id}: expected {width} labels and a value")
                rows.append(FRow(row_id, labs, parse(" ".join(rest[1 + width:]))))
            elif head == "symmetry":
                if rest[0] == "vertex-permutations":
                    rules.append(SymmetryRule("vertex-permutations"))
                elif rest[0] == "edge-flip":
                    pairs = tuple(tuple(p.split(":")) for p in rest[2:])
                    rules.append(SymmetryRule("edge-flip", rest[1], pairs))
                else:
                    raise DataError(f"unknown symmetry kind {rest[0]!r}")
            else:
                raise DataError(f"unknown directive {head!r}")
        except DataError as exc:
            raise DataError(f"line {lineno}: {exc}") from None
        except (IndexError, ValueError) as exc:
            raise DataError(f"line {lineno}: {exc}") from None
    n = max(labels) if labels else 0
    for k in range(n + 1):
        labels.setdefault(k, ())
    names = [x for k in sorted(labels) for x in labels[k]]
    if len(names) != len(set(names)):
        raise DataError("label names must be unique across dimensions")
    data = CategoryData(n, labels, trace_map, gdim_map, tuple(rows), tuple(rules))
    return close_dataset(data) if close else data


def dump_dataset(d: CategoryData) -> str:
    out = []
    for k in sorted(d.labels):
        out.append(f"labels {k} " + " ".join(d.labels[k]))
    for k in sorted(d.labels):
        for name in d.labels[k]:
            if name in d.trace:
                out.append(f"trace {name} {d.trace[name]}")
            if name in d.globaldim:
                out.append(f"gdim {name} {d.globaldim[name]}")
    out.extend(r.to_line() for r in d.symmetry)
    for r in d.rows:
        out.append(f"frow {r.row_id} {' '.join(r.labels)} {r.value}")
    return "\n".join(out) + "\n"


def load_dataset(path: str | Path) -> CategoryData:
    if str(path) == "ising3":
        return load_ising3()
    if str(path) == "toy1":
        return load_toy_n1()
    if str(path) == "ising3-table":
        return load_ising3_table()
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise OSError(f"cannot read dataset {path}: {exc.strerror}") from exc
    return parse_dataset(text)


def _bundled(name: str) -> str:
    return resources.files(__package__).joinpath("data").joinpath(name).read_text()


@lru_cache(maxsize=None)
def load_ising3() -> CategoryData:
    """The bundled Ising-type n=3 dataset, symmetry-closed."""
    d = parse_dataset(_bundled("ising3.txt"))
    if d.conflicts:
        key, a, b = d.conflicts[0]
        raise DataError(f"rows {a} and {b} assign different F values to the same labeled simplex")
    return d


@lru_cache(maxsize=None)
def load_ising3_table() -> CategoryData:
    """The unsigned transcription of the 20j table, closed under vertex permutations and g-edge flips.

    All F values here are positive.  Kept as reference data: it satisfies every
    equation in which both sides admit an extension but is not invariant under
    (2,4) moves.  :func:`load_ising3` carries the calibrated signs.
    """
    return parse_dataset(_bundled("ising3_table.txt"))


@lru_cache(maxsize=None)
def load_toy_n1() -> CategoryData:
    """A small n=1 dataset (sum over matrix blocks of size 1 and 2) for brute-force checks."""
    return parse_dataset(_bundled("toy1.txt"))


# ---------------------------------------------------------------- closure

def _tetra_namer(n: int, rows: Iterable[FRow]) -> dict[tuple[str, ...], set[str]]:
    """Canonical (orbit-minimal) boundary of an n-simplex -> n-labels seen with it."""
    m = n + 1
    namer: dict[tuple[str, ...], set[str]] = defaultdict(set)
    for r in rows:
        for verts in itertools.combinations(range(m + 1), n + 1):
            sub = _restrict(r.labels, m, n, verts, n)
            namer[_canonical_boundary(sub, n)].add(sub[-1])
    return namer


@lru_cache(maxsize=None)
def _canonical_bnd(bnd: tuple[str, ...], k: int) -> tuple[str, ...]:
    return min(_permute(bnd, k, k - 1, p) for p in itertools.permutations(range(k + 1)))


def _canonical_boundary(sub: Sequence[str], k: int) -> tuple[str, ...]:
    """Minimum over vertex permutations of the boundary part (all but the top label)."""
    return _canonical_bnd(tuple(sub[:-1]), k)


def _generators(d: CategoryData, namer) -> list:
    m, n = d.n + 1, d.n
    gens = []
    for rule in d.symmetry:
        if rule.kind == "vertex-permutations" and m >= 1:
            swap = (1, 0) + tuple(range(2, m + 1))
            cycle = tuple(range(1, m + 1)) + (0,)
            gens.append(lambda key, p=swap: [_permute(key, m, n, p)])
            gens.append(lambda key, p=cycle: [_permute(key, m, n, p)])
        elif rule.kind == "edge-flip":
            gens.append(lambda key, r=rule: _edge_flips(key, m, n, r, namer))
    return gens


def _edge_flips(key, m, n, rule: SymmetryRule, namer) -> list:
    if n < 2:
        return []
    idx = _layout_index(m, n)
    toggle = {}
    for a, b in rule.pairs:
        toggle[a], toggle[b] = b, a
    out = []
    for e in itertools.combinations(range(m + 1), 2):
        if key[idx[e]] != rule.edge_label:
            continue
        new = list(key)
        for f in face_layout(m, 2):
            if len(f) == 3 and set(e) <= set(f):
                new[idx[f]] = toggle.get(new[idx[f]], new[idx[f]])
        if n >= 3:
            for f in face_layout(m, 3):
                if len(f) == 4 and set(e) <= set(f):
                    sub = _restrict(new, m, n, f, 3)
                    names = namer.get(_canonical_boundary(sub, 3))
                    if not names or len(names) != 1:
                        break
                    new[idx[f]] = next(iter(names))
            else:
                out.append(tuple(new))
        else:
            out.append(tuple(new))
    return out


def close_dataset(d: CategoryData) -> CategoryData:
    """Install all F entries generated from the rows by the symmetry rules."""
    namer = _tetra_namer(d.n, d.rows) if d.n >= 1 else {}
    gens = _generators(d, namer)
    fs: dict[tuple[str, ...], AlgNum] = {}
    prov: dict[tuple[str, ...], str] = {}
    conflicts = []
    for row in d.rows:
        if row.labels in fs:
            if fs[row.labels] != row.value:
                conflicts.append((row.labels, prov[row.labels], row.row_id))
            continue
        fs[row.labels] = row.value
        prov[row.labels] = row.row_id
        todo = [row.labels]
        while todo:
            key = todo.pop()
            for g in gens:
                for img in g(key):
                    if img in fs:
                        if fs[img] != row.value:
                            conflicts.append((img, prov[img], row.row_id))
                        continue
                    fs[img] = row.value
                    prov[img] = row.row_id
                    todo.append(img)
    table = _admissible_table(d.n, fs)
    return CategoryData(
        d.n, d.labels, d.trace, d.globaldim, d.rows, d.symmetry,
        fs, prov, table, tuple(conflicts),
    )


def _admissible_table(n: int, fs) -> dict:
    m = n + 1
    table: dict[int, dict[tuple[str, ...], set[str]]] = {k: defaultdict(set) for k in range(n + 1)}
    for key in fs:
        for k in range(n + 1):
            for verts in itertools.combinations(range(m + 1), k + 1):
                sub = _restrict(key, m, n, verts, k)
                table[k][sub[:-1]].add(sub[-1])
    return {k: {b: tuple(sorted(v)) for b, v in t.items()} for k, t in table.items()}


# ---------------------------------------------------------------- queries

def trace(d: CategoryData, label: Label | str) -> AlgNum:
    name = label.name if isinstance(label, Label) else label
    try:
        return d.trace[name]
    except KeyError:
        raise KeyError(f"unknown label {name!r}") from None


def globaldim(d: CategoryData, label: Label | str) -> AlgNum:
    name = label.name if isinstance(label, Label) else label
    try:
        return d.globaldim[name]
    except KeyError:
        raise KeyError(f"unknown label {name!r}") from None


def admissible(d: CategoryData, boundary: Sequence[str]) -> list[str]:
    """Top labels compatible with the given proper-face labels (face layout order)."""
    boundary = tuple(boundary)
    for k in range(d.n + 1):
        if len(face_layout(k, k - 1)) == len(boundary):
            return list(d.admissible_table.get(k, {}).get(boundary, ()))
    raise ValueError(f"boundary of length {len(boundary)} matches no simplex dimension")


def fsymbol(d: CategoryData, key: Sequence[str]) -> AlgNum:
    """Normalized F value of a fully labeled (n+1)-simplex; zero when inadmissible."""
    return d.fsymbols.get(tuple(key), ZERO)


def row_key(d: CategoryData, row_id: str) -> tuple[str, ...]:
    for r in d.rows:
        if r.row_id == row_id:
            return r.labels
    raise KeyError(f"unknown row id {row_id!r}")


def validate(d: CategoryData) -> list[str]:
    """Every invariant violation, one message per offending key."""
    problems = []
    for k, names in sorted(d.labels.items()):
        for name in names:
            if d.trace.get(name, ZERO).is_zero():
                problems.append(f"zero trace: {name}")
            if d.globaldim.get(name, ZERO).is_zero():
                problems.append(f"zero global dimension: {name}")
    if d.n == 3 and len(d.labels.get(0, ())) != 1:
        problems.append("expected exactly one 0-label")
    if d.n >= 1:
        for name in d.labels.get(d.n - 1, ()):
            if d.globaldim.get(name, ZERO) != ONE:
                problems.append(f"global dimension of (n-1)-label {name} is not 1")
    m = d.n + 1
    known = {k: set(v) for k, v in d.labels.items()}
    for r in d.rows:
        for f, lab in zip(face_layout(m, d.n), r.labels):
            if lab not in known.get(len(f) - 1, ()):
                problems.append(f"row {r.row_id}: label {lab!r} on face {f} is not a {len(f) - 1}-label")
                break
    for key, a, b in d.conflicts:
        problems.append(f"conflicting F values between rows {a} and {b}")
    if d.n >= 2:
        problems.extend(_face_name_clashes(d))
    used = {lab for key in d.fsymbols for lab in key}
    for name in d.labels.get(d.n, ()):
        if name not in used:
            problems.append(f"unrecoverable label {name}: occurs in no table row")
    return problems


def _face_name_clashes(d: CategoryData) -> list[str]:
    """Rows that label the same sub-simplex boundary with different top labels."""
    seen: dict[tuple[str, ...], tuple[str, str]] = {}
    out = []
    n, m = d.n, d.n + 1
    for r in d.rows:
        for verts in itertools.combinations(range(m + 1), n + 1):
            sub = _restrict(r.labels, m, n, verts, n)
            canon = _canonical_boundary(sub, n)
            if canon in seen and seen[canon][1] != sub[-1]:
                other = seen[canon][0]
                out.append(f"rows {other} and {r.row_id} give one boundary two labels "
                           f"({seen[canon][1]} vs {sub[-1]})")
            seen.setdefault(canon, (r.row_id, sub[-1]))
    return out


def global_dimension_defects(d: CategoryData, unit: str = "1") -> list[str]:
    """Check mu(alpha) = sum Tr(beta)^2/mu(beta) over bimodules beta, for vertices and edges."""
    out = []
    if d.n < 2:
        return out
    for v in d.labels[0]:
        total = sum((d.trace[e] ** 2 / d.globaldim[e] for e in d.labels[1]
                     if e in admissible(d, (v, v))), ZERO)
        if total != d.globaldim[v]:
            out.append(f"vertex {v}: {d.globaldim[v]} != {total}")
    v = d.labels[0][0]
    for e in d.labels[1]:
        bnd = (v, v, v, e, e, unit)  # triangle 012 with edges 01=e, 02=e, 12=unit
        total = sum((d.trace[t] ** 2 / d.globaldim[t] for t in admissible(d, bnd)), ZERO)
        if total != d.globaldim[e]:
            out.append(f"edge {e}: {d.globaldim[e]} != {total}")
    return out
