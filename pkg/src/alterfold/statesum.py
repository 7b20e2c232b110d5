"""State-sum evaluation of partition functions on colored triangulations.

Z = sum over colorings of interior simplices of
    prod_{interior k-simplex, k <= n} Tr/mu  *  prod_{facets} F.

Colorings are enumerated facet by facet with admissibility pruning.  When
every weight is a signed power 2^(q/4) the sum is accumulated as integer
coefficients per quarter-exponent, which avoids rational arithmetic in the
inner loop; otherwise AlgNum arithmetic is used.  An optional cache keyed on
the labels of already-colored simplices still referenced later (the
"frontier") never changes values; it is off by default because on the
bundled complexes almost every frontier state is distinct.
"""
from __future__ import annotations

import itertools
from collections import defaultdict, deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping

from .catdata import CategoryData, face_layout
from .exactnum import AlgNum, ZERO, ONE, pow2_quarter
from .simplicial import Simplex, Triangulation

__all__ = [
    "Evaluation",
    "StateSumError",
    "evaluate",
    "evaluate_sharded",
    "evaluate_bruteforce",
    "boundary_sums",
    "monomial_exponent",
    "iter_colorings",
    "boundary_simplices",
]


class StateSumError(ValueError):
    """Contract violation: dimension mismatch or malformed boundary coloring."""


@dataclass(frozen=True)
class Evaluation:
    value: AlgNum
    colorings_visited: int
    pruned: int

    def __add__(self, other: "Evaluation") -> "Evaluation":
        return Evaluation(self.value + other.value, self.colorings_visited + other.colorings_visited,
                          self.pruned + other.pruned)


def monomial_exponent(a: AlgNum) -> tuple[int, int] | None:
    """(sign, q) with a = sign * 2^(q/4), or None when a is not of that form."""
    nz = [(r, c) for r, c in enumerate(a.coeffs) if c]
    if len(nz) != 1:
        return None
    r, c = nz[0]
    mag = abs(c)
    num, den = mag.numerator, mag.denominator
    if num & (num - 1) or den & (den - 1):
        return None
    m = num.bit_length() - den.bit_length()
    return (1 if c > 0 else -1), 4 * m + r


def _laurent_value(poly: Mapping[int, int]) -> AlgNum:
    """Sum of coeff * 2^(q/4)."""
    c = [Fraction(0)] * 4
    for q, v in poly.items():
        if v:
            m, r = divmod(q, 4)
            c[r] += v * Fraction(2) ** m
    return AlgNum(*c)


class _Plan:
    """Compiled enumeration order and lookup tables for one (triangulation, data) pair."""

    def __init__(self, t: Triangulation, d: CategoryData, boundary: Mapping[Simplex, str] | None,
                 free_boundary: bool = False):
        n = d.n
        if t.dim != n + 1:
            raise StateSumError(f"triangulation has dimension {t.dim}, data needs {n + 1}")
        self.n = n
        names = [x for k in range(n + 1) for x in d.labels.get(k, ())]
        self.names = names
        code = {x: i for i, x in enumerate(names)}
        self.code = code

        simplices = [s for k in range(n + 1) for s in t.skeleton(k)]
        self.simplices = simplices
        slot = {s: i for i, s in enumerate(simplices)}
        self.slot = slot
        bcomplex = t.boundary_complex

        # fixed labels
        fixed: dict[int, int] = {}
        self.boundary_slots = sorted(slot[s] for s in simplices if s in bcomplex)
        self.inadmissible_boundary = False
        if not free_boundary:
            given = dict(t.boundary_colors)
            if boundary:
                given.update({tuple(sorted(s)): lab for s, lab in boundary.items()})
            for s, lab in given.items():
                if s not in bcomplex:
                    raise StateSumError(f"colored simplex {s} is not on the boundary")
                if lab not in d.labels.get(len(s) - 1, ()):
                    raise StateSumError(f"{lab!r} is not a {len(s) - 1}-label")
                fixed[slot[s]] = code[lab]
            for i in self.boundary_slots:
                if i not in fixed:
                    k = len(simplices[i]) - 1
                    only = d.labels.get(k, ())
                    if len(only) != 1:
                        raise StateSumError(f"boundary simplex {simplices[i]} has no color")
                    fixed[i] = code[only[0]]
        self.fixed = fixed

        # weights per label code: Tr/mu
        raw_w = {}
        for k in range(n + 1):
            for x in d.labels.get(k, ()):
                raw_w[code[x]] = d.trace[x] / d.globaldim[x]
        raw_f = {tuple(code[x] for x in key): v for key, v in d.fsymbols.items() if v}
        mono = {c: monomial_exponent(v) for c, v in raw_w.items()}
        fmono = {k: monomial_exponent(v) for k, v in raw_f.items()}
        self.monomial = all(v is not None for v in mono.values()) and all(v is not None for v in fmono.values())
        self.weight = mono if self.monomial else raw_w
        ftab = fmono if self.monomial else raw_f

        # admissibility per dimension, in label codes
        cand = {}
        for k in range(n + 1):
            tab = d.admissible_table.get(k, {})
            cand[k] = {tuple(code[x] for x in b): tuple(code[x] for x in labs) for b, labs in tab.items()}

        # facet-by-facet breadth-first order of the variables
        facets = [f for f, _ in t.facets]
        adj = defaultdict(list)
        by_face = defaultdict(list)
        for f in facets:
            for i in range(len(f)):
                by_face[f[:i] + f[i + 1:]].append(f)
        for fs in by_face.values():
            for a, b in itertools.combinations(fs, 2):
                adj[a].append(b)
                adj[b].append(a)
        start = self._start_facet(facets, bcomplex)
        seen_f, queue, forder = {start}, deque([start]), []
        while queue:
            f = queue.popleft()
            forder.append(f)
            for g in sorted(adj[f]):
                if g not in seen_f:
                    seen_f.add(g)
                    queue.append(g)
        for f in facets:
            if f not in seen_f:
                forder.append(f)
                seen_f.add(f)
        order: list[int] = []
        placed = set(fixed)
        for f in forder:
            for k in range(n + 1):
                for c in itertools.combinations(f, k + 1):
                    i = slot[c]
                    if i not in placed:
                        placed.add(i)
                        order.append(i)
        pos = {s: p for p, s in enumerate(order)}

        # per-step data
        self.steps = []
        for p, i in enumerate(order):
            s = simplices[i]
            k = len(s) - 1
            faces = tuple(slot[tuple(s[j] for j in f)] for f in face_layout(k, k - 1))
            weighted = not (free_boundary and i in self.boundary_slots_set())
            self.steps.append([i, faces, cand[k], weighted, []])
        self.const_checks = []
        for f in facets:
            fslots = tuple(slot[tuple(f[j] for j in fl)] for fl in face_layout(n + 1, n))
            var_pos = [pos[x] for x in fslots if x in pos]
            if var_pos:
                self.steps[max(var_pos)][4].append((fslots, ftab))
            else:
                self.const_checks.append((fslots, ftab))
        # fixed simplices must themselves be admissible
        for i, c in fixed.items():
            s = simplices[i]
            k = len(s) - 1
            faces = tuple(slot[tuple(s[j] for j in f)] for f in face_layout(k, k - 1))
            if any(x not in fixed for x in faces):
                continue
            if c not in cand[k].get(tuple(fixed[x] for x in faces), ()):
                self.inadmissible_boundary = True
        # frontier for the cache: earlier slots still read at or after step p
        self.frontier = []
        later: set[int] = set()
        reads = []
        for p, (i, faces, _, _, checks) in enumerate(self.steps):
            r = set(faces)
            for fslots, _ in checks:
                r.update(fslots)
            reads.append(r)
        for p in range(len(self.steps) - 1, -1, -1):
            later |= reads[p]
            self.frontier.append(tuple(sorted(x for x in later if x in pos and pos[x] < p)))
        self.frontier.reverse()

    def boundary_slots_set(self):
        if not hasattr(self, "_bset"):
            self._bset = set(self.boundary_slots)
        return self._bset

    @staticmethod
    def _start_facet(facets, bcomplex):
        # start where the boundary is, so fixed labels prune early
        best = max(facets, key=lambda f: (sum(1 for c in itertools.combinations(f, len(f) - 1) if c in bcomplex), -facets.index(f)))
        return best

    def initial_assignment(self) -> list[int]:
        a = [-1] * len(self.simplices)
        for i, c in self.fixed.items():
            a[i] = c
        return a

    def constant_factor(self, assign):
        """Product of F over facets with no free faces, or None if one vanishes."""
        if self.monomial:
            q, sg = 0, 1
            for fslots, ftab in self.const_checks:
                v = ftab.get(tuple(assign[x] for x in fslots))
                if v is None:
                    return None
                sg *= v[0]
                q += v[1]
            return (sg, q)
        acc = ONE
        for fslots, ftab in self.const_checks:
            v = ftab.get(tuple(assign[x] for x in fslots))
            if v is None:
                return None
            acc = acc * v
        return acc


def _first_candidates(plan: _Plan, assign) -> tuple[int, ...]:
    if not plan.steps:
        return ()
    i, faces, table, _, _ = plan.steps[0]
    return table.get(tuple(assign[x] for x in faces), ())


def _run(plan: _Plan, first_filter=None, memo: bool = False) -> Evaluation:
    assign = plan.initial_assignment()
    if plan.inadmissible_boundary:
        return Evaluation(ZERO, 0, 0)
    const = plan.constant_factor(assign)
    if const is None:
        return Evaluation(ZERO, 0, 1)
    steps = plan.steps
    nsteps = len(steps)
    frontier = plan.frontier
    weight = plan.weight
    cache: dict = {}
    pruned = 0
    mono = plan.monomial

    def rec_mono(p):
        nonlocal pruned
        if p == nsteps:
            return {0: 1}, 1
        if memo:
            key = (p, tuple([assign[x] for x in frontier[p]]))
            hit = cache.get(key)
            if hit is not None:
                return hit
        i, faces, table, weighted, checks = steps[p]
        cands = table.get(tuple([assign[x] for x in faces]), ())
        if p == 0 and first_filter is not None:
            cands = [c for c in cands if first_filter(c)]
        acc: dict[int, int] = {}
        leaves = 0
        for c in cands:
            assign[i] = c
            if weighted:
                sg, q = weight[c]
            else:
                sg, q = 1, 0
            ok = True
            for fslots, ftab in checks:
                v = ftab.get(tuple([assign[x] for x in fslots]))
                if v is None:
                    ok = False
                    break
                sg *= v[0]
                q += v[1]
            if not ok:
                pruned += 1
                continue
            sub, cnt = rec_mono(p + 1)
            if not cnt:
                continue
            leaves += cnt
            for e, v in sub.items():
                e += q
                acc[e] = acc.get(e, 0) + sg * v
        assign[i] = -1
        res = (acc, leaves)
        if memo:
            cache[key] = res
        return res

    def rec_alg(p):
        nonlocal pruned
        if p == nsteps:
            return ONE, 1
        if memo:
            key = (p, tuple([assign[x] for x in frontier[p]]))
            hit = cache.get(key)
            if hit is not None:
                return hit
        i, faces, table, weighted, checks = steps[p]
        cands = table.get(tuple([assign[x] for x in faces]), ())
        if p == 0 and first_filter is not None:
            cands = [c for c in cands if first_filter(c)]
        acc = ZERO
        leaves = 0
        for c in cands:
            assign[i] = c
            w = weight[c] if weighted else ONE
            ok = True
            for fslots, ftab in checks:
                v = ftab.get(tuple([assign[x] for x in fslots]))
                if v is None:
                    ok = False
                    break
                w = w * v
            if not ok:
                pruned += 1
                continue
            sub, cnt = rec_alg(p + 1)
            if cnt:
                acc = acc + w * sub
                leaves += cnt
        assign[i] = -1
        res = (acc, leaves)
        if memo:
            cache[key] = res
        return res

    if mono:
        poly, leaves = rec_mono(0)
        sg, q = const
        value = _laurent_value({e + q: sg * v for e, v in poly.items()})
    else:
        value, leaves = rec_alg(0)
        value = value * const
    return Evaluation(value, leaves, pruned)


def evaluate(t: Triangulation, d: CategoryData, boundary: Mapping[Simplex, str] | None = None,
             *, memo: bool = False) -> Evaluation:
    """Exact partition function of t with the given boundary colors (t.boundary_colors by default)."""
    return _run(_Plan(t, d, boundary), memo=memo)


def _shard_worker(args):
    t, d, boundary, shards, j = args
    plan = _Plan(t, d, boundary)
    cands = _first_candidates(plan, plan.initial_assignment())
    mine = {c for idx, c in enumerate(cands) if idx % shards == j}
    return _run(plan, first_filter=mine.__contains__)


def evaluate_sharded(t: Triangulation, d: CategoryData, boundary: Mapping[Simplex, str] | None = None,
                     shards: int = 1, jobs: int = 1) -> Evaluation:
    """Same value as :func:`evaluate`; the first variable's labels are dealt round-robin to shards."""
    if shards < 1:
        raise ValueError("shards must be positive")
    tasks = [(t, d, boundary, shards, j) for j in range(shards)]
    if jobs > 1 and shards > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, shards)) as pool:
            parts = list(pool.map(_shard_worker, tasks))
    else:
        parts = [_shard_worker(a) for a in tasks]
    total = Evaluation(ZERO, 0, 0)
    for part in parts:
        total = total + part
    if not _Plan(t, d, boundary).steps:
        # nothing to shard: every shard evaluated the same constant
        return parts[0]
    return total


def evaluate_bruteforce(t: Triangulation, d: CategoryData, boundary: Mapping[Simplex, str] | None = None) -> AlgNum:
    """Naive oracle: full product space of labels, weights multiplied out in AlgNum."""
    plan = _Plan(t, d, boundary)
    n = d.n
    simplices = plan.simplices
    free = [i for i in range(len(simplices)) if i not in plan.fixed]
    choices = [d.labels[len(simplices[i]) - 1] for i in free]
    slot = plan.slot
    total = ZERO
    for combo in itertools.product(*choices):
        lab = {simplices[i]: plan.names[c] for i, c in plan.fixed.items()}
        lab.update({simplices[i]: x for i, x in zip(free, combo)})
        term = ONE
        for i, x in zip(free, combo):
            term = term * (d.trace[x] / d.globaldim[x])
        for f, _ in t.facets:
            key = tuple(lab[tuple(f[j] for j in fl)] for fl in face_layout(n + 1, n))
            term = term * d.fsymbols.get(key, ZERO)
            if term.is_zero():
                break
        total = total + term
    return total


def boundary_sums(t: Triangulation, d: CategoryData, first_filter=None) -> dict[tuple[str, ...], tuple[AlgNum, int]]:
    """Group all colorings of t by their boundary coloring.

    Returns boundary-labels (over ``t.boundary_complex`` in slot order) ->
    (sum of interior weights, number of admissible extensions).  Boundary
    simplices carry no weight.
    """
    plan = _Plan(t, d, None, free_boundary=True)
    assign = plan.initial_assignment()
    steps = plan.steps
    nsteps = len(steps)
    bslots = plan.boundary_slots
    weight = plan.weight
    mono = plan.monomial
    groups: dict[tuple[int, ...], list] = {}

    def rec(p, sg, q, w):
        if p == nsteps:
            key = tuple([assign[x] for x in bslots])
            g = groups.get(key)
            if g is None:
                g = groups[key] = [defaultdict(int) if mono else ZERO, 0]
            if mono:
                g[0][q] += sg
            else:
                g[0] = g[0] + w
            g[1] += 1
            return
        i, faces, table, weighted, checks = steps[p]
        cands = table.get(tuple([assign[x] for x in faces]), ())
        if p == 0 and first_filter is not None:
            cands = [c for c in cands if first_filter(c)]
        for c in cands:
            assign[i] = c
            if mono:
                s2, q2, w2 = sg, q, None
                if weighted:
                    a, b = weight[c]
                    s2 *= a
                    q2 += b
            else:
                s2 = q2 = None
                w2 = w * weight[c] if weighted else w
            ok = True
            for fslots, ftab in checks:
                v = ftab.get(tuple([assign[x] for x in fslots]))
                if v is None:
                    ok = False
                    break
                if mono:
                    s2 *= v[0]
                    q2 += v[1]
                else:
                    w2 = w2 * v
            if ok:
                rec(p + 1, s2, q2, w2)
        assign[i] = -1

    rec(0, 1, 0, ONE)
    names = plan.names
    out = {}
    for key, (acc, cnt) in groups.items():
        value = _laurent_value(acc) if mono else acc
        out[tuple(names[c] for c in key)] = (value, cnt)
    return out


def iter_colorings(t: Triangulation, d: CategoryData, boundary: Mapping[Simplex, str] | None = None
                   ) -> Iterator[tuple[dict[Simplex, str], AlgNum]]:
    """Yield every admissible coloring with its exact weight (small complexes; for inspection)."""
    plan = _Plan(t, d, boundary)
    if plan.inadmissible_boundary:
        return
    assign = plan.initial_assignment()
    steps, names, simplices = plan.steps, plan.names, plan.simplices
    interior = [i for i in range(len(simplices)) if i not in plan.fixed]
    layout = face_layout(d.n + 1, d.n)

    def rec(p):
        if p == len(steps):
            lab = {simplices[i]: names[c] for i, c in enumerate(assign)}
            w = ONE
            for i in interior:
                x = names[assign[i]]
                w = w * (d.trace[x] / d.globaldim[x])
            for f, _ in t.facets:
                w = w * d.fsymbols.get(tuple(lab[tuple(f[j] for j in fl)] for fl in layout), ZERO)
            if not w.is_zero():
                yield lab, w
            return
        i, faces, table, _, _ = steps[p]
        for c in table.get(tuple(assign[x] for x in faces), ()):
            assign[i] = c
            yield from rec(p + 1)
        assign[i] = -1

    yield from rec(0)


def boundary_simplices(t: Triangulation, n: int) -> list[Simplex]:
    """Boundary simplices of dimension <= n in the key order used by :func:`boundary_sums`."""
    simplices = [s for k in range(n + 1) for s in t.skeleton(k)]
    bc = t.boundary_complex
    return [s for s in simplices if s in bc]
