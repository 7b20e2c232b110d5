"""Pachner-move consistency equations for F-symbol data.

The boundary of the (n+2)-simplex splits into k facets and the remaining
n+3-k facets.  Both sides share a triangulated sphere as boundary; for every
coloring of that sphere the state sums of the two sides must agree.  An
equation is emitted for a boundary coloring when at least one side has a
nonzero sum.  Colorings that admit extensions whose contributions cancel to
zero on both sides are tallied separately as ``vanishing``.
"""
from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator

from .catdata import CategoryData
from .exactnum import AlgNum, ZERO, format_algnum
from .simplicial import Simplex, Triangulation, pachner_split
from .statesum import (_Plan, _first_candidates, boundary_simplices, boundary_sums, evaluate)

__all__ = ["PachnerEquation", "PachnerReport", "generate", "verify", "spot_check", "split_sides",
           "format_equation"]


@dataclass(frozen=True)
class PachnerEquation:
    move: tuple[int, int]
    boundary: tuple[tuple[Simplex, str], ...]
    lhs: AlgNum
    rhs: AlgNum

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


@dataclass
class PachnerReport:
    move: tuple[int, int]
    total: int = 0
    passed: int = 0
    failed: int = 0
    vanishing: int = 0
    first_failures: list[PachnerEquation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def summary(self) -> str:
        return f"move {self.move[0]},{self.move[1]}: {self.passed}/{self.total} passed"


def split_sides(d: CategoryData, k: int) -> tuple[Triangulation, Triangulation, tuple[int, int]]:
    """The two sides of the (k, n+3-k) split, oriented so that they glue to a closed sphere."""
    m = d.n + 1
    if not 1 <= k <= m + 1:
        raise ValueError(f"move index k must lie in 1..{m + 1} for an n={d.n} dataset")
    mv = pachner_split(m, k)
    return mv.old_side(), mv.new_side(), mv.type


def _partial_sums(args):
    t, d, shards, j = args
    if shards == 1:
        return boundary_sums(t, d)
    plan = _Plan(t, d, None, free_boundary=True)
    cands = _first_candidates(plan, plan.initial_assignment())
    mine = {c for i, c in enumerate(cands) if i % shards == j}
    return boundary_sums(t, d, first_filter=mine.__contains__)


def _side_sums(t: Triangulation, d: CategoryData, jobs: int) -> dict:
    if jobs <= 1:
        return boundary_sums(t, d)
    tasks = [(t, d, jobs, j) for j in range(jobs)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        parts = list(pool.map(_partial_sums, tasks))
    merged: dict = {}
    for part in parts:
        for key, (value, count) in part.items():
            if key in merged:
                v0, c0 = merged[key]
                merged[key] = (v0 + value, c0 + count)
            else:
                merged[key] = (value, count)
    return merged


def _tallied(d: CategoryData, k: int, jobs: int = 1) -> Iterator[tuple[str, PachnerEquation | None]]:
    left, right, move = split_sides(d, k)
    simplices = boundary_simplices(left, d.n)
    if simplices != boundary_simplices(right, d.n):
        raise AssertionError("split sides disagree on their common boundary")
    if not any(d.labels.get(j) for j in range(d.n + 1)):
        return
    lsums = _side_sums(left, d, jobs)
    rsums = _side_sums(right, d, jobs)
    for key in sorted(set(lsums) | set(rsums)):
        lhs = lsums.get(key, (ZERO, 0))[0]
        rhs = rsums.get(key, (ZERO, 0))[0]
        if lhs.is_zero() and rhs.is_zero():
            yield "vanishing", None
            continue
        yield "equation", PachnerEquation(move, tuple(zip(simplices, key)), lhs, rhs)


def generate(d: CategoryData, k: int, *, jobs: int = 1) -> Iterator[PachnerEquation]:
    """Stream the (k, n+3-k) equations in a deterministic order."""
    for kind, eq in _tallied(d, k, jobs):
        if kind == "equation":
            yield eq


def verify(d: CategoryData, k: int, *, max_failures: int = 10, jobs: int = 1) -> PachnerReport:
    report = PachnerReport(split_sides(d, k)[2])
    for kind, eq in _tallied(d, k, jobs):
        if kind == "vanishing":
            report.vanishing += 1
            continue
        report.total += 1
        if eq.holds:
            report.passed += 1
        else:
            report.failed += 1
            if len(report.first_failures) < max_failures:
                report.first_failures.append(eq)
    return report


def spot_check(d: CategoryData, k: int, sample_size: int, seed: int = 0) -> PachnerReport:
    """Check a seeded sample of boundary colorings by fixed-boundary evaluation of both sides.

    Candidate colorings are those admitting an extension over the smaller
    side; each sampled coloring is then evaluated independently on both sides
    with :func:`evaluate`.
    """
    left, right, move = split_sides(d, k)
    report = PachnerReport(move)
    if sample_size <= 0 or not any(d.labels.get(j) for j in range(d.n + 1)):
        return report
    simplices = boundary_simplices(left, d.n)
    small = left if len(left.facets) <= len(right.facets) else right
    pool = sorted(boundary_sums(small, d))
    rng = random.Random(seed)
    chosen = rng.sample(pool, min(sample_size, len(pool)))
    for key in chosen:
        colors = dict(zip(simplices, key))
        lhs = evaluate(left, d, colors).value
        rhs = evaluate(right, d, colors).value
        if lhs.is_zero() and rhs.is_zero():
            report.vanishing += 1
            continue
        eq = PachnerEquation(move, tuple(colors.items()), lhs, rhs)
        report.total += 1
        if eq.holds:
            report.passed += 1
        else:
            report.failed += 1
            report.first_failures.append(eq)
    return report


def format_equation(eq: PachnerEquation) -> str:
    colors = " ".join(f"{'-'.join(map(str, s))}:{lab}" for s, lab in eq.boundary)
    return (f"move {eq.move[0]},{eq.move[1]} boundary {colors} "
            f"lhs {format_algnum(eq.lhs)} rhs {format_algnum(eq.rhs)}")
