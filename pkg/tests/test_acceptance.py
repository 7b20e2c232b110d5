"""Acceptance criteria, one pass/fail line each (printed in the terminal summary).

Run alone with ``pytest tests/test_acceptance.py -v``; the full Pachner
counts and the chained-move evaluations take roughly ten minutes on one core.
"""
import itertools
import random
import sys
import time
from collections import defaultdict
from pathlib import Path

import pytest

from alterfold import mednykh, pachner, surfacecalc
from alterfold.catdata import fsymbol, globaldim, load_ising3_table, row_key, trace
from alterfold.exactnum import SQRT2, ZERO, format_algnum, parse, pow2_quarter, sign
from alterfold.statesum import evaluate, evaluate_bruteforce, evaluate_sharded, iter_colorings

from conftest import ACCEPTANCE_LINES
from helpers import boundary_colorings, cone_with_row, small_surfaces, torus7
from test_exactnum import check_field_axioms, random_algnum, to_decimal

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "scripts"))
from make_triangulations import chain  # noqa: E402


def record(criterion: str, ok: bool, detail: str):
    ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {criterion}: {detail}")
    assert ok, detail


# ---------------------------------------------------------------- 1. Pachner counts

@pytest.mark.slow
@pytest.mark.parametrize("k,expected", [(1, 2044), (2, 30464), (3, 50709)])
def test_c1_pachner_counts(ising, k, expected):
    t0 = time.time()
    rep = pachner.verify(ising, k)
    record(f"1 Pachner ({k},{6 - k})", rep.ok and rep.total == expected,
           f"{rep.passed}/{rep.total} passed, expected {expected} ({time.time() - t0:.0f}s)")


def test_c1_spot_check(ising):
    t0 = time.time()
    reps = [pachner.spot_check(ising, k, 200, seed=1) for k in (1, 2, 3)]
    record("1 spot check 200/move", all(r.ok and r.total + r.vanishing == 200 for r in reps),
           ", ".join(r.summary() for r in reps) + f" ({time.time() - t0:.0f}s)")


# ---------------------------------------------------------------- 2. worked identities

def _grouped_interior(d, row):
    t, colors = cone_with_row(d, row)
    apex = max(t.vertices)
    vertex_factor = 1 / globaldim(d, "pt")
    groups = defaultdict(lambda: ZERO)
    for labels, w in iter_colorings(t, d, colors):
        groups[tuple(labels[(i, apex)] for i in range(5))] += w / vertex_factor
    return dict(groups)


def test_c2_worked_identity_unit(ising):
    groups = _grouped_interior(ising, "0^0")
    by_label = {key[0]: v for key, v in groups.items()}
    total = sum(groups.values(), ZERO)
    target = ising.fsymbols[row_key(ising, "0^0")] * globaldim(ising, "pt") / trace(ising, "pt")
    ok = by_label == {"1": parse("1/2"), "tau": parse("1"), "g": parse("1/2")} and total == target == 2
    record("2 identity 0^0", ok, " + ".join(f"{format_algnum(by_label[x])}" for x in ("1", "tau", "g"))
           + f" = {format_algnum(total)}, F*mu/Tr = {format_algnum(target)}")


def test_c2_worked_identity_tau(ising):
    groups = _grouped_interior(ising, "1_tau^0")
    total = sum(groups.values(), ZERO)
    target = ising.fsymbols[row_key(ising, "1_tau^0")] * 2
    ok = len(groups) == 4 and all(v == SQRT2 / 4 for v in groups.values()) and total == target == SQRT2
    record("2 identity 1_tau^0", ok, f"{len(groups)} x r2/4 = {format_algnum(total)}, "
                                     f"2F = {format_algnum(target)}")


# ---------------------------------------------------------------- 3. golden F values

GOLDEN = {"0^0": "1", "1_tau^0": "r2/2", "1_tau^1": "r2/2", "2_tau^+": "2^(-3/4)", "1_g0^0": "1",
          "1_g0tau^+": "1/r2", "2_g0tau^+": "2^(-1/4)", "4_g0tau": "1"}


def test_c3_golden_examples(ising):
    bad = [r for r, v in GOLDEN.items() if fsymbol(ising, row_key(ising, r)) != parse(v)]
    record("3 golden examples", not bad, f"{len(GOLDEN) - len(bad)}/{len(GOLDEN)} listed rows exact"
           + (f"; mismatched {bad}" if bad else ""))


def test_c3_every_table_row(ising):
    table = load_ising3_table()
    exact, magnitude, flipped = 0, 0, []
    for r in table.rows:
        got = fsymbol(ising, row_key(table, r.row_id))
        want = table.fsymbols[row_key(table, r.row_id)]
        exact += got == want
        magnitude += got == want or got == -want
        if got == -want:
            flipped.append(r.row_id)
    n = len(table.rows)
    record("3 every table row", exact == n,
           f"{exact}/{n} rows equal, {magnitude}/{n} equal up to sign; negated in the calibrated data: "
           + " ".join(flipped))


# ---------------------------------------------------------------- 4. Gram calculus

def test_c4_quotient_dims():
    t0 = time.time()
    dims = [surfacecalc.quotient_dim(m) for m in range(1, 6)]
    record("4 quotient dims m=1..5", dims == [2 ** (m - 1) for m in range(1, 6)],
           f"{dims} ({time.time() - t0:.1f}s)")


def test_c4_kernel_one_dimensional():
    vecs = surfacecalc.kernel_relations(3)
    record("4 kernel m=3 is 1-dim", len(vecs) == 1, f"dimension {len(vecs)}")


def test_c4_kernel_vector():
    (vec,) = surfacecalc.kernel_relations(3)
    scaled = [x / vec[1] for x in vec]
    expected = [-SQRT2, parse("1"), parse("1"), parse("1"), parse("-1")]
    record("4 kernel proportional to (-r2,1,1,1,-1)", scaled == expected,
           "computed (" + ", ".join(map(format_algnum, scaled)) + ") in basis "
           + " ".join(surfacecalc.type_label(t) for t in surfacecalc.gram_problem(3).basis))


def test_c4_reflection_positivity_and_disk():
    ok = all(surfacecalc.rp_check(m) for m in range(1, 5))
    disk = surfacecalc.ConnectedType.planar([(1,)])
    z = surfacecalc.pair(disk, disk)
    record("4 rp m<=4, pair m=1", ok and z == SQRT2, f"psd {ok}, pair = {format_algnum(z)}")


# ---------------------------------------------------------------- 5. invariance on the 4-sphere

@pytest.fixture(scope="module")
def sphere_chain():
    return chain()


@pytest.mark.slow
@pytest.mark.parametrize("name", ["s4", "s4_15", "s4_24", "s4_33"])
def test_c5_invariance(ising, sphere_chain, name):
    golden = trace(ising, "pt") ** 2 / globaldim(ising, "pt")
    t0 = time.time()
    value = evaluate(sphere_chain[name], ising).value
    record(f"5 Z({name})", value == golden == parse("1/2"),
           f"{format_algnum(value)} vs Tr(pt)^2/mu(pt) = {format_algnum(golden)} ({time.time() - t0:.0f}s)")


# ---------------------------------------------------------------- 6. Mednykh

def test_c6_mednykh():
    results = {(g, genus): mednykh.mednykh_check(mednykh.load_group(g), None, genus)
               for g in ("Z2", "Z3", "Z4", "Z2xZ2", "S3") for genus in range(4)}
    record("6 Mednykh", all(results.values()), f"{sum(results.values())}/{len(results)} (group, genus) cases")


# ---------------------------------------------------------------- 7. property suites

def test_c7_field_axioms_and_sign():
    rng = random.Random(20240607)
    for _ in range(10_000):
        a, b, c = random_algnum(rng), random_algnum(rng), random_algnum(rng)
        check_field_axioms(a, b, c)
        assert sign(a * b) == sign(a) * sign(b)
        assert sign(a) == (to_decimal(a) > 0) - (to_decimal(a) < 0)
    record("7 field axioms + sign", True, "10000 random triples")


def test_c7_bruteforce_oracle(toy, ising):
    checked = 0
    for t in small_surfaces().values():
        for colors in boundary_colorings(t, toy):
            assert evaluate(t, toy, colors).value == evaluate_bruteforce(t, toy, colors)
            checked += 1
    record("7 brute-force oracle", True, f"{checked} (surface, boundary coloring) pairs with <= 6 edges")


def _component_count(a, b):
    """Connected components of the glued surface, by repeated merging of circle sets."""
    pieces = [set(blk) for blk in a.blocks + b.blocks]
    merged = True
    while merged:
        merged = False
        for i, j in itertools.combinations(range(len(pieces)), 2):
            if pieces[i] & pieces[j]:
                pieces[i] |= pieces.pop(j)
                merged = True
                break
    return len(pieces)


def test_c7_pair_symmetry_additivity():
    n = 0
    for m in range(1, 5):
        for a, b in itertools.product(surfacecalc.gram_problem(m).basis, repeat=2):
            assert surfacecalc.pair(a, b) == surfacecalc.pair(b, a)
            euler = sum(a.euler_numbers()) + sum(b.euler_numbers())
            assert surfacecalc.pair(a, b) == pow2_quarter(4 * _component_count(a, b) - euler)
            n += 1
    record("7 pair symmetry/additivity", True, f"{n} type pairs, m <= 4")


def test_c7_sharding(toy, ising):
    t = torus7()
    serial = evaluate(t, toy).value
    assert all(evaluate_sharded(t, toy, shards=s).value == serial for s in (1, 2, 5))
    t, colors = cone_with_row(ising, "2_g0tau^+")
    serial = evaluate(t, ising, colors).value
    assert evaluate_sharded(t, ising, colors, shards=4, jobs=2).value == serial
    assert list(pachner.generate(ising, 1)) == list(pachner.generate(ising, 1, jobs=2))
    record("7 sharded == serial", True, "statesum shards 1/2/4/5 and Pachner jobs 2")
