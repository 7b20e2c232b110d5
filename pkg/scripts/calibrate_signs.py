"""Regenerate the signed Ising dataset from the unsigned table transcription.

The table lists |F|.  With all values positive, every Pachner equation whose
two sides both admit an extension holds, but boundary colorings that extend on
only one side of a (2,4) or (3,3) split leave a nonzero sum facing zero.
Those sums consist of terms ±2^(q/4) that can cancel only with suitable signs.

Unknowns: one sign bit per closed F key.  Constraints, all linear over GF(2):
  * two-sided equations: every term on both sides carries the same sign;
  * one-sided equations: the unique sign pattern that cancels the sum;
  * invariance under vertex permutations.
Among the solutions the script picks one with the fewest negative table rows
(ties: prefer rows whose id ends in "^-"), then writes one representative per
vertex-permutation orbit so that the shipped file needs no edge-flip rule.

Usage: python scripts/calibrate_signs.py [--out PATH] [--check]
Runtime: a few minutes on one core.
"""
from __future__ import annotations

import argparse
import itertools
import sys
import time
from collections import defaultdict
from pathlib import Path

from alterfold.catdata import (_edge_flips, _layout_index, _permute, _tetra_namer, face_layout,
                               load_ising3_table, parse_dataset, row_key)
from alterfold.exactnum import ZERO, format_algnum, pow2_quarter
from alterfold.simplicial import Triangulation, boundary_of_simplex
from alterfold.statesum import _Plan

DATA = Path(__file__).resolve().parents[1] / "src" / "alterfold" / "data"


class GF2System:
    """Incremental row echelon form over GF(2); rows are (bitmask, rhs)."""

    def __init__(self):
        self.pivots: dict[int, tuple[int, int]] = {}

    def add(self, mask: int, rhs: int) -> bool:
        while mask:
            h = mask.bit_length() - 1
            if h not in self.pivots:
                self.pivots[h] = (mask, rhs)
                return True
            m2, r2 = self.pivots[h]
            mask ^= m2
            rhs ^= r2
        return rhs == 0

    def affine_forms(self, nvars: int) -> tuple[list[int], list[int]]:
        """Each variable as a mask over the free variables, with the constant at bit len(free)."""
        free = [i for i in range(nvars) if i not in self.pivots]
        nf = len(free)
        form = [0] * nvars
        for j, i in enumerate(free):
            form[i] = 1 << j
        for h in sorted(self.pivots):
            mask, rhs = self.pivots[h]
            f = rhs << nf
            rest = mask & ~(1 << h)
            while rest:
                b = rest & -rest
                f ^= form[b.bit_length() - 1]
                rest ^= b
            form[h] = f
        return free, form


def side_terms(t: Triangulation, d, key_index):
    """Boundary coloring -> list of (quarter exponent, sorted facet key indices)."""
    plan = _Plan(t, d, None, free_boundary=True)
    assign = plan.initial_assignment()
    steps, bslots, names = plan.steps, plan.boundary_slots, plan.names
    fslots = [tuple(plan.slot[tuple(f[j] for j in fl)] for fl in face_layout(d.n + 1, d.n))
              for f, _ in t.facets]
    groups = defaultdict(list)

    def rec(p, q):
        if p == len(steps):
            keys = tuple(sorted(key_index[tuple(names[assign[x]] for x in fs)] for fs in fslots))
            groups[tuple(assign[x] for x in bslots)].append((q, keys))
            return
        i, faces, table, weighted, checks = steps[p]
        for c in table.get(tuple(assign[x] for x in faces), ()):
            assign[i] = c
            q2 = q + (plan.weight[c][1] if weighted else 0)
            ok = True
            for cs, ftab in checks:
                v = ftab.get(tuple(assign[x] for x in cs))
                if v is None:
                    ok = False
                    break
                q2 += v[1]
            if ok:
                rec(p + 1, q2)
        assign[i] = -1

    rec(0, 0)
    return groups


def split(k: int, chosen):
    whole = boundary_of_simplex(5)
    sign = dict(whole.facets)
    facets = [tuple(v for v in range(6) if v != i) for i in range(6)]
    left = Triangulation(4, tuple((f, sign[f]) for i, f in enumerate(facets) if i in chosen))
    right = Triangulation(4, tuple((f, -sign[f]) for i, f in enumerate(facets) if i not in chosen))
    return left, right


def cancel_pattern(terms):
    """The sign patterns (first term +) under which sum ±2^(q/4) vanishes exactly."""
    pats = []
    for rest in itertools.product((1, -1), repeat=len(terms) - 1):
        signs = (1,) + rest
        total = ZERO
        for s, (q, _) in zip(signs, terms):
            total = total + (pow2_quarter(q) if s > 0 else -pow2_quarter(q))
        if total.is_zero():
            pats.append(signs)
    return pats


def keymask(keys):
    m = 0
    for k in keys:
        m ^= 1 << k
    return m


def solve(d, log=print):
    keys = sorted(d.fsymbols)
    kid = {k: i for i, k in enumerate(keys)}
    system = GF2System()
    for k in (1, 2, 3):
        t0 = time.time()
        bad = 0
        for chosen in itertools.combinations(range(6), k):
            left, right = split(k, chosen)
            lt, rt = side_terms(left, d, kid), side_terms(right, d, kid)
            for b in set(lt) | set(rt):
                a, c = lt.get(b, []), rt.get(b, [])
                if a and c:
                    terms, pattern = a + c, None
                else:
                    terms = a or c
                    pats = cancel_pattern(terms)
                    if len(pats) != 1:
                        raise SystemExit(f"split {chosen}: {len(pats)} cancelling sign patterns")
                    pattern = pats[0]
                base = keymask(terms[0][1])
                for j, (_, ks) in enumerate(terms[1:], 1):
                    rhs = 0 if pattern is None or pattern[j] == 1 else 1
                    bad += not system.add(base ^ keymask(ks), rhs)
        log(f"splits with {k} facet(s): rank {len(system.pivots)}, inconsistent {bad}, {time.time() - t0:.0f}s")
        if bad:
            raise SystemExit("Pachner sign constraints are inconsistent")
    gens = [(1, 0, 2, 3, 4), (1, 2, 3, 4, 0)]
    for key in keys:
        for g in gens:
            if not system.add((1 << kid[key]) ^ (1 << kid[_permute(key, 4, 3, g)]), 0):
                raise SystemExit("vertex-permutation invariance is inconsistent with the equations")
    free, form = system.affine_forms(len(keys))
    log(f"with permutation invariance: rank {len(system.pivots)}, {len(free)} free bits")
    nf = len(free)
    rows = [r.row_id for r in d.rows]
    rforms = [form[kid[row_key(d, r)]] for r in rows]

    def negatives(a):
        return [r for r, f in zip(rows, rforms) if (bin(f & a).count("1") + (f >> nf)) & 1]

    best = min(range(1 << nf), key=lambda a: (len(negatives(a)),
                                              sum(not r.endswith("^-") for r in negatives(a)), a))
    log(f"negative table rows ({len(negatives(best))}): {' '.join(negatives(best))}")
    return {k: (bin(form[kid[k]] & best).count("1") + (form[kid[k]] >> nf)) & 1 for k in keys}


def write_dataset(d, negative, src_text: str) -> str:
    idx = _layout_index(4, 3)
    namer = _tetra_namer(3, d.rows)
    flip = next(r for r in d.symmetry if r.kind == "edge-flip")

    def orbit(k):
        return {_permute(k, 4, 3, p) for p in itertools.permutations(range(5))}

    def signed(k):
        return -d.fsymbols[k] if negative[k] else d.fsymbols[k]

    out, covered = [], set()
    for r in d.rows:
        k = row_key(d, r.row_id)
        out.append((r.row_id, k, signed(k)))
        covered |= orbit(k)
    frontier = [(rid, k) for rid, k, _ in out]
    while frontier:
        nxt = []
        for rid, k in frontier:
            edges = [e for e in itertools.combinations(range(5), 2) if k[idx[e]] == flip.edge_label]
            for e, k2 in zip(edges, _edge_flips(k, 4, 3, flip, namer)):
                if k2 in covered:
                    continue
                covered |= orbit(k2)
                nid = f"{rid}~{e[0] + 1}{e[1] + 1}"
                out.append((nid, k2, signed(k2)))
                nxt.append((nid, k2))
        frontier = nxt
    head = [
        "# Ising-type spherical 3-category with calibrated F signs (generated by scripts/calibrate_signs.py)",
        "# frow: id, then labels of the 5 vertices, 10 edges (12 13 14 15 23 24 25 34 35 45),",
        "# 10 triangles (123 ... 345) and 5 tetrahedra (1234 ... 2345), then the F value.",
        "# Rows named <row>~<ij> represent orbits reached from <row> by flipping the g edge ij.",
    ]
    body = [line for line in src_text.splitlines()
            if line and not line.startswith(("#", "frow", "symmetry edge-flip"))]
    rows = [f"frow {rid} {' '.join(k)} {format_algnum(v).replace(' ', '')}" for rid, k, v in out]
    return "\n".join(head + body + rows) + "\n"


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=DATA / "ising3.txt")
    ap.add_argument("--check", action="store_true", help="compare with the existing file instead of writing")
    args = ap.parse_args(argv)
    d = load_ising3_table()
    negative = solve(d)
    text = write_dataset(d, negative, (DATA / "ising3_table.txt").read_text())
    closed = parse_dataset(text)
    for k, v in d.fsymbols.items():
        want = -v if negative[k] else v
        if closed.fsymbols.get(k) != want:
            raise SystemExit(f"closure of the written rows disagrees at {k}")
    if len(closed.fsymbols) != len(d.fsymbols):
        raise SystemExit("closure of the written rows has extra keys")
    if args.check:
        same = args.out.exists() and args.out.read_text() == text
        print("dataset up to date" if same else "dataset differs from calibration")
        return 0 if same else 1
    args.out.write_text(text)
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
