"""Write the closed 4-sphere triangulations used by the invariance check.

s4.tri      boundary of the 5-simplex
s4_15.tri   after a (1,5) move
s4_24.tri   then a (2,4) move at the first available location
s4_33.tri   then a (3,3) move at the first available location

(2,4) and (3,3) moves cannot act on the boundary of the 5-simplex itself,
since every edge and triangle they would create is already present; hence
the chain.

Usage: python scripts/make_triangulations.py [OUTDIR]
"""
import sys
from pathlib import Path

from alterfold.simplicial import apply_move, boundary_of_simplex, find_locations, format_triangulation, pachner_split


def chain():
    t0 = boundary_of_simplex(5)
    t1 = apply_move(t0, {i: i for i in range(1, 6)}, pachner_split(4, 1))
    t2 = apply_move(t1, find_locations(t1, pachner_split(4, 2), limit=1)[0], pachner_split(4, 2))
    t3 = apply_move(t2, find_locations(t2, pachner_split(4, 3), limit=1)[0], pachner_split(4, 3))
    return {"s4": t0, "s4_15": t1, "s4_24": t2, "s4_33": t3}


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    out = Path(argv[0]) if argv else Path(__file__).resolve().parents[1] / "triangulations"
    out.mkdir(parents=True, exist_ok=True)
    for name, t in chain().items():
        (out / f"{name}.tri").write_text(format_triangulation(t))
        print(f"{out / name}.tri: {len(t.facets)} facets, f-vector {t.f_vector()}")


if __name__ == "__main__":
    main()
