"""Write the bundled group tables (Cayley tables from permutation or product models)."""
import itertools
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src" / "alterfold" / "data" / "groups"


def cyclic(n):
    return [tuple([i]) for i in range(n)], lambda a, b: ((a[0] + b[0]) % n,)


def product(n1, n2):
    els = [(i, j) for i in range(n1) for j in range(n2)]
    return els, lambda a, b: ((a[0] + b[0]) % n1, (a[1] + b[1]) % n2)


def permutations(gens):
    def compose(p, q):
        return tuple(p[i] for i in q)
    n = len(gens[0])
    ident = tuple(range(n))
    els, frontier = {ident}, [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = compose(g, x)
                if y not in els:
                    els.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(els), compose


def quaternion():
    # unit quaternions +-1, +-i, +-j, +-k as (sign, axis) with axis 0 = scalar
    mult = {(0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
            (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
            (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
            (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0)}
    els = [(s, a) for a in range(4) for s in (1, -1)]

    def op(x, y):
        s, a = mult[(x[1], y[1])]
        return (x[0] * y[0] * s, a)
    return els, op


GROUPS = {
    "Z2": (cyclic(2), [1, 1]),
    "Z3": (cyclic(3), [1, 1, 1]),
    "Z4": (cyclic(4), [1, 1, 1, 1]),
    "Z2xZ2": (product(2, 2), [1, 1, 1, 1]),
    "S3": (permutations([(1, 0, 2), (1, 2, 0)]), [1, 1, 2]),
    "D4": (permutations([(1, 2, 3, 0), (0, 3, 2, 1)]), [1, 1, 1, 1, 2]),
    "Q8": (quaternion(), [1, 1, 1, 1, 2]),
}


def write(name, els, op, irreps):
    index = {e: i for i, e in enumerate(els)}
    ident = next(e for e in els if all(op(e, x) == x for x in els))
    lines = [f"# {name}", f"order {len(els)}"]
    lines += [" ".join(str(index[op(a, b)]) for b in els) for a in els]
    lines += [f"identity {index[ident]}", "irreps " + " ".join(map(str, irreps))]
    (OUT / f"{name}.txt").write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    OUT.mkdir(parents=True, exist_ok=True)
    for name, ((els, op), irreps) in GROUPS.items():
        write(name, els, op, irreps)
        print(name, len(els))
