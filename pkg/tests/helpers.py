"""Shared constructions for tests."""
import itertools
from collections import deque

from alterfold.catdata import face_layout, row_key
from alterfold.simplicial import Triangulation, boundary_of_simplex, cone, single_simplex


def orient(dim, simplices):
    """Coherently orient a connected pseudomanifold given as unsigned facets."""
    simplices = [tuple(sorted(f)) for f in simplices]
    sign = {simplices[0]: 1}
    by_face = {}
    for f in simplices:
        for i in range(len(f)):
            by_face.setdefault(f[:i] + f[i + 1:], []).append((f, i))
    queue = deque([simplices[0]])
    while queue:
        f = queue.popleft()
        for i in range(len(f)):
            for g, j in by_face[f[:i] + f[i + 1:]]:
                if g != f and g not in sign:
                    # induced orientations (-1)^i sign(f) and (-1)^j sign(g) must be opposite
                    sign[g] = -sign[f] * (-1) ** (i + j)
                    queue.append(g)
    return Triangulation(dim, tuple((f, sign[f]) for f in simplices))


def torus7():
    tris = [(i, (i + 1) % 7, (i + 3) % 7) for i in range(7)] + [(i, (i + 2) % 7, (i + 3) % 7) for i in range(7)]
    return orient(2, tris)


def small_surfaces():
    """Every 2-dimensional test complex with at most six edges."""
    tri = single_simplex(2)
    two = orient(2, [(0, 1, 2), (1, 2, 3)])
    fan = orient(2, [(0, 1, 2), (0, 2, 3), (0, 3, 1)])
    fan_open = orient(2, [(0, 1, 2), (0, 2, 3)])
    return {"triangle": tri, "two triangles": two, "closed fan": fan, "open fan": fan_open,
            "tetrahedron boundary": boundary_of_simplex(3)}


def boundary_colorings(t, d):
    simplices = sorted(t.boundary_complex, key=lambda s: (len(s), s))
    choices = [d.labels[len(s) - 1] for s in simplices]
    for combo in itertools.product(*choices):
        yield dict(zip(simplices, combo))


def row_boundary(d, row_id, verts=(0, 1, 2, 3, 4)):
    """Colors of all proper faces of the 4-simplex on ``verts`` taken from a table row."""
    key = row_key(d, row_id)
    return {tuple(verts[j] for j in f): lab for f, lab in zip(face_layout(4, 3), key)}


def simplex_with_row(d, row_id):
    return single_simplex(4), row_boundary(d, row_id)


def cone_with_row(d, row_id):
    return cone(boundary_of_simplex(4)), row_boundary(d, row_id)
