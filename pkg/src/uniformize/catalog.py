"""Small library of test maps.

All constructions go through :func:`map_from_faces`, so dart numbering is the
order in which face sides are listed.
"""

from __future__ import annotations

import numpy as np

from .maps import SurfaceMap, map_from_faces

__all__ = [
    "tetrahedron",
    "cube",
    "cube_antipodal",
    "torus_grid",
    "torus_triangulation",
    "truncated_tetrahedron",
    "genus2_triangulation",
    "dart_lookup",
]

_TET_FACES = [(0, 2, 1), (0, 1, 3), (0, 3, 2), (1, 2, 3)]

# vertex index = x + 2y + 4z
_CUBE_FACES = [
    (0, 2, 3, 1),
    (4, 5, 7, 6),
    (0, 1, 5, 4),
    (2, 6, 7, 3),
    (0, 4, 6, 2),
    (1, 3, 7, 5),
]


def dart_lookup(m: SurfaceMap, faces) -> dict:
    """Map ``(tail, head)`` vertex-label pairs to darts for simple-graph maps.

    ``faces`` must be the same face list the map was built from.
    """
    out = {}
    d = 0
    for face in faces:
        for i in range(len(face)):
            out[(face[i], face[(i + 1) % len(face)])] = d
            d += 1
    return out


def tetrahedron() -> SurfaceMap:
    return map_from_faces(_TET_FACES)


def cube() -> SurfaceMap:
    return map_from_faces(_CUBE_FACES)


def cube_antipodal() -> tuple[SurfaceMap, np.ndarray]:
    """Cube map and the antipodal dart involution ``v -> 7 - v``.

    The involution is free and reverses orientation; the quotient is the
    hemicube, a map of the projective plane.
    """
    m = cube()
    look = dart_lookup(m, _CUBE_FACES)
    g = np.empty(m.dart_count, dtype=np.int64)
    for (u, w), d in look.items():
        g[d] = look[(7 - u, 7 - w)]
    return m, g


def torus_grid(m: int = 2, n: int = 2) -> SurfaceMap:
    """Square ``m x n`` grid on the torus (``m, n >= 2``)."""
    if m < 2 or n < 2:
        raise ValueError("torus grid needs m, n >= 2 to avoid loop edges")

    def vid(i, j):
        return (i % m) * n + (j % n)

    faces, keys = [], []
    for i in range(m):
        for j in range(n):
            faces.append((vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)))
            keys.append((
                ("h", i, j),
                ("v", (i + 1) % m, j),
                ("h", i, (j + 1) % n),
                ("v", i, j),
            ))
    return map_from_faces(faces, keys)


def _torus_triangles(m: int, n: int, tag=None):
    def vid(i, j):
        v = (i % m) * n + (j % n)
        return v if tag is None else (tag, v)

    faces = []
    for i in range(m):
        for j in range(n):
            a, b = vid(i, j), vid(i + 1, j)
            c, d = vid(i + 1, j + 1), vid(i, j + 1)
            faces.append((a, b, c))
            faces.append((a, c, d))
    return faces


def torus_triangulation(m: int = 3, n: int = 3) -> SurfaceMap:
    """Triangulated ``m x n`` grid on the torus (simplicial for m, n >= 3)."""
    return map_from_faces(_torus_triangles(m, n))


def truncated_tetrahedron() -> SurfaceMap:
    """Four triangles and four hexagons; V=12, E=18, F=8.

    Vertex ``(i, j)`` sits on the tetrahedron edge ``ij`` next to corner ``i``.
    """
    hexagons = []
    for a, b, c in _TET_FACES:
        hexagons.append(((a, b), (b, a), (b, c), (c, b), (c, a), (a, c)))
    # corner triangles: chain the reversed in-corner sides of the hexagons
    succ = {}
    for h in hexagons:
        for i in range(6):
            u, w = h[i], h[(i + 1) % 6]
            if u[0] == w[0]:
                succ[w] = u
    triangles = []
    for corner in range(4):
        start = next(v for v in succ if v[0] == corner)
        cyc = [start]
        while succ[cyc[-1]] != start:
            cyc.append(succ[cyc[-1]])
        triangles.append(tuple(cyc))
    labels = {}
    faces = []
    for face in triangles + hexagons:
        faces.append(tuple(labels.setdefault(v, len(labels)) for v in face))
    return map_from_faces(faces)


def genus2_triangulation() -> SurfaceMap:
    """Connected sum of two 3x3 triangulated tori; V=15, E=51, F=34, chi=-2.

    One triangle is removed from each torus and the second torus is reversed
    so the two holes glue with matching orientation.
    """
    first = _torus_triangles(3, 3, "A")
    second = [tuple(reversed(f)) for f in _torus_triangles(3, 3, "B")]
    hole_a = first.pop(0)
    hole_b = tuple(reversed(hole_a))
    hole_b = tuple(("B", v[1]) for v in hole_b)
    second.remove(hole_b)
    ident = {("B", v[1]): v for v in hole_a}
    faces = first + [tuple(ident.get(v, v) for v in f) for f in second]
    labels = {}
    relabeled = [tuple(labels.setdefault(v, len(labels)) for v in f) for f in faces]
    return map_from_faces(relabeled)
