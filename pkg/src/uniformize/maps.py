"""Combinatorial maps of compact surfaces.

A map is stored as two permutations of the darts ``0..N-1``:

* ``opposite`` reverses a dart (``s -> -s``), a fixed-point-free involution;
* ``next_at_vertex`` (sigma) cycles the darts leaving a vertex,
  counter-clockwise.

A dart belongs to its tail vertex.  Faces are the orbits of
``sigma o opposite``; with a counter-clockwise sigma each face lies on the
right of its darts.  Vertices, edges and faces are numbered by the smallest
dart they contain, so numbering is a pure function of the permutations.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .errors import Disconnected, FixedDart, LoopEdge, MapError, NotInvolution

__all__ = [
    "SurfaceMap",
    "WeightedMap",
    "build_map",
    "euler_characteristic",
    "map_from_faces",
    "quotient_map",
    "relabel",
]


def _orbits(perm: np.ndarray) -> list[tuple[int, ...]]:
    seen = np.zeros(len(perm), dtype=bool)
    out = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        cyc = []
        d = start
        while not seen[d]:
            seen[d] = True
            cyc.append(d)
            d = int(perm[d])
        out.append(tuple(cyc))
    return out


def _labels(orbits, n: int) -> np.ndarray:
    lab = np.empty(n, dtype=np.int64)
    for i, orb in enumerate(orbits):
        lab[list(orb)] = i
    return lab


@dataclass(frozen=True, eq=False)
class SurfaceMap:
    """Immutable combinatorial map; build with :func:`build_map`."""

    opposite: np.ndarray
    next_at_vertex: np.ndarray
    vertices: tuple[tuple[int, ...], ...]
    edges: tuple[tuple[int, int], ...]
    faces: tuple[tuple[int, ...], ...]
    dart_vertex: np.ndarray
    dart_edge: np.ndarray
    dart_face: np.ndarray
    orientable: bool = True

    @property
    def dart_count(self) -> int:
        return len(self.opposite)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    @property
    def chi(self) -> int:
        return self.n_vertices - self.n_edges + self.n_faces

    def tail(self, d: int) -> int:
        return int(self.dart_vertex[d])

    def head(self, d: int) -> int:
        return int(self.dart_vertex[self.opposite[d]])

    def edge_vertices(self, e: int) -> tuple[int, int]:
        s, _ = self.edges[e]
        return self.tail(s), self.head(s)

    def face_vertices(self, f: int) -> tuple[int, ...]:
        return tuple(self.tail(d) for d in self.faces[f])

    def left_face(self, d: int) -> int:
        return int(self.dart_face[self.opposite[d]])

    def right_face(self, d: int) -> int:
        return int(self.dart_face[d])

    def edge_faces(self, e: int) -> tuple[int, int]:
        s, t = self.edges[e]
        return int(self.dart_face[s]), int(self.dart_face[t])

    def to_dict(self) -> dict:
        return {
            "darts": self.dart_count,
            "opposite": [int(x) for x in self.opposite],
            "next_at_vertex": [int(x) for x in self.next_at_vertex],
        }


def _check_perm(arr, n: int, name: str) -> np.ndarray:
    a = np.asarray(arr)
    if a.shape != (n,):
        raise MapError(f"{name} must have length {n}, got shape {a.shape}")
    if not np.issubdtype(a.dtype, np.integer):
        if not np.all(np.equal(np.mod(a, 1), 0)):
            raise MapError(f"{name} must contain integers")
    a = a.astype(np.int64)
    if n and (a.min() < 0 or a.max() >= n):
        raise MapError(f"{name} contains an index outside 0..{n - 1}")
    if len(np.unique(a)) != n:
        raise MapError(f"{name} is not a permutation")
    return a


def _assemble(opp, sigma, faces=None, orientable=True) -> SurfaceMap:
    n = len(opp)
    fixed = np.flatnonzero(opp == np.arange(n))
    if len(fixed):
        raise FixedDart(f"opposite fixes dart {int(fixed[0])}")
    bad = np.flatnonzero(opp[opp] != np.arange(n))
    if len(bad):
        raise NotInvolution(f"opposite is not an involution at dart {int(bad[0])}")

    # connectivity under <opposite, sigma>
    seen = np.zeros(n, dtype=bool)
    if n:
        queue = deque([0])
        seen[0] = True
        while queue:
            d = queue.popleft()
            for nb in (int(opp[d]), int(sigma[d])):
                if not seen[nb]:
                    seen[nb] = True
                    queue.append(nb)
    if not seen.all():
        raise Disconnected(f"dart {int(np.flatnonzero(~seen)[0])} unreachable from dart 0")

    vertices = tuple(_orbits(sigma))
    dart_vertex = _labels(vertices, n)
    loops = np.flatnonzero(dart_vertex == dart_vertex[opp])
    if len(loops):
        raise LoopEdge(f"dart {int(loops[0])} is a loop edge")

    edges = tuple((d, int(opp[d])) for d in range(n) if d < opp[d])
    dart_edge = np.empty(n, dtype=np.int64)
    for i, (s, t) in enumerate(edges):
        dart_edge[s] = dart_edge[t] = i

    if faces is None:
        faces = _orbits(sigma[opp])
    else:
        faces = [tuple(int(d) for d in f) for f in faces]
        flat = sorted(d for f in faces for d in f)
        if flat != list(range(n)):
            raise MapError("explicit faces must partition the darts")
        faces.sort(key=min)
    faces = tuple(faces)
    dart_face = _labels(faces, n)

    return SurfaceMap(
        opposite=opp,
        next_at_vertex=sigma,
        vertices=vertices,
        edges=edges,
        faces=faces,
        dart_vertex=dart_vertex,
        dart_edge=dart_edge,
        dart_face=dart_face,
        orientable=orientable,
    )


def build_map(dart_count: int, opposite, next_at_vertex) -> SurfaceMap:
    """Validate the two permutations and compute all orbit structures.

    Raises
    ------
    NotInvolution, FixedDart, Disconnected, LoopEdge, MapError
    """
    n = int(dart_count)
    if n <= 0 or n % 2:
        raise MapError(f"dart count must be positive and even, got {dart_count}")
    opp = _check_perm(opposite, n, "opposite")
    sigma = _check_perm(next_at_vertex, n, "next_at_vertex")
    return _assemble(opp, sigma)


def euler_characteristic(m: SurfaceMap) -> int:
    return m.chi


def map_from_faces(faces, edge_keys=None) -> SurfaceMap:
    """Build an oriented map from its face boundaries.

    Parameters
    ----------
    faces : sequence of vertex cycles
        Each directed side ``(v_i, v_{i+1})`` must occur in exactly one face,
        and its reverse in another.
    edge_keys : sequence of key sequences, optional
        ``edge_keys[f][i]`` names the edge on side ``i`` of face ``f``.  Needed
        when two vertices are joined by more than one edge; by default the key
        is the unordered vertex pair.

    Darts are numbered in order of first appearance.
    """
    sides = []
    for fi, face in enumerate(faces):
        k = len(face)
        for i in range(k):
            u, v = face[i], face[(i + 1) % k]
            key = edge_keys[fi][i] if edge_keys is not None else frozenset((u, v))
            sides.append((u, v, key))
    index = {}
    for d, s in enumerate(sides):
        if s in index:
            raise MapError(f"side {s[:2]} (edge {s[2]!r}) occurs twice")
        index[s] = d
    n = len(sides)
    opp = np.empty(n, dtype=np.int64)
    sigma = np.empty(n, dtype=np.int64)
    pos = 0
    for face in faces:
        k = len(face)
        for i in range(k):
            d = pos + i
            u, v, key = sides[d]
            rev = (v, u, key)
            if rev not in index:
                raise MapError(f"side {(u, v)} has no reverse side")
            opp[d] = index[rev]
            # sigma(opp(d_i)) = d_{i+1}
            sigma[index[rev]] = pos + (i + 1) % k
        pos += k
    return build_map(n, opp, sigma)


def relabel(m: SurfaceMap, perm) -> SurfaceMap:
    """Same map with dart ``d`` renamed ``perm[d]``."""
    perm = np.asarray(perm, dtype=np.int64)
    inv = np.argsort(perm)
    opp = perm[m.opposite[inv]]
    sigma = perm[m.next_at_vertex[inv]]
    return build_map(m.dart_count, opp, sigma)


@dataclass(frozen=True, eq=False)
class WeightedMap:
    """A map with intersection angles ``theta[e]`` in (0, pi) per edge."""

    map: SurfaceMap
    theta: np.ndarray = field(repr=False)

    def __post_init__(self):
        th = np.asarray(self.theta, dtype=float)
        if th.shape != (self.map.n_edges,):
            raise MapError(f"need {self.map.n_edges} weights, got shape {th.shape}")
        if not np.all((th > 0.0) & (th < np.pi)):
            bad = int(np.flatnonzero(~((th > 0.0) & (th < np.pi)))[0])
            raise MapError(f"weight of edge {bad} = {th[bad]!r} outside (0, pi)")
        th.setflags(write=False)
        object.__setattr__(self, "theta", th)

    @property
    def dart_theta(self) -> np.ndarray:
        return self.theta[self.map.dart_edge]

    @classmethod
    def uniform(cls, m: SurfaceMap, value: float) -> "WeightedMap":
        return cls(m, np.full(m.n_edges, float(value)))


def quotient_map(cover: SurfaceMap, g) -> tuple[SurfaceMap, np.ndarray]:
    """Quotient of a map by a free, orientation-reversing dart involution.

    Returns the quotient map and ``cls``, the quotient dart of every cover
    dart.  Quotient darts are numbered by their smallest lift.  The quotient
    is non-orientable, so ``next_at_vertex`` is the rotation seen from one
    chosen lift of each vertex and each face is listed through one lift;
    ``dart_face`` then names the right face of the smallest lift.

    Raises
    ------
    InvolutionNotFree
        ``g`` fixes a dart, vertex, edge or face, or is not an involution.
    NotAutomorphism
        ``g`` does not commute with ``opposite`` or does not map the
        rotation to itself or its inverse.
    """
    from .errors import InvolutionNotFree, NotAutomorphism

    n = cover.dart_count
    g = _check_perm(g, n, "deck involution")
    ident = np.arange(n)
    if np.any(g[g] != ident):
        raise InvolutionNotFree("deck map is not an involution")
    if np.any(g == ident):
        raise InvolutionNotFree(f"deck map fixes dart {int(np.flatnonzero(g == ident)[0])}")
    opp, sigma = cover.opposite, cover.next_at_vertex
    if np.any(g[opp] != opp[g]):
        raise NotAutomorphism("deck map does not commute with opposite")
    sigma_inv = np.argsort(sigma)
    if np.any(g[sigma] != sigma[g]) and np.any(g[sigma] != sigma_inv[g]):
        raise NotAutomorphism("deck map does not preserve the rotation")
    dv, df = cover.dart_vertex, cover.dart_face
    if np.any(dv[g] == dv):
        raise InvolutionNotFree("deck map fixes a vertex")
    if np.any(g == opp):
        raise InvolutionNotFree("deck map fixes an edge")
    face_img = {}
    for f, darts in enumerate(cover.faces):
        # orientation reversal sends the right face of d to the left face of g(d)
        img = {int(df[opp[g[d]]]) for d in darts} if np.any(g[sigma] != sigma[g]) \
            else {int(df[g[d]]) for d in darts}
        if len(img) != 1:
            raise NotAutomorphism(f"face {f} is not mapped onto a face")
        face_img[f] = img.pop()
        if face_img[f] == f:
            raise InvolutionNotFree(f"deck map fixes face {f}")

    reps = [d for d in range(n) if d < g[d]]
    cls = np.empty(n, dtype=np.int64)
    for i, d in enumerate(reps):
        cls[d] = cls[g[d]] = i
    q = len(reps)
    qopp = np.array([cls[opp[d]] for d in reps], dtype=np.int64)

    qsigma = np.empty(q, dtype=np.int64)
    done = np.zeros(cover.n_vertices, dtype=bool)
    for darts in cover.vertices:
        v = int(dv[darts[0]])
        w = int(dv[g[darts[0]]])
        if done[v] or done[w]:
            continue
        done[v] = done[w] = True
        for d in darts:
            qsigma[cls[d]] = cls[sigma[d]]

    faces = []
    for f, darts in enumerate(cover.faces):
        if f < face_img[f]:
            faces.append(tuple(int(cls[d]) for d in darts))
    faces.sort(key=min)
    qm = _assemble(qopp, qsigma, faces=None, orientable=False)
    face_of = np.empty(q, dtype=np.int64)
    for d in reps:
        f = int(df[d])
        rep_f = min(f, face_img[f])
        face_of[cls[d]] = [min(x) for x in faces].index(
            min(int(cls[x]) for x in cover.faces[rep_f]))
    return SurfaceMap(
        opposite=qm.opposite,
        next_at_vertex=qm.next_at_vertex,
        vertices=qm.vertices,
        edges=qm.edges,
        faces=tuple(faces),
        dart_vertex=qm.dart_vertex,
        dart_edge=qm.dart_edge,
        dart_face=face_of,
        orientable=False,
    ), cls
