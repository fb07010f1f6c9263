"""Triangles, disk layouts, configuration checks and volumes.

Every edge ``e = |s|`` carries a triangle with corners at the two disk
centers and at a face point; its angles are ``psi(s)`` at the tail of
``s``, ``psi(-s)`` at the head and ``pi - theta(e)`` at the face point.  The
leg opposite ``psi(s)`` runs from the head center to the face point, so it
is the radius of the head disk.  Gluing the triangles around each vertex
rebuilds the disk pattern.

Charts
------
``poincare``  unit disk model, curvature -1, circles stored as hyperbolic
              center and radius.
``plane``     Euclidean plane, curvature 0.
``stereo``    Euclidean plane seen from a face point sent to infinity; the
              disks of that face's vertices become half-planes.

Placements are 2x2 complex matrices acting as Moebius maps: SU(1,1) in the
Poincare chart and ``z -> a z + b`` otherwise.  The frame ``F[s]`` of a dart
sends the origin to the tail center and the positive real axis to the
direction of ``s``.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .angles import (
    AngleSystem,
    StereoSubspace,
    functional_value,
    hat_data,
    stereographic_subspace,
)
from .errors import DegenerateTriangle, LayoutError, NotCritical
from .lobachevsky import i_minus, i_plus, omega, ortho_v
from .maps import WeightedMap

__all__ = [
    "TriangleShape",
    "LegData",
    "DiskConfiguration",
    "ConfigReport",
    "triangle_legs",
    "leg_data",
    "layout",
    "check_configuration",
    "hyperbolic_distance",
    "chart_distance",
    "quad_areas",
    "vertex_angle_sums",
    "volume_functional",
    "volume_orthoschemes",
    "edge_volume_rhs",
    "euclidean_circle",
]

_BOX_TOL = 1e-12


# -- triangles ----------------------------------------------------------------

@dataclass(frozen=True)
class TriangleShape:
    alpha: float
    beta: float
    gamma: float
    curvature: int
    a: float
    b: float
    c: float


def _hats(alpha, beta, gamma):
    eta = 0.5 * (alpha + beta + gamma - math.pi)
    return eta, alpha - eta, beta - eta, gamma - eta


def triangle_legs(alpha: float, beta: float, gamma: float, curvature: int,
                  tol: float = 1e-10) -> TriangleShape:
    """Side lengths from the angles by the half-side formulas.

    ``a`` is opposite ``alpha`` and so on.  Curvature 0 fixes the scale by
    ``a = sin(alpha)``.

    Raises
    ------
    DegenerateTriangle
        A hat angle leaves ``(0, pi)`` or the excess has the wrong sign for
        the curvature.
    """
    eta, ah, bh, gh = _hats(alpha, beta, gamma)
    if min(ah, bh, gh) <= 0 or max(ah, bh, gh) >= math.pi:
        raise DegenerateTriangle(f"hat angles {(ah, bh, gh)} not in (0, pi)")
    if curvature < 0 and not eta < 0:
        raise DegenerateTriangle(f"hyperbolic triangle needs negative excess, got {2 * eta}")
    if curvature > 0 and not eta > 0:
        raise DegenerateTriangle(f"spherical triangle needs positive excess, got {2 * eta}")
    if curvature == 0:
        if abs(eta) > tol:
            raise DegenerateTriangle(f"Euclidean triangle has excess {2 * eta}")
        return TriangleShape(alpha, beta, gamma, 0,
                             math.sin(alpha), math.sin(beta), math.sin(gamma))
    sa, sb, sg = math.sin(ah), math.sin(bh), math.sin(gh)
    se = abs(math.sin(eta))

    def side(x, y, z):
        t = math.sqrt(se * x / (y * z))
        return 2.0 * (math.atanh(t) if curvature < 0 else math.atan(t))

    return TriangleShape(alpha, beta, gamma, int(curvature),
                         side(sa, sb, sg), side(sb, sa, sg), side(sg, sa, sb))


# -- legs ---------------------------------------------------------------------

@dataclass(frozen=True)
class LegData:
    """Radii and center distances implied by an angle system.

    ``rho[v]`` is the mean of the legs ending at ``v``; ``spread[v]`` is
    their relative spread ``(max - min) / mean``, which vanishes exactly
    when the triangles glue around ``v``.  Entries of vertices or edges that
    carry no free triangle are NaN.
    """

    curvature: int
    rho: np.ndarray
    edge_length: np.ndarray
    spread: np.ndarray
    dart_leg: np.ndarray

    @property
    def max_spread(self) -> float:
        s = self.spread[np.isfinite(self.spread)]
        return float(s.max(initial=0.0))


def _curvature(wm: WeightedMap, stereo) -> int:
    if stereo is not None:
        return 0
    chi = wm.map.chi
    return (chi > 0) - (chi < 0)


def leg_data(wm: WeightedMap, psi, stereo: StereoSubspace | None = None) -> LegData:
    """Per-vertex radii and per-edge center distances.

    Curved charts use the half-side formulas directly.  Euclidean triangles
    are only known up to scale, so radii are propagated with the law of
    sines along a breadth-first tree from the smallest vertex (radius 1);
    every incident edge then proposes a radius for its far end and the
    spread is taken over these proposals.  Finally the first edge is scaled
    to unit center distance.
    """
    m = wm.map
    p = psi.psi if isinstance(psi, AngleSystem) else np.asarray(psi, dtype=float)
    if stereo is None and isinstance(psi, AngleSystem) and psi.mode == "stereo":
        stereo = stereographic_subspace(wm, psi.face)
    curv = _curvature(wm, stereo)
    hd = hat_data(wm, p, snap_eta=(curv == 0))
    if stereo is None:
        verts = list(range(m.n_vertices))
        edges = list(range(m.n_edges))
    else:
        verts, edges = list(stereo.v_star), list(stereo.e_star)
    var_edge = np.zeros(m.n_edges, dtype=bool)
    var_edge[edges] = True
    rho = np.full(m.n_vertices, np.nan)
    spread = np.full(m.n_vertices, np.nan)
    length = np.full(m.n_edges, np.nan)
    dleg = np.full(m.dart_count, np.nan)

    if curv != 0:
        darts = np.array([d for e in edges for d in m.edges[e]], dtype=np.int64)
        e_of = m.dart_edge[darts]
        eta = hd.eta_hat[e_of]
        ah, bh = hd.psi_hat[darts], hd.psi_hat[m.opposite[darts]]
        gh = hd.gamma_hat[e_of]
        ok = (ah > 0) & (ah < math.pi) & (bh > 0) & (bh < math.pi) & (gh > 0) & (gh < math.pi)
        ok &= (eta < 0) if curv < 0 else (eta > 0)
        if not np.all(ok):
            bad = int(darts[np.flatnonzero(~ok)[0]])
            raise DegenerateTriangle(f"triangle of dart {bad} violates the angle box")
        se = np.abs(np.sin(eta))
        t = np.sqrt(se * np.sin(ah) / (np.sin(bh) * np.sin(gh)))
        dleg[darts] = 2.0 * (np.arctanh(t) if curv < 0 else np.arctan(t))
        tc = np.sqrt(se * np.sin(gh) / (np.sin(ah) * np.sin(bh)))
        length[e_of] = 2.0 * (np.arctanh(tc) if curv < 0 else np.arctan(tc))
        for v in verts:
            legs = np.array([dleg[m.opposite[d]] for d in m.vertices[v]
                             if var_edge[m.dart_edge[d]]])
            if len(legs):
                rho[v] = legs.mean()
                spread[v] = (legs.max() - legs.min()) / legs.mean()
        return LegData(curv, rho, length, spread, dleg)

    sin_p = np.sin(p)
    nbrs = {v: [] for v in verts}
    for e in edges:
        s, t = m.edges[e]
        nbrs[m.tail(s)].append(s)
        nbrs[m.tail(t)].append(t)
    for v in verts:
        if rho[v] == rho[v] or not nbrs[v]:
            continue
        rho[v] = 1.0
        queue = deque([v])
        while queue:
            u = queue.popleft()
            for s in nbrs[u]:
                w = m.head(s)
                if rho[w] != rho[w]:
                    rho[w] = rho[u] * sin_p[s] / sin_p[m.opposite[s]]
                    queue.append(w)
    for v in verts:
        props = [rho[m.head(s)] * sin_p[m.opposite[s]] / sin_p[s] for s in nbrs[v]]
        if props:
            props = np.array(props)
            spread[v] = (props.max() - props.min()) / props.mean()
    for e in edges:
        s, t = m.edges[e]
        k = 0.5 * (rho[m.tail(s)] / sin_p[t] + rho[m.tail(t)] / sin_p[s])
        length[e] = k * math.sin(wm.theta[e])
        dleg[s] = k * sin_p[s]
        dleg[t] = k * sin_p[t]
    if edges:
        scale = 1.0 / length[edges[0]]
        rho *= scale
        length *= scale
        dleg *= scale
    return LegData(0, rho, length, spread, dleg)


# -- Moebius helpers ----------------------------------------------------------

def _rot(a: float, hyper: bool) -> np.ndarray:
    if hyper:
        h = 0.5 * a
        return np.array([[complex(math.cos(h), math.sin(h)), 0], [0, complex(math.cos(h), -math.sin(h))]])
    return np.array([[complex(math.cos(a), math.sin(a)), 0], [0, 1]], dtype=complex)


def _trans(d: float, hyper: bool) -> np.ndarray:
    if hyper:
        return np.array([[math.cosh(0.5 * d), math.sinh(0.5 * d)],
                         [math.sinh(0.5 * d), math.cosh(0.5 * d)]], dtype=complex)
    return np.array([[1, d], [0, 1]], dtype=complex)


def _apply(mat: np.ndarray, z):
    return (mat[0, 0] * z + mat[0, 1]) / (mat[1, 0] * z + mat[1, 1])


def _radial(r: float, angle: float, hyper: bool) -> complex:
    rr = math.tanh(0.5 * r) if hyper else r
    return complex(rr * math.cos(angle), rr * math.sin(angle))


def _inv(mat: np.ndarray) -> np.ndarray:
    a, b, c, d = mat[0, 0], mat[0, 1], mat[1, 0], mat[1, 1]
    return np.array([[d, -b], [-c, a]]) / (a * d - b * c)


def hyperbolic_distance(z, w):
    """Distance in the Poincare disk."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    q = np.abs(z - w) / np.abs(1 - np.conj(z) * w)
    return 2.0 * np.arctanh(np.minimum(q, 1.0))


def chart_distance(chart: str, z, w):
    if chart == "poincare":
        return hyperbolic_distance(z, w)
    return np.abs(np.asarray(z, dtype=complex) - np.asarray(w, dtype=complex))


def euclidean_circle(center: complex, r: float) -> tuple[complex, float]:
    """Euclidean center and radius of a hyperbolic circle in the unit disk."""
    rr = math.tanh(0.5 * r)
    c2 = abs(center) ** 2
    den = 1.0 - rr * rr * c2
    return center * (1.0 - rr * rr) / den, rr * (1.0 - c2) / den


# -- layout -------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DiskConfiguration:
    """Realized disk pattern over one fundamental domain.

    ``frames[d]`` places dart ``d``; ``holonomy[d]`` maps the placement that
    ``d`` predicts for its reverse onto the realized one (identity along the
    spanning tree, a deck transformation across the other edges).  Vertices
    that became half-planes have ``radii = inf``, NaN centers, and an entry
    ``lines[v] = (n, h)`` for the half-plane ``Re(conj(n) z) >= h``.
    """

    chart: str
    centers: np.ndarray
    radii: np.ndarray
    face_points: np.ndarray
    frames: np.ndarray = field(repr=False)
    holonomy: np.ndarray = field(repr=False)
    realized: np.ndarray = field(repr=False)
    tree_edges: tuple = ()
    lines: dict = field(default_factory=dict)
    psi: np.ndarray = field(default=None, repr=False)
    edge_length: np.ndarray = field(default=None, repr=False)
    face: int | None = None
    max_spread: float = 0.0

    @property
    def hyperbolic(self) -> bool:
        return self.chart == "poincare"

    def head_center(self, d: int, m) -> complex:
        """Center of the head of ``d`` in the lift of ``d``'s star."""
        return complex(_apply(_inv(self.holonomy[d]), self.centers[m.head(d)]))

    def translations(self) -> list:
        """Deck translations of a Euclidean layout (non-tree holonomies)."""
        out = []
        if self.chart != "plane":
            return out
        for d in range(len(self.holonomy)):
            h = self.holonomy[d]
            if self.realized[d] and np.all(np.isfinite(h)) and not np.allclose(h, np.eye(2)):
                out.append(complex(h[0, 1] / h[1, 1]))
        return out


def layout(wm: WeightedMap, psi, root: int | None = None,
           spread_tol: float = 1e-6) -> DiskConfiguration:
    """Glue the triangles of ``psi`` into a disk configuration.

    The spanning tree is a breadth-first search over vertex stars from the
    smallest vertex, independent of ``root``; ``root`` only chooses which
    dart frame becomes the identity.  Euclidean layouts scale the first edge
    to unit center distance.

    Raises
    ------
    NotCritical
        The legs at some vertex disagree by more than ``spread_tol``.
    LayoutError
        Stereographic data whose free part is disconnected, or a face with
        no vertex off the chosen face.
    """
    m = wm.map
    if not m.orientable:
        raise LayoutError("layout needs an orientable map")
    asys = psi if isinstance(psi, AngleSystem) else AngleSystem(psi)
    p = asys.psi
    stereo = stereographic_subspace(wm, asys.face) if asys.mode == "stereo" else None
    legs = leg_data(wm, p, stereo)
    if legs.max_spread > spread_tol:
        raise NotCritical(f"leg spread {legs.max_spread:.3e} exceeds {spread_tol:.1e}")
    curv = legs.curvature
    hyper = curv < 0
    if curv > 0:
        raise LayoutError("full-mode sphere systems have no planar layout; use a face")
    chart = "poincare" if hyper else ("stereo" if stereo else "plane")

    n = m.dart_count
    rho = legs.rho.copy()
    length = legs.edge_length
    if stereo is None:
        verts = list(range(m.n_vertices))
        var_edge = np.ones(m.n_edges, dtype=bool)
    else:
        verts = list(stereo.v_star)
        var_edge = np.zeros(m.n_edges, dtype=bool)
        var_edge[list(stereo.e_star)] = True
        for v in verts:
            if rho[v] != rho[v]:
                rho[v] = 1.0  # vertex without free darts; its star fixes the scale
    in_chart = np.zeros(m.n_vertices, dtype=bool)
    in_chart[verts] = True

    frames = np.full((n, 2, 2), np.nan, dtype=complex)
    hol = np.full((n, 2, 2), np.nan, dtype=complex)
    realized = np.zeros(n, dtype=bool)
    centers = np.full(m.n_vertices, np.nan, dtype=complex)

    def fill_star(d0, frame0):
        darts = m.vertices[m.tail(d0)]
        k = darts.index(d0)
        f = frame0
        for i in range(len(darts)):
            d = darts[(k + i) % len(darts)]
            frames[d] = f
            realized[d] = True
            nxt = darts[(k + i + 1) % len(darts)]
            f = f @ _rot(p[d] + p[nxt], hyper)

    tree = []
    start = verts[0]
    fill_star(m.vertices[start][0], np.eye(2, dtype=complex))
    centers[start] = 0.0
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for s in m.vertices[v]:
            e = int(m.dart_edge[s])
            w = m.head(s)
            if not var_edge[e] or w in seen:
                continue
            f = frames[s] @ _trans(length[e], hyper) @ _rot(math.pi, hyper)
            fill_star(int(m.opposite[s]), f)
            centers[w] = _apply(frames[m.opposite[s]], 0.0)
            seen.add(w)
            tree.append(e)
            queue.append(w)
    if seen != set(verts):
        raise LayoutError(f"vertices {sorted(set(verts) - seen)} not reachable through free edges")

    if root is not None:
        if not realized[root]:
            raise LayoutError(f"root dart {root} is not part of the chart")
        g = _inv(frames[root])
        for d in np.flatnonzero(realized):
            frames[d] = g @ frames[d]
        for v in verts:
            centers[v] = _apply(g, centers[v])

    for e in range(m.n_edges):
        if not var_edge[e]:
            continue
        for s in m.edges[e]:
            pred = frames[s] @ _trans(length[e], hyper) @ _rot(math.pi, hyper)
            hol[s] = frames[m.opposite[s]] @ _inv(pred)
            if e in tree:
                hol[s] = np.eye(2)

    # face points from the vertex stars in the chart
    fpts = np.full(m.n_faces, np.nan, dtype=complex)
    for f, darts in enumerate(m.faces):
        if stereo is not None and f == stereo.face:
            fpts[f] = complex(np.inf, 0)
            continue
        d = next((d for d in darts if in_chart[m.tail(d)]), None)
        if d is None:
            raise LayoutError(f"face {f} has no vertex in the chart")
        fpts[f] = _apply(frames[d], _radial(rho[m.tail(d)], -p[d], hyper))

    lines = {}
    radii = rho.copy()
    if stereo is not None:
        on_f = [v for v in range(m.n_vertices) if not in_chart[v]]
        for w in on_f:
            cands = []
            for s in m.vertices[w]:
                v = m.head(s)
                if in_chart[v]:
                    t = int(m.opposite[s])
                    a = frames[t][0, 0]
                    nrm = complex(a / abs(a))
                    hh = (nrm.conjugate() * centers[v]).real + rho[v] * math.cos(wm.theta[m.dart_edge[t]])
                    cands.append((nrm, hh))
            if not cands:
                raise LayoutError(f"vertex {w} of the face has no neighbour off the face")
            nrm, hh = cands[0]
            for n2, h2 in cands[1:]:
                if abs(n2 - nrm) > 1e-6 or abs(h2 - hh) > 1e-6:
                    raise LayoutError(f"boundary line of vertex {w} is not consistent")
            fp = [fpts[m.dart_face[d]] for d in m.vertices[w] if m.dart_face[d] != stereo.face]
            for z in fp:
                if abs((nrm.conjugate() * z).real - hh) > 1e-6:
                    raise LayoutError(f"face points of vertex {w} are not collinear")
            lines[w] = (nrm, float(hh))
            radii[w] = np.inf

    return DiskConfiguration(
        chart=chart,
        centers=centers,
        radii=radii,
        face_points=fpts,
        frames=frames,
        holonomy=hol,
        realized=realized,
        tree_edges=tuple(tree),
        lines=lines,
        psi=p.copy(),
        edge_length=length.copy(),
        face=None if stereo is None else stereo.face,
        max_spread=legs.max_spread,
    )


# -- checks -------------------------------------------------------------------

@dataclass
class ConfigReport:
    angle_residuals: np.ndarray
    concurrency_residuals: np.ndarray

    @property
    def max_angle_residual(self) -> float:
        a = self.angle_residuals[np.isfinite(self.angle_residuals)]
        return float(a.max(initial=0.0))

    @property
    def max_concurrency_residual(self) -> float:
        c = self.concurrency_residuals[np.isfinite(self.concurrency_residuals)]
        return float(c.max(initial=0.0))

    @property
    def max_residual(self) -> float:
        return max(self.max_angle_residual, self.max_concurrency_residual)


def _lens_angle(n1: complex, n2: complex) -> float:
    """``pi`` minus the angle between two inward normals at a crossing."""
    c = (n1.conjugate() * n2).real / (abs(n1) * abs(n2))
    return math.pi - math.acos(max(-1.0, min(1.0, c)))


def _circle_angle(chart, c1, r1, c2, r2) -> float:
    d = float(chart_distance(chart, c1, c2))
    if chart == "poincare":
        num = math.cosh(d) - math.cosh(r1) * math.cosh(r2)
        den = math.sinh(r1) * math.sinh(r2)
    else:
        num = d * d - r1 * r1 - r2 * r2
        den = 2.0 * r1 * r2
    return math.acos(max(-1.0, min(1.0, num / den)))


def _circle_line_angle(c, r, nrm, h) -> float:
    dist = (nrm.conjugate() * c).real - h  # signed, positive inside the half-plane
    if abs(dist) > r:
        return math.nan
    # crossing point and the two inward normals there
    foot = c - dist * nrm
    half = math.sqrt(max(r * r - dist * dist, 0.0))
    x = foot + half * 1j * nrm
    return _lens_angle(c - x, nrm)


def check_configuration(config: DiskConfiguration, wm: WeightedMap) -> ConfigReport:
    """Intersection-angle and face-concurrency residuals of a layout.

    Angles: every free edge compares the realized crossing angle of its two
    circles (or circle and half-plane, or two half-planes) with ``theta``.
    Concurrency: each face point must lie on the boundary of every incident
    disk; centers of the face's vertices are brought into one lift by the
    stored holonomies, and residuals are chart distances.
    """
    m = wm.map
    chart = config.chart
    ang = np.full(m.n_edges, np.nan)
    for e, (s, t) in enumerate(m.edges):
        u, w = m.tail(s), m.head(s)
        lu, lw = u in config.lines, w in config.lines
        if lu and lw:
            (n1, _), (n2, _) = config.lines[u], config.lines[w]
            val = _lens_angle(n1, n2)
        elif lu or lw:
            a, b = (w, u) if lu else (u, w)
            nrm, h = config.lines[b]
            val = _circle_line_angle(config.centers[a], config.radii[a], nrm, h)
        elif config.realized[s]:
            c2 = config.head_center(s, m)
            val = _circle_angle(chart, config.centers[u], config.radii[u], c2, config.radii[w])
        else:
            continue
        ang[e] = abs(val - wm.theta[e]) if val == val else np.inf

    conc = np.full(m.n_faces, np.nan)
    for f, darts in enumerate(m.faces):
        if config.face is not None and f == config.face:
            continue
        z = config.face_points[f]
        d0 = next(d for d in darts if config.realized[d])
        k = darts.index(d0)
        g = np.eye(2, dtype=complex)
        worst = 0.0
        for i in range(len(darts)):
            d = darts[(k + i) % len(darts)]
            v = m.tail(d)
            if v in config.lines:
                nrm, h = config.lines[v]
                worst = max(worst, abs((nrm.conjugate() * z).real - h))
            else:
                c = _apply(g, config.centers[v])
                r = float(chart_distance(chart, z, c))
                worst = max(worst, abs(r - config.radii[v]))
            if config.realized[d] and np.all(np.isfinite(config.holonomy[d])):
                # move on to the star of the head, expressed in d0's lift
                g = g @ _inv(config.holonomy[d])
        conc[f] = worst
    return ConfigReport(ang, conc)


def _tri_angles(chart, a, b, c):
    """Interior angles of the triangle with chart vertices ``a, b, c``."""
    x = float(chart_distance(chart, b, c))
    y = float(chart_distance(chart, a, c))
    z = float(chart_distance(chart, a, b))

    def corner(opp, s1, s2):
        if chart == "poincare":
            v = (math.cosh(s1) * math.cosh(s2) - math.cosh(opp)) / (math.sinh(s1) * math.sinh(s2))
        else:
            v = (s1 * s1 + s2 * s2 - opp * opp) / (2 * s1 * s2)
        return math.acos(max(-1.0, min(1.0, v)))

    return corner(x, y, z), corner(y, x, z), corner(z, x, y)


def _edge_triangles(config: DiskConfiguration, m, e: int):
    s, _ = m.edges[e]
    hyper = config.hyperbolic
    fr = config.frames[s]
    u = m.tail(s)
    a = config.centers[u]
    b = config.head_center(s, m)
    right = _apply(fr, _radial(config.radii[u], -config.psi[s], hyper))
    left = _apply(fr, _radial(config.radii[u], config.psi[s], hyper))
    return a, b, right, left


def quad_areas(config: DiskConfiguration, wm: WeightedMap) -> np.ndarray:
    """Hyperbolic area of every realized quad, from the chart positions."""
    if not config.hyperbolic:
        raise ValueError("quad areas are only defined here for the Poincare chart")
    m = wm.map
    out = np.zeros(m.n_edges)
    for e in range(m.n_edges):
        a, b, r, l = _edge_triangles(config, m, e)
        out[e] = 2 * math.pi - sum(_tri_angles("poincare", a, b, r)) - sum(_tri_angles("poincare", a, b, l))
    return out


def vertex_angle_sums(config: DiskConfiguration, wm: WeightedMap) -> np.ndarray:
    """Total realized angle of the quads around each vertex center."""
    m = wm.map
    out = np.zeros(m.n_vertices)
    for e in range(m.n_edges):
        s, _ = m.edges[e]
        a, b, r, l = _edge_triangles(config, m, e)
        ar, br, _ = _tri_angles(config.chart, a, b, r)
        al, bl, _ = _tri_angles(config.chart, a, b, l)
        out[m.tail(s)] += ar + al
        out[m.head(s)] += br + bl
    return out


# -- volume -------------------------------------------------------------------

def volume_functional(wm: WeightedMap, psi) -> float:
    """Volume of the quotient of the convex hull, as the functional value."""
    return functional_value(wm, psi)


def volume_orthoschemes(wm: WeightedMap, psi, per_edge: bool = False):
    """Volume as a signed sum of orthoschemes, ``sum_s 2 V(psi(s), omega(...))``.

    With ``per_edge`` the per-edge pair sums are returned as well.
    """
    m = wm.map
    p = psi.psi if isinstance(psi, AngleSystem) else np.asarray(psi, dtype=float)
    gam = math.pi - wm.dart_theta
    q = p[m.opposite]
    per_dart = 2.0 * ortho_v(p, omega(gam, p, q))
    total = float(per_dart.sum())
    if not per_edge:
        return total
    pair = np.array([per_dart[s] + per_dart[t] for s, t in m.edges])
    return total, pair


def edge_volume_rhs(theta, psi_s, psi_t):
    """``I-(gamma, (a - b - gamma + pi)/2) - I+(gamma, (a + b + gamma - pi)/2)``
    with ``gamma = pi - theta``; equals the orthoscheme pair sum of an edge."""
    gam = math.pi - np.asarray(theta, dtype=float)
    a = np.asarray(psi_s, dtype=float)
    b = np.asarray(psi_t, dtype=float)
    return i_minus(gam, 0.5 * (a - b - gam + math.pi)) - i_plus(gam, 0.5 * (a + b + gam - math.pi))
