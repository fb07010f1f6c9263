"""Coherent angle systems, hat quantities and the Lobachevsky functional.

An angle system assigns ``psi[s]`` to every dart ``s``.  For an edge ``e``
with darts ``s, -s`` and weight ``theta`` the triangle of ``s`` has angles
``psi(s)``, ``psi(-s)`` and ``pi - theta``; its hat quantities are

    eta_hat   = (psi(s) + psi(-s) - theta) / 2      half the angle excess
    psi_hat   = psi(s) - eta_hat
    gamma_hat = pi - theta - eta_hat

so that ``psi_hat(s) + psi_hat(-s) = theta`` and
``eta_hat + gamma_hat = pi - theta`` hold identically.

Two modes exist.  ``full`` uses every dart as a variable with vertex sums
``pi``.  ``stereo`` (sphere only) fixes a face ``f``; darts touching the
vertices of ``f`` take fixed boundary values and the remaining darts ``S*``
obey vertex sums ``theta(v)`` and ``psi(s) + psi(-s) = theta``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import null_space

from .errors import (
    BoundaryPoint,
    DomainViolation,
    InvalidFace,
    InvolutionNotFree,
    NonpositiveThetaV,
    NotSphere,
)
from .lobachevsky import i_minus, i_plus, lob, lob_second
from .maps import SurfaceMap, WeightedMap, quotient_map

__all__ = [
    "EQ_TOL",
    "INTERIOR_MARGIN",
    "AngleSystem",
    "HatData",
    "StereoSubspace",
    "MembershipReport",
    "hat_data",
    "is_member",
    "functional_value",
    "functional_via_edge_functions",
    "dart_gradient",
    "gradient",
    "hessian",
    "vertex_pair_basis",
    "nullspace_basis",
    "tangent_basis",
    "face_cycle_vector",
    "stereographic_subspace",
    "reduce_projective",
    "perturb_member",
]

EQ_TOL = 1e-10
INTERIOR_MARGIN = 1e-12
_LOG_FLOOR = 1e-300


def _sign(chi: int) -> int:
    return (chi > 0) - (chi < 0)


@dataclass(frozen=True)
class StereoSubspace:
    """Data of the f-stereographic restriction of a sphere map."""

    face: int
    v_star: tuple[int, ...]
    e_star: tuple[int, ...]
    s_star: tuple[int, ...]
    theta_v: dict
    boundary_psi: np.ndarray = field(repr=False)

    def fill(self, psi_star) -> np.ndarray:
        """Full dart vector from values on ``s_star`` (in ``s_star`` order)."""
        psi = self.boundary_psi.copy()
        psi[list(self.s_star)] = np.asarray(psi_star, dtype=float)
        return psi


@dataclass(frozen=True, eq=False)
class AngleSystem:
    """Per-dart angles plus the mode they are meant for."""

    psi: np.ndarray
    mode: str = "full"
    face: int | None = None

    def __post_init__(self):
        if self.mode not in ("full", "stereo"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if (self.mode == "stereo") != (self.face is not None):
            raise ValueError("stereo mode needs a face, full mode must not have one")
        psi = np.array(self.psi, dtype=float)
        psi.setflags(write=False)
        object.__setattr__(self, "psi", psi)

    def with_psi(self, psi) -> "AngleSystem":
        return AngleSystem(psi, self.mode, self.face)


@dataclass(frozen=True)
class HatData:
    psi_hat: np.ndarray
    eta_hat: np.ndarray
    gamma_hat: np.ndarray


@dataclass
class MembershipReport:
    member: bool
    violations: list = field(default_factory=list)

    def __bool__(self):
        return self.member


def _psi_array(psi) -> np.ndarray:
    if isinstance(psi, AngleSystem):
        return psi.psi
    return np.asarray(psi, dtype=float)


def hat_data(wm: WeightedMap, psi, snap_eta: bool = False) -> HatData:
    """Hat quantities of ``psi``.

    With ``snap_eta`` any ``|eta_hat| < EQ_TOL`` is replaced by an exact
    zero, which removes log-singularity noise where the constraints force
    ``eta_hat = 0``.
    """
    m = wm.map
    p = _psi_array(psi)
    e0 = np.array([s for s, _ in m.edges], dtype=np.int64)
    e1 = np.array([t for _, t in m.edges], dtype=np.int64)
    eta = 0.5 * (p[e0] + p[e1] - wm.theta)
    if snap_eta:
        eta = np.where(np.abs(eta) < EQ_TOL, 0.0, eta)
    psi_hat = p - eta[m.dart_edge]
    gamma = math.pi - wm.theta - eta
    return HatData(psi_hat, eta, gamma)


def _eta_bounds(chi_sign: int, theta: np.ndarray):
    if chi_sign > 0:
        return np.zeros_like(theta), math.pi - theta
    if chi_sign < 0:
        return -theta, np.zeros_like(theta)
    return np.zeros_like(theta), np.zeros_like(theta)


def _stereo_of(wm: WeightedMap, psi) -> StereoSubspace | None:
    if isinstance(psi, AngleSystem) and psi.mode == "stereo":
        return stereographic_subspace(wm, psi.face)
    return None


def is_member(wm: WeightedMap, psi, stereo: StereoSubspace | None = None,
              eq_tol: float = EQ_TOL, margin: float = INTERIOR_MARGIN) -> MembershipReport:
    """Check every defining constraint and list the violated ones.

    Each violation is ``(kind, location, magnitude)``.  Stereographic mode is
    selected by passing ``stereo`` or an :class:`AngleSystem` in stereo mode.
    """
    m = wm.map
    p = _psi_array(psi)
    stereo = stereo or _stereo_of(wm, psi)
    out = []
    if p.shape != (m.dart_count,) or not np.all(np.isfinite(p)):
        return MembershipReport(False, [("shape", None, float("nan"))])
    th = wm.dart_theta
    if stereo is None:
        for v, darts in enumerate(m.vertices):
            r = float(p[list(darts)].sum() - math.pi)
            if abs(r) > eq_tol:
                out.append(("vertex_sum", v, r))
        hd = hat_data(wm, p)
        lo = hd.psi_hat - margin
        hi = th - margin - hd.psi_hat
        for s in np.flatnonzero((lo <= 0) | (hi <= 0)):
            out.append(("psi_hat_box", int(s), float(min(lo[s], hi[s]))))
        sgn = _sign(m.chi)
        if sgn == 0:
            for e in np.flatnonzero(np.abs(hd.eta_hat) > eq_tol):
                out.append(("eta_hat_zero", int(e), float(hd.eta_hat[e])))
        else:
            a, b = _eta_bounds(sgn, wm.theta)
            lo = hd.eta_hat - a - margin
            hi = b - margin - hd.eta_hat
            for e in np.flatnonzero((lo <= 0) | (hi <= 0)):
                out.append(("eta_hat_box", int(e), float(min(lo[e], hi[e]))))
    else:
        star = np.zeros(m.dart_count, dtype=bool)
        star[list(stereo.s_star)] = True
        fixed = np.flatnonzero(~star)
        dev = np.abs(p[fixed] - stereo.boundary_psi[fixed])
        for i in np.flatnonzero(dev > eq_tol):
            out.append(("boundary_value", int(fixed[i]), float(dev[i])))
        for v in stereo.v_star:
            r = float(p[list(m.vertices[v])].sum() - math.pi)
            if abs(r) > eq_tol:
                out.append(("vertex_sum", v, r))
        for e in stereo.e_star:
            s, t = m.edges[e]
            r = float(p[s] + p[t] - wm.theta[e])
            if abs(r) > eq_tol:
                out.append(("pair_sum", e, r))
        for s in stereo.s_star:
            gap = min(p[s] - margin, th[s] - margin - p[s])
            if gap <= 0:
                out.append(("psi_box", s, float(gap)))
    return MembershipReport(not out, out)


def _check_domain(wm: WeightedMap, hd: HatData, chi_sign: int, tol: float):
    th = wm.dart_theta
    bad = np.flatnonzero((hd.psi_hat < -tol) | (hd.psi_hat > th + tol))
    if len(bad):
        s = int(bad[0])
        raise DomainViolation(f"psi_hat[{s}] = {hd.psi_hat[s]!r} outside [0, {th[s]!r}]")
    a, b = _eta_bounds(chi_sign, wm.theta)
    bad = np.flatnonzero((hd.eta_hat < a - tol) | (hd.eta_hat > b + tol))
    if len(bad):
        e = int(bad[0])
        raise DomainViolation(
            f"eta_hat[{e}] = {hd.eta_hat[e]!r} outside [{a[e]!r}, {b[e]!r}]")


def functional_value(wm: WeightedMap, psi, tol: float = 1e-9,
                     check: bool = True) -> float:
    """``sum_s lob(psi_hat) - sum_e [lob(gamma_hat) + lob(eta_hat) + lob(theta)]``.

    The domain check uses the closed eta interval of the map's curvature
    sign; stereo-mode systems are checked against ``eta_hat >= 0`` since
    their boundary edges carry positive excess.
    """
    hd = hat_data(wm, psi, snap_eta=True)
    if check:
        stereo = isinstance(psi, AngleSystem) and psi.mode == "stereo"
        sgn = 1 if stereo else _sign(wm.map.chi)
        _check_domain(wm, hd, sgn, tol)
    return float(
        lob(hd.psi_hat).sum()
        - lob(hd.gamma_hat).sum()
        - lob(hd.eta_hat).sum()
        - lob(wm.theta).sum()
    )


def functional_via_edge_functions(wm: WeightedMap, psi) -> float:
    """Same functional written as ``sum_s I+(psi_hat)/2 - sum_e I-(eta_hat)``."""
    hd = hat_data(wm, psi)
    th = wm.dart_theta
    return float(0.5 * i_plus(th, hd.psi_hat).sum() - i_minus(wm.theta, hd.eta_hat).sum())


def _log2sin(x, what: str) -> np.ndarray:
    a = np.abs(2.0 * np.sin(x))
    if np.any(a < _LOG_FLOOR):
        raise BoundaryPoint(f"{what} at a singular value")
    return np.log(a)


def dart_gradient(wm: WeightedMap, psi, antisymmetric: bool = False,
                  darts=None) -> np.ndarray:
    """Partial derivatives ``dL/dpsi(s)`` (zero outside ``darts``).

    With ``antisymmetric`` the eta/gamma terms are dropped; they contribute
    equally to ``s`` and ``-s`` and cancel against any direction with
    ``U(s) = -U(-s)``.
    """
    m = wm.map
    p = _psi_array(psi)
    hd = hat_data(wm, p, snap_eta=antisymmetric)
    idx = np.arange(m.dart_count) if darts is None else np.asarray(darts, dtype=np.int64)
    g = np.zeros(m.dart_count)
    if len(idx) == 0:
        return g
    opp = m.opposite[idx]
    val = -_log2sin(hd.psi_hat[idx], "psi_hat") + _log2sin(hd.psi_hat[opp], "psi_hat")
    if not antisymmetric:
        e = m.dart_edge[idx]
        val = val - _log2sin(hd.gamma_hat[e], "gamma_hat") + _log2sin(hd.eta_hat[e], "eta_hat")
    g[idx] = 0.5 * val
    return g


def _is_antisymmetric(m: SurfaceMap, basis: np.ndarray) -> bool:
    if basis.size == 0:
        return True
    scale = np.abs(basis).max()
    return bool(np.abs(basis + basis[m.opposite]).max() <= 1e-14 * scale)


def _support(basis: np.ndarray) -> np.ndarray:
    return np.flatnonzero(np.any(basis != 0.0, axis=1))


def gradient(wm: WeightedMap, psi, basis: np.ndarray) -> np.ndarray:
    """Directional derivatives of the functional along the columns of ``basis``."""
    basis = np.asarray(basis, dtype=float)
    anti = _is_antisymmetric(wm.map, basis)
    g = dart_gradient(wm, psi, antisymmetric=anti, darts=_support(basis))
    return basis.T @ g


def hessian(wm: WeightedMap, psi, antisymmetric: bool = False, darts=None) -> np.ndarray:
    """Dense Hessian in dart coordinates, restricted to the rows/cols ``darts``.

    ``H = sum_s lob''(psi_hat_s) a_s a_s^T - sum_e (lob''(gamma_hat) +
    lob''(eta_hat)) c_e c_e^T`` with ``a_s = (e_s - e_-s)/2`` and
    ``c_e = (e_s + e_-s)/2``; it is block diagonal over edges.
    """
    m = wm.map
    hd = hat_data(wm, psi, snap_eta=antisymmetric)
    n = m.dart_count
    h = np.zeros((n, n))
    keep = np.ones(n, dtype=bool) if darts is None else np.isin(np.arange(n), darts)
    for e, (s, t) in enumerate(m.edges):
        if not (keep[s] or keep[t]):
            continue
        # a_s a_s^T and a_t a_t^T both equal the same pattern
        k = float(lob_second(hd.psi_hat[s]) + lob_second(hd.psi_hat[t])) / 4.0
        block = np.array([[k, -k], [-k, k]])
        if not antisymmetric:
            c = float(lob_second(hd.gamma_hat[e]) + lob_second(hd.eta_hat[e])) / 4.0
            block = block - c
        h[np.ix_([s, t], [s, t])] += block
    if darts is not None:
        mask = ~keep
        h[mask, :] = 0.0
        h[:, mask] = 0.0
    return h


def vertex_pair_basis(m: SurfaceMap) -> np.ndarray:
    """Columns ``e_{d_i} - e_{d_0}`` for the darts ``d_0, d_1, ...`` at each vertex.

    They span the directions preserving every vertex sum.
    """
    cols = []
    for darts in m.vertices:
        for d in darts[1:]:
            u = np.zeros(m.dart_count)
            u[d] = 1.0
            u[darts[0]] = -1.0
            cols.append(u)
    return np.array(cols).T.reshape(m.dart_count, len(cols))


def _constraint_matrix(wm: WeightedMap, stereo: StereoSubspace | None, pair: bool):
    m = wm.map
    rows = []
    verts = range(m.n_vertices) if stereo is None else stereo.v_star
    edges = range(m.n_edges) if stereo is None else stereo.e_star
    for v in verts:
        r = np.zeros(m.dart_count)
        r[list(m.vertices[v])] = 1.0
        rows.append(r)
    if pair:
        for e in edges:
            r = np.zeros(m.dart_count)
            r[list(m.edges[e])] = 1.0
            rows.append(r)
    return np.array(rows).reshape(len(rows), m.dart_count)


def nullspace_basis(wm: WeightedMap, stereo: StereoSubspace | None = None,
                    pair: bool = True) -> np.ndarray:
    """Orthonormal basis of the directions keeping all equality constraints.

    In stereographic mode only ``S*`` coordinates are free; the returned
    columns still live in full dart space, zero off ``S*``.
    """
    m = wm.map
    a = _constraint_matrix(wm, stereo, pair)
    if stereo is None:
        cols = np.arange(m.dart_count)
    else:
        cols = np.array(stereo.s_star, dtype=np.int64)
    out = np.zeros((m.dart_count, 0))
    if len(cols) == 0:
        return out
    sub = a[:, cols]
    if sub.shape[0] == 0:
        ns = np.eye(len(cols))
    else:
        ns = null_space(sub, rcond=1e-10)
    out = np.zeros((m.dart_count, ns.shape[1]))
    out[cols, :] = ns
    # fix the sign of every column for reproducibility
    for j in range(out.shape[1]):
        k = int(np.argmax(np.abs(out[:, j]) > 1e-12))
        if out[k, j] < 0:
            out[:, j] = -out[:, j]
    return out


def tangent_basis(wm: WeightedMap, stereo: StereoSubspace | None = None) -> np.ndarray:
    """Orthonormal tangent basis for the mode: full, torus or stereographic."""
    if stereo is not None:
        return nullspace_basis(wm, stereo, pair=True)
    return nullspace_basis(wm, None, pair=(wm.map.chi == 0))


def face_cycle_vector(m: SurfaceMap, f: int) -> np.ndarray:
    """Loop vector of face ``f``: ``+1`` on its darts, ``-1`` on their reverses.

    It preserves vertex sums and is antisymmetric, so it is tangent in the
    torus case.
    """
    u = np.zeros(m.dart_count)
    for d in m.faces[f]:
        u[d] += 1.0
        u[m.opposite[d]] -= 1.0
    return u


def stereographic_subspace(wm: WeightedMap, f: int, tol: float = 1e-12,
                           strict: bool = True) -> StereoSubspace:
    """Free darts, vertex targets and boundary values for face ``f``.

    Raises
    ------
    NotSphere
        The map is not a sphere.
    InvalidFace
        ``f`` is not a face index.
    NonpositiveThetaV
        Some ``theta(v)`` is negative, vanishes at a vertex that still has
        free darts, or is positive at a vertex without free darts.  Each of
        these makes the restricted problem empty.  ``strict=False`` skips
        this check so a flow network can still be built and return a cut.
    """
    m = wm.map
    if m.chi != 2 or not m.orientable:
        raise NotSphere(f"stereographic data need a sphere map, chi = {m.chi}")
    if not (isinstance(f, (int, np.integer)) and 0 <= f < m.n_faces):
        raise InvalidFace(f"face {f!r} not in 0..{m.n_faces - 1}")
    f = int(f)
    on_f = np.zeros(m.n_vertices, dtype=bool)
    on_f[list(m.face_vertices(f))] = True
    v_star = tuple(int(v) for v in np.flatnonzero(~on_f))
    e_star = tuple(e for e in range(m.n_edges)
                   if not (on_f[m.edge_vertices(e)[0]] or on_f[m.edge_vertices(e)[1]]))
    s_star = tuple(sorted(d for e in e_star for d in m.edges[e]))
    e_in = np.zeros(m.n_edges, dtype=bool)
    e_in[list(e_star)] = True

    theta_v = {}
    for v in v_star:
        darts = m.vertices[v]
        out_sum = sum(wm.theta[m.dart_edge[d]] for d in darts if not e_in[m.dart_edge[d]])
        tv = float(math.pi - out_sum)
        free = any(e_in[m.dart_edge[d]] for d in darts)
        if strict and (tv < -tol or (free and tv <= tol) or (not free and tv > tol)):
            raise NonpositiveThetaV(
                f"theta(v) = {tv!r} at vertex {v} ({'with' if free else 'without'} free darts)")
        theta_v[v] = 0.0 if abs(tv) <= tol else tv

    bnd = np.full(m.dart_count, np.nan)
    for d in range(m.dart_count):
        a, b = on_f[m.tail(d)], on_f[m.head(d)]
        if a and b:
            bnd[d] = 0.5 * math.pi
        elif a:
            bnd[d] = 0.0
        elif b:
            bnd[d] = wm.theta[m.dart_edge[d]]
    bnd.setflags(write=False)
    return StereoSubspace(f, v_star, e_star, s_star, theta_v, bnd)


def reduce_projective(cover: WeightedMap, g, psi) -> tuple[WeightedMap, AngleSystem]:
    """Push an angle system on the sphere cover down to the projective plane.

    ``psi_bar([s]) = (psi(s) + psi(g s)) / 2``.  Returns the quotient weighted
    map (darts numbered by smallest lift) and the averaged system.

    Raises
    ------
    InvolutionNotFree, NotAutomorphism
        Propagated from :func:`uniformize.maps.quotient_map`.
    """
    g = np.asarray(g, dtype=np.int64)
    qmap, cls = quotient_map(cover.map, g)
    th = np.asarray(cover.theta)
    if np.any(np.abs(th[cover.map.dart_edge[g]] - th[cover.map.dart_edge]) > EQ_TOL):
        raise InvolutionNotFree("weights are not invariant under the involution")
    qtheta = np.empty(qmap.n_edges)
    for e, (s, _) in enumerate(qmap.edges):
        lift = int(np.flatnonzero(cls == s)[0])
        qtheta[e] = th[cover.map.dart_edge[lift]]
    p = _psi_array(psi)
    avg = 0.5 * (p + p[g])
    qpsi = np.empty(qmap.dart_count)
    qpsi[cls] = avg
    return WeightedMap(qmap, qtheta), AngleSystem(qpsi)


def perturb_member(wm: WeightedMap, psi, rng: np.random.Generator,
                   scale: float = 0.1, stereo: StereoSubspace | None = None) -> np.ndarray:
    """Random interior member near ``psi`` along a random tangent direction.

    The step is halved until the result is an interior member.
    """
    p = _psi_array(psi)
    basis = tangent_basis(wm, stereo)
    if basis.shape[1] == 0:
        return p.copy()
    direction = basis @ rng.standard_normal(basis.shape[1])
    direction /= np.abs(direction).max()
    t = scale
    for _ in range(60):
        q = p + t * direction
        if is_member(wm, q, stereo=stereo):
            return q
        t *= 0.5
    return p.copy()
