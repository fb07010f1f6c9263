"""Checks that a weight function can come from a circle pattern.

Face boundaries must have total exterior angle ``sum(pi - theta) = 2 pi``
exactly.  Every other simple closed edge path on a sphere must have a
strictly larger total.  General contractible loops are not enumerated;
beyond the sphere search the flow test of :mod:`uniformize.flow` serves as
the deciding certificate, and ``undecided`` is reported when neither
applies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import Infeasible, UnsupportedMode
from .maps import SurfaceMap, WeightedMap

__all__ = ["ValidationReport", "validate_weights", "simple_cycles"]

FACE_TOL = 1e-9


@dataclass
class ValidationReport:
    face_residuals: np.ndarray
    violated_loops: list = field(default_factory=list)
    flow_certificate: object = None
    flow_checked: bool = False
    loops_checked: bool = False
    verdict: str = "undecided"
    notes: list = field(default_factory=list)

    @property
    def max_face_residual(self) -> float:
        return float(np.abs(self.face_residuals).max(initial=0.0))


def simple_cycles(m: SurfaceMap, max_len: int):
    """Edge sets of all simple cycles with at most ``max_len`` edges.

    Parallel edges are distinct, so two of them form a cycle of length 2.
    Each cycle is reported once, as a tuple of edge ids in path order.
    """
    adj = [[] for _ in range(m.n_vertices)]
    for e, (s, _) in enumerate(m.edges):
        u, w = m.tail(s), m.head(s)
        adj[u].append((w, e))
        adj[w].append((u, e))
    seen = set()
    out = []

    def dfs(start, v, path_v, path_e):
        for w, e in adj[v]:
            if e in path_e:
                continue
            if w == start and len(path_e) >= 1:
                key = frozenset(path_e + [e])
                if len(key) >= 2 and key not in seen:
                    seen.add(key)
                    out.append(tuple(path_e + [e]))
                continue
            if w <= start or w in path_v or len(path_e) + 1 >= max_len:
                continue
            path_v.append(w)
            path_e.append(e)
            dfs(start, w, path_v, path_e)
            path_v.pop()
            path_e.pop()

    for start in range(m.n_vertices):
        dfs(start, start, [start], [])
    return out


def validate_weights(wm: WeightedMap, loop_search_bound: int = 8,
                     flow_check: bool = True, tol: float = FACE_TOL) -> ValidationReport:
    """Face equalities, bounded loop search on spheres, optional flow test."""
    m = wm.map
    th = wm.theta
    res = np.array([sum(math.pi - th[m.dart_edge[d]] for d in face) - 2 * math.pi
                    for face in m.faces])
    report = ValidationReport(face_residuals=res)

    if m.chi == 2 and m.orientable and loop_search_bound > 0:
        face_sets = {frozenset(int(m.dart_edge[d]) for d in face) for face in m.faces}
        for cyc in simple_cycles(m, loop_search_bound):
            if frozenset(cyc) in face_sets:
                continue
            total = float(sum(math.pi - th[e] for e in cyc))
            if total <= 2 * math.pi + tol:
                report.violated_loops.append((cyc, total))
        report.loops_checked = True

    if flow_check:
        from .flow import initial_angle_system

        try:
            if m.chi == 2:
                best = None
                for f in range(m.n_faces):
                    try:
                        initial_angle_system(wm, face=f)
                    except Infeasible as exc:
                        c = exc.certificate
                        if c is not None and (best is None or len(c.nodes) <= len(best.nodes)):
                            best = c
                        elif best is None:
                            report.notes.append(f"face {f}: {exc}")
                report.flow_certificate = best
                if best is None and report.notes:
                    report.flow_certificate = False
            else:
                initial_angle_system(wm)
            report.flow_checked = True
        except Infeasible as exc:
            report.flow_certificate = exc.certificate
            report.flow_checked = True
            if exc.certificate is None:
                report.notes.append(str(exc))
        except UnsupportedMode as exc:
            report.notes.append(str(exc))

    flow_failed = report.flow_checked and (report.flow_certificate is not None or report.notes)
    if report.max_face_residual >= tol or report.violated_loops or flow_failed:
        report.verdict = "invalid"
    elif report.loops_checked or report.flow_checked:
        report.verdict = "valid"
    if report.flow_certificate is False:
        report.flow_certificate = None
    return report
