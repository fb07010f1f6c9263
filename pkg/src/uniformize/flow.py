"""Flow diagrams and the construction of a first coherent angle system.

The diagram has a node per vertex, per edge and one extra node ``w``.
Arcs and bounds:

* every dart ``s`` gives an arc ``|s| -> tail(s)`` with flow in ``[eps, inf)``;
* every edge gives ``w -> e`` with flow in ``(-inf, theta(e) + tau]``;
* every vertex gives ``v -> w`` with flow exactly ``pi``.

Kirchhoff at the vertex nodes is the vertex-sum condition, and at the edge
nodes it says ``psi(s) + psi(-s) = flow(w, e)``, so the dart flows of any
feasible circulation form an angle system whose excess ``eta_hat`` is at
most ``tau / 2``.  The stereographic variant keeps only ``V*, E*, S*`` and
uses ``theta(v)`` as the vertex demand with ``tau = 0``.

Feasibility is decided by the textbook reduction of circulations with lower
bounds to one max-flow problem.  When it fails, the residual-reachable set
``Z`` of the super source is a cut with more forced flow in than allowed
out, which is returned as a certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from .angles import AngleSystem, StereoSubspace, is_member, stereographic_subspace
from .errors import BadSigns, Infeasible, NonpositiveThetaV, UnsupportedMode
from .maps import WeightedMap

__all__ = [
    "OMEGA",
    "Arc",
    "FlowNetwork",
    "CutCertificate",
    "FlowResult",
    "build_flow_network",
    "find_compatible_flow",
    "evaluate_cut",
    "initial_angle_system",
    "schedule",
]

OMEGA = ("w",)
FEAS_TOL = 1e-12
MAX_ROUNDS = 60


@dataclass(frozen=True)
class Arc:
    tail: tuple
    head: tuple
    lower: float
    upper: float
    kind: str  # "dart" | "edge" | "vertex"
    ref: int


@dataclass(frozen=True)
class FlowNetwork:
    nodes: tuple
    arcs: tuple
    epsilon: float
    tau: float
    stereo_face: int | None = None

    @property
    def cap(self) -> float:
        """Stand-in for infinite bounds; exceeds any feasible arc flow."""
        n_v = sum(1 for x in self.nodes if x[0] == "v")
        finite = [abs(b) for a in self.arcs for b in (a.lower, a.upper) if math.isfinite(b)]
        return math.pi * max(n_v, 1) + sum(finite) + 1.0


@dataclass(frozen=True)
class CutCertificate:
    """Node set ``Z`` with ``lower_sum`` into ``Z`` above ``upper_sum`` out of it."""

    nodes: tuple
    lower_sum: float
    upper_sum: float
    epsilon: float = float("nan")
    tau: float = float("nan")

    @property
    def gap(self) -> float:
        return self.lower_sum - self.upper_sum

    def to_dict(self) -> dict:
        return {
            "nodes": [list(x) for x in self.nodes],
            "lower_sum": self.lower_sum,
            "upper_sum": self.upper_sum,
            "epsilon": self.epsilon,
            "tau": self.tau,
        }


@dataclass
class FlowResult:
    feasible: bool
    flow: dict = field(default_factory=dict)  # arc index -> value
    certificate: CutCertificate | None = None


def build_flow_network(wm: WeightedMap, epsilon: float, tau: float = 0.0,
                       stereo: StereoSubspace | None = None) -> FlowNetwork:
    """Flow diagram of ``wm`` (or of its stereographic restriction).

    Raises
    ------
    BadSigns
        ``epsilon <= 0``, ``tau`` of the wrong sign for the curvature, or a
        nonzero ``tau`` in stereographic mode.
    """
    m = wm.map
    if not epsilon > 0:
        raise BadSigns(f"epsilon must be positive, got {epsilon!r}")
    chi = m.chi
    if stereo is not None:
        if tau != 0:
            raise BadSigns("stereographic networks use tau = 0")
    elif chi == 0 and tau != 0:
        raise BadSigns("chi = 0 needs tau = 0")
    elif chi != 0 and tau != 0 and np.sign(tau) != np.sign(chi):
        raise BadSigns(f"sign(tau) must equal sign(chi) = {int(np.sign(chi))}")

    if stereo is None:
        verts = range(m.n_vertices)
        edges = range(m.n_edges)
        darts = range(m.dart_count)
        demand = {v: math.pi for v in verts}
    else:
        verts, edges, darts = stereo.v_star, stereo.e_star, stereo.s_star
        demand = dict(stereo.theta_v)

    nodes = [("v", int(v)) for v in verts] + [("e", int(e)) for e in edges] + [OMEGA]
    arcs = []
    for d in darts:
        arcs.append(Arc(("e", int(m.dart_edge[d])), ("v", m.tail(d)),
                        float(epsilon), math.inf, "dart", int(d)))
    for e in edges:
        arcs.append(Arc(OMEGA, ("e", int(e)), -math.inf,
                        float(wm.theta[e] + tau), "edge", int(e)))
    for v in verts:
        arcs.append(Arc(("v", int(v)), OMEGA, float(demand[v]), float(demand[v]),
                        "vertex", int(v)))
    return FlowNetwork(tuple(nodes), tuple(arcs), float(epsilon), float(tau),
                       None if stereo is None else stereo.face)


def evaluate_cut(net: FlowNetwork, z) -> tuple[float, float]:
    """``(sum of lower bounds into Z, sum of upper bounds out of Z)``."""
    z = set(map(tuple, z))
    low = up = 0.0
    for a in net.arcs:
        if a.head in z and a.tail not in z:
            low += a.lower
        elif a.tail in z and a.head not in z:
            up += a.upper
    return low, up


def find_compatible_flow(net: FlowNetwork) -> FlowResult:
    """Feasible circulation or a violated cut.

    Bounds are capped at :attr:`FlowNetwork.cap`; arcs are inserted in
    index order so the result is reproducible.
    """
    cap = net.cap
    src, snk = ("src",), ("snk",)
    g = nx.DiGraph()
    g.add_node(src)
    for x in net.nodes:
        g.add_node(x)
    g.add_node(snk)
    excess = {x: 0.0 for x in net.nodes}
    lowers = []
    for a in net.arcs:
        lo = max(a.lower, -cap)
        hi = min(a.upper, cap)
        lowers.append(lo)
        if hi < lo - FEAS_TOL:
            z = (a.tail,)
            low, up = evaluate_cut(net, z)
            return FlowResult(False, certificate=CutCertificate(z, low, up, net.epsilon, net.tau))
        g.add_edge(a.tail, a.head, capacity=max(hi - lo, 0.0))
        excess[a.head] += lo
        excess[a.tail] -= lo
    need = 0.0
    for x in net.nodes:
        if excess[x] > 0:
            g.add_edge(src, x, capacity=excess[x])
            need += excess[x]
        elif excess[x] < 0:
            g.add_edge(x, snk, capacity=-excess[x])

    residual = nx.algorithms.flow.edmonds_karp(g, src, snk)
    value = residual.graph["flow_value"]
    tol = FEAS_TOL * max(1.0, need)
    if value >= need - tol:
        # zero-capacity arcs are absent from the residual network
        flow = {i: lowers[i] + residual[a.tail].get(a.head, {}).get("flow", 0.0)
                for i, a in enumerate(net.arcs)}
        return FlowResult(True, flow=flow)

    reach = {src}
    stack = [src]
    while stack:
        x = stack.pop()
        for y, attr in residual[x].items():
            if y not in reach and attr["capacity"] - attr["flow"] > tol:
                reach.add(y)
                stack.append(y)
    z = tuple(x for x in net.nodes if x in reach)
    low, up = evaluate_cut(net, z)
    return FlowResult(False, certificate=CutCertificate(z, low, up, net.epsilon, net.tau))


def schedule(wm: WeightedMap, k: int, stereo: bool = False) -> tuple[float, float]:
    """``(eps_k, tau_k)``: both halve every round from ``pi/4`` and ``min(theta)/2``."""
    eps = 0.25 * math.pi * 2.0**-k
    if stereo:
        return eps, 0.0
    sgn = int(np.sign(wm.map.chi))
    return eps, sgn * 0.5 * float(wm.theta.min()) * 2.0**-k


def _pick(best: CutCertificate | None, cert: CutCertificate) -> CutCertificate:
    if best is None or len(cert.nodes) <= len(best.nodes):
        return cert
    return best


def _solve_schedule(wm: WeightedMap, stereo: StereoSubspace | None):
    best = None
    for k in range(MAX_ROUNDS + 1):
        eps, tau = schedule(wm, k, stereo is not None)
        net = build_flow_network(wm, eps, tau, stereo)
        res = find_compatible_flow(net)
        if res.feasible:
            return net, res, None
        best = _pick(best, res.certificate)
    return None, None, best


def _darts_from_flow(wm: WeightedMap, net: FlowNetwork, res: FlowResult,
                     stereo: StereoSubspace | None) -> np.ndarray:
    psi = (np.full(wm.map.dart_count, np.nan) if stereo is None
           else stereo.boundary_psi.copy())
    for i, a in enumerate(net.arcs):
        if a.kind == "dart":
            psi[a.ref] = res.flow[i]
    if stereo is not None:
        # Kirchhoff forces psi(s) + psi(-s) = theta; remove max-flow roundoff
        m = wm.map
        for e in stereo.e_star:
            s, t = m.edges[e]
            r = 0.5 * (psi[s] + psi[t] - wm.theta[e])
            psi[s] -= r
            psi[t] -= r
    return psi


def initial_angle_system(wm: WeightedMap, face: int | None = None) -> AngleSystem:
    """First interior member of the coherent polytope.

    With ``face`` the f-stereographic problem is solved; otherwise the full
    problem.  Sphere maps in full mode average the stereographic systems of
    all faces.

    Raises
    ------
    Infeasible
        No flow for any round of the schedule; ``.certificate`` holds the
        smallest violated cut found (latest among equals).
    UnsupportedMode
        Non-orientable maps; solve their orientable double cover instead.
    """
    m = wm.map
    if not m.orientable:
        raise UnsupportedMode("solve the orientable double cover and reduce")
    if face is not None or m.chi > 0:
        faces = [face] if face is not None else range(m.n_faces)
        systems = []
        for f in faces:
            try:
                st = stereographic_subspace(wm, f)
            except NonpositiveThetaV as exc:
                # the k = 0 network already exhibits the bad vertex as a cut
                st = stereographic_subspace(wm, f, strict=False)
                eps, _ = schedule(wm, 0, True)
                res = find_compatible_flow(build_flow_network(wm, eps, 0.0, st))
                raise Infeasible(f"face {f}: {exc}", res.certificate) from exc
            net, res, cert = _solve_schedule(wm, st)
            if res is None:
                raise Infeasible(f"no compatible flow for face {f}", cert)
            systems.append((f, st, _darts_from_flow(wm, net, res, st)))
        if face is not None:
            f, st, psi = systems[0]
            out = AngleSystem(psi, "stereo", f)
            rep = is_member(wm, out, stereo=st)
        else:
            out = AngleSystem(np.mean([p for _, _, p in systems], axis=0))
            rep = is_member(wm, out)
    else:
        net, res, cert = _solve_schedule(wm, None)
        if res is None:
            raise Infeasible("no compatible flow", cert)
        psi = _darts_from_flow(wm, net, res, None)
        out = AngleSystem(psi)
        rep = is_member(wm, out)
    if not rep.member:
        raise Infeasible(f"flow point is not an interior member: {rep.violations[:3]}")
    return out
