"""Maximization of the functional over the coherent polytope.

Damped Newton ascent in coordinates of an orthonormal basis ``B`` of the
tangent space: with reduced gradient ``g = B^T grad`` and reduced Hessian
``H = B^T hess B`` the step solves ``(-H) x = g``.  When ``-H`` is not
positive definite (Cholesky fails) the step falls back to ``x = g``.  A
backtracking line search keeps every iterate strictly interior and accepts
only ascent steps.  Once the predicted gain drops to the roundoff level of
``L`` itself, function values can no longer rank iterates and a step is
accepted if it stays interior and does not lose more than roundoff.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from .angles import (
    AngleSystem,
    dart_gradient,
    functional_value,
    hat_data,
    hessian,
    is_member,
    stereographic_subspace,
    tangent_basis,
)
from .errors import MaxIterExceeded, NotInterior, UnsupportedMode
from .geometry import leg_data
from .maps import WeightedMap

__all__ = [
    "SolveOptions",
    "SolveResult",
    "CriticalityCertificate",
    "maximize",
    "certify_critical",
    "glue_ratios",
]


@dataclass(frozen=True)
class SolveOptions:
    grad_tol: float = 1e-10
    max_iter: int = 200
    line_search_shrink: float = 0.5
    interior_margin: float = 1e-12
    armijo: float = 1e-4
    min_step: float = 1e-20

    def __post_init__(self):
        if not self.grad_tol > 0:
            raise ValueError("grad_tol must be positive")
        if not 0 < self.line_search_shrink < 1:
            raise ValueError("line_search_shrink must lie in (0, 1)")
        if self.max_iter < 0:
            raise ValueError("max_iter must be non-negative")


@dataclass
class SolveResult:
    system: AngleSystem
    iterations: int
    grad_norm: float
    value: float
    converged: bool
    trace: list = field(default_factory=list)  # (value, grad_norm, step, newton)

    @property
    def psi(self) -> np.ndarray:
        return self.system.psi


@dataclass(frozen=True)
class CriticalityCertificate:
    reduced_grad_norm: float
    leg_spread: np.ndarray
    max_spread: float
    grad_tol: float = 1e-10
    spread_tol: float = 1e-7

    @property
    def passed(self) -> bool:
        return self.reduced_grad_norm < self.grad_tol and self.max_spread < self.spread_tol


def _setup(wm: WeightedMap, psi0: AngleSystem):
    m = wm.map
    if not m.orientable:
        raise UnsupportedMode("solve the orientable double cover and reduce")
    stereo = None
    if psi0.mode == "stereo":
        stereo = stereographic_subspace(wm, psi0.face)
    elif m.chi > 0:
        raise UnsupportedMode("sphere maps need a stereographic face")
    basis = tangent_basis(wm, stereo)
    anti = stereo is not None or m.chi == 0
    support = np.flatnonzero(np.any(basis != 0.0, axis=1))
    return stereo, basis, anti, support


def _reduced_gradient(wm, p, basis, anti, support):
    return basis.T @ dart_gradient(wm, p, antisymmetric=anti, darts=support)


def maximize(wm: WeightedMap, psi0, opts: SolveOptions = SolveOptions(),
             raise_on_fail: bool = True) -> SolveResult:
    """Critical point of the functional, starting from an interior member.

    Raises
    ------
    NotInterior
        ``psi0`` is not an interior member.
    UnsupportedMode
        Full-mode sphere input or a non-orientable map.
    MaxIterExceeded
        No convergence within ``max_iter`` steps or the line search stalled;
        the best iterate is attached as ``.result``.
    """
    asys = psi0 if isinstance(psi0, AngleSystem) else AngleSystem(psi0)
    stereo, basis, anti, support = _setup(wm, asys)
    rep = is_member(wm, asys, stereo=stereo, margin=opts.interior_margin)
    if not rep.member:
        raise NotInterior(f"start is not an interior member: {rep.violations[:3]}")

    def interior(q):
        return is_member(wm, q, stereo=stereo, margin=opts.interior_margin).member

    p = asys.psi.copy()
    val = functional_value(wm, asys.with_psi(p))
    trace = []
    it = 0
    gnorm = np.inf
    stalled = False
    while True:
        g = _reduced_gradient(wm, p, basis, anti, support)
        gnorm = float(np.abs(g).max(initial=0.0))
        trace.append((val, gnorm))
        if gnorm < opts.grad_tol or it >= opts.max_iter:
            break
        h = basis.T @ hessian(wm, p, antisymmetric=anti, darts=support) @ basis
        try:
            x = cho_solve(cho_factor(-h), g)
            newton = True
        except LinAlgError:
            x = g.copy()
            newton = False
        slope = float(g @ x)
        if not slope > 0:
            x, slope, newton = g.copy(), float(g @ g), False
        step = basis @ x
        t = 1.0
        accepted = False
        while t >= opts.min_step:
            q = p + t * step
            if interior(q):
                qv = functional_value(wm, asys.with_psi(q))
                gain = t * slope
                if gain <= 1e-13 * max(1.0, abs(val)):
                    ok = qv >= val - 1e-12 * max(1.0, abs(val))
                else:
                    ok = qv >= val + opts.armijo * gain
                if ok:
                    accepted = True
                    break
            t *= opts.line_search_shrink
        if not accepted:
            stalled = True
            break
        p, val = q, qv
        it += 1
        trace[-1] = trace[-1] + (t, newton)
    result = SolveResult(asys.with_psi(p), it, gnorm, val, gnorm < opts.grad_tol, trace)
    if not result.converged and raise_on_fail:
        why = "line search stalled" if stalled else f"no convergence in {opts.max_iter} steps"
        raise MaxIterExceeded(f"{why}; gradient norm {gnorm:.3e}", result)
    return result


def glue_ratios(wm: WeightedMap, psi) -> np.ndarray:
    """Per dart ``s``: ``sin|eta| sin psi_hat(-s) / (sin psi_hat(s) sin gamma_hat)``.

    In the hyperbolic case this is ``tanh^2(rho/2)`` of the tail disk, so
    it must agree among all darts at a vertex at a critical point.
    """
    m = wm.map
    p = psi.psi if isinstance(psi, AngleSystem) else np.asarray(psi, dtype=float)
    hd = hat_data(wm, p)
    e = m.dart_edge
    return (np.abs(np.sin(hd.eta_hat[e])) * np.sin(hd.psi_hat[m.opposite])
            / (np.sin(hd.psi_hat) * np.sin(hd.gamma_hat[e])))


def certify_critical(wm: WeightedMap, psi, grad_tol: float = 1e-10,
                     spread_tol: float = 1e-7) -> CriticalityCertificate:
    """Reduced gradient norm and per-vertex leg spread of ``psi``."""
    asys = psi if isinstance(psi, AngleSystem) else AngleSystem(psi)
    stereo, basis, anti, support = _setup(wm, asys)
    g = _reduced_gradient(wm, asys.psi, basis, anti, support)
    legs = leg_data(wm, asys.psi, stereo)
    spread = np.nan_to_num(legs.spread, nan=0.0)
    return CriticalityCertificate(float(np.abs(g).max(initial=0.0)), spread,
                                  float(spread.max(initial=0.0)), grad_tol, spread_tol)
