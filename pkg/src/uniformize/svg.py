"""SVG output of disk configurations.

Elements are emitted in a fixed order (boundary, disks, half-plane lines,
quads, face points) with every coordinate printed to 9 decimals, so equal
inputs give byte-identical files.  Disks are ``<circle class="vertex">``,
face points are small ``<rect>`` markers, half-plane boundaries are
``<line>``.  The y axis points up in the model and down in SVG.
"""

from __future__ import annotations

import math
from itertools import product

import numpy as np

from .geometry import DiskConfiguration, euclidean_circle, _apply, _radial
from .maps import WeightedMap

__all__ = ["render_svg", "lattice_basis"]


def _f(x: float) -> str:
    v = round(float(x), 9) + 0.0
    return f"{v:.9f}"


def _pt(z: complex) -> str:
    return f"{_f(z.real)},{_f(-z.imag)}"


def lattice_basis(translations) -> tuple:
    """Two independent translations (shortest first), or fewer if absent."""
    ts = sorted({(round(t.real, 9), round(t.imag, 9)) for t in translations
                 if abs(t) > 1e-9}, key=lambda p: (p[0] ** 2 + p[1] ** 2, p))
    ts = [complex(a, b) for a, b in ts]
    if not ts:
        return ()
    t1 = ts[0]
    for t in ts[1:]:
        if abs((t1.conjugate() * t).imag) > 1e-9 * abs(t1) * abs(t):
            return (t1, t)
    return (t1,)


def _geodesic_path(z: complex, w: complex) -> str:
    cross = (z.conjugate() * w).imag
    if abs(cross) < 1e-12:
        return f"M {_pt(z)} L {_pt(w)}"
    a = np.array([[z.real, z.imag], [w.real, w.imag]])
    b = np.array([(1 + abs(z) ** 2) / 2, (1 + abs(w) ** 2) / 2])
    cx, cy = np.linalg.solve(a, b)
    c = complex(cx, cy)
    r = math.sqrt(max(abs(c) ** 2 - 1.0, 0.0))
    sweep = 1 if ((z - c).conjugate() * (w - c)).imag > 0 else 0
    return f"M {_pt(z)} A {_f(r)} {_f(r)} 0 0 {sweep} {_pt(w)}"


def _disks(config: DiskConfiguration):
    out = []
    for v in range(len(config.centers)):
        if v in config.lines or not np.isfinite(config.radii[v]):
            continue
        c, r = config.centers[v], float(config.radii[v])
        if config.hyperbolic:
            c, r = euclidean_circle(complex(c), r)
        out.append((v, complex(c), r))
    return out


def _quads(config: DiskConfiguration, wm: WeightedMap):
    m = wm.map
    hyper = config.hyperbolic
    out = []
    for e, (s, _) in enumerate(m.edges):
        u, w = m.tail(s), m.head(s)
        if u in config.lines or w in config.lines or not config.realized[s]:
            continue
        if not np.all(np.isfinite(config.holonomy[s])):
            continue
        fr = config.frames[s]
        a = complex(config.centers[u])
        b = config.head_center(s, m)
        right = complex(_apply(fr, _radial(config.radii[u], -config.psi[s], hyper)))
        left = complex(_apply(fr, _radial(config.radii[u], config.psi[s], hyper)))
        out.append((e, [a, right, b, left]))
    return out


def render_svg(config: DiskConfiguration, wm: WeightedMap, path=None,
               overlay: str | None = None, copies: int = 0, size: float = 800.0) -> str:
    """SVG text of ``config``; also written to ``path`` when given.

    ``overlay="quads"`` adds the quad decomposition.  ``copies = k`` draws
    the translates by ``i t1 + j t2`` for ``|i|, |j| <= k`` of a plane
    layout, ``t1, t2`` being its deck translations.
    """
    if overlay not in (None, "quads"):
        raise ValueError(f"unknown overlay {overlay!r}")
    disks = _disks(config)
    shifts = [0j]
    if copies and config.chart == "plane":
        basis = lattice_basis(config.translations())
        rng = range(-copies, copies + 1)
        if len(basis) == 2:
            shifts = [i * basis[0] + j * basis[1] for i, j in product(rng, rng)]
        elif len(basis) == 1:
            shifts = [i * basis[0] for i in rng]
        shifts.sort(key=lambda z: (abs(z) > 0, round(z.real, 9), round(z.imag, 9)))

    fpts = [(f, complex(z)) for f, z in enumerate(config.face_points)
            if np.isfinite(z.real) and np.isfinite(z.imag)]
    if config.hyperbolic:
        lo, hi = complex(-1.05, -1.05), complex(1.05, 1.05)
    else:
        xs, ys = [], []
        for sh in shifts:
            for _, c, r in disks:
                xs += [c.real + sh.real - r, c.real + sh.real + r]
                ys += [c.imag + sh.imag - r, c.imag + sh.imag + r]
            for _, z in fpts:
                xs.append(z.real + sh.real)
                ys.append(z.imag + sh.imag)
        if not xs:
            xs, ys = [-1.0, 1.0], [-1.0, 1.0]
        pad = 0.05 * max(max(xs) - min(xs), max(ys) - min(ys), 1e-9)
        lo = complex(min(xs) - pad, min(ys) - pad)
        hi = complex(max(xs) + pad, max(ys) + pad)
    width = max(hi.real - lo.real, hi.imag - lo.imag)
    stroke = _f(width / 400.0)
    mark = width / 150.0

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_f(size)}" '
        f'height="{_f(size)}" viewBox="{_f(lo.real)} {_f(-hi.imag)} {_f(hi.real - lo.real)} '
        f'{_f(hi.imag - lo.imag)}">',
        f'<g fill="none" stroke="black" stroke-width="{stroke}">',
    ]
    if config.hyperbolic:
        lines.append('<circle class="boundary" cx="0.000000000" cy="0.000000000" '
                     'r="1.000000000" stroke="gray"/>')
    for sh in shifts:
        for v, c, r in disks:
            z = c + sh
            lines.append(f'<circle class="vertex" data-v="{v}" cx="{_f(z.real)}" '
                         f'cy="{_f(-z.imag)}" r="{_f(r)}"/>')
    reach = 3.0 * width
    for w in sorted(config.lines):
        nrm, h = config.lines[w]
        foot = h * nrm
        a, b = foot + reach * 1j * nrm, foot - reach * 1j * nrm
        lines.append(f'<line class="vertex" data-v="{w}" x1="{_f(a.real)}" y1="{_f(-a.imag)}" '
                     f'x2="{_f(b.real)}" y2="{_f(-b.imag)}"/>')
    if overlay == "quads":
        lines.append(f'<g stroke="steelblue" stroke-width="{_f(width / 800.0)}">')
        for e, pts in _quads(config, wm):
            if config.hyperbolic:
                segs = [_geodesic_path(pts[i], pts[(i + 1) % 4]) for i in range(4)]
                lines.append(f'<path data-e="{e}" d="{" ".join(segs)}"/>')
            else:
                for sh in shifts:
                    ps = " ".join(_pt(z + sh) for z in pts)
                    lines.append(f'<polygon data-e="{e}" points="{ps}"/>')
        lines.append("</g>")
    lines.append("</g>")
    lines.append('<g fill="crimson" stroke="none">')
    for sh in shifts:
        for f, z in fpts:
            q = z + sh
            lines.append(f'<rect data-f="{f}" x="{_f(q.real - mark / 2)}" '
                         f'y="{_f(-q.imag - mark / 2)}" width="{_f(mark)}" height="{_f(mark)}"/>')
    lines.append("</g>")
    lines.append("</svg>")
    text = "\n".join(lines) + "\n"
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text
