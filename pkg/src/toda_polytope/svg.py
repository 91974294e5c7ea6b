"""SVG 1.1 rendering of 3x3 slices in the trace plane.

A point ``x`` on ``x1 + x2 + x3 = tr`` is mapped to the plane by the
isometry ``(a, b) = (u1 . (x - c), u2 . (x - c))`` with
``u1 = (1, -1, 0) / sqrt(2)``, ``u2 = (1, 1, -2) / sqrt(6)`` and
``c = (tr/3, tr/3, tr/3)``. Screen y points down, so ``b`` is negated.
"""

import itertools
from html import escape

import numpy as np

from .errors import DimensionMismatch
from .polytope import SpectralPolytope, extremal_vertex, facets, vertex_diagonal

U1 = np.array([1.0, -1.0, 0.0]) / np.sqrt(2.0)
U2 = np.array([1.0, 1.0, -2.0]) / np.sqrt(6.0)

WIDTH = 640
HEIGHT = 560
MARGIN = 90


def project(x, trace):
    x = np.asarray(x, dtype=float) - trace / 3.0
    return np.array([x @ U1, x @ U2])


def _fmt(v):
    return f"{v:.6g}"


def _label_set(idx):
    return "{" + ",".join(str(i + 1) for i in idx) + "}"


def _angle_order(points):
    c = points.mean(axis=0)
    ang = np.arctan2(points[:, 1] - c[1], points[:, 0] - c[0])
    return np.argsort(ang, kind="stable")


def render_svg(p: SpectralPolytope, trajectories=(), title=None) -> str:
    """SVG document showing the polytope, its labelled vertices and trajectories.

    ``trajectories`` is an iterable of point lists (each point an n-vector
    on the trace hyperplane). Edges carry the ``J(I) | J(I)^c`` split of the
    half-space they lie on.
    """
    if p.n != 3:
        raise DimensionMismatch(f"rendering needs n = 3, got n = {p.n}")
    full = np.array([extremal_vertex(pi, p.lam) for pi in itertools.permutations(range(3))])
    full2 = np.array([project(v, p.trace) for v in full])
    span = max(np.abs(full2).max(), 1e-12)
    scale = (min(WIDTH, HEIGHT) / 2 - MARGIN) / span
    cx, cy = WIDTH / 2, HEIGHT / 2

    def screen(x):
        a, b = project(x, p.trace)
        return cx + scale * a, cy - scale * b

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" '
        f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{cx}" y="24" text-anchor="middle" font-size="16">{escape(title)}</text>')

    order = _angle_order(full2)
    pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in (screen(full[i]) for i in order))
    out.append(f'<polygon class="permutohedron" points="{pts}" fill="none" '
               'stroke="#bbbbbb" stroke-dasharray="4,4"/>')

    verts = p.extremal_vertices
    if len(verts) >= 3:
        vo = _angle_order(np.array([project(v, p.trace) for v in verts]))
        pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in (screen(verts[i]) for i in vo))
        out.append(f'<polygon class="polytope" points="{pts}" fill="#dde8f6" stroke="#1f4e8c" stroke-width="2"/>')

        for h in facets(p):
            on = [v for v in verts if abs(h.slack(v)) <= 1e-8]
            if len(on) < 2:
                continue
            (x0, y0), (x1, y1) = screen(on[0]), screen(on[-1])
            mx, my = (x0 + x1) / 2, (y0 + y1) / 2
            # push the label outward from the centre
            dx, dy = mx - cx, my - cy
            norm = max(np.hypot(dx, dy), 1e-12)
            lx, ly = mx + 22 * dx / norm, my + 22 * dy / norm
            rest = tuple(j for j in range(3) if j not in h.j_set)
            text = f"J={_label_set(h.j_set)}|{_label_set(rest)}"
            out.append(f'<text class="edge-label" x="{_fmt(lx)}" y="{_fmt(ly)}" '
                       f'text-anchor="middle" font-size="11" fill="#555555">{escape(text)}</text>')

    for pi, v in zip(p.accessible_perms, verts):
        x, y = screen(v)
        d = vertex_diagonal(pi, p.lam)
        dx, dy = x - cx, y - cy
        norm = max(np.hypot(dx, dy), 1e-12)
        lx, ly = x + 30 * dx / norm, y + 30 * dy / norm + 4
        label = "diag(" + ",".join(_fmt(c) for c in d) + ")"
        out.append(f'<circle class="vertex" cx="{_fmt(x)}" cy="{_fmt(y)}" r="4" fill="#1f4e8c"/>')
        out.append(f'<text class="vertex-label" x="{_fmt(lx)}" y="{_fmt(ly)}" '
                   f'text-anchor="middle" font-size="12">{escape(label)}</text>')

    for traj in trajectories:
        pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in (screen(v) for v in traj))
        out.append(f'<polyline class="trajectory" points="{pts}" fill="none" stroke="#c0392b" stroke-width="1.5"/>')

    out.append("</svg>")
    return "\n".join(out) + "\n"
