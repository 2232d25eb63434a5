"""
Deterministic SVG drawings of BTB graphs and plabic tilings.

Positions are presentational only; the rotation system stays authoritative.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable
from xml.sax.saxutils import escape

from .btb import BtbGraph, LatticeLabel, ban_labels, natkey
from .lattice import position

SIZE = 600
MARGIN = 40
RELAX_STEPS = 400


def _header(title: str) -> list:
    return [
        '<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d" viewBox="0 0 %d %d">'
        % (SIZE, SIZE, SIZE, SIZE),
        "<title>%s</title>" % escape(title),
        '<rect width="100%" height="100%" fill="white"/>',
    ]


def _fmt(p) -> tuple:
    return ("%.2f" % float(p[0]), "%.2f" % float(p[1]))


def boundary_angle(i: int, n: int) -> float:
    # index 1 at the top, increasing clockwise on screen
    return -math.pi / 2 + 2 * math.pi * (i - 1) / n


def graph_layout(g: BtbGraph) -> dict:
    """Boundary whites on a circle, everything else at barycentres (Tutte style)."""
    c = SIZE / 2
    r = SIZE / 2 - MARGIN
    pos, fixed = {}, set()
    for w in g.white_ids:
        gaps = g.gaps(w)
        if gaps:
            xs = [c + r * math.cos(boundary_angle(i, g.n)) for i in gaps]
            ys = [c + r * math.sin(boundary_angle(i, g.n)) for i in gaps]
            pos[w] = (sum(xs) / len(xs), sum(ys) / len(ys))
            fixed.add(w)
    nbrs = {v: [] for v in g.white_ids + g.black_ids}
    for b, w in g.edges:
        nbrs[b].append(w)
        nbrs[w].append(b)
    free = sorted((v for v in nbrs if v not in fixed), key=natkey)
    for v in free:
        pos[v] = (c, c)
    if not fixed:
        for k, v in enumerate(free):
            a = 2 * math.pi * k / max(len(free), 1)
            pos[v] = (c + r / 2 * math.cos(a), c + r / 2 * math.sin(a))
        return pos
    for _ in range(RELAX_STEPS):
        for v in free:
            ns = nbrs[v]
            if ns:
                pos[v] = (sum(pos[u][0] for u in ns) / len(ns), sum(pos[u][1] for u in ns) / len(ns))
    return pos


def render_graph(g: BtbGraph, title: str = "BTB graph", show_labels: bool = True) -> str:
    pos = graph_layout(g)
    c = SIZE / 2
    r = SIZE / 2 - MARGIN
    out = _header(title)
    out.append('<circle cx="%.2f" cy="%.2f" r="%.2f" fill="none" stroke="#999" stroke-dasharray="4 4"/>' % (c, c, r))
    for b, w in g.edges:
        (x1, y1), (x2, y2) = _fmt(pos[b]), _fmt(pos[w])
        out.append('<line x1="%s" y1="%s" x2="%s" y2="%s" stroke="black" stroke-width="1.5"/>' % (x1, y1, x2, y2))
    for i in range(1, g.n + 1):
        a = boundary_angle(i, g.n)
        x, y = _fmt((c + (r + 18) * math.cos(a), c + (r + 18) * math.sin(a)))
        out.append('<text x="%s" y="%s" font-size="12" text-anchor="middle" fill="#555">%d</text>' % (x, y, i))
    labels = {}
    if show_labels:
        try:
            labels = ban_labels(g).white
        except Exception:
            labels = {}
    for b in g.black_ids:
        x, y = _fmt(pos[b])
        out.append('<circle class="black" id="%s" cx="%s" cy="%s" r="5" fill="black"/>' % (escape(b), x, y))
    for w in g.white_ids:
        x, y = _fmt(pos[w])
        out.append('<circle class="white" id="%s" cx="%s" cy="%s" r="7" fill="white" stroke="black" stroke-width="1.5"/>'
                   % (escape(w), x, y))
        text = labels[w].name() if w in labels else w
        out.append('<text x="%s" y="%.2f" font-size="10" text-anchor="middle">%s</text>'
                   % (x, float(y) - 10, escape(text)))
    out.append("</svg>")
    return "\n".join(out) + "\n"


def tiling_positions(labels: Iterable, n: int) -> dict:
    """Exact tiling coordinates ``v(z)`` scaled to the viewport."""
    raw = {z: position(z, n) for z in labels}
    xs = [p[0] for p in raw.values()]
    ys = [p[1] for p in raw.values()]
    span = max(max(xs) - min(xs), max(ys) - min(ys), 1)
    s = Fraction(SIZE - 2 * MARGIN) / span
    ox = (SIZE - s * (max(xs) + min(xs))) / 2
    oy = (SIZE - s * (max(ys) + min(ys))) / 2
    # screen y grows downwards
    return {z: (ox + s * p[0], SIZE - (oy + s * p[1])) for z, p in raw.items()}


def tiling_cliques(labels: Iterable) -> tuple:
    """``(black, face)`` cliques with at least three members among ``labels``."""
    labs = sorted(set(labels), key=lambda z: z.z, reverse=True)
    black, face = {}, {}
    for z in labs:
        for i, c in enumerate(z.z):
            if c:
                k = list(z.z)
                k[i] -= 1
                black.setdefault(tuple(k), []).append((i, z))
            k = list(z.z)
            k[i] += 1
            face.setdefault(tuple(k), []).append((i, z))
    pick = lambda d: {k: [z for _, z in sorted(v, key=lambda t: t[0])] for k, v in d.items() if len(v) >= 3}
    return pick(black), pick(face)


def render_tiling(labels: Iterable, n: int | None = None, title: str = "plabic tiling") -> str:
    """Vertices ``v(z)`` for every label; clique polygons where three or more labels share one."""
    labs = sorted({z if isinstance(z, LatticeLabel) else LatticeLabel(tuple(z)) for z in labels},
                  key=lambda z: z.z, reverse=True)
    n = n or labs[0].n
    pos = tiling_positions(labs, n)
    black, face = tiling_cliques(labs)
    out = _header(title)
    for cls, cliques, fill in (("black-clique", black, "#bbb"), ("face-clique", face, "none")):
        for k in sorted(cliques):
            pts = " ".join("%s,%s" % _fmt(pos[z]) for z in cliques[k])
            out.append('<polygon class="%s" points="%s" fill="%s" stroke="black" stroke-width="1"/>'
                       % (cls, pts, fill))
    for z in labs:
        x, y = _fmt(pos[z])
        out.append('<circle class="tiling-vertex" cx="%s" cy="%s" r="5" fill="white" stroke="black"/>' % (x, y))
        out.append('<text x="%s" y="%.2f" font-size="11" text-anchor="middle">%s</text>'
                   % (x, float(y) - 9, escape(z.name())))
    out.append("</svg>")
    return "\n".join(out) + "\n"
