"""
Star graphs, sections of TCD maps and the comparison between the affine
cluster structure of a map and the projective cluster structure of its
section.

Naming in the star graph: the white at a black ``b`` of ``G`` is ``w.b``, the
white at the boundary black between ``w_i`` and ``w_{i+1}`` is ``w.d<i>``
(it carries boundary index ``i``), and the black in a face ``f`` is ``b.f``.
Splitting ``b.f`` produces blacks ``b.f.<t>`` and whites ``w.f.<a>.<b>``.
Contracting a degree-2 black keeps the smaller of the two white ids.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .btb import BtbGraph, ban_labels, natkey
from .cluster import (
    affine_quiver,
    compare_quivers,
    projective_quiver,
    x_variables,
    y_variables,
)
from .errors import (
    MismatchFound,
    NonGenericHyperplane,
    NotMinimal,
    NotOneGeneric,
    RankDeficient,
    SpanNotLine,
)
from .projective import (
    Hyperplane,
    ProjPoint,
    Subspace,
    intersect_line_hyperplane,
    nullspace,
    rref,
)
from .tcd import TcdMap, is_one_generic, rank


@dataclass
class StarGraph:
    """Star graph of ``G`` with its bookkeeping back to ``G``.

    ``graph`` is a bipartite rotation system whose blacks may have any degree.
    ``face_state[w]`` is a corner ``(white, black)`` of the star graph lying in
    the face that corresponds to the white ``w`` of ``G``.
    """

    graph: BtbGraph
    white_of_black: dict  # black of G (or "d<i>") -> star white
    black_of_face: dict  # face of G -> star black
    face_state: dict  # white of G -> star corner
    edge_map: dict  # edge (b, w) of G -> star edge (star black, star white)
    boundary_edges: list  # (star black, star white) per boundary index
    removed: list = field(default_factory=list)  # boundary indices of removed leaf disks


def _bname(i: int) -> str:
    return "d%d" % i


def star_graph(graph: BtbGraph) -> StarGraph:
    g = graph
    n = g.n
    fos = g.face_of_state
    sw = {b: "w." + b for b in g.black_ids}
    sb = {f.id: "b." + f.id for f in g.faces}
    for i in range(1, n + 1):
        sw[_bname(i)] = "w." + _bname(i)
    black_rot = {}
    for f in g.faces:
        spokes = []
        for x, frm in f.corners:
            if isinstance(frm, int):
                # the arc just traversed carries the boundary black d<frm>
                spokes.append(sw[_bname(frm)])
            if x in g.black_rot:
                spokes.append(sw[x])
        black_rot[sb[f.id]] = spokes
    white_rot = {}
    for b, (w1, w2, w3) in g.black_rot.items():
        white_rot[sw[b]] = tuple(sb[fos[(b, w)]] for w in (w2, w3, w1))
    bedges = []
    for i in range(1, n + 1):
        f = fos[(g.W(i), i)]
        white_rot[sw[_bname(i)]] = (i, sb[f])
        bedges.append((sb[f], sw[_bname(i)]))
    removed = []
    for i in range(1, n + 1):
        if g.W(i) == g.W(i % n + 1):
            # leaf disk between glued neighbours: drop its star, keep the index
            c = sb[fos[(g.W(i), i)]]
            if len(black_rot[c]) == 1:
                del black_rot[c]
                white_rot[sw[_bname(i)]] = (i,)
                removed.append(i)
    black_rot = {c: tuple(r) for c, r in black_rot.items()}
    face_state = {}
    edge_map = {}
    for w in g.white_ids:
        bs = g.black_nbrs(w)
        if bs:
            b = bs[0]
            face_state[w] = (sw[b], sb[fos[(b, g.ccw_succ(b, w))]])
    for b, r in g.black_rot.items():
        for w in r:
            # the face across b from w
            w_next = g.ccw_succ(b, w)
            opp = fos[(b, g.ccw_succ(b, w_next))]
            edge_map[(b, w)] = (sb[opp], sw[b])
    star = BtbGraph(n, white_rot, black_rot)
    return StarGraph(star, sw, sb, face_state, edge_map, bedges, removed)


# ---------------------------------------------------------------- splitting


def fan_triangles(k: int) -> list:
    return [(0, j, j + 1) for j in range(1, k - 1)]


def random_triangles(k: int, rng: random.Random) -> list:
    """Uniformly chosen ear-by-ear triangulation of a k-gon."""
    poly = list(range(k))
    out = []
    while len(poly) > 3:
        j = rng.randrange(len(poly))
        a, b, c = poly[j - 1], poly[j], poly[(j + 1) % len(poly)]
        out.append(tuple(sorted((a, b, c))))
        poly.pop(j)
    out.append(tuple(sorted(poly)))
    return sorted(out)


def _anchor(rot: Sequence) -> tuple:
    j = min(range(len(rot)), key=lambda i: natkey(rot[i]))
    return tuple(rot[j:]) + tuple(rot[:j])


def default_tree_choice(star: StarGraph) -> dict:
    """Fan split anchored at the lowest-id white of every black of degree > 3."""
    return {c: fan_triangles(len(r)) for c, r in star.graph.black_rot.items() if len(r) > 3}


def random_tree_choice(star: StarGraph, seed=None) -> dict:
    rng = random.Random(seed)
    return {c: random_triangles(len(r), rng) for c, r in star.graph.black_rot.items() if len(r) > 3}


def _split(star: BtbGraph, tree_choice: Mapping) -> tuple:
    """Replace high-degree blacks by trivalent trees; return rotations and the corner map."""
    white_rot = {w: list(r) for w, r in star.white_rot.items()}
    black_rot = {}
    via = {}  # (star white, old star black) -> new black adjacent to it
    for c, r in star.black_rot.items():
        if len(r) <= 3:
            black_rot[c] = tuple(r)
            continue
        u = _anchor(r)
        k = len(u)
        tris = tree_choice.get(c) or fan_triangles(k)
        if len(tris) != k - 2:
            raise ValueError("tree for %s must have %d triangles" % (c, k - 2))
        side = {}
        for j in range(k):
            side[(j, (j + 1) % k)] = u[j]
        for t, (a, b, d) in enumerate(sorted(tris)):
            tid = "%s.%d" % (c, t + 1)
            items = []
            for p, q in ((a, b), (b, d), (d, a)):
                if (p, q) in side:
                    items.append(side[(p, q)])
                    via[(side[(p, q)], c)] = tid
                else:
                    x, y = sorted((p, q))
                    wid = "w.%s.%d.%d" % (c[2:], x, y)
                    items.append(wid)
                    white_rot.setdefault(wid, [])
                    white_rot[wid].append(tid)
            black_rot[tid] = tuple(items)
    for w, r in white_rot.items():
        white_rot[w] = [via.get((w, x), x) if isinstance(x, str) else x for x in r]
    # new whites of degree 2 have an order-free rotation
    return white_rot, black_rot, via


def _contract(white_rot: dict, black_rot: dict, track: Mapping) -> tuple:
    """Contract degree-2 blacks.

    Returns rotations, the white merge map and the corners ``track`` moved to
    the contracted graph (a corner at a contracted black moves to the corner
    of the merged white lying in the same face).
    """
    white_rot = {w: list(r) for w, r in white_rot.items()}
    black_rot = dict(black_rot)
    parent = {w: w for w in white_rot}
    track = dict(track)

    def find(w):
        while parent[w] != w:
            w = parent[w]
        return w

    while True:
        two = sorted((c for c, r in black_rot.items() if len(r) == 2), key=natkey)
        if not two:
            break
        c = two[0]
        u1, u2 = black_rot.pop(c)
        if u1 == u2:
            raise NotMinimal("degree-2 black with a doubled white", c)
        r1, r2 = white_rot.pop(u1), white_rot.pop(u2)
        j1, j2 = r1.index(c), r2.index(c)
        a1, a2 = r1[j1 + 1:] + r1[:j1], r2[j2 + 1:] + r2[:j2]
        keep = min(u1, u2, key=natkey)
        gone = u2 if keep == u1 else u1
        parent[gone] = keep
        white_rot[keep] = a1 + a2
        for key, (w, x) in track.items():
            if x == c:
                # the face in the corner (u1, c) continues after c at u2
                x = (a2 or a1)[0] if w == u1 else (a1 or a2)[0]
            track[key] = (keep if w in (u1, u2) else w, x)
        for b, r in black_rot.items():
            if gone in r:
                black_rot[b] = tuple(keep if x == gone else x for x in r)
    return white_rot, black_rot, {w: find(w) for w in parent}, track


@dataclass
class SectionGraph:
    graph: BtbGraph
    star: StarGraph
    tree_choice: dict
    face_of_white: dict  # white of G -> face id of the section graph
    merge: dict  # star white -> section white


def section_graph(graph: BtbGraph, tree_choice=None) -> BtbGraph:
    return section_graph_full(graph, tree_choice).graph


def section_graph_full(graph: BtbGraph, tree_choice=None) -> SectionGraph:
    """Split high-degree star blacks, contract degree-2 blacks, record the face bijection.

    ``tree_choice`` is ``None`` (fan splits), an int seed (random splits) or a
    mapping from star black to a triangulation of its polygon, given as
    triples of positions counted counterclockwise from the lowest-id white.
    """
    star = star_graph(graph)
    if tree_choice is None:
        tc = default_tree_choice(star)
    elif isinstance(tree_choice, int):
        tc = random_tree_choice(star, tree_choice)
    else:
        tc = {c: [tuple(t) for t in ts] for c, ts in tree_choice.items()}
    wr, br, via = _split(star.graph, tc)
    track = {w: (x, via.get((x, c), c)) for w, (x, c) in star.face_state.items()}
    wr, br, merge, track = _contract(wr, br, track)
    sg = BtbGraph(graph.n, wr, br)
    fos = sg.face_of_state
    face_of_white = {w: fos[st] for w, st in track.items()}
    return SectionGraph(sg, star, tc, face_of_white, merge)


# ---------------------------------------------------------------- maps


def hyperplane_basis(h: Hyperplane) -> list:
    """Fixed basis of the vectors annihilated by ``h``."""
    return nullspace([list(h.coords)])


def _coords_in(basis: Sequence, v: Sequence) -> list:
    # solve sum c_i basis_i = v
    m = len(basis)
    rows = [[basis[i][r] for i in range(m)] + [v[r]] for r in range(len(v))]
    red, piv = rref(rows)
    if m in piv:
        raise NonGenericHyperplane("point is not in the hyperplane", [str(x) for x in v])
    out = [Fraction(0)] * m
    for row, p in zip(red, piv):
        out[p] = row[m]
    return out


def to_hyperplane(h: Hyperplane, p: ProjPoint) -> ProjPoint:
    """Coordinates of a point of ``h`` in the basis ``hyperplane_basis(h)``."""
    return ProjPoint(_coords_in(hyperplane_basis(h), list(p.coords)))


def from_hyperplane(h: Hyperplane, p: ProjPoint) -> ProjPoint:
    basis = hyperplane_basis(h)
    return ProjPoint([sum(c * b[r] for c, b in zip(p.coords, basis)) for r in range(len(basis[0]))])


@dataclass
class SectionResult:
    sigma_graph: BtbGraph
    sigma_map: TcdMap
    face_of_white: dict
    tree_choice: dict
    hyperplane: Hyperplane
    points_ambient: dict = field(default_factory=dict)  # section points in the original space

    def to_dict(self) -> dict:
        return {
            "face_of_white": dict(sorted(self.face_of_white.items(), key=lambda t: natkey(t[0]))),
            "tree_choice": {c: [list(t) for t in ts] for c, ts in sorted(self.tree_choice.items())},
        }


def section_map(tmap: TcdMap, chart: Hyperplane, tree_choice=None) -> SectionResult:
    """Intersect the lines ``L(ŵ)`` with ``chart``; points are written in ``hyperplane_basis(chart)``."""
    if tmap.d < 2 or rank(tmap) < 2:
        raise NotOneGeneric("sections need rank at least 2", {"rank": rank(tmap)})
    gen = is_one_generic(tmap)
    if not gen:
        raise NotOneGeneric("map is not 1-generic", getattr(gen, "witness", None))
    g = tmap.graph
    for w, p in tmap.points.items():
        if chart.contains(p):
            raise NonGenericHyperplane("hyperplane contains a point of the map", w)
    if not g.is_minimal():
        raise NotMinimal("sections are taken of minimal graphs", None)
    s = section_graph_full(g, tree_choice)
    sg = s.graph
    white_of_face = {f: w for w, f in s.face_of_white.items()}
    fos = sg.face_of_state
    pts = {}
    amb = {}
    for v, r in sg.white_rot.items():
        faces = {fos[(v, x)] for x in r}
        ws = sorted({white_of_face[f] for f in faces if f in white_of_face}, key=natkey)
        line = Subspace.span([tmap.points[w] for w in ws]) if ws else None
        if line is None or line.dimension != 1:
            raise SpanNotLine("points around a section white do not span a line",
                              {"white": v, "span": ws})
        try:
            p = intersect_line_hyperplane(line, chart)
        except Exception as e:
            raise NonGenericHyperplane("line lies in the hyperplane", {"white": v}) from e
        amb[v] = p
        pts[v] = to_hyperplane(chart, p)
    smap = TcdMap(sg, tmap.d - 1, pts)
    return SectionResult(sg, smap, s.face_of_white, s.tree_choice, chart, amb)


def iterated_sections(tmap: TcdMap, charts: Sequence[Hyperplane], tree_choice=None) -> list:
    """Successive sections; each chart is written in the coordinates of the previous section."""
    if len(charts) > max(rank(tmap) - 1, 0):
        raise RankDeficient("at most rank - 1 nontrivial sections", {"rank": rank(tmap), "charts": len(charts)})
    out = []
    cur = tmap
    for h in charts:
        res = section_map(cur, h, tree_choice)
        out.append(res)
        cur = res.sigma_map
    return out


# ---------------------------------------------------------------- comparison


def compare_cluster_structures(tmap: TcdMap, chart: Hyperplane, tree_choice=None,
                               section: SectionResult | None = None, strict: bool = True) -> dict:
    """Affine cluster structure of ``tmap`` against the projective one of its section.

    Vertices are matched through the white-to-face bijection. Arrows between
    two frozen vertices are not compared.
    """
    res = section or section_map(tmap, chart, tree_choice)
    g = tmap.graph
    aff = affine_quiver(g, y_variables(tmap, chart))
    pro = projective_quiver(res.sigma_graph, x_variables(res.sigma_map))
    white_of_face = {f: w for w, f in res.face_of_white.items()}
    missing = sorted(set(pro.vertices) - set(white_of_face), key=natkey)
    diffs = compare_quivers(pro, aff, white_of_face) if not missing else [
        {"kind": "vertices", "only_left": missing}]
    rows = []
    for w in aff.mutable:
        f = res.face_of_white.get(w)
        rows.append({"white": w, "face": f, "Y": str(aff.values[w]),
                     "X": str(pro.values.get(f)), "equal": pro.values.get(f) == aff.values[w]})
    report = {"pass": not diffs, "variables": rows, "differences": diffs,
              "mutable": len(aff.mutable), "frozen": len(aff.frozen)}
    if strict and diffs:
        raise MismatchFound("affine and section cluster structures differ", diffs)
    return report


def ban_preserved(tmap_or_graph, tree_choice=None) -> bool:
    """``ban`` of each white of ``G`` equals ``ban`` of its face in the section graph."""
    g = tmap_or_graph.graph if isinstance(tmap_or_graph, TcdMap) else tmap_or_graph
    s = section_graph_full(g, tree_choice)
    a = ban_labels(g).white
    b = ban_labels(s.graph).face
    return all(a[w] == b[f] for w, f in s.face_of_white.items())
