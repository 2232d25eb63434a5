"""
Resplit and spider moves on BTB graphs, VRCs and TCD maps, plus move-graph
exploration and cycle consistency checks.

Local labels follow one convention throughout.

Resplit at an internal white ``w0`` with blacks ``B1, B2``: reading ``B1``
counterclockwise from ``w0`` gives ``(w0, w1, w2)`` and ``B2`` gives
``(w0, w3, w4)``. Afterwards ``B1 = (w0, w2, w3)`` and ``B2 = (w0, w4, w1)``.

Spider at a quadrilateral face traced counterclockwise as ``w1, b2, w3, b4``
(``w1`` the smaller white id): ``b2 = (w3, w1, w2)`` and ``b4 = (w1, w3, w4)``
counterclockwise. Afterwards ``b2 = (w1, w2, w4)`` and ``b4 = (w3, w4, w2)``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .btb import BtbGraph, natkey
from .errors import (
    ConsistencyViolation,
    IndeterminateMove,
    InvalidMoveSite,
    MutationSingular,
    NodeLimitExceeded,
)
from .projective import ProjPoint, multi_ratio, relation
from .tcd import TcdMap, Vrc, _weights_for

DEFAULT_MAX_NODES = 10 ** 5


@dataclass(frozen=True, order=True)
class MoveSite:
    kind: str  # "resplit" | "spider"
    target: str

    def to_dict(self) -> dict:
        return {"kind": self.kind, "target": self.target}


# ---------------------------------------------------------------- sites


def _resplit_locals(g: BtbGraph, w0: str):
    if w0 not in g.white_rot or g.is_boundary(w0) or g.degree(w0) != 2:
        raise InvalidMoveSite("resplit needs an internal white of degree 2", w0)
    B1, B2 = g.black_nbrs(w0)
    _, w1, w2 = g.rotated(B1, w0)
    _, w3, w4 = g.rotated(B2, w0)
    if len({w1, w2, w3, w4}) != 4:
        raise InvalidMoveSite("resplit needs four distinct neighbouring whites", w0)
    return B1, B2, (w1, w2, w3, w4)


def _spider_locals(g: BtbGraph, fid: str):
    f = g.face_by_id.get(fid)
    if f is None:
        raise InvalidMoveSite("unknown face", fid)
    if f.boundary or f.degree != 4:
        raise InvalidMoveSite("spider needs an internal face of degree 4", fid)
    vs = list(f.vertices)
    whites = [v for v in vs if v in g.white_rot]
    blacks = [v for v in vs if v in g.black_rot]
    if len(set(whites)) != 2 or len(set(blacks)) != 2:
        raise InvalidMoveSite("spider face must have two distinct whites and blacks", fid)
    w1 = min(whites, key=natkey)
    k = vs.index(w1)
    vs = vs[k:] + vs[:k]
    _, b2, w3, b4 = vs
    w2 = g.rotated(b2, w3)[2]
    w4 = g.rotated(b4, w1)[2]
    if w2 == w4:
        raise InvalidMoveSite("spider would create a double edge", fid)
    return b2, b4, (w1, w2, w3, w4)


def find_move_sites(graph: BtbGraph) -> list:
    """All resplit sites (internal degree-2 whites) and spider sites (internal quad faces)."""
    out = []
    for w in graph.white_ids:
        try:
            _resplit_locals(graph, w)
            out.append(MoveSite("resplit", w))
        except InvalidMoveSite:
            pass
    for f in graph.internal_faces:
        try:
            _spider_locals(graph, f.id)
            out.append(MoveSite("spider", f.id))
        except InvalidMoveSite:
            pass
    return out


# ---------------------------------------------------------------- graph level


def _swap(rot, old, new):
    return tuple(new if x == old else x for x in rot)


def resplit_graph(graph: BtbGraph, w0: str) -> BtbGraph:
    B1, B2, (w1, w2, w3, w4) = _resplit_locals(graph, w0)
    wr = dict(graph.white_rot)
    br = dict(graph.black_rot)
    br[B1] = (w0, w2, w3)
    br[B2] = (w0, w4, w1)
    wr[w1] = _swap(wr[w1], B1, B2)
    wr[w3] = _swap(wr[w3], B2, B1)
    return graph.replace(wr, br)


def _drop(rot, x):
    return tuple(y for y in rot if y != x)


def _expand(rot, old, pair):
    out = []
    for y in rot:
        out.extend(pair if y == old else (y,))
    return tuple(out)


def spider_graph(graph: BtbGraph, fid: str) -> BtbGraph:
    b2, b4, (w1, w2, w3, w4) = _spider_locals(graph, fid)
    wr = dict(graph.white_rot)
    br = dict(graph.black_rot)
    br[b2] = (w1, w2, w4)
    br[b4] = (w3, w4, w2)
    wr[w1] = _drop(wr[w1], b4)
    wr[w3] = _drop(wr[w3], b2)
    wr[w2] = _expand(wr[w2], b2, (b4, b2))
    wr[w4] = _expand(wr[w4], b4, (b2, b4))
    return graph.replace(wr, br)


def move_graph_only(graph: BtbGraph, site: MoveSite) -> BtbGraph:
    if site.kind == "resplit":
        return resplit_graph(graph, site.target)
    if site.kind == "spider":
        return spider_graph(graph, site.target)
    raise InvalidMoveSite("unknown move kind", site.kind)


# ---------------------------------------------------------------- map level


@dataclass(frozen=True)
class ResplitInfo:
    w0: str
    locals: tuple  # (w1, w2, w3, w4)
    old_point: ProjPoint
    new_point: ProjPoint
    coefficients: tuple  # (a, b, c, d) with a v1 + b v2 + c v3 + d v4 = 0

    def six_points(self, tmap: TcdMap) -> list:
        """``(w1, w0, w2, w3, w~0, w4)`` in the dSKP order."""
        w1, w2, w3, w4 = self.locals
        p = tmap.points
        return [p[w1], self.old_point, p[w2], p[w3], self.new_point, p[w4]]


def _vec(p: ProjPoint) -> list:
    return [Fraction(x) for x in p.coords]


def resplit_vector(v0, v1, v2, v3, v4) -> tuple:
    """New vector and the relation coefficients ``(a, b, c, d)``.

    The relations at the two blacks, ``μ0 v0 + μ1 v1 + μ2 v2 = 0`` and
    ``ν0 v0 + ν3 v3 + ν4 v4 = 0``, give ``a v1 + b v2 + c v3 + d v4 = 0`` with
    ``(a, b, c, d) = (μ1/μ0, μ2/μ0, -ν3/ν0, -ν4/ν0)``; then
    ``ṽ = a v1 + d v4 = -b v2 - c v3``.
    """
    m0, m1, m2 = relation([v0, v1, v2])
    n0, n3, n4 = relation([v0, v3, v4])
    a, b, c, d = m1 / m0, m2 / m0, -n3 / n0, -n4 / n0
    new = [a * x + d * y for x, y in zip(v1, v4)]
    return new, (a, b, c, d)


def resplit_full(tmap: TcdMap, w0: str) -> tuple:
    """Resplit returning ``(new_map, ResplitInfo)``."""
    g = tmap.graph
    B1, B2, (w1, w2, w3, w4) = _resplit_locals(g, w0)
    P = tmap.points
    if P[w1] == P[w4]:
        raise IndeterminateMove("T(w1) = T(w4)", {"site": w0, "pair": [w1, w4]})
    if P[w2] == P[w3]:
        raise IndeterminateMove("T(w2) = T(w3)", {"site": w0, "pair": [w2, w3]})
    new, coeff = resplit_vector(*(_vec(P[w]) for w in (w0, w1, w2, w3, w4)))
    if not any(new):
        raise IndeterminateMove("new vector vanishes", {"site": w0})
    g2 = resplit_graph(g, w0)
    pts = dict(P)
    pts[w0] = ProjPoint(new)
    out = TcdMap(g2, tmap.d, pts)
    return out, ResplitInfo(w0, (w1, w2, w3, w4), P[w0], pts[w0], tuple(coeff))


def resplit(tmap: TcdMap, w0: str) -> TcdMap:
    return resplit_full(tmap, w0)[0]


def spider(tmap: TcdMap, fid: str) -> TcdMap:
    """Spider move: points are unchanged, the graph is rewired."""
    g = tmap.graph
    b2, b4, (w1, w2, w3, w4) = _spider_locals(g, fid)
    if tmap.points[w2] == tmap.points[w4]:
        # X = -1 at this face: the new weight ab^-1 - dc^-1 vanishes
        raise MutationSingular("T(w2) = T(w4), face variable is -1", {"site": fid, "pair": [w2, w4]})
    return TcdMap(spider_graph(g, fid), tmap.d, tmap.points)


def apply_move(tmap: TcdMap, site: MoveSite) -> TcdMap:
    if site.kind == "resplit":
        return resplit(tmap, site.target)
    if site.kind == "spider":
        return spider(tmap, site.target)
    raise InvalidMoveSite("unknown move kind", site.kind)


def apply_script(tmap: TcdMap, script) -> TcdMap:
    for step in script:
        site = step if isinstance(step, MoveSite) else MoveSite(step["kind"], str(step["target"]))
        tmap = apply_move(tmap, site)
    return tmap


# ---------------------------------------------------------------- VRC level


def resplit_vrc(vrc: Vrc, w0: str) -> Vrc:
    """Resplit on vectors via the two black relations; other vectors unchanged."""
    g = vrc.graph
    B1, B2, (w1, w2, w3, w4) = _resplit_locals(g, w0)
    V = vrc.vectors
    m0, m1, m2 = (vrc.weights[(B1, w)] for w in (w0, w1, w2))
    n0, n3, n4 = (vrc.weights[(B2, w)] for w in (w0, w3, w4))
    a, d = m1 / m0, -n4 / n0
    vectors = dict(V)
    vectors[w0] = tuple(a * x + d * y for x, y in zip(V[w1], V[w4]))
    g2 = resplit_graph(g, w0)
    return Vrc(g2, vectors, _weights_for(g2, vectors))


def spider_vrc(vrc: Vrc, fid: str) -> Vrc:
    """Spider on a VRC: vectors unchanged, relations recomputed at the new blacks."""
    g2 = spider_graph(vrc.graph, fid)
    return Vrc(g2, dict(vrc.vectors), _weights_for(g2, vrc.vectors))


def spider_weights(a, b, c, d) -> dict:
    """Closed-form spider weights for the local weights ``a, b, c, d``."""
    a, b, c, d = (Fraction(x) for x in (a, b, c, d))
    return {
        ("b1", "w1"): 1 / b * a - d / c, ("b1", "w2"): 1 / b, ("b1", "w4"): -1 / c,
        ("b3", "w3"): b / a - c / d, ("b3", "w2"): 1 / a, ("b3", "w4"): -1 / d,
    }


def dskp_check(points) -> bool:
    """True iff the six points have multi-ratio exactly -1."""
    return multi_ratio(list(points)) == -1


# ---------------------------------------------------------------- exploration


def maps_agree(m1: TcdMap, m2: TcdMap) -> bool:
    """Equal up to renaming, using the canonical vertex order of equal graphs."""
    if m1.graph.canonical_form() != m2.graph.canonical_form():
        return False
    a = [m1.points[w] for w in m1.graph.canonical_whites()]
    b = [m2.points[w] for w in m2.graph.canonical_whites()]
    return a == b


@dataclass
class MoveNode:
    key: tuple
    graph: BtbGraph
    map: TcdMap | None = None
    depth: int = 0
    parent: int | None = None


@dataclass
class MoveGraph:
    nodes: list = field(default_factory=list)
    edges: list = field(default_factory=list)  # (i, MoveSite, j)
    root: int = 0
    index: dict = field(default_factory=dict)
    blocked: list = field(default_factory=list)  # (i, MoveSite, reason)
    resplit_ratios: list = field(default_factory=list)  # multi-ratios of performed resplits
    revisits: int = 0

    def summary(self) -> dict:
        return {"nodes": len(self.nodes), "edges": len(self.edges), "blocked": len(self.blocked),
                "resplits": len(self.resplit_ratios), "revisits": self.revisits}

    def neighbours(self, i) -> list:
        return sorted({j for a, _, j in self.edges if a == i} | {a for a, _, j in self.edges if j == i})

    def tree_path(self, i) -> list:
        out = [i]
        while self.nodes[out[-1]].parent is not None:
            out.append(self.nodes[out[-1]].parent)
        return out

    def cycle_of(self, i, j) -> list:
        """Cycle closed by a non-tree edge ``i - j``."""
        pi, pj = self.tree_path(i), self.tree_path(j)
        common = set(pi) & set(pj)
        a = [x for x in pi if x not in common]
        b = [x for x in pj if x not in common]
        lca = next(x for x in pi if x in common)
        return a + [lca] + list(reversed(b))


def explore(obj, max_nodes: int = DEFAULT_MAX_NODES, on_move: Callable | None = None) -> MoveGraph:
    """Breadth-first search over canonical forms of the move graph.

    With a map attached every node stores its transported map, and reaching a
    node again compares the stored map with the newly transported one.
    """
    if isinstance(obj, TcdMap):
        g0, m0 = obj.graph, obj
    else:
        g0, m0 = obj, None
    mg = MoveGraph()
    root = MoveNode(g0.canonical_form(), g0, m0)
    mg.nodes.append(root)
    mg.index[root.key] = 0
    seen_edges = set()
    queue = deque([0])
    while queue:
        i = queue.popleft()
        node = mg.nodes[i]
        for site in find_move_sites(node.graph):
            g2 = move_graph_only(node.graph, site)
            key = g2.canonical_form()
            m2 = None
            if node.map is not None:
                try:
                    if site.kind == "resplit":
                        m2, info = resplit_full(node.map, site.target)
                        mg.resplit_ratios.append(multi_ratio(info.six_points(node.map)))
                    else:
                        m2 = spider(node.map, site.target)
                except IndeterminateMove as e:
                    mg.blocked.append((i, site, e.message))
                    continue
                if on_move is not None:
                    on_move(site, node.map, m2)
            j = mg.index.get(key)
            if j is None:
                if len(mg.nodes) >= max_nodes:
                    raise NodeLimitExceeded("move graph exceeds %d nodes" % max_nodes, max_nodes)
                j = len(mg.nodes)
                mg.nodes.append(MoveNode(key, g2, m2, node.depth + 1, i))
                mg.index[key] = j
                queue.append(j)
            else:
                mg.revisits += 1
                other = mg.nodes[j]
                if m2 is not None:
                    if other.map is None:
                        other.map = m2
                    elif not maps_agree(other.map, m2):
                        raise ConsistencyViolation("transported maps differ", {
                            "node": j, "via": [i, site.to_dict()], "cycle": mg.cycle_of(i, j),
                        })
            e = (min(i, j), max(i, j), site.kind)
            if e not in seen_edges:
                seen_edges.add(e)
                mg.edges.append((i, site, j))
    return mg


def move_path(g_from: BtbGraph, g_to: BtbGraph, kinds=("resplit", "spider"),
              max_nodes: int = DEFAULT_MAX_NODES) -> list | None:
    """Shortest list of moves of the given kinds turning ``g_from`` into ``g_to`` up to renaming."""
    target = g_to.canonical_form()
    start = g_from.canonical_form()
    if start == target:
        return []
    prev = {start: None}
    queue = deque([(g_from, start)])
    while queue:
        g, key = queue.popleft()
        for site in find_move_sites(g):
            if site.kind not in kinds:
                continue
            g2 = move_graph_only(g, site)
            k2 = g2.canonical_form()
            if k2 in prev:
                continue
            prev[k2] = (key, site)
            if k2 == target:
                path = []
                while prev[k2] is not None:
                    k2, st = prev[k2]
                    path.append(st)
                return path[::-1]
            if len(prev) >= max_nodes:
                raise NodeLimitExceeded("move graph exceeds %d nodes" % max_nodes, max_nodes)
            queue.append((g2, k2))
    return None


def _support(g: BtbGraph, site: MoveSite) -> set:
    if site.kind == "resplit":
        B1, B2, ws = _resplit_locals(g, site.target)
        return {site.target, B1, B2}
    b2, b4, ws = _spider_locals(g, site.target)
    return {b2, b4}


def _face_whites(g: BtbGraph, site: MoveSite):
    return _spider_locals(g, site.target)[2] if site.kind == "spider" else None


def _translate(g_before: BtbGraph, g_after: BtbGraph, site: MoveSite) -> MoveSite | None:
    """Re-identify a site in a graph changed elsewhere (face ids may shift)."""
    if site.kind == "resplit":
        return site
    ws = set(_face_whites(g_before, site)[0::2])
    b2, b4, _ = _spider_locals(g_before, site.target)
    for f in g_after.internal_faces:
        if f.degree == 4 and set(f.vertices) == ws | {b2, b4}:
            return MoveSite("spider", f.id)
    return None


def commuting_squares(tmap: TcdMap) -> list:
    """Perform every pair of disjoint moves in both orders and compare."""
    g = tmap.graph
    sites = find_move_sites(g)
    out = []
    for x in range(len(sites)):
        for y in range(x + 1, len(sites)):
            s, t = sites[x], sites[y]
            if _support(g, s) & _support(g, t):
                continue
            try:
                ms = apply_move(tmap, s)
                mt = apply_move(tmap, t)
                t2 = _translate(g, ms.graph, t)
                s2 = _translate(g, mt.graph, s)
                if t2 is None or s2 is None:
                    continue
                a = apply_move(ms, t2)
                b = apply_move(mt, s2)
            except IndeterminateMove as e:
                out.append({"sites": [s.to_dict(), t.to_dict()], "ok": None, "reason": e.message})
                continue
            out.append({"sites": [s.to_dict(), t.to_dict()], "ok": maps_agree(a, b)})
    return out


def walk_cycle(tmap: TcdMap, first: MoveSite | None = None, max_len: int = 12) -> dict:
    """Follow a move-graph cycle in which every node has exactly two moves.

    Returns the sites used and whether the final map equals the start.
    """
    start = tmap
    sites = find_move_sites(tmap.graph)
    site = first or (sites[0] if sites else None)
    if site is None:
        return {"length": 0, "closed": False, "ok": None, "sites": []}
    path = []
    prev_key = None
    cur = tmap
    for _ in range(max_len):
        key = cur.graph.canonical_form()
        nxt = apply_move(cur, site)
        path.append(site.to_dict())
        prev_key = key
        cur = nxt
        if cur.graph.canonical_form() == start.graph.canonical_form():
            return {"length": len(path), "closed": True, "ok": maps_agree(cur, start), "sites": path}
        cand = [s for s in find_move_sites(cur.graph)
                if move_graph_only(cur.graph, s).canonical_form() != prev_key]
        if len(cand) != 1:
            return {"length": len(path), "closed": False, "ok": None, "sites": path,
                    "reason": "node has %d forward moves" % len(cand)}
        site = cand[0]
    return {"length": len(path), "closed": False, "ok": None, "sites": path}


def verify_elementary_cycles(tmap: TcdMap, max_nodes: int = DEFAULT_MAX_NODES) -> dict:
    """Check map transport around move-graph cycles.

    Every cycle closed by a non-tree edge of the breadth-first exploration is
    checked (this covers the elementary 4-, 5- and 10-cycles present), the
    disjoint-move squares at the start are performed in both orders, and a
    cycle on which every node has two moves is walked explicitly.
    """
    mg = explore(tmap, max_nodes=max_nodes)
    cycles = {}
    tree = {(n.parent, k) for k, n in enumerate(mg.nodes) if n.parent is not None}
    for i, site, j in mg.edges:
        if (i, j) in tree or (j, i) in tree:
            continue
        L = len(mg.cycle_of(i, j))
        cycles[L] = cycles.get(L, 0) + 1
    squares = commuting_squares(tmap)
    walks = []
    if all(len(find_move_sites(n.graph)) == 2 for n in mg.nodes):
        walks.append(walk_cycle(tmap))
    ok = all(s["ok"] is not False for s in squares) and all(w["ok"] is not False for w in walks)
    if not ok:
        raise ConsistencyViolation("move cycle does not return the start map", {"squares": squares, "walks": walks})
    return {"ok": True, "explored": mg.summary(), "cycle_lengths": dict(sorted(cycles.items())),
            "squares": squares, "walks": walks, "blocked": [(i, s.to_dict(), r) for i, s, r in mg.blocked]}
