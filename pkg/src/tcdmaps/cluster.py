"""
Projective and affine quivers with their cluster variables, degree-4
mutation, and the bridge from planar dual-bipartite (PDB) quivers with point
assignments (t-realizations) to TCD maps in ``ℚP^1``.

Quiver conventions:

* projective quiver: one vertex per face; each edge ``bw`` gives the arrow
  ``F(w -> b) -> F(b -> w)`` between the faces on the left of its two darts,
  which goes counterclockwise around ``b`` and clockwise around ``w``;
* affine quiver: one vertex per white; a black with clockwise neighbours
  ``w1, w2, w3`` gives ``w1 -> w2 -> w3 -> w1``, and every boundary index
  gives ``W(i+1) -> W(i)``.

Oriented 2-cycles are cancelled, so ``ν`` has one signed entry per pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .btb import BtbGraph, ban_labels, natkey
from .errors import DegenerateDenominator, NotMutable, NotPDB, UnsupportedDegree
from .moves import apply_move
from .projective import Hyperplane, ProjPoint, default_chart, olr, standard_chart
from .tcd import TcdMap, lift_vrc, vrc_of


@dataclass(frozen=True)
class QVertex:
    id: str
    mutable: bool
    origin: str  # "face" | "white"


@dataclass
class Embedding:
    """Planar rotation system of a quiver.

    ``arrows`` lists ``(tail, head)`` per drawn arrow, ``rotation[v]`` is the
    counterclockwise cyclic list of incident arrow indices with a negative
    entry ``-i`` marking the outer side at boundary index ``i``, and
    ``boundary[i - 1]`` is the vertex carrying boundary index ``i``.
    """

    arrows: list
    rotation: dict
    boundary: tuple = ()


class Quiver:
    """Quiver with mutable/frozen vertices, sparse ``ν`` and cluster values."""

    def __init__(self, vertices: Iterable[QVertex], arrows: Mapping = None, values: Mapping = None,
                 embedding: Embedding | None = None):
        self.vertices = {v.id: v for v in sorted(vertices, key=lambda v: natkey(v.id))}
        nu = {}
        for (u, v), k in (arrows or {}).items():
            if u == v:
                raise ValueError("self-loop at %s" % u)
            if u not in self.vertices or v not in self.vertices:
                raise KeyError((u, v))
            nu[(u, v)] = nu.get((u, v), 0) + k
            nu[(v, u)] = nu.get((v, u), 0) - k
        self.nu_map = {e: k for e, k in nu.items() if k > 0}
        self.values = {}
        for v, x in (values or {}).items():
            if not self.vertices[v].mutable:
                raise NotMutable("frozen vertices carry no values", v)
            x = Fraction(x)
            if x == 0:
                raise DegenerateDenominator("cluster variables are nonzero", v)
            self.values[v] = x
        self.embedding = embedding

    # -- queries -------------------------------------------------------------

    def nu(self, u, v) -> int:
        return self.nu_map.get((u, v), 0) - self.nu_map.get((v, u), 0)

    @property
    def mutable(self) -> list:
        return [v for v, x in self.vertices.items() if x.mutable]

    @property
    def frozen(self) -> list:
        return [v for v, x in self.vertices.items() if not x.mutable]

    def neighbours(self, v) -> dict:
        out = {}
        for (a, b), k in self.nu_map.items():
            if a == v:
                out[b] = out.get(b, 0) + k
            elif b == v:
                out[a] = out.get(a, 0) - k
        return out

    def degree(self, v) -> int:
        return sum(abs(k) for k in self.neighbours(v).values())

    def arrows(self) -> list:
        return sorted(((u, v, k) for (u, v), k in self.nu_map.items()),
                      key=lambda t: (natkey(t[0]), natkey(t[1])))

    def relabeled(self, mapping: Mapping) -> "Quiver":
        f = lambda v: mapping.get(v, v)
        verts = [QVertex(f(v.id), v.mutable, v.origin) for v in self.vertices.values()]
        arrows = {(f(u), f(v)): k for (u, v), k in self.nu_map.items()}
        values = {f(v): x for v, x in self.values.items()}
        return Quiver(verts, arrows, values)

    def with_values(self, values: Mapping) -> "Quiver":
        return Quiver(self.vertices.values(), self.nu_map, values, self.embedding)

    def __eq__(self, other):
        return (isinstance(other, Quiver) and self.vertices == other.vertices
                and self.nu_map == other.nu_map and self.values == other.values)

    def __repr__(self):
        return "Quiver(%d mutable, %d frozen, %d arrows)" % (
            len(self.mutable), len(self.frozen), sum(self.nu_map.values()))

    def to_dict(self) -> dict:
        return {
            "vertices": [{"id": v.id, "mutable": v.mutable, "origin": v.origin}
                         for v in self.vertices.values()],
            "nu": [[u, v, k] for u, v, k in self.arrows()],
            "values": {v: str(x) for v, x in sorted(self.values.items(), key=lambda t: natkey(t[0]))},
        }

    @classmethod
    def from_dict(cls, doc: Mapping) -> "Quiver":
        verts = [QVertex(str(v["id"]), bool(v["mutable"]), v.get("origin", "")) for v in doc["vertices"]]
        arrows = {(str(u), str(v)): int(k) for u, v, k in doc.get("nu", [])}
        values = {str(v): Fraction(x) for v, x in doc.get("values", {}).items()}
        return cls(verts, arrows, values)


def compare_quivers(q1: Quiver, q2: Quiver, mapping: Mapping | None = None,
                    ignore_frozen_pairs: bool = False) -> list:
    """Differences between ``q1`` (relabeled by ``mapping``) and ``q2``.

    ``ignore_frozen_pairs`` skips arrows between two frozen vertices, which no
    mutation ever reads.
    """
    if mapping:
        q1 = q1.relabeled(mapping)
    diffs = []
    if set(q1.vertices) != set(q2.vertices):
        diffs.append({"kind": "vertices", "only_left": sorted(set(q1.vertices) - set(q2.vertices), key=natkey),
                      "only_right": sorted(set(q2.vertices) - set(q1.vertices), key=natkey)})
        return diffs
    for v in q1.vertices:
        if q1.vertices[v].mutable != q2.vertices[v].mutable:
            diffs.append({"kind": "flag", "vertex": v})
    pairs = {tuple(sorted(e, key=natkey)) for e in list(q1.nu_map) + list(q2.nu_map)}
    for u, v in sorted(pairs, key=lambda e: (natkey(e[0]), natkey(e[1]))):
        if ignore_frozen_pairs and not q1.vertices[u].mutable and not q1.vertices[v].mutable:
            continue
        if q1.nu(u, v) != q2.nu(u, v):
            diffs.append({"kind": "arrow", "pair": [u, v], "left": q1.nu(u, v), "right": q2.nu(u, v)})
    for v in sorted(set(q1.values) | set(q2.values), key=natkey):
        if q1.values.get(v) != q2.values.get(v):
            diffs.append({"kind": "value", "vertex": v,
                          "left": str(q1.values.get(v)), "right": str(q2.values.get(v))})
    return diffs


# ---------------------------------------------------------------- mutation


def mutate(quiver: Quiver, v) -> Quiver:
    """Mutation at a mutable degree-4 vertex, on ``ν`` and on the values."""
    if v not in quiver.vertices or not quiver.vertices[v].mutable:
        raise NotMutable("mutation needs a mutable vertex", v)
    deg = quiver.degree(v)
    if deg != 4:
        raise UnsupportedDegree("only degree-4 mutations are supported", {"vertex": v, "degree": deg})
    nb = quiver.neighbours(v)
    ins = {u: -k for u, k in nb.items() if k < 0}
    outs = {u: k for u, k in nb.items() if k > 0}
    arrows = {}
    for (a, b), k in quiver.nu_map.items():
        if v in (a, b):
            arrows[(b, a)] = arrows.get((b, a), 0) + k
        else:
            arrows[(a, b)] = arrows.get((a, b), 0) + k
    for a, ka in ins.items():
        for b, kb in outs.items():
            if a != b:
                arrows[(a, b)] = arrows.get((a, b), 0) + ka * kb
    values = dict(quiver.values)
    if v in quiver.values:
        x = quiver.values[v]
        if x == -1:
            raise DegenerateDenominator("mutation at a vertex with value -1", v)
        values[v] = 1 / x
        for u, k in nb.items():
            if u not in values:
                continue
            if k > 0:
                values[u] = values[u] * (1 + x) ** k
            elif k < 0:
                values[u] = values[u] * (1 + 1 / x) ** k
    return Quiver(quiver.vertices.values(), arrows, values)


# ---------------------------------------------------------------- projective


def projective_quiver(graph: BtbGraph, values: Mapping | None = None) -> Quiver:
    g = graph
    verts = [QVertex(f.id, not f.boundary, "face") for f in g.faces]
    arrows = {}
    for b, w in g.edges:
        e = (g.face_left_of(w, b), g.face_left_of(b, w))
        if e[0] != e[1]:
            arrows[e] = arrows.get(e, 0) + 1
    return Quiver(verts, arrows, values)


def _face_black_ratios(graph: BtbGraph, face, weights: Mapping) -> Fraction:
    vs = face.vertices
    m = 0
    out = Fraction(1)
    for k, x in enumerate(vs):
        if x in graph.black_rot:
            m += 1
            prev, nxt = vs[k - 1], vs[(k + 1) % len(vs)]
            out *= weights[(x, nxt)] / weights[(x, prev)]
    return (-1) ** (m + 1) * out


def x_variables(tmap: TcdMap) -> dict:
    """``X_f`` at every internal face from the edge weights of any VRC lift."""
    g = tmap.graph
    mu = lift_vrc(tmap).weights
    return {f.id: _face_black_ratios(g, f, mu) for f in g.internal_faces}


def x_variables_from_points(tmap: TcdMap) -> dict:
    """``X_f = -∏ λ(T(w_{i-1}), T(w_i), T(v_i))`` over the black corners of ``f``, in one chart."""
    g = tmap.graph
    P = tmap.points
    chart = default_chart(list(P.values()))
    out = {}
    for f in g.internal_faces:
        vs = f.vertices
        x = Fraction(-1)
        for k, b in enumerate(vs):
            if b not in g.black_rot:
                continue
            prev, nxt = vs[k - 1], vs[(k + 1) % len(vs)]
            third = next(w for w in g.black_rot[b] if w not in (prev, nxt))
            x *= olr(P[prev], P[nxt], P[third], chart)
        out[f.id] = x
    return out


def projective_cluster(tmap: TcdMap) -> Quiver:
    return projective_quiver(tmap.graph, x_variables(tmap))


def face_ban_names(graph: BtbGraph) -> dict:
    """Face id -> name of its ``ban`` label, used to match faces across moves."""
    return {f: z.name() for f, z in ban_labels(graph).face.items()}


# ---------------------------------------------------------------- affine


def _affine_arrows(graph: BtbGraph) -> list:
    g = graph
    out = []
    for b, (a, c, d) in sorted(g.black_rot.items(), key=lambda t: natkey(t[0])):
        # counterclockwise (a, c, d) is clockwise (a, d, c)
        out += [(a, d), (d, c), (c, a)]
    for i in range(1, g.n + 1):
        u, v = g.W(i % g.n + 1), g.W(i)
        if u != v:
            out.append((u, v))
    return out


def affine_quiver(graph: BtbGraph, values: Mapping | None = None) -> Quiver:
    g = graph
    verts = [QVertex(w, not g.is_boundary(w), "white") for w in g.white_ids]
    arrows = {}
    for e in _affine_arrows(g):
        arrows[e] = arrows.get(e, 0) + 1
    return Quiver(verts, arrows, values)


def y_variables(tmap: TcdMap, chart: Hyperplane | None = None) -> dict:
    """``Y_w`` at every internal white from affine-gauge weights for ``chart``."""
    g = tmap.graph
    chart = chart or standard_chart(tmap.d)
    mu = vrc_of(tmap, chart).weights
    out = {}
    for w in g.white_ids:
        if g.is_boundary(w):
            continue
        bs = g.black_nbrs(w)
        y = Fraction((-1) ** (len(bs) + 1))
        for b in bs:
            _, wi, wi2 = g.rotated(b, w)
            y *= mu[(b, wi2)] / mu[(b, wi)]
        out[w] = y
    return out


def y_variables_from_points(tmap: TcdMap, chart: Hyperplane | None = None) -> dict:
    """Star-ratio form ``Y_w = -∏ λ(T(w_i), T(w'_i), T(w))``."""
    g = tmap.graph
    chart = chart or standard_chart(tmap.d)
    P = tmap.points
    out = {}
    for w in g.white_ids:
        if g.is_boundary(w):
            continue
        y = Fraction(-1)
        for b in g.black_nbrs(w):
            _, wi, wi2 = g.rotated(b, w)
            y *= olr(P[wi], P[wi2], P[w], chart)
        out[w] = y
    return out


def affine_cluster(tmap: TcdMap, chart: Hyperplane | None = None) -> Quiver:
    return affine_quiver(tmap.graph, y_variables(tmap, chart))


# ---------------------------------------------------------------- PDB quivers


def _cancel_adjacent(arrows: list, rot: dict) -> dict:
    """Remove pairs of opposite darts that are neighbours in the rotation at both ends."""
    rot = {v: list(r) for v, r in rot.items()}

    def adjacent(v, a, c):
        r = rot[v]
        k = len(r)
        return k == 2 or (r.index(a) - r.index(c)) % k in (1, k - 1)

    changed = True
    while changed:
        changed = False
        for v in sorted(rot, key=natkey):
            r = rot[v]
            for j in range(len(r)):
                a, c = r[j], r[(j + 1) % len(r)]
                if a < 0 or c < 0 or a == c or arrows[a] != arrows[c][::-1]:
                    continue
                other = arrows[a][0] if arrows[a][1] == v else arrows[a][1]
                if adjacent(other, a, c):
                    rot[v] = [x for x in r if x not in (a, c)]
                    rot[other] = [x for x in rot[other] if x not in (a, c)]
                    changed = True
                    break
            if changed:
                break
    return {v: tuple(r) for v, r in rot.items()}


def affine_embedding(graph: BtbGraph) -> Embedding:
    """Rotation system of the affine quiver drawn inside the black triangles.

    Needs distinct boundary whites. Cancelled 2-cycles are removed as
    adjacent opposite darts.
    """
    g = graph
    if len(set(g.boundary.values())) != g.n:
        raise NotPDB("embedding needs distinct boundary whites", g.cactus)
    arrows = []
    dart = {}

    def add(u, v, key):
        dart[key] = len(arrows)
        arrows.append((u, v))

    for b, r in g.black_rot.items():
        for w in r:
            _, x, y = g.rotated(b, w)
            # clockwise around b is (w, y, x), so w -> y
            add(w, y, (b, w))
    for i in range(1, g.n + 1):
        add(g.W(i % g.n + 1), g.W(i), ("gap", i))
    rot = {}
    for w in g.white_ids:
        items = []
        for it in g.rot(w):
            if isinstance(it, int):
                # towards W(i+1), the outside, towards W(i-1)
                items += [dart[("gap", it)], -it, dart[("gap", it - 1 if it > 1 else g.n)]]
            else:
                _, x, y = g.rotated(it, w)
                items += [dart[(it, x)], dart[(it, w)]]
        rot[w] = items
    boundary = tuple(g.W(i) for i in range(1, g.n + 1))
    return Embedding(arrows, _cancel_adjacent(arrows, rot), boundary)


def pdb_quiver(graph: BtbGraph) -> Quiver:
    """Affine quiver of ``graph`` together with its planar embedding."""
    q = affine_quiver(graph)
    q.embedding = affine_embedding(graph)
    return q


@dataclass
class QuiverFace:
    vertices: tuple  # traversal order (counterclockwise)
    darts: tuple  # leaving dart at each vertex
    orientation: str  # "ccw" | "cw" | "outer"


def _trace_faces(arrows: list, rot: Mapping) -> list:
    seen = set()
    faces = []
    for v0 in sorted(rot, key=natkey):
        for d0 in rot[v0]:
            if d0 < 0 or (v0, d0) in seen:
                continue
            verts, darts, outer = [], [], False
            v, d = v0, d0
            while (v, d) not in seen:
                seen.add((v, d))
                verts.append(v)
                darts.append(d)
                a, c = arrows[d]
                u = c if a == v else a
                # arrive at u along d, leave along its clockwise successor
                r = rot[u]
                j = r.index(d)
                k = 1
                while r[(j - k) % len(r)] < 0:
                    outer = True
                    k += 1
                v, d = u, r[(j - k) % len(r)]
            fwd = [arrows[dd][0] == vv for vv, dd in zip(verts, darts)]
            if outer:
                kind = "outer"
            elif all(fwd):
                kind = "ccw"
            elif not any(fwd):
                kind = "cw"
            else:
                raise NotPDB("face boundary is not an oriented cycle", verts)
            faces.append(QuiverFace(tuple(verts), tuple(darts), kind))
    return faces


def _check_embedding(q: Quiver):
    emb = q.embedding
    if emb is None:
        raise NotPDB("quiver has no planar embedding", None)
    counts = {}
    for r in emb.rotation.values():
        for d in r:
            if d >= 0:
                counts[emb.arrows[d]] = counts.get(emb.arrows[d], 0) + 1
    for (u, v), k in counts.items():
        if q.nu(u, v) != (k - counts.get((v, u), 0)) // 2:
            raise NotPDB("embedding disagrees with ν", [u, v])
    for v, r in emb.rotation.items():
        ds = [d for d in r if d >= 0]
        dirs = [emb.arrows[d][0] == v for d in ds]
        if len(ds) % 2 or any(dirs[j] == dirs[(j + 1) % len(ds)] for j in range(len(ds))):
            raise NotPDB("arrows do not alternate around a vertex", v)


def quiver_faces(q: Quiver) -> list:
    """Faces of an embedded PDB quiver; raises NotPDB if it is not one."""
    _check_embedding(q)
    return _trace_faces(q.embedding.arrows, q.embedding.rotation)


def _black_regions(q: Quiver) -> list:
    # undo the boundary arrows: add W(i) -> W(i+1) in each outer angle
    emb = q.embedding
    n = len(emb.boundary)
    arrows = list(emb.arrows)
    virt = {}
    for i in range(1, n + 1):
        virt[i] = len(arrows)
        arrows.append((emb.boundary[i - 1], emb.boundary[i % n]))
    rot = {}
    for v, r in emb.rotation.items():
        items = []
        for d in r:
            if d < 0:
                i = -d
                items += [virt[i], d, virt[i - 1 if i > 1 else n]]
            else:
                items.append(d)
        rot[v] = items
    rot = _cancel_adjacent(arrows, rot)
    return _trace_faces(arrows, rot), rot


def t_graph_from_quiver(q: Quiver) -> BtbGraph:
    """BTB graph whose blacks fan-triangulate the clockwise faces of ``q``.

    Clockwise regions between the quiver and the boundary count as faces once
    the boundary arrows ``W(i+1) -> W(i)`` are taken out. A clockwise face
    with arrow cycle ``x0 -> x1 -> ... -> x_{k-1}`` (``x0`` the lowest
    vertex) becomes blacks ``(x0, x_{j+1}, x_j)`` in counterclockwise order.
    """
    _check_embedding(q)
    emb = q.embedding
    regions, rot = _black_regions(q)
    corner = {}
    black_rot = {}
    nb = 0
    for f in regions:
        if f.orientation != "cw":
            continue
        cyc = list(reversed(f.vertices))
        if len(set(cyc)) != len(cyc):
            raise NotPDB("clockwise face touches a vertex twice", f.vertices)
        j0 = min(range(len(cyc)), key=lambda j: natkey(cyc[j]))
        cyc = cyc[j0:] + cyc[:j0]
        k = len(cyc)
        tris = []
        for j in range(1, k - 1):
            nb += 1
            b = "b%d" % nb
            black_rot[b] = (cyc[0], cyc[j + 1], cyc[j])
            tris.append(b)
        # counterclockwise order of the fan at each corner
        at = {cyc[0]: list(reversed(tris))}
        for j in range(1, k):
            at[cyc[j]] = ([tris[j - 2]] if j >= 2 else []) + ([tris[j - 1]] if j <= k - 2 else [])
        for v, d in zip(f.vertices, f.darts):
            corner[(v, d)] = at[v]
    white_rot = {}
    for v, r in rot.items():
        items = []
        for d in r:
            # the angle counterclockwise after d belongs to the face leaving v along d
            items += [-d] if d < 0 else corner.get((v, d), [])
        white_rot[v] = tuple(items)
    return BtbGraph(len(emb.boundary), white_rot, black_rot)


def t_variables(q: Quiver, t: Mapping) -> dict:
    """``Y_v = -∏ λ(t(v_i), t(v'_i), t(v))`` for pairs ``v_i -> v -> v'_i`` in counterclockwise order."""
    emb = q.embedding
    out = {}
    for v in q.mutable:
        ds = [d for d in emb.rotation[v] if d >= 0]
        if not ds:
            continue
        j = next(j for j, d in enumerate(ds) if emb.arrows[d][1] == v)
        ds = ds[j:] + ds[:j]
        y = Fraction(-1)
        tv = Fraction(t[v])
        for a, c in zip(ds[0::2], ds[1::2]):
            ta, tc = Fraction(t[emb.arrows[a][0]]), Fraction(t[emb.arrows[c][1]])
            if tc == tv:
                raise DegenerateDenominator("adjacent points coincide", v)
            y *= (ta - tv) / (tc - tv)
        out[v] = y
    return out


def t_map(q: Quiver, t: Mapping) -> TcdMap:
    """TCD map in ``ℚP^1`` on ``t_graph_from_quiver(q)`` with ``T(w_v) = (t(v) : 1)``."""
    g = t_graph_from_quiver(q)
    return TcdMap(g, 1, {v: ProjPoint((Fraction(x), 1)) for v, x in t.items()})


def is_t_realization(q: Quiver, t: Mapping) -> bool:
    return all(y > 0 for y in t_variables(q, t).values())


# ---------------------------------------------------------------- moves vs mutation


def check_move_mutation(tmap: TcdMap, site, chart: Hyperplane | None = None, new_map: TcdMap | None = None) -> dict:
    """Compare a local move with the corresponding quiver mutation.

    A spider at face ``f`` mutates the projective cluster at ``f`` and fixes
    the affine one; a resplit at ``w`` mutates the affine cluster at ``w`` and
    fixes the projective one. Faces are matched across the move by their
    ban labels; the mutated face takes the single new label.
    """
    t2 = new_map if new_map is not None else apply_move(tmap, site)
    g1, g2 = tmap.graph, t2.graph
    chart = chart or standard_chart(tmap.d)
    qp1 = projective_quiver(g1, x_variables(tmap))
    qp2 = projective_quiver(g2, x_variables(t2))
    qa1 = affine_quiver(g1, y_variables(tmap, chart))
    qa2 = affine_quiver(g2, y_variables(t2, chart))
    ban1, ban2 = face_ban_names(g1), face_ban_names(g2)
    if site.kind == "spider":
        fresh = set(ban2.values()) - set(ban1.values())
        mp = dict(ban1)
        if len(fresh) == 1:
            mp[site.target] = fresh.pop()
        proj = compare_quivers(mutate(qp1, site.target).relabeled(mp), qp2.relabeled(ban2))
        aff = compare_quivers(qa1, qa2)
    else:
        proj = compare_quivers(qp1.relabeled(ban1), qp2.relabeled(ban2))
        aff = compare_quivers(mutate(qa1, site.target), qa2)
    return {"site": site.to_dict(), "projective": not proj, "affine": not aff,
            "pass": not proj and not aff, "differences": proj + aff}
