"""
TCD maps, vector-relation configurations (VRCs), construction, lifting and
projection between ranks.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Mapping

from .btb import BtbGraph, natkey, perfect_orientation
from .errors import (
    CircuitViolated,
    ConstructionFailed,
    NonGenericHyperplane,
    NotAdmissible,
    NotTcdMap,
    RankDeficient,
)
from .projective import (
    MAX_RETRIES,
    Hyperplane,
    ProjPoint,
    Subspace,
    central_projection,
    default_chart,
    rank as matrix_rank,
    relation,
    random_vector,
    span_dimension,
)


class TcdMap:
    """Points of ``ℚP^d`` attached to the white vertices of a BTB graph."""

    def __init__(self, graph: BtbGraph, d: int, points: Mapping[str, ProjPoint], check: bool = True):
        self.graph = graph
        self.d = int(d)
        self.points = {w: (p if isinstance(p, ProjPoint) else ProjPoint(p))
                       for w, p in sorted(points.items(), key=lambda t: natkey(t[0]))}
        if check:
            self.check()

    def check(self):
        g = self.graph
        if set(self.points) != set(g.white_rot):
            raise NotTcdMap("points must be given exactly on the white vertices",
                            sorted(set(self.points) ^ set(g.white_rot)))
        for w, p in self.points.items():
            if p.dim != self.d:
                raise NotTcdMap("point has the wrong dimension", {"white": w, "dim": p.dim})
        for b, r in g.black_rot.items():
            ps = [self.points[w] for w in r]
            if len(set(ps)) != 3:
                raise NotTcdMap("neighbours of a black vertex must be distinct", b)
            if span_dimension(ps) != 1:
                raise NotTcdMap("neighbours of a black vertex must be collinear", b)

    def __getitem__(self, w) -> ProjPoint:
        return self.points[w]

    def __eq__(self, other):
        return (isinstance(other, TcdMap) and self.graph == other.graph and self.d == other.d
                and self.points == other.points)

    def __hash__(self):
        return hash((self.graph, self.d, tuple(sorted(self.points.items()))))

    def __repr__(self):
        return "TcdMap(d=%d, %r)" % (self.d, self.graph)

    def line(self, b) -> Subspace:
        """The line ``L_b`` carrying the neighbours of ``b``."""
        return Subspace.span(self.points[w] for w in self.graph.black_rot[b])

    def rank(self) -> int:
        return rank(self)

    def with_points(self, graph: BtbGraph, points: Mapping, check: bool = True) -> "TcdMap":
        return TcdMap(graph, self.d, points, check=check)


@dataclass(frozen=True)
class Vrc:
    """Vectors on whites and edge weights ``μ(b, w)`` with ``Σ μ(bw) v(w) = 0`` at each black."""

    graph: BtbGraph
    vectors: Mapping
    weights: Mapping

    def check(self):
        g = self.graph
        for w, v in self.vectors.items():
            if not any(v):
                raise CircuitViolated("zero vector", w)
        for b, r in g.black_rot.items():
            vs = [self.vectors[w] for w in r]
            mu = [self.weights[(b, w)] for w in r]
            if any(m == 0 for m in mu):
                raise CircuitViolated("zero edge weight", b)
            tot = [sum(m * v[i] for m, v in zip(mu, vs)) for i in range(len(vs[0]))]
            if any(tot):
                raise CircuitViolated("relation fails at black vertex", b)
            for a, c in combinations(vs, 2):
                if matrix_rank([a, c]) < 2:
                    raise CircuitViolated("neighbour vectors are parallel", b)

    def relation_at(self, b) -> dict:
        return {w: self.weights[(b, w)] for w in self.graph.black_rot[b]}

    def regauged(self, vec_scale: Mapping = None, black_scale: Mapping = None) -> "Vrc":
        """Gauge transform: ``v(w) -> s_w v(w)``, ``μ(bw) -> t_b μ(bw) / s_w``."""
        vs = vec_scale or {}
        bs = black_scale or {}
        vectors = {w: tuple(Fraction(vs.get(w, 1)) * x for x in v) for w, v in self.vectors.items()}
        weights = {(b, w): Fraction(bs.get(b, 1)) * m / Fraction(vs.get(w, 1))
                   for (b, w), m in self.weights.items()}
        return Vrc(self.graph, vectors, weights)


def _weights_for(graph: BtbGraph, vectors: Mapping) -> dict:
    weights = {}
    for b, r in graph.black_rot.items():
        try:
            rel = relation([vectors[w] for w in r])
        except Exception as e:
            raise CircuitViolated("no unique relation at black vertex", b) from e
        if any(x == 0 for x in rel):
            raise CircuitViolated("neighbour vectors are parallel", b)
        # first incident weight in rotation order is 1
        rel = [x / rel[0] for x in rel]
        for w, x in zip(r, rel):
            weights[(b, w)] = x
    return weights


def from_vrc(vrc: Vrc) -> TcdMap:
    """Projectivize the vectors of a VRC."""
    g = vrc.graph
    pts = {}
    for w, v in vrc.vectors.items():
        if not any(v):
            raise CircuitViolated("zero vector", w)
        pts[w] = ProjPoint(v)
    for b, r in g.black_rot.items():
        if len({pts[w] for w in r}) != 3:
            raise CircuitViolated("two neighbours projectivize to the same point", b)
    d = len(next(iter(vrc.vectors.values()))) - 1 if vrc.vectors else 0
    return TcdMap(g, d, pts)


def lift_vrc(tmap: TcdMap) -> Vrc:
    """VRC with the stored integer coordinates as vectors."""
    vectors = {w: tuple(Fraction(x) for x in p.coords) for w, p in tmap.points.items()}
    return Vrc(tmap.graph, vectors, _weights_for(tmap.graph, vectors))


def vrc_of(tmap: TcdMap, chart: Hyperplane | None = None) -> Vrc:
    """VRC in affine gauge: every vector pairs to 1 with the chart."""
    if chart is None:
        chart = default_chart(list(tmap.points.values()))
    vectors = {}
    for w, p in tmap.points.items():
        h = chart.pair(p.coords)
        if h == 0:
            raise NonGenericHyperplane("chart contains a point of the map", w)
        vectors[w] = tuple(Fraction(x) / h for x in p.coords)
    return Vrc(tmap.graph, vectors, _weights_for(tmap.graph, vectors))


def rank(tmap: TcdMap) -> int:
    if not tmap.points:
        return -1
    return matrix_rank([p.coords for p in tmap.points.values()]) - 1


def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def _line_point(v2, v3, rng) -> list:
    while True:
        s, t = rng.randint(-999, 999), rng.randint(-999, 999)
        if s and t:
            return [s * a + t * b for a, b in zip(v2, v3)]


def construct(graph: BtbGraph, d: int, seed=None) -> TcdMap:
    """Construct a rank-``d`` TCD map along a linear extension of the orientation poset."""
    mr = graph.mrank()
    if d > mr:
        raise RankDeficient("requested rank exceeds mrank", {"d": d, "mrank": mr})
    if d < 0:
        raise RankDeficient("rank must be nonnegative", d)
    rng = _rng(seed)
    po = perfect_orientation(graph)
    order = po.linear_extension()
    sources = set(po.sources)
    full = None
    for _ in range(MAX_RETRIES):
        vec = {}
        srcs = [w for w in order if w in sources]
        rows = [random_vector(mr, rng) for _ in srcs]
        if matrix_rank(rows) < mr + 1:
            continue
        for w, r in zip(srcs, rows):
            vec[w] = r
        ok = True
        for w in order:
            if w in vec:
                continue
            w2, w3 = po.predecessors(w)
            if matrix_rank([vec[w2], vec[w3]]) < 2:
                ok = False
                break
            vec[w] = _line_point(vec[w2], vec[w3], rng)
        if ok:
            full = TcdMap(graph, mr, {w: ProjPoint(v) for w, v in vec.items()}, check=False)
            try:
                full.check()
            except NotTcdMap:
                continue
            break
    if full is None:
        raise ConstructionFailed("construction failed after %d attempts" % MAX_RETRIES)
    if d == mr:
        return full
    return project(full, random_admissible_center(full, mr - d, rng))


def random_admissible_center(tmap: TcdMap, codim: int, seed=None) -> Subspace:
    """Random center of vector dimension ``codim`` that is admissible for ``tmap``."""
    rng = _rng(seed)
    for _ in range(MAX_RETRIES):
        rows = [random_vector(tmap.d, rng) for _ in range(codim)]
        if matrix_rank(rows) < codim:
            continue
        u = Subspace(rows)
        if admissibility_violation(tmap, u) is None:
            return u
    raise ConstructionFailed("no admissible center found after %d attempts" % MAX_RETRIES)


def admissibility_violation(tmap: TcdMap, center: Subspace):
    """``None`` if admissible, else ``(condition, witness)``."""
    k = center.dimension + 1
    for w, p in tmap.points.items():
        if matrix_rank(list(center.rows) + [p.coords]) < k + 1:
            return ("point in center", w)
    for b in tmap.graph.black_rot:
        line = tmap.line(b)
        if matrix_rank(list(center.rows) + list(line.rows)) < k + 2:
            return ("center meets line", b)
    return None


def project(tmap: TcdMap, center: Subspace) -> TcdMap:
    """Pointwise central projection from an admissible center."""
    bad = admissibility_violation(tmap, center)
    if bad is not None:
        raise NotAdmissible("center is not admissible: " + bad[0], {"condition": bad[0], "at": bad[1]})
    pts = {w: central_projection(center, p) for w, p in tmap.points.items()}
    d = next(iter(pts.values())).dim
    return TcdMap(tmap.graph, d, pts)


def lift(tmap: TcdMap, d_target: int, seed=None) -> TcdMap:
    """Rank-``d_target`` map whose projection dropping the new coordinates is ``tmap``."""
    g = tmap.graph
    r = rank(tmap)
    if r != tmap.d:
        raise RankDeficient("map does not span its ambient space", {"rank": r, "d": tmap.d})
    if not r < d_target <= g.mrank():
        raise RankDeficient("need rank < d_target <= mrank", {"rank": r, "d_target": d_target, "mrank": g.mrank()})
    rng = _rng(seed)
    extra = d_target - tmap.d
    base = lift_vrc(tmap)
    po = perfect_orientation(g)
    order = po.linear_extension()
    srcs = [w for w in order if w in set(po.sources)]
    for _ in range(MAX_RETRIES):
        u = {w: random_vector(extra - 1, rng) for w in srcs}
        if matrix_rank([list(base.vectors[w]) + u[w] for w in srcs]) < d_target + 1:
            continue
        for w in order:
            if w in u:
                continue
            b = po.in_black(w)
            w2, w3 = po.predecessors(w)
            a1, a2, a3 = base.weights[(b, w)], base.weights[(b, w2)], base.weights[(b, w3)]
            u[w] = [-(a2 * x + a3 * y) / a1 for x, y in zip(u[w2], u[w3])]
        pts = {w: ProjPoint(list(base.vectors[w]) + u[w]) for w in g.white_rot}
        return TcdMap(g, d_target, pts)
    raise ConstructionFailed("no spanning lift found after %d attempts" % MAX_RETRIES)


def drop_center(d_low: int, d_high: int) -> Subspace:
    """Center spanned by the coordinates beyond the first ``d_low + 1``."""
    rows = []
    for j in range(d_low + 1, d_high + 1):
        rows.append([1 if i == j else 0 for i in range(d_high + 1)])
    return Subspace(rows)


@dataclass(frozen=True)
class GenericityResult:
    generic: bool
    reason: str = ""
    witness: object = None

    def __bool__(self):
        return self.generic


def is_one_generic(tmap: TcdMap) -> GenericityResult:
    """Whites on a common face span planes; consecutive unglued boundary points differ."""
    g = tmap.graph
    for f in g.faces:
        ws = sorted({c[0] for c in f.corners if c[0] in g.white_rot})
        for tri in combinations(ws, 3):
            if span_dimension([tmap.points[w] for w in tri]) != 2:
                return GenericityResult(False, "face whites do not span a plane", {"face": f.id, "whites": list(tri)})
    for i in range(1, g.n + 1):
        a, b = g.W(i), g.W(i + 1)
        if a != b and tmap.points[a] == tmap.points[b]:
            return GenericityResult(False, "consecutive boundary points coincide", [i, i % g.n + 1])
    return GenericityResult(True)
