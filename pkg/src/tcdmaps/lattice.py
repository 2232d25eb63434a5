"""
Weak separation, plabic tilings, and lattice-level verification of TCD maps.

Tilings use exact anchors ``v_i = (i, -i^2)``, which sit clockwise on a
convex curve. A label ``z`` is drawn at ``v(z) = sum z_i v_i``.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from itertools import combinations
from typing import Iterable, Sequence

from .btb import BtbGraph, LatticeLabel
from .errors import (
    CollinearityViolation,
    ConsistencyViolation,
    DskpViolation,
    LevelMismatch,
    NotMaximal,
    NotWeaklySeparated,
)
from .projective import ProjPoint, collinear, multi_ratio, span_dimension


def _z(x) -> tuple:
    return tuple(x.z) if isinstance(x, LatticeLabel) else tuple(x)


def weakly_separated(z1, z2) -> bool:
    """Symmetric weak separation of two labels of equal level.

    Fails iff some ``i1 < i2 < i3 < i4`` shows the pattern ``<, >, <, >`` or
    its swap, i.e. the signs of ``z1 - z2`` alternate at least four times.
    """
    a, b = _z(z1), _z(z2)
    if len(a) != len(b) or sum(a) != sum(b):
        raise LevelMismatch("labels must have equal length and level", [list(a), list(b)])
    runs = 0
    prev = 0
    for x, y in zip(a, b):
        if x == y:
            continue
        s = 1 if x > y else -1
        if s != prev:
            runs += 1
            prev = s
    return runs < 4


def grassmannian_collection(m: int, n: int) -> list:
    """Maximal weakly separated collection of ``m``-subsets of ``1..n``.

    Uses the sets ``[1, a] ∪ [b, b + m - a - 1]``; they are pairwise weakly
    separated and there are ``m(n - m) + 1`` of them.
    """
    out = set()
    for a in range(0, m + 1):
        rest = m - a
        if rest == 0:
            out.add(tuple(range(1, a + 1)))
            continue
        for b in range(a + 1, n - rest + 2):
            out.add(tuple(range(1, a + 1)) + tuple(range(b, b + rest)))
    return [LatticeLabel.from_subset(s, n) for s in sorted(out)]


def anchors(n: int) -> list:
    return [(i, -i * i) for i in range(1, n + 1)]


def position(z, n: int) -> tuple:
    v = anchors(n)
    zz = _z(z)
    return (sum(c * p[0] for c, p in zip(zz, v)), sum(c * p[1] for c, p in zip(zz, v)))


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _angle_cmp(u, v) -> int:
    """Exact comparison of direction angles in ``[0, 2pi)``."""
    hu = 0 if (u[1] > 0 or (u[1] == 0 and u[0] > 0)) else 1
    hv = 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1
    if hu != hv:
        return hu - hv
    c = u[0] * v[1] - u[1] * v[0]
    return -1 if c > 0 else (1 if c < 0 else 0)


@dataclass
class PlabicTiling:
    n: int
    level: int
    labels: list  # LatticeLabel
    points: dict  # label -> (x, y)
    face_cliques: dict  # (m+1)-subset -> ordered member labels
    black_cliques: dict  # (m-1)-subset -> ordered member labels
    edges: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "level": self.level,
            "vertices": [{"label": z.name(), "xy": [str(c) for c in self.points[z]]} for z in self.labels],
            "face_cliques": [[z.name() for z in v] for v in self.face_cliques.values()],
            "black_cliques": [[z.name() for z in v] for v in self.black_cliques.values()],
        }


def plabic_tiling(labels: Iterable, n: int | None = None) -> PlabicTiling:
    """Build the tiling of a maximal weakly separated collection."""
    labs = [x if isinstance(x, LatticeLabel) else LatticeLabel(tuple(x)) for x in labels]
    labs = sorted(set(labs), key=lambda z: z.subset())
    if not labs:
        raise NotMaximal("empty collection", [])
    n = n or labs[0].n
    m = labs[0].level
    for z in labs:
        if z.n != n or z.level != m or any(x not in (0, 1) for x in z.z):
            raise LevelMismatch("labels must be 0/1 vectors of one level", z.name())
    for a, b in combinations(labs, 2):
        if not weakly_separated(a, b):
            raise NotWeaklySeparated("labels are not weakly separated", [a.name(), b.name()])
    if len(labs) != m * (n - m) + 1:
        raise NotMaximal("collection has %d labels, maximal size is %d" % (len(labs), m * (n - m) + 1),
                         len(labs))
    sets = {frozenset(z.subset()): z for z in labs}
    pts = {z: position(z, n) for z in labs}
    black = {}
    for K in combinations(range(1, n + 1), max(m - 1, 0)):
        if m == 0:
            break
        mem = [sets[frozenset(K) | {a}] for a in range(1, n + 1)
               if a not in K and frozenset(K) | {a} in sets]
        if len(mem) >= 3:
            black[K] = mem
    face = {}
    for K in combinations(range(1, n + 1), m + 1):
        mem = [sets[frozenset(K) - {a}] for a in K if frozenset(K) - {a} in sets]
        if len(mem) >= 3:
            face[K] = mem
    edges = set()
    for cl in list(black.values()) + list(face.values()):
        for a, b in zip(cl, cl[1:] + cl[:1]):
            edges.add(tuple(sorted((a, b), key=lambda z: z.subset())))
    return PlabicTiling(n, m, labs, pts, face, black, sorted(edges, key=lambda e: (e[0].subset(), e[1].subset())))


def tiling_graph(labels: Iterable, n: int) -> BtbGraph:
    """BTB graph obtained by fan-triangulating every black clique of the tiling."""
    labs = list(labels)
    m = labs[0].level if labs else 0
    if m == 0:
        z = LatticeLabel((0,) * n)
        return BtbGraph(n, {z.name(): (1,) + tuple(range(n, 1, -1))}, {})
    t = plabic_tiling(labs, n)
    pts = t.points
    blacks = {}
    centre = {}
    k = 0
    for K in sorted(t.black_cliques):
        cl = t.black_cliques[K]
        for j in range(1, len(cl) - 1):
            tri = [cl[0], cl[j], cl[j + 1]]
            if _cross(pts[tri[0]], pts[tri[1]], pts[tri[2]]) < 0:
                tri = [tri[0], tri[2], tri[1]]
            k += 1
            bid = "b%d" % k
            blacks[bid] = tri
            centre[bid] = tuple(Fraction(sum(pts[z][c] for z in tri), 3) for c in (0, 1))
    inc = {z: [] for z in t.labels}
    for b, tri in blacks.items():
        for z in tri:
            inc[z].append(b)
    bnd = {}
    for i in range(1, n + 1):
        z = LatticeLabel.from_subset(range(i - m, i), n)
        bnd[z] = i
    cx = Fraction(sum(pts[z][0] for z in bnd), len(bnd))
    cy = Fraction(sum(pts[z][1] for z in bnd), len(bnd))
    white_rot = {}
    for z in t.labels:
        p = pts[z]
        items = [(b, (centre[b][0] - p[0], centre[b][1] - p[1])) for b in inc[z]]
        if z in bnd:
            items.append((bnd[z], (p[0] - cx, p[1] - cy)))
        items.sort(key=cmp_to_key(lambda a, b: _angle_cmp(a[1], b[1])))
        white_rot[z.name()] = tuple(x for x, _ in items)
    black_rot = {b: tuple(z.name() for z in tri) for b, tri in blacks.items()}
    return BtbGraph(n, white_rot, black_rot)


DESARGUES_LABELS = ("123", "125", "135", "145", "234", "235", "345")


def desargues_graph() -> BtbGraph:
    """The 7-white, 3-black graph of the elementary 5-cycle (strands ``i -> i + 4``).

    White ids are the label names.
    """
    return tiling_graph([LatticeLabel.from_subset(map(int, s), 5) for s in DESARGUES_LABELS], 5)


# ---------------------------------------------------------------- label tables


class LabelTable:
    """Lattice label -> point, filled from many graphs; inserts must agree."""

    def __init__(self):
        self.points = {}
        self.provenance = {}
        self.inserts = 0
        self._lock = threading.Lock()

    def insert(self, label: LatticeLabel, point: ProjPoint, source=None):
        with self._lock:
            self.inserts += 1
            old = self.points.get(label)
            if old is None:
                self.points[label] = point
                self.provenance[label] = source
                return
            if old != point:
                raise ConsistencyViolation("label already holds a different point", {
                    "label": label.name(),
                    "first": {"point": [str(x) for x in old.coords], "source": self.provenance[label]},
                    "second": {"point": [str(x) for x in point.coords], "source": source},
                })

    def __len__(self):
        return len(self.points)

    def __contains__(self, label):
        return label in self.points

    def __getitem__(self, label) -> ProjPoint:
        return self.points[label]

    def labels(self) -> list:
        return sorted(self.points, key=lambda z: z.z)

    def to_dict(self) -> dict:
        return {
            "labels": [{"label": z.name(), "point": [str(x) for x in self.points[z].coords],
                        "source": self.provenance[z]} for z in self.labels()],
        }


def collect_labels(move_graph, table: LabelTable | None = None) -> LabelTable:
    """Union of ``(ban(w), T(w))`` over every node of an explored move graph carrying a map.

    Also accepts a single ``TcdMap``.
    """
    from .btb import ban_labels
    from .tcd import TcdMap

    table = table if table is not None else LabelTable()
    if isinstance(move_graph, TcdMap):
        nodes = [(0, move_graph.graph, move_graph)]
    else:
        nodes = [(i, nd.graph, nd.map) for i, nd in enumerate(move_graph.nodes)]
    for i, g, m in nodes:
        if m is None:
            continue
        lab = ban_labels(g).white
        for w in g.white_ids:
            table.insert(lab[w], m.points[w], {"node": i, "white": w})
    return table


def _minus(z: tuple, *idx) -> tuple | None:
    out = list(z)
    for i in idx:
        out[i] -= 1
        if out[i] < 0:
            return None
    return tuple(out)


def _plus(z: tuple, *idx) -> LatticeLabel:
    out = list(z)
    for i in idx:
        out[i] += 1
    return LatticeLabel(tuple(out))


def black_triangles(table: LabelTable) -> list:
    """Complete black triangles ``{z + e_i : i in I}``, ``|I| = 3``, as ``(z, I)``."""
    members = {}
    for y in table.labels():
        for i, c in enumerate(y.z):
            if c:
                z = _minus(y.z, i)
                members.setdefault(z, set()).add(i)
    out = []
    for z in sorted(members):
        for I in combinations(sorted(members[z]), 3):
            out.append((z, I))
    return out


def verify_desargues_map(table: LabelTable, strict: bool = True) -> dict:
    """Every complete black triangle of the table is collinear."""
    bad = []
    tris = black_triangles(table)
    for z, I in tris:
        pts = [table[_plus(z, i)] for i in I]
        if not collinear(*pts):
            bad.append({"triangle": [_plus(z, i).name() for i in I]})
    report = {"pass": not bad, "triangles": len(tris), "violations": bad}
    if strict and bad:
        raise CollinearityViolation("black triangle not collinear", bad)
    return report


def octahedron_order(z: tuple, I: Sequence[int]) -> list:
    """Six octahedron labels in the order of the resplit multi-ratio.

    With ``I = (i1 < i2 < i3 < i4)`` and ``w_rs = z + e_ir + e_is`` the order is
    ``(w14, w13, w12, w23, w24, w34)``: ``w13`` is the resplit white, ``w24``
    the new one, and consecutive triples lie on the blacks ``z + e_i``.
    A live resplit reads these points in an image of this order under a
    symmetry of the square ``i1 i2 i3 i4`` (which black comes first, and the
    direction of the move); the equation is invariant under those and under
    rotating or reversing the cycle.
    """
    a, b, c, d = I
    return [_plus(z, *p) for p in ((a, d), (a, c), (a, b), (b, c), (b, d), (c, d))]


def octahedra(table: LabelTable) -> tuple:
    """``(complete, incomplete)``; incomplete ones have five of six vertices present."""
    pairs = {}
    for y in table.labels():
        nz = [i for i, c in enumerate(y.z) if c]
        for i, j in combinations(nz, 2):
            z = _minus(y.z, i, j)
            pairs.setdefault(z, set()).add((i, j))
    complete, incomplete = [], []
    for z in sorted(pairs):
        idx = sorted({i for p in pairs[z] for i in p})
        for I in combinations(idx, 4):
            have = sum(1 for p in combinations(I, 2) if p in pairs[z])
            if have == 6:
                complete.append((z, I))
            elif have == 5:
                incomplete.append((z, I))
    return complete, incomplete


def verify_dskp_lattice(table: LabelTable, strict: bool = True) -> dict:
    """Every complete octahedron of a rank-1 table satisfies multi-ratio ``-1``."""
    complete, incomplete = octahedra(table)
    bad = []
    for z, I in complete:
        labs = octahedron_order(z, I)
        pts = [table[x] for x in labs]
        if span_dimension(pts) > 1:
            raise DskpViolation("octahedron points do not lie on a line", [x.name() for x in labs])
        try:
            ok = multi_ratio(pts) == -1
        except Exception:
            ok = False
        if not ok:
            bad.append({"octahedron": [x.name() for x in labs]})
    report = {"pass": not bad, "octahedra": len(complete), "incomplete": len(incomplete), "violations": bad}
    if strict and bad:
        raise DskpViolation("dSKP equation fails", bad)
    return report
