"""
Black-trivalent bipartite (BTB) graphs embedded in a disk or a cactus.

A graph is stored as a rotation system. Each white vertex carries a
counterclockwise cyclic list whose items are black ids (``str``) or boundary
gaps (``int`` boundary indices). A gap marks where the exterior touches the
vertex; a vertex glued in the cactus has several gaps. Each black vertex
carries a counterclockwise cyclic triple of white ids.

Boundary whites ``w_1, ..., w_n`` run clockwise, and boundary arc ``j`` joins
``w_j`` to ``w_{j-1}``. Faces are traced with the left-hand rule (each face
counterclockwise, on the left of the walk); zig-zag paths turn maximally left
at whites and maximally right at blacks.
"""

from __future__ import annotations

import heapq
import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence, Union

from .errors import InvalidGraph, MalformedEmbedding, NotMinimal

Item = Union[str, int]
State = tuple  # (vertex id, item arrived from)

_NUM = re.compile(r"(\d+)")


def natkey(s) -> tuple:
    """Natural sort key: ``b2 < b10``."""
    if isinstance(s, int):
        return ((0, s, ""),)
    return tuple((0, int(p), "") if p.isdigit() else (1, 0, p) for p in _NUM.split(str(s)) if p)


def _sorted(ids: Iterable) -> list:
    return sorted(ids, key=natkey)


# ---------------------------------------------------------------------------
# small value types


@dataclass(frozen=True)
class StrandPermutation:
    """Permutation ``i -> perm[i-1]`` of ``{1..n}``."""

    perm: tuple

    def __post_init__(self):
        if sorted(self.perm) != list(range(1, len(self.perm) + 1)):
            raise ValueError("not a permutation of 1..n: %r" % (self.perm,))

    @property
    def n(self) -> int:
        return len(self.perm)

    def __call__(self, i: int) -> int:
        return self.perm[i - 1]

    def shifted(self, s: int) -> "StrandPermutation":
        n = self.n
        return StrandPermutation(tuple((c - 1 + s) % n + 1 for c in self.perm))

    def to_list(self) -> list:
        return list(self.perm)


def epsilon(k: int, n: int) -> StrandPermutation:
    """The permutation ``i -> i + k mod n``."""
    return StrandPermutation(tuple((i - 1 + k) % n + 1 for i in range(1, n + 1)))


@dataclass(frozen=True)
class ZigzagPath:
    source: int
    sink: int
    darts: tuple  # ((u, v), ...) traversed in order

    @property
    def edges(self) -> list:
        """Traversed edges as ``((black, white), flag)`` with flag ``"wb"`` or ``"bw"``."""
        # darts alternate colours starting at the source white
        return [((v, u), "wb") if k % 2 == 0 else ((u, v), "bw")
                for k, (u, v) in enumerate(self.darts)]


@dataclass(frozen=True)
class LatticeLabel:
    """Integer vector ``z`` in the shifted lattice; ``level`` is its coordinate sum."""

    z: tuple

    @property
    def level(self) -> int:
        return sum(self.z)

    @property
    def n(self) -> int:
        return len(self.z)

    def subset(self) -> tuple:
        """1-based support, meaningful for 0/1 labels."""
        return tuple(i + 1 for i, x in enumerate(self.z) if x)

    @classmethod
    def from_subset(cls, s: Iterable[int], n: int) -> "LatticeLabel":
        z = [0] * n
        for i in s:
            z[(i - 1) % n] += 1
        return cls(tuple(z))

    def plus(self, i: int, c: int = 1) -> "LatticeLabel":
        z = list(self.z)
        z[i - 1] += c
        return LatticeLabel(tuple(z))

    def name(self) -> str:
        if any(x not in (0, 1) for x in self.z):
            return "(" + ",".join(map(str, self.z)) + ")"
        s = self.subset()
        if not s:
            return "e"
        sep = "" if self.n <= 9 else "."
        return sep.join(map(str, s))

    def __str__(self):
        return self.name()


@dataclass(frozen=True)
class Face:
    """A face given by its counterclockwise cycle of corners ``(vertex, arrived_from)``."""

    id: str
    corners: tuple
    boundary: bool

    @property
    def vertices(self) -> tuple:
        return tuple(c[0] for c in self.corners)

    @property
    def degree(self) -> int:
        return len(self.corners)


@dataclass
class Violation:
    kind: str
    message: str
    witness: object = None

    def to_dict(self) -> dict:
        return {"kind": self.kind, "message": self.message, "witness": self.witness}


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def add(self, kind: str, message: str, witness=None):
        self.violations.append(Violation(kind, message, witness))

    def to_dict(self) -> dict:
        return {"valid": self.valid, "violations": [v.to_dict() for v in self.violations],
                "notes": list(self.notes)}


@dataclass(frozen=True)
class MinimalityResult:
    minimal: bool
    reason: str = ""
    witness: object = None

    def __bool__(self):
        return self.minimal


@dataclass(frozen=True)
class PerfectOrientation:
    """``direction[(b, w)]`` is ``"bw"`` (black to white) or ``"wb"``."""

    graph: "BtbGraph"
    direction: Mapping

    def out_white(self, b: str) -> str:
        return next(w for w in self.graph.black_rot[b] if self.direction[(b, w)] == "bw")

    def in_black(self, w: str):
        bs = [b for b in self.graph.black_nbrs(w) if self.direction[(b, w)] == "bw"]
        return bs[0] if len(bs) == 1 else None

    @cached_property
    def sources(self) -> list:
        g = self.graph
        return [w for w in g.white_ids if all(self.direction[(b, w)] == "wb" for b in g.black_nbrs(w))]

    def predecessors(self, w: str) -> tuple:
        """The two other whites of the black feeding ``w`` (empty for sources)."""
        b = self.in_black(w)
        if b is None:
            return ()
        return tuple(x for x in self.graph.black_rot[b] if x != w)

    def is_acyclic(self) -> bool:
        try:
            self.linear_extension()
            return True
        except InvalidGraph:
            return False

    def linear_extension(self) -> list:
        """Kahn order of the whites with smallest-id tie-breaking."""
        g = self.graph
        indeg = {w: 0 for w in g.white_ids}
        succ = {w: [] for w in g.white_ids}
        for b in g.black_ids:
            o = self.out_white(b)
            for w in g.black_rot[b]:
                if w != o:
                    succ[w].append(o)
                    indeg[o] += 1
        heap = [(natkey(w), w) for w in g.white_ids if indeg[w] == 0]
        heapq.heapify(heap)
        order = []
        while heap:
            _, w = heapq.heappop(heap)
            order.append(w)
            for o in succ[w]:
                indeg[o] -= 1
                if indeg[o] == 0:
                    heapq.heappush(heap, (natkey(o), o))
        if len(order) != len(indeg):
            raise InvalidGraph("perfect orientation has a directed cycle",
                               [w for w in g.white_ids if w not in order])
        return order

    def check(self) -> list:
        """Degree-rule violations as a list of messages."""
        g = self.graph
        bad = []
        for b in g.black_ids:
            k = sum(1 for w in g.black_rot[b] if self.direction[(b, w)] == "bw")
            if k != 1:
                bad.append("black %s has %d outgoing edges" % (b, k))
        for w in g.white_ids:
            if g.is_boundary(w):
                continue
            k = sum(1 for b in g.black_nbrs(w) if self.direction[(b, w)] == "bw")
            if k != 1:
                bad.append("white %s has %d incoming edges" % (w, k))
        return bad


# ---------------------------------------------------------------------------
# the graph


def _normal_rotation(r: Sequence[Item]) -> tuple:
    """Cyclic list rotated to start at its smallest gap, else its smallest id."""
    r = tuple(r)
    if not r:
        return r
    gaps = [x for x in r if isinstance(x, int)]
    first = min(gaps) if gaps else min(r, key=natkey)
    k = r.index(first)
    return r[k:] + r[:k]


class BtbGraph:
    """Immutable BTB graph in a cactus, stored as a rotation system."""

    def __init__(self, n: int, white_rot: Mapping[str, Sequence[Item]],
                 black_rot: Mapping[str, Sequence[str]]):
        self.n = int(n)
        self.white_rot = {w: _normal_rotation(white_rot[w]) for w in _sorted(white_rot)}
        self.black_rot = {b: _normal_rotation(black_rot[b]) for b in _sorted(black_rot)}
        self._frozen = True

    def __setattr__(self, name, value):
        if getattr(self, "_frozen", False) and not name.startswith("_c_"):
            raise AttributeError("BtbGraph is immutable")
        object.__setattr__(self, name, value)

    # structural equality (ids matter)
    def _key(self):
        return (self.n, tuple(self.white_rot.items()), tuple(self.black_rot.items()))

    def __eq__(self, other):
        return isinstance(other, BtbGraph) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return "BtbGraph(n=%d, whites=%d, blacks=%d)" % (self.n, len(self.white_rot), len(self.black_rot))

    def __reduce__(self):
        return (BtbGraph, (self.n, self.white_rot, self.black_rot))

    def _cache(self, name, fn):
        key = "_c_" + name
        d = self.__dict__
        if key not in d:
            object.__setattr__(self, key, fn())
        return d[key]

    # -- basic accessors ----------------------------------------------------

    @property
    def white_ids(self) -> list:
        return list(self.white_rot)

    @property
    def black_ids(self) -> list:
        return list(self.black_rot)

    def is_white(self, v) -> bool:
        return v in self.white_rot

    def rot(self, v) -> tuple:
        return self.white_rot[v] if v in self.white_rot else self.black_rot[v]

    def black_nbrs(self, w) -> tuple:
        return tuple(x for x in self.white_rot[w] if isinstance(x, str))

    def degree(self, v) -> int:
        if v in self.black_rot:
            return len(self.black_rot[v])
        return len(self.black_nbrs(v))

    def gaps(self, w) -> tuple:
        return tuple(x for x in self.white_rot[w] if isinstance(x, int))

    def is_boundary(self, w) -> bool:
        return any(isinstance(x, int) for x in self.white_rot[w])

    @property
    def boundary(self) -> dict:
        """Boundary index ``i`` to the white vertex ``w_i``."""
        def build():
            out = {}
            for w, r in self.white_rot.items():
                for x in r:
                    if isinstance(x, int):
                        out[x] = w
            return dict(sorted(out.items()))
        return self._cache("boundary", build)

    def W(self, i: int) -> str:
        return self.boundary[(i - 1) % self.n + 1]

    @property
    def cactus(self) -> list:
        """Noncrossing partition of ``1..n`` induced by the glued boundary whites."""
        def build():
            blocks = {}
            for i, w in self.boundary.items():
                blocks.setdefault(w, []).append(i)
            return sorted(sorted(b) for b in blocks.values())
        return self._cache("cactus", build)

    @property
    def edges(self) -> list:
        def build():
            return sorted(((b, w) for b, r in self.black_rot.items() for w in r),
                          key=lambda e: (natkey(e[0]), natkey(e[1])))
        return self._cache("edges", build)

    def _pos(self, v) -> dict:
        def build():
            out = {}
            for x, r in list(self.white_rot.items()) + list(self.black_rot.items()):
                out[x] = {it: k for k, it in enumerate(r)}
            return out
        return self._cache("pos", build)[v]

    def ccw_succ(self, v, item):
        r = self.rot(v)
        return r[(self._pos(v)[item] + 1) % len(r)]

    def cw_succ(self, v, item):
        r = self.rot(v)
        return r[(self._pos(v)[item] - 1) % len(r)]

    def rotated(self, v, first) -> tuple:
        """Rotation of ``v`` as a tuple starting at ``first``."""
        r = self.rot(v)
        k = self._pos(v)[first]
        return r[k:] + r[:k]

    def mrank(self) -> int:
        return len(self.white_rot) - len(self.black_rot) - 1

    # -- face tracing -------------------------------------------------------

    def _step_face(self, state: State) -> State:
        x, frm = state
        nxt = self.cw_succ(x, frm)
        if isinstance(nxt, int):
            j = (nxt - 2) % self.n + 1
            return (self.W(j), j)
        return (nxt, x)

    def _all_states(self) -> list:
        states = []
        for b, r in self.black_rot.items():
            for w in r:
                states.append((b, w))
        for w, r in self.white_rot.items():
            for x in r:
                states.append((w, x))
        return states

    @property
    def faces(self) -> list:
        return self._cache("faces", self._trace_faces)

    def _trace_faces(self) -> list:
        seen = set()
        cycles = []
        for s in sorted(self._all_states(), key=lambda s: (natkey(s[0]), natkey(s[1]))):
            if s in seen:
                continue
            cyc = []
            cur = s
            while cur not in seen:
                seen.add(cur)
                cyc.append(cur)
                try:
                    cur = self._step_face(cur)
                except (KeyError, ValueError) as e:
                    raise MalformedEmbedding("face tracing failed", {"state": list(map(str, cur))}) from e
            if cur != s:
                raise MalformedEmbedding("face tracing does not close up", {"state": list(map(str, s))})
            cycles.append(tuple(cyc))
        # canonical rotation of each cycle: start at a black corner if any,
        # otherwise at the smallest white corner
        faces = []
        for cyc in cycles:
            key = lambda c: (0 if c[0] in self.black_rot else 1, natkey(c[0]), natkey(c[1]))
            k = min(range(len(cyc)), key=lambda i: key(cyc[i]))
            cyc = cyc[k:] + cyc[:k]
            faces.append(cyc)
        faces.sort(key=lambda c: (natkey(c[0][0]), natkey(c[0][1])))
        return [Face("f%d" % (i + 1), c, any(isinstance(x[1], int) for x in c))
                for i, c in enumerate(faces)]

    @property
    def face_of_state(self) -> dict:
        def build():
            return {c: f.id for f in self.faces for c in f.corners}
        return self._cache("face_of_state", build)

    def face_left_of(self, u, v) -> str:
        """Face on the left of the dart ``u -> v``."""
        return self.face_of_state[(v, u)]

    @property
    def face_by_id(self) -> dict:
        return self._cache("face_by_id", lambda: {f.id: f for f in self.faces})

    @property
    def internal_faces(self) -> list:
        return [f for f in self.faces if not f.boundary]

    # -- zig-zag paths ------------------------------------------------------

    def _step_zigzag(self, state: State):
        x, frm = state
        nxt = self.cw_succ(x, frm) if x in self.white_rot else self.ccw_succ(x, frm)
        if isinstance(nxt, int):
            return None, nxt
        return (nxt, x), None

    @property
    def zigzags(self) -> tuple:
        """``(paths, loops, state_strand)``; loops are closed dart cycles."""
        return self._cache("zigzags", self._trace_zigzags)

    def _trace_zigzags(self):
        paths = []
        state_strand = {}
        used = set()
        for i in range(1, self.n + 1):
            w = self.W(i)
            cur = (w, i)
            state_strand[cur] = i
            darts = []
            sink = None
            for _ in range(4 * (len(self.edges) + self.n) + 4):
                nxt, exit_gap = self._step_zigzag(cur)
                if nxt is None:
                    sink = exit_gap
                    break
                dart = (cur[0], nxt[0])
                if dart in used:
                    raise MalformedEmbedding("zig-zag path revisits a dart", {"source": i, "dart": list(dart)})
                used.add(dart)
                darts.append(dart)
                state_strand[nxt] = i
                cur = nxt
            if sink is None:
                raise MalformedEmbedding("zig-zag path does not terminate", {"source": i})
            paths.append(ZigzagPath(i, sink, tuple(darts)))
        loops = []
        all_darts = [(w, b) for b, w in self.edges] + [(b, w) for b, w in self.edges]
        for d in all_darts:
            if d in used:
                continue
            loop = []
            cur = (d[1], d[0])
            while True:
                dart = (cur[1], cur[0])
                if dart in used:
                    break
                used.add(dart)
                loop.append(dart)
                nxt, gap = self._step_zigzag(cur)
                if nxt is None:
                    break
                cur = nxt
            loops.append(tuple(loop))
        return tuple(paths), tuple(loops), state_strand

    def strand_of_dart(self, u, v):
        return self.zigzags[2].get((v, u))

    def strands(self) -> tuple:
        paths = list(self.zigzags[0])
        sinks = tuple(p.sink for p in paths)
        return paths, StrandPermutation(sinks)

    def strand_permutation(self) -> StrandPermutation:
        return self.strands()[1]

    # -- records ------------------------------------------------------------

    @classmethod
    def from_records(cls, n: int, whites: Iterable, blacks: Iterable, cactus=None) -> "BtbGraph":
        """Build from per-boundary-index white records.

        ``whites`` holds ``(id, boundary index or None, ccw black ids)``. A
        boundary record lists its blacks counterclockwise starting just after
        the exterior. Records in a common cactus block are merged into one
        vertex; ``id@i`` naming is folded back to ``id``.
        """
        whites = [(str(w), (None if i is None else int(i)), [str(b) for b in nb]) for w, i, nb in whites]
        blacks = [(str(b), [str(w) for w in nb]) for b, nb in blacks]
        by_index = {}
        white_rot = {}
        rename = {}
        for w, i, nb in whites:
            if i is None:
                if w in white_rot:
                    raise InvalidGraph("duplicate white id", w)
                white_rot[w] = tuple(nb)
            else:
                if i in by_index:
                    raise InvalidGraph("boundary index used twice", i)
                by_index[i] = (w, nb)
        if cactus is None:
            cactus = [[i] for i in sorted(by_index)]
        for block in cactus:
            block = sorted(int(i) for i in block)
            missing = [i for i in block if i not in by_index]
            if missing:
                raise InvalidGraph("cactus block refers to missing boundary index", missing)
            recs = [by_index[i] for i in block]
            bases = {r[0].split("@")[0] for r in recs}
            vid = bases.pop() if len(bases) == 1 else recs[0][0]
            if len(block) == 1:
                vid = recs[0][0] if "@" not in recs[0][0] else vid
            rot = [block[0]]
            for i in reversed(block[1:]):
                rot.extend(by_index[i][1])
                rot.append(i)
            rot.extend(by_index[block[0]][1])
            if vid in white_rot:
                raise InvalidGraph("duplicate white id", vid)
            white_rot[vid] = tuple(rot)
            for i in block:
                rename[by_index[i][0]] = vid
        covered = {int(i) for bl in cactus for i in bl}
        if covered != set(by_index):
            raise InvalidGraph("cactus does not cover the boundary records",
                               sorted(set(by_index) ^ covered))
        black_rot = {}
        for b, nb in blacks:
            if b in black_rot:
                raise InvalidGraph("duplicate black id", b)
            black_rot[b] = tuple(rename.get(w, w) for w in nb)
        return cls(n, white_rot, black_rot)

    def records(self) -> tuple:
        """Inverse of :meth:`from_records`: ``(whites, blacks, cactus)``."""
        whites = []
        for w, r in self.white_rot.items():
            gaps = [x for x in r if isinstance(x, int)]
            if not gaps:
                whites.append((w, None, list(r)))
                continue
            for i in gaps:
                # items counterclockwise before gap i, back to the previous gap
                k = self._pos(w)[i]
                items = []
                j = k - 1
                while not isinstance(r[j % len(r)], int):
                    items.append(r[j % len(r)])
                    j -= 1
                wid = w if len(gaps) == 1 else "%s@%d" % (w, i)
                whites.append((wid, i, list(reversed(items))))
        whites.sort(key=lambda t: (0 if t[1] is None else 1, t[1] or 0, natkey(t[0])))
        blacks = [(b, list(r)) for b, r in self.black_rot.items()]
        return whites, blacks, [list(b) for b in self.cactus]

    def replace(self, white_rot=None, black_rot=None) -> "BtbGraph":
        return BtbGraph(self.n, self.white_rot if white_rot is None else white_rot,
                        self.black_rot if black_rot is None else black_rot)

    def relabeled(self, wmap: Mapping = None, bmap: Mapping = None) -> "BtbGraph":
        wmap = wmap or {}
        bmap = bmap or {}
        wr = {wmap.get(w, w): tuple(bmap.get(x, x) if isinstance(x, str) else x for x in r)
              for w, r in self.white_rot.items()}
        br = {bmap.get(b, b): tuple(wmap.get(w, w) for w in r) for b, r in self.black_rot.items()}
        return BtbGraph(self.n, wr, br)

    # -- canonical form -----------------------------------------------------

    def canonical_form(self) -> tuple:
        """Id-free encoding from a traversal anchored at the labeled boundary.

        Boundary labels are fixed, so starting at ``w_1`` (rotation read from
        gap 1) and visiting neighbours in rotation order gives a canonical
        numbering without any isomorphism search.
        """
        def build():
            order = {}
            start = {}
            queue = deque()
            out = []

            def visit(v, first):
                if v not in order:
                    order[v] = len(order)
                    start[v] = first
                    queue.append(v)

            for i in range(1, self.n + 1):
                visit(self.W(i), i)
                while queue:
                    v = queue.popleft()
                    for x in self.rotated(v, start[v]):
                        if isinstance(x, str):
                            visit(x, v)
            for v in self.white_rot:
                if v not in order:
                    raise MalformedEmbedding("vertex unreachable from the boundary", v)
            for v in self.black_rot:
                if v not in order:
                    raise MalformedEmbedding("vertex unreachable from the boundary", v)
            seq = sorted(order, key=order.get)
            for v in seq:
                col = "w" if v in self.white_rot else "b"
                enc = tuple(("g", x) if isinstance(x, int) else order[x] for x in self.rotated(v, start[v]))
                out.append((col, enc))
            return (self.n, tuple(out)), tuple(seq)
        return self._cache("canonical", build)[0]

    def canonical_order(self) -> tuple:
        """Vertex ids in the order used by :meth:`canonical_form`."""
        self.canonical_form()
        return self.__dict__["_c_canonical"][1]

    def canonical_whites(self) -> tuple:
        return tuple(v for v in self.canonical_order() if v in self.white_rot)

    # -- high-level operations (thin wrappers) ------------------------------

    def validate(self) -> ValidationReport:
        return validate(self)

    def is_minimal(self) -> MinimalityResult:
        return is_minimal(self)


# ---------------------------------------------------------------------------
# module-level operations


def validate(graph: BtbGraph) -> ValidationReport:
    """Check every structural invariant, collecting violations with witnesses."""
    rep = ValidationReport()
    g = graph
    if g.n < 1:
        rep.add("boundary", "n must be positive", g.n)
    clash = set(g.white_rot) & set(g.black_rot)
    if clash:
        rep.add("ids", "ids shared between colours", _sorted(clash))
    for b, r in g.black_rot.items():
        if len(r) != 3:
            rep.add("black_degree", "black degree ≠ 3", {"black": b, "degree": len(r)})
        if len(set(r)) != len(r):
            rep.add("multi_edge", "black has a repeated white neighbour", b)
        for w in r:
            if w not in g.white_rot:
                rep.add("reference", "black refers to unknown white", {"black": b, "white": w})
            elif b not in g.white_rot[w]:
                rep.add("symmetry", "adjacency not symmetric", {"black": b, "white": w})
    seen_gaps = {}
    for w, r in g.white_rot.items():
        blacks = [x for x in r if isinstance(x, str)]
        if len(set(blacks)) != len(blacks):
            rep.add("multi_edge", "white has a repeated black neighbour", w)
        for b in blacks:
            if b not in g.black_rot:
                rep.add("reference", "white refers to unknown black", {"white": w, "black": b})
            elif w not in g.black_rot[b]:
                rep.add("symmetry", "adjacency not symmetric", {"black": b, "white": w})
        for x in r:
            if isinstance(x, int):
                if x in seen_gaps:
                    rep.add("boundary", "boundary index used twice", x)
                seen_gaps[x] = w
        if not r:
            rep.add("isolated", "internal white with no edges", w)
        gaps = [x for x in r if isinstance(x, int)]
        if len(gaps) > 1:
            # counterclockwise the gaps of a glued vertex appear in cyclically decreasing order
            k = gaps.index(min(gaps))
            cyc = gaps[k:] + gaps[:k]
            if cyc != [cyc[0]] + sorted(cyc[1:], reverse=True):
                rep.add("cactus", "glued boundary gaps out of clockwise order", {"white": w, "gaps": gaps})
    if sorted(seen_gaps) != list(range(1, g.n + 1)):
        rep.add("boundary", "boundary indices must be exactly 1..n", sorted(seen_gaps))
    if not rep.valid:
        return rep
    blocks = g.cactus
    if not noncrossing(blocks, g.n):
        rep.add("cactus", "cactus blocks cross", blocks)
    try:
        faces = g.faces
    except MalformedEmbedding as e:
        rep.add("embedding", e.message, e.witness)
        return rep
    # Euler characteristic with boundary arcs as edges and one exterior face
    V = len(g.white_rot) + len(g.black_rot)
    E = len(g.edges) + g.n
    F = len(faces) + 1
    comps = _components(g)
    if V - E + F != 2 * comps:
        rep.add("embedding", "Euler characteristic mismatch (not planar)",
                {"V": V, "E": E, "F": F, "components": comps})
    if comps > 1:
        rep.notes.append("boundary arcs join %d components" % comps)
    if any(len(b) > 1 for b in blocks):
        rep.notes.append("glued blocks: %s" % [b for b in blocks if len(b) > 1])
    try:
        g.zigzags
    except MalformedEmbedding as e:
        rep.add("embedding", e.message, e.witness)
    return rep


def _components(g: BtbGraph) -> int:
    parent = {v: v for v in list(g.white_rot) + list(g.black_rot)}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for b, w in g.edges:
        union(b, w)
    for i in range(1, g.n + 1):
        union(g.W(i), g.W(i - 1))
    return len({find(v) for v in parent})


def noncrossing(blocks: Sequence[Sequence[int]], n: int) -> bool:
    """Stack test for a noncrossing partition of ``1..n``."""
    blk = {}
    last = {}
    for k, b in enumerate(blocks):
        for i in b:
            blk[i] = k
        last[k] = max(b)
    stack = []
    for i in range(1, n + 1):
        k = blk.get(i)
        if k is None:
            return False
        if k in stack:
            if stack[-1] != k:
                return False
        else:
            stack.append(k)
        if last[k] == i:
            stack.pop()
    return True


def strands(graph: BtbGraph) -> tuple:
    """Zig-zag paths from each source and the strand permutation."""
    return graph.strands()


def is_minimal(graph: BtbGraph) -> MinimalityResult:
    """No closed strand, no self-intersecting strand, no parallel bigon."""
    paths, loops, _ = graph.zigzags
    if loops:
        return MinimalityResult(False, "closed strand", [list(d) for d in loops[0]])
    where = {}  # edge -> [(strand, position)]
    for p in paths:
        for k, (u, v) in enumerate(p.darts):
            e = (u, v) if u in graph.black_rot else (v, u)
            where.setdefault(e, []).append((p.source, k))
    for e, occ in where.items():
        if len(occ) == 2 and occ[0][0] == occ[1][0]:
            return MinimalityResult(False, "self-intersecting strand",
                                    {"strand": occ[0][0], "edge": list(e)})
    shared = {}
    for e, occ in where.items():
        if len(occ) != 2:
            continue
        (s, ps), (t, pt) = sorted(occ)
        shared.setdefault((s, t), []).append((ps, pt, e))
    for (s, t), lst in sorted(shared.items()):
        lst.sort()
        for (a1, b1, e1), (a2, b2, e2) in zip(lst, lst[1:]):
            if b1 < b2:
                return MinimalityResult(False, "parallel bigon",
                                        {"strands": [s, t], "edges": [list(e1), list(e2)]})
    return MinimalityResult(True)


def mrank(graph: BtbGraph) -> int:
    return graph.mrank()


def _in_cw_arc(p: int, a: int, b: int, m: int) -> bool:
    return 0 < (p - a) % m < (b - a) % m


@dataclass(frozen=True)
class Labeling:
    """``an``/``ban`` labels of whites, faces and blacks."""

    white: Mapping
    face: Mapping
    black: Mapping
    an_black: Mapping

    def all(self) -> dict:
        out = {}
        out.update({("white", k): v for k, v in self.white.items()})
        out.update({("face", k): v for k, v in self.face.items()})
        out.update({("black", k): v for k, v in self.black.items()})
        return out


def boundary_labels(perm: StrandPermutation) -> dict:
    """``an(w_i)`` for each boundary index, read off the strand endpoints."""
    n = perm.n
    m = 3 * n
    out = {}
    for i in range(1, n + 1):
        z = [1 if _in_cw_arc(3 * i, 3 * j + 1, 3 * perm(j) - 1, m) else 0 for j in range(1, n + 1)]
        out[i] = LatticeLabel(tuple(z))
    return out


def ban_labels(graph: BtbGraph) -> Labeling:
    """Propagate strand-side labels from the boundary through faces and vertices."""
    g = graph
    paths, loops, state_strand = g.zigzags
    if loops:
        raise NotMinimal("labels need a graph without closed strands", [list(d) for d in loops[0]])
    perm = StrandPermutation(tuple(p.sink for p in paths))
    n = g.n

    def e(s):
        z = [0] * n
        z[s - 1] = 1
        return z

    # equations  lab[a] = lab[b] + e_s
    eqs = []
    fos = g.face_of_state
    for w, r in g.white_rot.items():
        for frm in r:
            s = state_strand[(w, frm)]
            eqs.append((("f", fos[(w, frm)]), ("w", w), s))
    for b, r in g.black_rot.items():
        for w in r:
            f = fos[(b, w)]
            s = state_strand[(b, g.cw_succ(b, w))]
            eqs.append((("b", b), ("f", f), s))
    adj = {}
    for a, c, s in eqs:
        adj.setdefault(a, []).append((c, -1, s))
        adj.setdefault(c, []).append((a, 1, s))
    lab = {}
    queue = deque()
    for i, z in boundary_labels(perm).items():
        key = ("w", g.W(i))
        if key in lab and lab[key] != list(z.z):
            raise NotMinimal("glued boundary vertex receives conflicting labels", g.W(i))
        lab[key] = list(z.z)
        queue.append(key)
    while queue:
        a = queue.popleft()
        for c, sign, s in adj.get(a, ()):
            z = list(lab[a])
            z[s - 1] += sign
            if c in lab:
                if lab[c] != z:
                    raise NotMinimal("inconsistent strand-side labels", {"at": list(c), "strand": s})
            else:
                lab[c] = z
                queue.append(c)
    missing = [k for k in adj if k not in lab]
    if missing:
        raise MalformedEmbedding("labels do not reach every vertex", [list(k) for k in missing])
    white = {w: LatticeLabel(tuple(lab[("w", w)])) for w in g.white_rot}
    face = {f.id: LatticeLabel(tuple(lab[("f", f.id)])) for f in g.faces}
    an_black = {b: LatticeLabel(tuple(lab[("b", b)])) for b in g.black_rot}
    black = {}
    for b, r in g.black_rot.items():
        z = list(an_black[b].z)
        for w in r:
            z[state_strand[(b, w)] - 1] = 0
        black[b] = LatticeLabel(tuple(z))
    return Labeling(white, face, black, an_black)


def perfect_orientation(graph: BtbGraph) -> PerfectOrientation:
    """At each black, the edge not used by the middle of its three strands points out."""
    g = graph
    ss = g.zigzags[2]
    direction = {}
    for b, r in g.black_rot.items():
        through = sorted((ss[(b, w)], w) for w in r)
        if len({s for s, _ in through}) != 3:
            raise NotMinimal("black vertex is not on three distinct strands", b)
        wx = through[1][1]
        out = g.cw_succ(b, wx)
        for w in r:
            direction[(b, w)] = "bw" if w == out else "wb"
    return PerfectOrientation(g, direction)


def expected_sources(graph: BtbGraph) -> list:
    """Boundary whites with an index ``i`` whose incoming strand starts at a source ``>= i``.

    This is ``W^∂ \\ {i : C^{-1}(i) < i}``; it has ``mrank + 1`` elements.
    """
    perm = graph.strand_permutation()
    inv = {perm(i): i for i in range(1, graph.n + 1)}
    out = []
    for w in graph.white_ids:
        if any(inv[i] >= i for i in graph.gaps(w)):
            out.append(w)
    return out


def graph_from_grassmannian(k: int, n: int) -> BtbGraph:
    """Minimal BTB graph with strand permutation ``i -> i + k mod n``."""
    from .lattice import grassmannian_collection, tiling_graph

    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    g = tiling_graph(grassmannian_collection(k - 1, n), n)
    if g.strand_permutation() != epsilon(k, n):
        raise MalformedEmbedding("generated graph has the wrong strand permutation",
                                 g.strand_permutation().to_list())
    res = is_minimal(g)
    if not res:
        raise NotMinimal("generated graph is not minimal: " + res.reason, res.witness)
    return g
