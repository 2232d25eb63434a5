"""
Exact projective linear algebra over the rationals.

Points and hyperplanes are homogeneous integer vectors normalized to be
primitive with a positive first nonzero entry, so structural equality is
projective equality. All ratio invariants are computed with ``Fraction``.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Sequence

from .errors import (
    DegenerateDenominator,
    ExhaustedRetries,
    IncidenceViolated,
    NonCoplanar,
    NotCollinear,
    PointAtInfinity,
    PointInCenter,
)

MAX_RETRIES = 64
SAMPLE_RANGE = 9


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def normalize(vec: Iterable) -> tuple[int, ...]:
    """Primitive integer representative with positive first nonzero entry."""
    fr = [as_fraction(x) for x in vec]
    if not any(fr):
        raise ValueError("zero vector has no projective class")
    den = reduce(lambda a, b: a * b // gcd(a, b), (x.denominator for x in fr), 1)
    ints = [int(x * den) for x in fr]
    g = reduce(gcd, (abs(x) for x in ints if x), 0)
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x)
    if lead < 0:
        ints = [-x for x in ints]
    return tuple(ints)


class ProjPoint:
    """Point of ℚP^d given by homogeneous coordinates."""

    __slots__ = ("coords",)

    def __init__(self, coords: Iterable):
        object.__setattr__(self, "coords", normalize(coords))

    def __setattr__(self, name, value):
        raise AttributeError("ProjPoint is immutable")

    @property
    def dim(self) -> int:
        return len(self.coords) - 1

    def vector(self) -> list[Fraction]:
        return [Fraction(x) for x in self.coords]

    def __eq__(self, other):
        return isinstance(other, ProjPoint) and self.coords == other.coords

    def __hash__(self):
        return hash(("P", self.coords))

    def __repr__(self):
        return "ProjPoint(%s)" % (list(self.coords),)

    def __reduce__(self):
        return (ProjPoint, (self.coords,))


class Hyperplane:
    """Hyperplane of ℚP^d given by a covector."""

    __slots__ = ("coords",)

    def __init__(self, coords: Iterable):
        object.__setattr__(self, "coords", normalize(coords))

    def __setattr__(self, name, value):
        raise AttributeError("Hyperplane is immutable")

    @property
    def dim(self) -> int:
        return len(self.coords) - 1

    def pair(self, v: Sequence) -> Fraction:
        return sum((Fraction(h) * as_fraction(x) for h, x in zip(self.coords, v)), Fraction(0))

    def contains(self, p: ProjPoint) -> bool:
        return self.pair(p.coords) == 0

    def __eq__(self, other):
        return isinstance(other, Hyperplane) and self.coords == other.coords

    def __hash__(self):
        return hash(("H", self.coords))

    def __repr__(self):
        return "Hyperplane(%s)" % (list(self.coords),)

    def __reduce__(self):
        return (Hyperplane, (self.coords,))


def standard_chart(d: int) -> Hyperplane:
    """Hyperplane at infinity ``x_{d+1} = 0``."""
    return Hyperplane([0] * d + [1])


# ---------------------------------------------------------------- linear algebra


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [[as_fraction(x) for x in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of ``{x : M x = 0}`` for the matrix with the given rows."""
    if not rows:
        if ncols is None:
            raise ValueError("ncols required for an empty matrix")
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    ncols = len(rows[0])
    red, piv = rref(rows)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for r, c in enumerate(piv):
            x[c] = -red[r][f]
        basis.append(x)
    return basis


def relation(vectors: Sequence[Sequence]) -> list[Fraction]:
    """Coefficients of the unique linear relation among ``vectors``.

    Raises ``IncidenceViolated`` unless the relations form a single line.
    """
    cols = [[as_fraction(x) for x in v] for v in vectors]
    rows = [list(r) for r in zip(*cols)]
    ker = nullspace(rows)
    if len(ker) != 1:
        raise IncidenceViolated("expected a one-dimensional relation space, got %d" % len(ker))
    return ker[0]


def _points_matrix(points: Iterable[ProjPoint]) -> list[tuple[int, ...]]:
    return [p.coords for p in points]


def span_dimension(points: Iterable[ProjPoint]) -> int:
    """Projective dimension of the span (−1 for no points)."""
    return rank(_points_matrix(points)) - 1


def collinear(*points: ProjPoint) -> bool:
    return span_dimension(points) <= 1


def coplanar(*points: ProjPoint) -> bool:
    return span_dimension(points) <= 2


# ---------------------------------------------------------------- subspaces


class Subspace:
    """Projective subspace stored as the RREF of a spanning set."""

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Sequence]):
        red, _ = rref([list(r) for r in rows])
        object.__setattr__(self, "rows", tuple(tuple(r) for r in red))

    def __setattr__(self, name, value):
        raise AttributeError("Subspace is immutable")

    @classmethod
    def span(cls, points: Iterable[ProjPoint]) -> "Subspace":
        return cls([p.coords for p in points])

    @property
    def dimension(self) -> int:
        """Projective dimension (−1 for the empty subspace)."""
        return len(self.rows) - 1

    @property
    def ambient(self) -> int:
        return len(self.rows[0]) - 1 if self.rows else -1

    def contains(self, p: ProjPoint) -> bool:
        return rank(list(self.rows) + [p.coords]) == len(self.rows)

    def meets(self, other: "Subspace") -> bool:
        return rank(list(self.rows) + list(other.rows)) < len(self.rows) + len(other.rows)

    def points(self) -> list[ProjPoint]:
        return [ProjPoint(r) for r in self.rows]

    def __eq__(self, other):
        return isinstance(other, Subspace) and self.rows == other.rows

    def __hash__(self):
        return hash(("S", self.rows))

    def __repr__(self):
        return "Subspace(dim=%d, rows=%s)" % (self.dimension, [[str(x) for x in r] for r in self.rows])


def line_through(p: ProjPoint, q: ProjPoint) -> Subspace:
    if p == q:
        raise DegenerateDenominator("a line needs two distinct points", [list(p.coords)])
    return Subspace.span([p, q])


def intersect_line_hyperplane(line: Subspace, h: Hyperplane) -> ProjPoint:
    if line.dimension != 1:
        raise ValueError("expected a line")
    p, q = line.rows
    hp, hq = h.pair(p), h.pair(q)
    if hp == 0 and hq == 0:
        raise IncidenceViolated("line lies inside the hyperplane", [list(h.coords)])
    return ProjPoint([hq * a - hp * b for a, b in zip(p, q)])


def intersect_coplanar_lines(l1: Subspace, l2: Subspace) -> ProjPoint:
    """Meet of two distinct lines lying in a common plane."""
    if l1 == l2:
        raise DegenerateDenominator("lines coincide")
    p1, q1 = l1.rows
    p2, q2 = l2.rows
    ker = nullspace([list(r) for r in zip(p1, q1, p2, q2)])
    if not ker:
        raise NonCoplanar("lines are skew")
    a, b = ker[0][0], ker[0][1]
    return ProjPoint([a * x + b * y for x, y in zip(p1, q1)])


def central_projection(center: Subspace, p: ProjPoint, target: Subspace | None = None) -> ProjPoint:
    """Image of ``p`` under projection from ``center``.

    Without a target the image is written in the coordinates left after
    eliminating the pivot columns of the center's RREF, so projecting from
    ``span(e_{d+1})`` simply drops the last coordinate.
    """
    if center.contains(p):
        raise PointInCenter("point lies in the center", list(p.coords))
    v = p.vector()
    if target is None:
        red, piv = rref(center.rows)
        for r, c in zip(red, piv):
            f = v[c]
            if f:
                v = [a - f * b for a, b in zip(v, r)]
        return ProjPoint([x for i, x in enumerate(v) if i not in piv])
    if center.meets(target) or center.dimension + target.dimension + 1 != len(v) - 1:
        raise IncidenceViolated("center and target are not complementary")
    cols = [list(r) for r in target.rows] + [list(r) for r in center.rows]
    mat = [list(r) + [x] for r, x in zip(zip(*cols), v)]
    red, piv = rref(mat)
    k = len(target.rows)
    coeff = [Fraction(0)] * len(cols)
    for r, c in zip(red, piv):
        coeff[c] = r[-1]
    return ProjPoint(coeff[:k])


# ---------------------------------------------------------------- ratios


def _affine(p: ProjPoint, chart: Hyperplane) -> list[Fraction]:
    s = chart.pair(p.coords)
    if s == 0:
        raise PointAtInfinity("point lies on the chart hyperplane", list(p.coords))
    return [Fraction(x) / s for x in p.coords]


def _vec_ratio(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    j = next((i for i, x in enumerate(v) if x != 0), None)
    if j is None:
        raise DegenerateDenominator("zero denominator")
    return u[j] / v[j]


def _sub(a, b):
    return [x - y for x, y in zip(a, b)]


def default_chart(points: Sequence[ProjPoint]) -> Hyperplane:
    """Deterministic chart avoiding all given points."""
    d = points[0].dim
    cands = [[1] * (d + 1)] + [[int(i == j) for i in range(d + 1)] for j in range(d, -1, -1)]
    for c in cands:
        h = Hyperplane(c)
        if not any(h.contains(p) for p in points):
            return h
    rng = random.Random(0)
    for _ in range(10 * MAX_RETRIES):
        h = Hyperplane([rng.randint(-SAMPLE_RANGE, SAMPLE_RANGE) or 1 for _ in range(d + 1)])
        if not any(h.contains(p) for p in points):
            return h
    raise ExhaustedRetries("no chart avoids the points")


def olr(p1: ProjPoint, p2: ProjPoint, p3: ProjPoint, chart: Hyperplane | None = None) -> Fraction:
    """Oriented length ratio ``(p1 - p3) / (p2 - p3)`` on a common line."""
    if not collinear(p1, p2, p3):
        raise NotCollinear("points are not collinear", [list(p.coords) for p in (p1, p2, p3)])
    if p2 == p3:
        raise DegenerateDenominator("p2 equals p3", list(p2.coords))
    chart = chart or default_chart([p1, p2, p3])
    a1, a2, a3 = (_affine(p, chart) for p in (p1, p2, p3))
    return _vec_ratio(_sub(a1, a3), _sub(a2, a3))


def multi_ratio(points: Sequence[ProjPoint], chart: Hyperplane | None = None) -> Fraction:
    """Multi-ratio of the cyclic chain ``p1, p12, p2, p23, ..., pm, pm1``."""
    if len(points) < 4 or len(points) % 2:
        raise ValueError("multi-ratio needs an even number (>= 4) of points")
    chart = chart or default_chart(list(points))
    m = len(points) // 2
    aff = [_affine(p, chart) for p in points]
    out = Fraction(1)
    for i in range(m):
        a, mid, b = 2 * i, 2 * i + 1, (2 * i + 2) % len(points)
        if not collinear(points[a], points[mid], points[b]):
            raise IncidenceViolated("chain point off its line", i)
        if points[mid] == points[b]:
            raise DegenerateDenominator("consecutive chain points coincide", i)
        out *= _vec_ratio(_sub(aff[a], aff[mid]), _sub(aff[mid], aff[b]))
    return out


def star_ratio(center: ProjPoint, pairs: Sequence[tuple[ProjPoint, ProjPoint]],
               chart: Hyperplane | None = None) -> Fraction:
    """Star-ratio ``prod(p_i - c) / prod(c - p'_i)`` in an affine chart."""
    allp = [center] + [p for pr in pairs for p in pr]
    chart = chart or default_chart(allp)
    c = _affine(center, chart)
    out = Fraction(1)
    for i, (p, q) in enumerate(pairs):
        if not collinear(center, p, q):
            raise IncidenceViolated("center not on the line of pair %d" % i, i)
        if q == center:
            raise DegenerateDenominator("pair point coincides with center", i)
        out *= _vec_ratio(_sub(_affine(p, chart), c), _sub(c, _affine(q, chart)))
    return out


# ---------------------------------------------------------------- sampling


def _rand_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-SAMPLE_RANGE, SAMPLE_RANGE), rng.randint(1, SAMPLE_RANGE))


def random_vector(d: int, rng: random.Random) -> list[Fraction]:
    while True:
        v = [_rand_rational(rng) for _ in range(d + 1)]
        if any(v):
            return v


def random_point(d: int, seed=None, rng: random.Random | None = None) -> ProjPoint:
    rng = rng or random.Random(seed)
    return ProjPoint(random_vector(d, rng))


def random_hyperplane(d: int, seed=None, avoid: Iterable[ProjPoint] = (),
                      rng: random.Random | None = None) -> Hyperplane:
    """Random hyperplane missing every point in ``avoid``."""
    rng = rng or random.Random(seed)
    avoid = list(avoid)
    for _ in range(MAX_RETRIES):
        h = Hyperplane(random_vector(d, rng))
        if not any(h.contains(p) for p in avoid):
            return h
    raise ExhaustedRetries("could not sample a hyperplane avoiding %d points" % len(avoid))


def random_matrix(size: int, rng: random.Random, invertible: bool = True) -> list[list[Fraction]]:
    for _ in range(MAX_RETRIES):
        m = [[_rand_rational(rng) for _ in range(size)] for _ in range(size)]
        if not invertible or rank(m) == size:
            return m
    raise ExhaustedRetries("no invertible matrix sampled")


def apply_matrix(m: Sequence[Sequence], p: ProjPoint) -> ProjPoint:
    return ProjPoint([sum((as_fraction(a) * x for a, x in zip(row, p.coords)), Fraction(0)) for row in m])


__all__ = [
    "ProjPoint", "Hyperplane", "Subspace", "normalize", "as_fraction", "standard_chart",
    "rref", "rank", "nullspace", "relation", "span_dimension", "collinear", "coplanar",
    "line_through", "intersect_line_hyperplane", "intersect_coplanar_lines",
    "central_projection", "default_chart", "olr", "multi_ratio", "star_ratio",
    "random_vector", "random_point", "random_hyperplane", "random_matrix", "apply_matrix",
    "MAX_RETRIES",
]
