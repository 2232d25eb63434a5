import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from tcdmaps.errors import (
    DegenerateDenominator,
    ExhaustedRetries,
    IncidenceViolated,
    NotCollinear,
    PointAtInfinity,
    PointInCenter,
)
from tcdmaps.projective import (
    Hyperplane,
    ProjPoint,
    Subspace,
    apply_matrix,
    central_projection,
    collinear,
    intersect_coplanar_lines,
    intersect_line_hyperplane,
    line_through,
    multi_ratio,
    olr,
    random_hyperplane,
    random_matrix,
    random_point,
    span_dimension,
    standard_chart,
    star_ratio,
)

CHART1 = Hyperplane([0, 1])  # affine coordinate x of [x : 1]


def aff(x):
    return ProjPoint([F(x), 1])


def test_point_normalization():
    p = ProjPoint([F(2, 3), F(-4, 3), 0])
    assert p.coords == (1, -2, 0)
    assert ProjPoint([-3, 6, 0]) == p
    assert hash(ProjPoint([-3, 6, 0])) == hash(p)
    assert ProjPoint([0, -5]).coords == (0, 1)


@given(st.lists(st.integers(-20, 20), min_size=3, max_size=3).filter(any),
       st.fractions().filter(lambda f: f != 0))
def test_equality_agrees_with_proportionality(v, s):
    assert ProjPoint(v) == ProjPoint([s * x for x in v])


def test_olr_examples():
    assert olr(aff(0), aff(1), aff(3), CHART1) == F(3, 2)
    assert olr(aff(2), aff(2), aff(5), CHART1) == 1
    assert olr(aff(5), aff(2), aff(5), CHART1) == 0


def test_olr_errors():
    with pytest.raises(DegenerateDenominator):
        olr(aff(0), aff(1), aff(1), CHART1)
    with pytest.raises(NotCollinear):
        olr(ProjPoint([1, 0, 0]), ProjPoint([0, 1, 0]), ProjPoint([0, 0, 1]))
    with pytest.raises(PointAtInfinity):
        olr(ProjPoint([1, 0]), aff(1), aff(2), CHART1)


def test_multi_ratio_examples():
    assert multi_ratio([aff(0), aff(1), aff(2), aff(3)], CHART1) == F(-1, 3)
    assert multi_ratio([aff(0), aff(0), aff(2), aff(3)], CHART1) == 0
    with pytest.raises(DegenerateDenominator):
        multi_ratio([aff(0), aff(1), aff(1), aff(3)], CHART1)
    with pytest.raises(IncidenceViolated):
        multi_ratio([ProjPoint([1, 0, 0]), ProjPoint([0, 1, 0]), ProjPoint([0, 0, 1]), ProjPoint([1, 1, 1])])


def test_star_ratio_examples():
    assert star_ratio(aff(0), [(aff(1), aff(-1))], CHART1) == 1
    assert star_ratio(aff(0), [(aff(0), aff(-1))], CHART1) == 0


@given(st.lists(st.fractions(min_value=-50, max_value=50), min_size=7, max_size=7, unique=True))
def test_star_ratio_is_signed_product_of_olr(xs):
    c, rest = aff(xs[0]), [aff(x) for x in xs[1:]]
    pairs = list(zip(rest[::2], rest[1::2]))
    expected = (-1) ** len(pairs)
    for p, q in pairs:
        expected *= olr(p, q, c, CHART1)
    assert star_ratio(c, pairs, CHART1) == expected


def _chain(rng, m, d=2):
    """Random closed chain p1, p12, p2, ..., pm, pm1 with p_{i,i+1} on p_i p_{i+1}."""
    base = [random_point(d, rng=rng) for _ in range(m)]
    out = []
    for i in range(m):
        a, b = base[i], base[(i + 1) % m]
        s, t = rng.randint(1, 9), rng.randint(1, 9)
        out += [a, ProjPoint([s * x + t * y for x, y in zip(a.coords, b.coords)])]
    return out


@given(st.integers(0, 10 ** 6), st.integers(2, 4))
def test_multi_ratio_projective_invariance(seed, m):
    rng = random.Random(seed)
    pts = _chain(rng, m)
    mat = random_matrix(3, rng)
    moved = [apply_matrix(mat, p) for p in pts]
    assert multi_ratio(moved) == multi_ratio(pts)


@given(st.integers(0, 10 ** 6))
def test_multi_ratio_chart_independent(seed):
    rng = random.Random(seed)
    pts = _chain(rng, 3)
    h1 = random_hyperplane(2, rng=rng, avoid=pts)
    h2 = random_hyperplane(2, rng=rng, avoid=pts)
    assert multi_ratio(pts, h1) == multi_ratio(pts, h2)


@given(st.integers(0, 10 ** 6))
def test_multi_ratio_projection_invariant(seed):
    rng = random.Random(seed)
    pts = _chain(rng, 3, d=3)
    centre = Subspace([random_point(3, rng=rng).coords])
    lines = [Subspace.span([pts[2 * i], pts[(2 * i + 2) % 6]]) for i in range(3)]
    if any(centre.meets(L) for L in lines):
        return
    img = [central_projection(centre, p) for p in pts]
    assert multi_ratio(img) == multi_ratio(pts)


@given(st.integers(0, 10 ** 6))
def test_olr_affine_invariance(seed):
    rng = random.Random(seed)
    a, b = random_point(2, rng=rng), random_point(2, rng=rng)
    if a == b or standard_chart(2).contains(a) or standard_chart(2).contains(b):
        return
    c = ProjPoint([2 * x + 5 * y for x, y in zip(a.coords, b.coords)])
    # block upper triangular: fixes the chart x_2 = 0
    m = [[F(2), F(1), F(3)], [F(-1), F(4), F(7)], [0, 0, F(5)]]
    pts = [a, b, c]
    moved = [apply_matrix(m, p) for p in pts]
    h = standard_chart(2)
    if any(h.contains(p) for p in pts + moved) or b == c:
        return
    assert olr(*moved, h) == olr(*pts, h)


def test_central_projection_drops_coordinate():
    centre = Subspace([[0, 0, 0, 1]])
    assert central_projection(centre, ProjPoint([1, 2, 3, 4])) == ProjPoint([1, 2, 3])
    with pytest.raises(PointInCenter):
        central_projection(centre, ProjPoint([0, 0, 0, 7]))


def test_central_projection_with_target():
    centre = Subspace([[0, 0, 1]])
    target = Subspace([[1, 0, 0], [0, 1, 0]])
    assert central_projection(centre, ProjPoint([3, 4, 5]), target) == ProjPoint([3, 4])


def test_incidence_helpers():
    plane = lambda x, y: ProjPoint([F(x), F(y), 1])
    l1 = line_through(plane(0, 0), plane(2, 2))
    l2 = line_through(plane(0, 2), plane(2, 0))
    assert intersect_coplanar_lines(l1, l2) == plane(1, 1)
    p, q = random_point(2, 1), random_point(2, 2)
    assert collinear(p, p, q)
    assert span_dimension([ProjPoint([1, 0, 0]), ProjPoint([0, 1, 0]), ProjPoint([0, 0, 1])]) == 2
    x = intersect_line_hyperplane(l1, Hyperplane([1, 0, -1]))
    assert x == plane(1, 1)


def test_random_sampling_is_deterministic():
    assert random_point(3, 7) == random_point(3, 7)
    pts = [random_point(2, s) for s in range(5)]
    h = random_hyperplane(2, 3, avoid=pts)
    assert h == random_hyperplane(2, 3, avoid=pts)
    assert not any(h.contains(p) for p in pts)


def test_random_hyperplane_exhausts():
    # sampled covectors have entries p/q with |p|, q <= 9, so their zeros lie in this grid
    pts = [ProjPoint([a, b]) for a in range(-100, 101) for b in range(1, 101)] + [ProjPoint([1, 0])]
    with pytest.raises(ExhaustedRetries):
        random_hyperplane(1, 0, avoid=pts)
