import random
from fractions import Fraction as F
from itertools import permutations

import pytest
from hypothesis import given, strategies as st

from tcdmaps.btb import BtbGraph, graph_from_grassmannian
from tcdmaps.cluster import x_variables
from tcdmaps.errors import CircuitViolated, NonGenericHyperplane, NotAdmissible, RankDeficient
from tcdmaps.projective import Hyperplane, ProjPoint, Subspace, olr, random_hyperplane
from tcdmaps.tcd import (
    TcdMap,
    Vrc,
    construct,
    drop_center,
    from_vrc,
    is_one_generic,
    lift,
    project,
    random_admissible_center,
    rank,
    vrc_of,
)

FAMILIES = [(3, 5), (4, 5), (3, 6), (4, 6), (5, 6)]


def one_black():
    return BtbGraph(3, {"W1": (1, "b"), "W2": (2, "b"), "W3": (3, "b")}, {"b": ("W1", "W3", "W2")})


def line_map(xs):
    g = one_black()
    return TcdMap(g, 1, {w: ProjPoint([F(x), 1]) for w, x in zip(("W1", "W2", "W3"), xs)})


def test_from_vrc_on_the_line():
    g = one_black()
    vecs = {"W1": (0, 1), "W2": (1, 1), "W3": (3, 1)}
    # 2 (0,1) - 3 (1,1) + (3,1) = 0
    w = {("b", "W1"): F(2), ("b", "W2"): F(-3), ("b", "W3"): F(1)}
    t = from_vrc(Vrc(g, vecs, w))
    assert len(set(t.points.values())) == 3
    assert from_vrc(Vrc(g, vecs, w).regauged({"W1": 5, "W3": F(-1, 2)}, {"b": 7})) == t


def test_from_vrc_rejects_parallel_vectors():
    g = one_black()
    vecs = {"W1": (1, 1), "W2": (2, 2), "W3": (3, 1)}
    w = {("b", "W1"): F(1), ("b", "W2"): F(1), ("b", "W3"): F(1)}
    with pytest.raises(CircuitViolated):
        from_vrc(Vrc(g, vecs, w))


def test_affine_gauge_relation_on_the_line():
    t = line_map([0, 1, 3])
    v = vrc_of(t, Hyperplane([0, 1]))
    mu = [v.weights[("b", w)] for w in ("W1", "W2", "W3")]
    assert sum(mu) == 0
    assert [m / mu[2] for m in mu] == [2, -3, 1]
    # canonical scale: the first weight in rotation order is 1
    assert v.weights[("b", "W1")] == 1


def test_vrc_of_rejects_chart_through_point():
    t = line_map([0, 1, 3])
    with pytest.raises(NonGenericHyperplane):
        vrc_of(t, Hyperplane([1, 0]))


def test_construct_desargues(desargues):
    t = construct(desargues, 3, 0)
    assert len(t.points) == 7 and rank(t) == 3
    with pytest.raises(RankDeficient):
        construct(desargues, 4, 0)


def test_rank_of_constant_map():
    g = BtbGraph(2, {"a": (1,), "b": (2,)}, {})
    assert rank(TcdMap(g, 2, {"a": ProjPoint([1, 2, 3]), "b": ProjPoint([2, 4, 6])})) == 0


def test_lift_and_project_back(desargues):
    t1 = construct(desargues, 1, 4)
    t3 = lift(t1, 3, 9)
    assert rank(t3) == 3
    assert project(t3, drop_center(1, 3)) == t1
    assert x_variables(t3) == x_variables(t1)
    with pytest.raises(RankDeficient):
        lift(t3, 4, 0)


def test_project_generic_center(desargues):
    t = construct(desargues, 3, 1)
    c = random_admissible_center(t, 1, 5)
    assert rank(project(t, c)) == 2


def test_project_inadmissible(desargues):
    t = construct(desargues, 3, 1)
    w = desargues.white_ids[0]
    with pytest.raises(NotAdmissible):
        project(t, Subspace([t[w].coords]))
    b = desargues.black_ids[0]
    u, v, _ = desargues.black_rot[b]
    on_line = [x + 2 * y for x, y in zip(t[u].coords, t[v].coords)]
    with pytest.raises(NotAdmissible):
        project(t, Subspace([on_line]))


def test_one_genericity(desargues):
    assert is_one_generic(construct(desargues, 3, 2))
    assert not is_one_generic(construct(desargues, 1, 2))


def test_one_genericity_boundary_clause():
    g = graph_from_grassmannian(3, 6)
    t = construct(g, 2, 3)
    pts = dict(t.points)
    pts[g.W(2)] = pts[g.W(1)]
    res = is_one_generic(TcdMap(g, 2, pts, check=False))
    assert not res


@given(st.sampled_from(FAMILIES), st.integers(0, 10 ** 6), st.data())
def test_map_properties(kn, seed, data):
    k, n = kn
    g = graph_from_grassmannian(k, n)
    d = data.draw(st.integers(1, k - 1))
    t = construct(g, d, seed)
    assert rank(t) == d <= g.mrank()
    h = random_hyperplane(d, seed, avoid=list(t.points.values()))
    v = vrc_of(t, h)
    v.check()
    assert from_vrc(v) == t
    for b, r in g.black_rot.items():
        assert len({t[w] for w in r}) == 3
        assert sum(v.weights[(b, w)] for w in r) == 0
        for w1, w2, w3 in permutations(r):
            assert olr(t[w2], t[w3], t[w1], h) == -v.weights[(b, w3)] / v.weights[(b, w2)]


@given(st.sampled_from(FAMILIES), st.integers(0, 10 ** 6))
def test_lift_project_round_trip(kn, seed):
    k, n = kn
    g = graph_from_grassmannian(k, n)
    t1 = construct(g, 1, seed)
    top = lift(t1, k - 1, seed + 1)
    assert project(top, drop_center(1, k - 1)) == t1


@given(st.integers(0, 10 ** 6))
def test_gauge_invariance(seed):
    rng = random.Random(seed)
    t = construct(graph_from_grassmannian(3, 5), 2, seed)
    v = vrc_of(t)
    vs = {w: F(rng.randint(1, 9), rng.randint(1, 9)) * rng.choice((1, -1)) for w in t.points}
    bs = {b: F(rng.randint(1, 9)) for b in t.graph.black_ids}
    g = v.regauged(vs, bs)
    g.check()
    assert from_vrc(g) == t
