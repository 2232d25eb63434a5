import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from tcdmaps.btb import BtbGraph, graph_from_grassmannian
from tcdmaps.cluster import (
    QVertex,
    Quiver,
    _face_black_ratios,
    affine_quiver,
    check_move_mutation,
    compare_quivers,
    is_t_realization,
    mutate,
    pdb_quiver,
    projective_quiver,
    t_graph_from_quiver,
    t_map,
    t_variables,
    x_variables,
    x_variables_from_points,
    y_variables,
    y_variables_from_points,
)
from tcdmaps.errors import DegenerateDenominator, NotMutable, UnsupportedDegree
from tcdmaps.moves import _spider_locals, explore, find_move_sites
from tcdmaps.projective import Hyperplane, apply_matrix, random_hyperplane, random_matrix
from tcdmaps.tcd import TcdMap, construct, lift_vrc, vrc_of


def star_quiver(arrows, values):
    ids = {x for e in arrows for x in e}
    verts = [QVertex(v, True, "face") for v in ids]
    return Quiver(verts, {e: 1 for e in arrows}, values)


def test_mutation_outgoing_arrow():
    q = star_quiver([("v", "u"), ("v", "a"), ("b", "v"), ("c", "v")], {"v": 2, "u": 5})
    q2 = mutate(q, "v")
    assert q2.values["v"] == F(1, 2) and q2.values["u"] == 15


def test_mutation_incoming_arrow():
    q = star_quiver([("u", "v"), ("v", "a"), ("v", "b"), ("c", "v")], {"v": 2, "u": 5})
    assert mutate(q, "v").values["u"] == F(10, 3)


def test_mutation_rewires_arrows():
    q = star_quiver([("a", "v"), ("v", "b"), ("c", "v"), ("v", "d")], {})
    q2 = mutate(q, "v")
    assert q2.nu("v", "a") == 1 and q2.nu("b", "v") == 1
    assert q2.nu("a", "b") == 1 and q2.nu("c", "d") == 1 and q2.nu("a", "d") == 1


def test_mutation_errors():
    q = star_quiver([("a", "v"), ("v", "b")], {"v": 1})
    with pytest.raises(UnsupportedDegree):
        mutate(q, "v")
    q = Quiver([QVertex("v", False, "face"), QVertex("a", True, "face")], {("a", "v"): 1})
    with pytest.raises(NotMutable):
        mutate(q, "v")
    q = star_quiver([("v", "u"), ("v", "a"), ("b", "v"), ("c", "v")], {"v": -1})
    with pytest.raises(DegenerateDenominator):
        mutate(q, "v")


@given(st.lists(st.sampled_from([-2, -1, 1, 2]), min_size=2, max_size=4),
       st.lists(st.fractions(min_value=-50, max_value=50).filter(lambda x: x not in (0, -1)),
                min_size=5, max_size=5),
       st.integers(-2, 2))
def test_mutation_is_involution(ks, xs, extra):
    others = ["a", "b", "c", "d"]
    while sum(abs(k) for k in ks) < 4:
        ks = ks + [1]
    arrows, total = {}, 0
    for u, k in zip(others, ks):
        k = k if total + abs(k) <= 4 else (1 if k > 0 else -1) * (4 - total)
        if k:
            arrows[("v", u)] = k
            total += abs(k)
    if total != 4:
        return
    if extra:
        arrows[("a", "b")] = extra
    q = Quiver([QVertex(v, True, "face") for v in ["v"] + others], arrows, dict(zip(["v"] + others, xs)))
    assert mutate(mutate(q, "v"), "v") == q


def test_quiver_dict_round_trip(g35):
    q = projective_quiver(g35, x_variables(construct(g35, 2, seed=1)))
    assert Quiver.from_dict(q.to_dict()) == q


def test_projective_quiver_shape(g35):
    q = projective_quiver(g35)
    assert set(q.mutable) == {f.id for f in g35.internal_faces}
    for s in find_move_sites(g35):
        if s.kind == "spider":
            assert q.degree(s.target) == 4
    assert all(q.nu(u, u) == 0 for u in q.vertices)


def test_single_black_triangle_cancels_boundary_arrows():
    g = BtbGraph(3, {"W1": (1, "b"), "W2": (2, "b"), "W3": (3, "b")}, {"b": ("W1", "W3", "W2")})
    q = affine_quiver(g)
    # the black triangle cancels against the boundary arrows W(i+1) -> W(i)
    assert q.nu_map == {}


def test_resplit_white_has_affine_degree_four(g35):
    q = affine_quiver(g35)
    for s in find_move_sites(g35):
        if s.kind == "resplit":
            assert q.degree(s.target) == 4


def test_spider_face_variable_closed_form():
    g = graph_from_grassmannian(2, 4)
    m = construct(g, 1, seed=3)
    (s,) = find_move_sites(g)
    b2, b4, (w1, w2, w3, w4) = _spider_locals(g, s.target)
    mu = lift_vrc(m).weights
    a, b = mu[(b2, w1)] / mu[(b2, w2)], mu[(b2, w3)] / mu[(b2, w2)]
    c, d = mu[(b4, w3)] / mu[(b4, w4)], mu[(b4, w1)] / mu[(b4, w4)]
    assert x_variables(m)[s.target] == -b * d / (a * c)


@given(st.integers(0, 10 ** 6), st.sampled_from([(3, 5), (4, 5), (3, 6), (4, 6)]), st.integers(1, 3))
def test_x_weight_and_point_forms_agree(seed, kn, d):
    g = graph_from_grassmannian(*kn)
    m = construct(g, min(d, g.mrank()), seed=seed)
    assert x_variables(m) == x_variables_from_points(m)


@given(st.integers(0, 10 ** 6), st.sampled_from([(3, 5), (4, 6)]))
def test_x_gauge_and_projective_invariance(seed, kn):
    g = graph_from_grassmannian(*kn)
    m = construct(g, 2, seed=seed)
    x = x_variables(m)
    vrc = vrc_of(m, Hyperplane([1, 0, 0]) if all(p.coords[0] for p in m.points.values()) else None)
    assert {f.id: _face_black_ratios(g, f, vrc.weights) for f in g.internal_faces} == x
    A = random_matrix(3, random.Random(seed))
    moved = TcdMap(g, 2, {w: apply_matrix(A, p) for w, p in m.points.items()})
    assert x_variables(moved) == x


@given(st.integers(0, 10 ** 6), st.sampled_from([(3, 5), (4, 6), (3, 6)]))
def test_y_weight_and_star_ratio_forms_agree(seed, kn):
    g = graph_from_grassmannian(*kn)
    m = construct(g, 2, seed=seed)
    h = random_hyperplane(2, seed=seed, avoid=m.points.values())
    assert y_variables(m, h) == y_variables_from_points(m, h)


@given(st.integers(0, 10 ** 6))
def test_y_affine_invariance(seed):
    g = graph_from_grassmannian(3, 5)
    m = construct(g, 2, seed=seed)
    if any(p.coords[2] == 0 for p in m.points.values()):
        return
    rng = random.Random(seed)
    A = random_matrix(3, rng)
    A[2] = [0, 0, 1]
    if A[0][0] * A[1][1] == A[0][1] * A[1][0]:
        return
    moved = TcdMap(g, 2, {w: apply_matrix(A, p) for w, p in m.points.items()})
    assert y_variables(moved) == y_variables(m)


@pytest.mark.parametrize("kn", [(3, 5), (4, 5), (3, 6), (4, 6)])
def test_moves_are_mutations(kn):
    g = graph_from_grassmannian(*kn)
    mg = explore(construct(g, g.mrank(), seed=7))
    for i, site, j in mg.edges:
        rec = check_move_mutation(mg.nodes[i].map, site, new_map=None)
        assert rec["pass"], rec["differences"]


def test_t_bridge_round_trip():
    for kn in [(3, 5), (4, 6), (3, 6)]:
        g = graph_from_grassmannian(*kn)
        q = pdb_quiver(g)
        g2 = t_graph_from_quiver(q)
        assert g2.canonical_form() == g.canonical_form()
        assert compare_quivers(affine_quiver(g2), affine_quiver(g)) == []


@given(st.integers(0, 10 ** 6), st.sampled_from([(3, 5), (4, 6), (3, 6)]))
def test_t_variables_are_affine_cluster_variables(seed, kn):
    q = pdb_quiver(graph_from_grassmannian(*kn))
    rng = random.Random(seed)
    t = {v: F(rng.randint(-999, 999), rng.randint(1, 99)) for v in q.vertices}
    try:
        tm = t_map(q, t)
    except Exception:
        return
    assert t_variables(q, t) == y_variables(tm)


def test_t_realization_needs_positive_values():
    q = pdb_quiver(graph_from_grassmannian(3, 5))
    rng = random.Random(0)
    seen = set()
    for _ in range(200):
        t = {v: F(rng.randint(-99, 99)) for v in q.vertices}
        if len(set(t.values())) < len(t):
            continue
        ys = t_variables(q, t)
        assert is_t_realization(q, t) == all(y > 0 for y in ys.values())
        seen.add(is_t_realization(q, t))
    assert seen == {True, False}

