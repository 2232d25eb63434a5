import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from tcdmaps.btb import BtbGraph, ban_labels, graph_from_grassmannian
from tcdmaps.errors import IndeterminateMove, InvalidMoveSite, MutationSingular
from tcdmaps.moves import (
    MoveSite,
    _spider_locals,
    apply_script,
    commuting_squares,
    dskp_check,
    explore,
    find_move_sites,
    maps_agree,
    resplit,
    resplit_full,
    spider,
    spider_graph,
    spider_vrc,
    spider_weights,
    verify_elementary_cycles,
)
from tcdmaps.projective import ProjPoint, multi_ratio
from tcdmaps.tcd import TcdMap, construct, lift_vrc, project, random_admissible_center


def pt(*xs):
    return ProjPoint([F(x) for x in xs])


def planar_resplit_map():
    # single resplit site at white 13 with locals (w1, w2, w3, w4) = (12, 14, 34, 23)
    g = graph_from_grassmannian(3, 4)
    pts = {"12": pt(0, 0, 1), "14": pt(0, 2, 1), "34": pt(2, 0, 1), "23": pt(2, 2, 1), "13": pt(0, 1, 0)}
    return TcdMap(g, 2, pts)


def test_find_move_sites_desargues_class(desargues):
    mg = explore(desargues)
    assert len(mg.nodes) == 5
    labels = set()
    for n in mg.nodes:
        lab = ban_labels(n.graph).white
        labels |= {lab[s.target].name() for s in find_move_sites(n.graph) if s.kind == "resplit"}
    assert {"135", "235", "245"} <= labels


def test_no_sites_on_single_black():
    g = BtbGraph(3, {"W1": (1, "b"), "W2": (2, "b"), "W3": (3, "b")}, {"b": ("W1", "W3", "W2")})
    assert find_move_sites(g) == []


def test_spider_site_survives_its_move():
    g = graph_from_grassmannian(2, 4)
    (site,) = find_move_sites(g)
    g2 = spider_graph(g, site.target)
    assert MoveSite("spider", site.target) in find_move_sites(g2)
    assert spider_graph(g2, site.target).canonical_form() == g.canonical_form()


def test_invalid_sites_rejected(g35):
    with pytest.raises(InvalidMoveSite):
        resplit(construct(g35, 2, seed=0), "nope")
    with pytest.raises(InvalidMoveSite):
        spider(construct(g35, 2, seed=0), "nope")


def test_planar_resplit_is_line_intersection():
    m = planar_resplit_map()
    m2, info = resplit_full(m, "13")
    assert m2.points["13"] == pt(1, 1, 1)
    assert info.locals == ("12", "14", "34", "23")
    assert all(m2.points[w] == m.points[w] for w in m.points if w != "13")


def test_menelaus_configuration_is_dskp():
    m = planar_resplit_map()
    _, info = resplit_full(m, "13")
    assert dskp_check(info.six_points(m))


def test_random_six_points_fail_dskp():
    rng = random.Random(5)
    hits = 0
    for _ in range(20):
        pts = [pt(rng.randint(-9, 9), rng.randint(-9, 9), 1) for _ in range(6)]
        try:
            hits += dskp_check(pts)
        except Exception:
            continue
    assert hits == 0


def test_resplit_twice_is_identity():
    m = planar_resplit_map()
    assert maps_agree(resplit(resplit(m, "13"), "13"), m)


def test_resplit_indeterminate_reports_pair():
    g = graph_from_grassmannian(3, 4)
    # T(w1) = T(w4) with w1 = 12, w4 = 23
    pts = {"12": pt(0, 0, 1), "23": pt(0, 0, 1), "14": pt(0, 2, 1), "13": pt(0, 1, 1), "34": pt(0, 5, 1)}
    with pytest.raises(IndeterminateMove) as e:
        resplit(TcdMap(g, 2, pts), "13")
    assert e.value.witness["pair"] == ["12", "23"]


def test_spider_keeps_points(g35):
    m = construct(g35, 2, seed=3)
    for s in find_move_sites(g35):
        if s.kind == "spider":
            m2 = spider(m, s.target)
            assert m2.points == m.points
            assert maps_agree(spider(m2, s.target), m)


def test_spider_singular_face():
    g = graph_from_grassmannian(2, 4)
    (site,) = find_move_sites(g)
    _, _, (w1, w2, w3, w4) = _spider_locals(g, site.target)
    pts = {w1: pt(0, 1), w2: pt(1, 1), w3: pt(3, 1), w4: pt(1, 1)}
    with pytest.raises(MutationSingular):
        spider(TcdMap(g, 1, pts), site.target)


@given(st.lists(st.integers(-20, 20).filter(bool), min_size=4, max_size=4),
       st.lists(st.integers(-9, 9), min_size=6, max_size=6))
def test_spider_weights_are_relations(abcd, xs):
    a, b, c, d = map(F, abcd)
    if a * c == b * d:
        return
    v1, v3 = [F(x) for x in xs[:3]], [F(x) for x in xs[3:]]
    v2 = [-a * x - b * y for x, y in zip(v1, v3)]
    v4 = [-d * x - c * y for x, y in zip(v1, v3)]
    w = spider_weights(a, b, c, d)
    vec = {"w1": v1, "w2": v2, "w3": v3, "w4": v4}
    for blk in ("b1", "b3"):
        terms = [(k[1], x) for k, x in w.items() if k[0] == blk]
        assert all(sum(x * vec[wi][i] for wi, x in terms) == 0 for i in range(3))


def test_spider_vrc_matches_closed_form(g35):
    m = construct(g35, 2, seed=11)
    vrc = lift_vrc(m)
    site = next(s for s in find_move_sites(g35) if s.kind == "spider")
    b2, b4, (w1, w2, w3, w4) = _spider_locals(g35, site.target)
    mu = vrc.weights
    a, b = mu[(b2, w1)] / mu[(b2, w2)], mu[(b2, w3)] / mu[(b2, w2)]
    c, d = mu[(b4, w3)] / mu[(b4, w4)], mu[(b4, w1)] / mu[(b4, w4)]
    ref = spider_weights(a, b, c, d)
    new = spider_vrc(vrc, site.target).weights
    for blk, ref_blk, ws in ((b2, "b1", (w1, w2, w4)), (b4, "b3", (w3, w2, w4))):
        got = [new[(blk, w)] for w in ws]
        want = [ref[(ref_blk, k)] for k in (("w1", "w2", "w4") if ref_blk == "b1" else ("w3", "w2", "w4"))]
        s = got[0] / want[0]
        assert [x * s for x in want] == got


def test_desargues_five_cycle(desargues):
    for seed in range(3):
        r = verify_elementary_cycles(construct(desargues, 3, seed=seed))
        assert r["cycle_lengths"] == {5: 1}
        assert r["walks"][0]["length"] == 5 and r["walks"][0]["ok"]


def test_ten_cycle(g35):
    for seed in range(3):
        r = verify_elementary_cycles(construct(g35, 2, seed=seed))
        assert r["cycle_lengths"] == {10: 1}
        assert r["walks"][0]["length"] == 10 and r["walks"][0]["ok"]


def test_disjoint_moves_commute():
    g = graph_from_grassmannian(3, 6)
    found = 0
    for seed in range(3):
        for sq in commuting_squares(construct(g, 2, seed=seed)):
            assert sq["ok"] is not False
            found += sq["ok"] is True
    assert found > 0


def test_script_round_trip(g35):
    m = construct(g35, 2, seed=2)
    s = find_move_sites(g35)[0]
    assert maps_agree(apply_script(m, [s, s]), m)


@given(st.integers(0, 10 ** 6), st.sampled_from([(3, 5), (4, 5), (3, 6)]))
def test_projection_commutes_with_moves(seed, kn):
    g = graph_from_grassmannian(*kn)
    m = construct(g, g.mrank(), seed=seed)
    c = random_admissible_center(m, g.mrank() - 1, seed=seed)
    for s in find_move_sites(g):
        try:
            low = project(m, c)
            a = project(resplit(m, s.target) if s.kind == "resplit" else spider(m, s.target), c)
            b = resplit(low, s.target) if s.kind == "resplit" else spider(low, s.target)
        except (IndeterminateMove, MutationSingular):
            continue
        assert a.points == b.points


@given(st.integers(0, 10 ** 6), st.sampled_from([(3, 5), (4, 5), (2, 5), (3, 6)]))
def test_maximal_rank_never_indeterminate(seed, kn):
    g = graph_from_grassmannian(*kn)
    mg = explore(construct(g, g.mrank(), seed=seed))
    assert mg.blocked == []


@given(st.integers(0, 10 ** 6), st.integers(1, 3))
def test_every_resplit_is_dskp(seed, d):
    g = graph_from_grassmannian(4, 6)
    mg = explore(construct(g, d, seed=seed))
    assert all(r == -1 for r in mg.resplit_ratios)


def test_explore_independent_of_start(g35):
    mg = explore(g35)
    keys = {n.key for n in mg.nodes}
    for n in mg.nodes[1:4]:
        assert {x.key for x in explore(n.graph).nodes} == keys


def test_points_unchanged_outside_resplit(g35):
    m = construct(g35, 2, seed=4)
    for s in find_move_sites(g35):
        if s.kind == "resplit":
            m2, info = resplit_full(m, s.target)
            assert multi_ratio(info.six_points(m)) == -1
            assert all(m2.points[w] == m.points[w] for w in m.points if w != s.target)
