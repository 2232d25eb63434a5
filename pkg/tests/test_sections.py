import pytest
from hypothesis import given, strategies as st

from tcdmaps.btb import graph_from_grassmannian
from tcdmaps.errors import MismatchFound, NotOneGeneric, RankDeficient
from tcdmaps.moves import explore, find_move_sites, move_path, spider
from tcdmaps.projective import random_hyperplane
from tcdmaps.sections import (
    ban_preserved,
    compare_cluster_structures,
    from_hyperplane,
    iterated_sections,
    section_graph,
    section_map,
    star_graph,
    to_hyperplane,
)
from tcdmaps.tcd import construct, rank

FAMILIES = [(3, 5), (4, 5), (3, 6), (4, 6), (2, 5)]


def chart_for(m, seed=0):
    return random_hyperplane(m.d, seed=seed, avoid=m.points.values())


def family_graphs(limit=40):
    out = []
    for kn in FAMILIES:
        out += [n.graph for n in explore(graph_from_grassmannian(*kn)).nodes]
    return out[:limit]


@pytest.mark.parametrize("kn", FAMILIES)
def test_star_graph_bijections(kn):
    g = graph_from_grassmannian(*kn)
    s = star_graph(g)
    assert set(s.face_state) == set(g.white_ids)
    assert set(s.edge_map) == set(g.edges)
    assert len(set(s.edge_map.values())) == len(g.edges)
    assert len(s.boundary_edges) == g.n
    faces = {s.graph.face_of_state[st] for st in s.face_state.values()}
    assert len(faces) == len(g.white_ids)


def test_section_combinatorics():
    graphs = family_graphs()
    assert len(graphs) >= 20
    for g in graphs:
        sg = section_graph(g)
        assert sg.is_minimal()
        assert sg.strand_permutation() == g.strand_permutation().shifted(-1)
        assert ban_preserved(g)


def test_tree_choices_related_by_resplits():
    g = graph_from_grassmannian(4, 6)
    a = section_graph(g)
    for seed in range(5):
        b = section_graph(g, seed)
        assert move_path(a, b, kinds=("resplit",)) is not None


@given(st.integers(0, 10 ** 6), st.sampled_from([(3, 5), (4, 6), (3, 6)]))
def test_section_drops_rank_by_one(seed, kn):
    g = graph_from_grassmannian(*kn)
    m = construct(g, g.mrank(), seed=seed)
    r = section_map(m, chart_for(m, seed))
    assert rank(r.sigma_map) == rank(m) - 1
    assert set(r.face_of_white) == set(g.white_ids)


def test_rank_one_has_no_sections():
    g = graph_from_grassmannian(2, 5)
    m = construct(g, 1, seed=0)
    with pytest.raises(NotOneGeneric):
        section_map(m, chart_for(m))


def test_section_invariant_under_spider():
    g = graph_from_grassmannian(4, 6)
    m = construct(g, 3, seed=1)
    h = chart_for(m, 1)
    base = sorted(map(repr, section_map(m, h).points_ambient.values()))
    sites = [s for s in find_move_sites(g) if s.kind == "spider"]
    assert sites
    for s in sites:
        assert sorted(map(repr, section_map(spider(m, s.target), h).points_ambient.values())) == base


def test_iterated_sections():
    g = graph_from_grassmannian(4, 6)
    m = construct(g, 3, seed=2)
    h1 = chart_for(m, 2)
    r1 = section_map(m, h1)
    h2 = chart_for(r1.sigma_map, 3)
    chain = iterated_sections(m, [h1, h2])
    assert [rank(r.sigma_map) for r in chain] == [2, 1]
    assert compare_cluster_structures(r1.sigma_map, h2)["pass"]
    with pytest.raises(RankDeficient):
        iterated_sections(m, [h1, h2, h2])


@given(st.integers(0, 10 ** 6), st.sampled_from([(3, 5), (4, 6), (3, 6), (4, 5)]),
       st.sampled_from([None, 1, 2]))
def test_affine_cluster_equals_section_cluster(seed, kn, tree):
    g = graph_from_grassmannian(*kn)
    m = construct(g, min(3, g.mrank()), seed=seed)
    rep = compare_cluster_structures(m, chart_for(m, seed), tree)
    assert rep["pass"] and all(r["equal"] for r in rep["variables"])


def test_mismatch_detected():
    g = graph_from_grassmannian(4, 6)
    m = construct(g, 3, seed=4)
    h1, h2 = chart_for(m, 4), chart_for(m, 5)
    res = section_map(m, h1)
    with pytest.raises(MismatchFound):
        compare_cluster_structures(m, h2, section=res)
    rep = compare_cluster_structures(m, h2, section=res, strict=False)
    assert not rep["pass"] and {d["kind"] for d in rep["differences"]} == {"value"}


def test_hyperplane_coordinates_round_trip():
    g = graph_from_grassmannian(4, 6)
    m = construct(g, 3, seed=6)
    h = chart_for(m, 6)
    r = section_map(m, h)
    for v, p in r.points_ambient.items():
        assert from_hyperplane(h, to_hyperplane(h, p)) == p
