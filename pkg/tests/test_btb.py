import random

import pytest
from hypothesis import given, strategies as st

from tcdmaps.btb import (
    BtbGraph,
    LatticeLabel,
    ban_labels,
    epsilon,
    expected_sources,
    graph_from_grassmannian,
    is_minimal,
    noncrossing,
    perfect_orientation,
    validate,
)
from tcdmaps.errors import InvalidGraph
from tcdmaps.lattice import weakly_separated
from tcdmaps.moves import explore, find_move_sites, resplit_graph

SMALL = [(k, n) for n in range(1, 7) for k in range(1, n + 1)]


def singleton():
    return BtbGraph(1, {"w": (1,)}, {})


def bigon_graph():
    # W2 and u0 both meet b0 and b1: strands 2 and 3 cross twice in the same direction
    return BtbGraph(4, {"W1": (1,), "W2": (2, "b0", "b1"), "W3": (3, "b1"), "W4": (4, "b0"),
                        "u0": ("b0", "b1")},
                    {"b0": ("W2", "W4", "u0"), "b1": ("u0", "W3", "W2")})


def names(labels):
    return {z.name() for z in labels}


def test_desargues_graph(desargues):
    assert len(desargues.white_ids) == 7 and len(desargues.black_ids) == 3
    assert validate(desargues).valid
    assert is_minimal(desargues)
    assert desargues.strand_permutation() == epsilon(4, 5)
    assert desargues.mrank() == 3
    assert len(perfect_orientation(desargues).sources) == 4
    assert names(ban_labels(desargues).white.values()) == {"123", "125", "135", "145", "235", "345", "234"}


def test_g35(g35):
    assert len(g35.white_ids) == 7 and len(g35.black_ids) == 4
    assert g35.strand_permutation() == epsilon(3, 5)
    assert g35.mrank() == 2
    assert len(perfect_orientation(g35).sources) == 3


def test_black_degree_violation():
    g = BtbGraph(2, {"W1": (1, "b"), "W2": (2, "b")}, {"b": ("W1", "W2")})
    rep = validate(g)
    assert not rep.valid
    assert rep.violations[0].kind == "black_degree"
    assert rep.violations[0].witness["black"] == "b"


def test_singleton():
    g = singleton()
    assert validate(g).valid
    paths, perm = g.strands()
    assert perm(1) == 1 and len(paths) == 1
    assert perfect_orientation(g).sources == ["w"]
    assert g.mrank() == 0


def test_parallel_bigon_witness():
    g = bigon_graph()
    assert validate(g).valid
    m = is_minimal(g)
    assert not m and m.reason == "parallel bigon"
    assert m.witness["strands"] == [2, 3]


def test_closed_and_self_intersecting_strands():
    closed = BtbGraph(2, {"W1": (1, "b1"), "W2": (2, "b2"), "u": ("b1", "b2"), "v": ("b2", "b1")},
                      {"b1": ("W1", "u", "v"), "b2": ("W2", "v", "u")})
    assert is_minimal(closed).reason == "closed strand"
    leaf = BtbGraph(2, {"W1": (1, "b"), "W2": (2, "b"), "w": ("b",)}, {"b": ("W1", "w", "W2")})
    assert is_minimal(leaf).reason == "self-intersecting strand"


def test_noncrossing():
    assert noncrossing([[1, 3], [2], [4]], 4)
    assert not noncrossing([[1, 3], [2, 4]], 4)


def test_black_label_drops_its_strands(desargues):
    lab = ban_labels(desargues)
    for b, r in desargues.black_rot.items():
        diffs = set()
        for w in r:
            d = [x - y for x, y in zip(lab.white[w].z, lab.black[b].z)]
            assert sorted(d) == [0] * (desargues.n - 1) + [1]
            diffs.add(d.index(1))
        assert len(diffs) == 3


def test_resplit_changes_labels_locally(desargues):
    site = next(s for s in find_move_sites(desargues) if s.kind == "resplit")
    before = ban_labels(desargues)
    g2 = resplit_graph(desargues, site.target)
    after = ban_labels(g2)
    changed_w = {w for w in desargues.white_ids if before.white[w] != after.white[w]}
    changed_b = {b for b in desargues.black_ids if before.black[b] != after.black[b]}
    assert changed_w == {site.target}
    assert len(changed_b) == 2


def test_records_round_trip(desargues):
    whites, blacks, cactus = desargues.records()
    assert BtbGraph.from_records(desargues.n, whites, blacks, cactus) == desargues


def test_glued_records_round_trip():
    g = graph_from_grassmannian(1, 4)
    assert g.cactus == [[1, 2, 3, 4]]
    whites, blacks, cactus = g.records()
    assert BtbGraph.from_records(g.n, whites, blacks, cactus) == g


def test_from_records_rejects_bad_cactus():
    with pytest.raises(InvalidGraph):
        BtbGraph.from_records(2, [("a", 1, []), ("b", 2, [])], [], [[1, 3]])


def test_canonical_form_ignores_ids(desargues):
    wmap = {w: "x" + w for w in desargues.white_ids}
    bmap = {b: "y" + b for b in desargues.black_ids}
    assert desargues.relabeled(wmap, bmap).canonical_form() == desargues.canonical_form()


@pytest.mark.parametrize("k,n", SMALL)
def test_grassmannian_postconditions(k, n):
    g = graph_from_grassmannian(k, n)
    assert validate(g).valid
    assert is_minimal(g)
    paths, perm = g.strands()
    assert len(paths) == n
    assert perm == epsilon(k, n)
    assert g.mrank() == k - 1
    po = perfect_orientation(g)
    assert po.check() == [] and po.is_acyclic()
    assert sorted(po.sources) == sorted(expected_sources(g))
    assert len(po.sources) == g.mrank() + 1


@given(st.sampled_from([(k, n) for k, n in SMALL if n >= 3]), st.integers(0, 10 ** 6))
def test_move_class_invariants(kn, seed):
    k, n = kn
    mg = explore(graph_from_grassmannian(k, n))
    g = mg.nodes[random.Random(seed).randrange(len(mg.nodes))].graph
    assert validate(g).valid and is_minimal(g)
    assert g.strand_permutation() == epsilon(k, n)
    lab = ban_labels(g)
    assert {z.level for z in lab.white.values()} <= {k - 1}
    assert {z.level for z in lab.face.values()} <= {k}
    assert {z.level for z in lab.black.values()} <= {k - 2}
    ws = list(lab.white.values())
    assert all(weakly_separated(a, b) for i, a in enumerate(ws) for b in ws[i + 1:])
    po = perfect_orientation(g)
    assert po.is_acyclic() and len(po.sources) == k
    assert sorted(po.sources) == sorted(expected_sources(g))


def test_lattice_label_helpers():
    z = LatticeLabel.from_subset([1, 3], 4)
    assert z.z == (1, 0, 1, 0) and z.level == 2 and z.name() == "13"
    assert z.plus(2).name() == "123"
