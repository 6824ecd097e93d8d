import random

from conftest import complete, cycle, edge_set, petersen, prism, random_perm
from genusiso.decomposition import (
    biconnected_tree,
    canonical_graph_form,
    canonical_tree_code,
    circular_chain,
    spqr_path_cylinders,
    triconnected_tree,
)
from genusiso.engine import _gcut, plan_case
from genusiso.facewidth import capped_face_width
from genusiso.fixtures import prism_ring
from genusiso.graph import Graph, LabeledGraph, connectivity
from genusiso.oracle import brute_iso


def two_blocks() -> Graph:
    # K4 and a triangle sharing vertex 3, plus a pendant path
    return Graph(8, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 3), (5, 6), (6, 7)])


def theta() -> Graph:
    # three paths between 0 and 1
    return Graph(7, [(0, 2), (2, 1), (0, 3), (3, 4), (4, 1), (0, 5), (5, 6), (6, 1)])


def test_block_tree_shape():
    t = biconnected_tree(two_blocks())
    kinds = sorted(x.kind for x in t.torsos)
    assert kinds.count("B") == 4 and kinds.count("C") == 3
    assert len(t.treeEdges) == len(t.torsos) - 1


def test_triconnected_tree_of_theta():
    t = triconnected_tree(theta())
    kinds = sorted(x.kind for x in t.torsos)
    assert kinds == ["P", "S", "S", "S"]
    for _, _, adh in t.treeEdges:
        assert sorted(adh) == [0, 1]


def test_rigid_graph_is_one_node():
    for g in (complete(4), petersen(), prism()):
        t = triconnected_tree(g)
        assert [x.kind for x in t.torsos] == ["R"]


def test_dump_format():
    text = triconnected_tree(theta()).dump().splitlines()
    assert text[0].startswith("tree triconnected")
    assert any(line.startswith("bag 0:") for line in text)
    assert any(line.startswith("adh ") for line in text)


def test_reconstruction_round_trip():
    for g in (two_blocks(), theta(), prism_ring(3), cycle(5)):
        trees = [biconnected_tree(g)]
        if connectivity(g, 2):
            trees.append(triconnected_tree(g))
        for t in trees:
            assert brute_iso(t.reconstruct(), g) is not None


def test_tree_code_invariant_and_discriminating():
    rng = random.Random(0)
    for g, kind in ((two_blocks(), biconnected_tree), (theta(), triconnected_tree)):
        base = canonical_tree_code(kind(g))
        for _ in range(10):
            h = g.relabel(random_perm(g.n, rng))
            assert canonical_tree_code(kind(h)) == base
    assert canonical_tree_code(triconnected_tree(cycle(6))) != canonical_tree_code(triconnected_tree(theta()))


def test_graph_form_orders_give_isomorphism():
    rng = random.Random(1)
    g = two_blocks()
    h = g.relabel(random_perm(g.n, rng))
    c1, o1 = canonical_graph_form(LabeledGraph.from_graph(g))
    c2, o2 = canonical_graph_form(LabeledGraph.from_graph(h))
    assert c1 == c2
    phi = dict(zip(o1, o2))
    assert edge_set((phi[u], phi[v]) for u, v in g.edges) == edge_set(h.edges)


def test_circular_chain_interval_property():
    for g in (prism_ring(3), prism_ring(4)):
        plan = plan_case(g, 2)
        m = plan.skeletons[0][1]
        for c in capped_face_width(m, 3)[1]:
            gc, (x1, y1, x2, y2), delta = _gcut(m, c)
            if delta == -2:
                ch = circular_chain(gc, x1, y1, x2, y2)
                assert ch.circular and ch.interval_property()
                assert len(ch.pieces) == len(ch.cuts) >= 2
                break


def test_path_cylinders_swap_symmetry():
    # swapping the two boundary copies mirrors the path
    g = prism_ring(4)
    plan = plan_case(g, 2)
    m = plan.skeletons[0][1]
    c = capped_face_width(m, 3)[1][0]
    gc, (x1, y1, x2, y2), _ = _gcut(m, c)
    a = spqr_path_cylinders(gc, x1, y1, x2, y2)
    swapped = Graph(gc.n, list(gc.edges[:-2]) + [gc.edges[-1], gc.edges[-2]], gc.marks)
    b = spqr_path_cylinders(swapped, x2, y2, x1, y1)
    assert a.kinds == tuple(reversed(b.kinds))
    assert sorted(map(sorted, a.units)) == sorted(map(sorted, b.units))
