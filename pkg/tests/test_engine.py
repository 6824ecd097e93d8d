import random

import pytest

from conftest import complete, complete_bipartite, edge_set, petersen, prism, random_perm
from genusiso.engine import (
    FACEWIDTH1,
    FACEWIDTH2,
    FACEWIDTH2_DEGENERATE,
    POLYHEDRAL,
    Canonizer,
    DegenerateCase,
    case_facewidth1,
    case_facewidth2,
    case_facewidth2_degenerate,
    case_polyhedral,
    finish_step6,
    isomorphic,
    plan_case,
    reduce_step1,
    verify_witness,
)
from genusiso.errors import GenusBoundExceeded
from genusiso.fixtures import apex_cylinder, band_with_hub, flip_torus, mobius_ladder, prism_ring
from genusiso.graph import Graph
from genusiso.surface import euler_genus


def test_k33_vs_prism_rejected():
    v = isomorphic(complete_bipartite(3, 3), prism(), 2)
    assert not v.isomorphic and v.witness is None


def test_positive_verdict_carries_verified_witness():
    rng = random.Random(0)
    g = petersen()
    h = g.relabel(random_perm(g.n, rng))
    v = isomorphic(g, h, 2)
    assert v.isomorphic and verify_witness(g, h, v.witness)
    assert "witness verified" in v.trace


def test_marks_are_respected():
    a = Graph(3, [(0, 1), (1, 2)], {0: 1})
    b = Graph(3, [(0, 1), (1, 2)], {1: 1})
    c = Graph(3, [(0, 1), (1, 2)], {2: 1})
    assert not isomorphic(a, b, 2).isomorphic
    assert isomorphic(a, c, 2).isomorphic


def test_disconnected_inputs():
    g = Graph(6, [(0, 1), (1, 2), (3, 4), (4, 5)])
    h = Graph(6, [(0, 1), (2, 3), (3, 4), (4, 5)])
    assert isomorphic(g, g.relabel([5, 4, 3, 2, 1, 0]), 2).isomorphic
    assert not isomorphic(g, h, 2).isomorphic


def test_genus_bound_exceeded_is_an_error():
    with pytest.raises(GenusBoundExceeded):
        isomorphic(complete(8), complete(8), 2)


def test_trace_tags():
    cz = Canonizer(2)
    cz.graph_form(prism_ring(3))
    assert any("facewidth2-degenerate" in t for t in cz.trace)
    cz = Canonizer(2)
    cz.graph_form(complete(6))
    assert any("polyhedral" in t for t in cz.trace)


@pytest.mark.parametrize(
    "g,tag,genus",
    [
        (complete(6), POLYHEDRAL, 1),
        (mobius_ladder(5), FACEWIDTH2, 1),
        (prism_ring(3), FACEWIDTH2_DEGENERATE, 2),
        (apex_cylinder(5, 3), FACEWIDTH1, 2),
    ],
)
def test_plan_case(g, tag, genus):
    plan = plan_case(g, 2)
    assert plan.caseTag == tag and plan.genus == genus


def test_plan_case_preconditions():
    with pytest.raises(ValueError):
        plan_case(flip_torus(1), 2)


def test_case_polyhedral_maps():
    g = complete(6)
    maps = case_polyhedral(g, plan_case(g, 2))
    assert maps and all(euler_genus(m) == 1 for m in maps)


def test_case_facewidth2_band_covers_graph():
    g = band_with_hub()
    pairs = case_facewidth2(g, plan_case(g, 2))
    assert len(pairs) == 1
    (p,) = pairs
    assert len(p.lEdges) == g.m and p.gEdges == ()
    lp, ids = p.lprime(g)
    assert lp.m == g.m and sorted(ids) == list(range(g.n))


def test_degenerate_routing():
    g = prism_ring(3)
    plan = plan_case(g, 2)
    with pytest.raises(DegenerateCase):
        case_facewidth2(g, plan)
    ch = case_facewidth2_degenerate(g, plan)
    assert len(ch.pieces) == 3 and ch.interval_property()


def test_case_facewidth1_apex():
    g = apex_cylinder(5, 3)
    v1, splits = case_facewidth1(g, plan_case(g, 2))
    assert v1 == frozenset({15})
    assert len(splits) == 1
    # splitting the apex along its noose raises the vertex count by one
    assert splits[0].n == g.n + 1 and splits[0].m == g.m


def test_finish_step6_zips_orders():
    v = finish_step6([(b"a", [0, 1])], [(b"a", [1, 0])])
    assert v.isomorphic and v.witness == {0: 1, 1: 0}
    assert not finish_step6([(b"a", [0])], [(b"b", [0])]).isomorphic


def test_reduce_step1_collects_nonplanar_torsos():
    g = complete(5)
    s1, s2 = reduce_step1(g, g.relabel([1, 2, 3, 4, 0]), 2)
    assert s1.code == s2.code
    assert len(s1.pieces) == len(s2.pieces) == 1
    planar = prism()
    p1, _ = reduce_step1(planar, planar, 2)
    assert p1.pieces == []


def test_canonizer_orders_are_witnesses():
    rng = random.Random(9)
    g = flip_torus(2)
    h = g.relabel(random_perm(g.n, rng))
    cz = Canonizer(2)
    c1, o1 = cz.graph_form(g)
    c2, o2 = cz.graph_form(h)
    assert c1 == c2
    phi = dict(zip(o1, o2))
    assert edge_set((phi[u], phi[v]) for u, v in g.edges) == edge_set(h.edges)
