import random

import pytest

from conftest import complete, complete_bipartite, petersen, prism, random_perm
from genusiso.errors import BudgetExceeded
from genusiso.fixtures import apex_cylinder, mobius_ladder
from genusiso.graph import Graph
from genusiso.oracle import OracleBudget, brute_iso, exhaustive_nooses


def check(g, h, phi):
    hedges = {frozenset(e) for e in h.edges}
    return all(frozenset((phi[u], phi[v])) in hedges for u, v in g.edges)


def test_relabeled_k5():
    g = complete(5)
    h = g.relabel([3, 1, 4, 0, 2])
    phi = brute_iso(g, h)
    assert phi is not None and check(g, h, phi)


def test_k33_vs_prism():
    assert brute_iso(complete_bipartite(3, 3), prism()) is None


def test_marks_mismatch():
    a = Graph(3, [(0, 1), (1, 2)], {0: 1})
    b = Graph(3, [(0, 1), (1, 2)], {1: 1})
    assert brute_iso(a, b) is None


def test_symmetric_and_transitive():
    rng = random.Random(4)
    g = petersen()
    h = g.relabel(random_perm(10, rng))
    k = h.relabel(random_perm(10, rng))
    assert brute_iso(g, h) is not None and brute_iso(h, g) is not None
    assert brute_iso(g, k) is not None


def test_budget_raises():
    with pytest.raises(BudgetExceeded):
        brute_iso(petersen(), petersen().relabel(list(range(9, -1, -1))), OracleBudget(maxNodes=3))


def test_exhaustive_nooses_planar_empty():
    assert exhaustive_nooses(prism(), 2, 2) == []


def test_exhaustive_nooses_apex_gadget():
    hits = {c.verts for _, c in exhaustive_nooses(apex_cylinder(5, 3), 2, 1)}
    assert hits == {(15,)}


def test_exhaustive_nooses_ladder_rungs():
    pairs = {frozenset(c.verts) for _, c in exhaustive_nooses(mobius_ladder(4), 2, 2)}
    for i in range(4):
        assert frozenset((2 * i, 2 * i + 1)) in pairs
