import pytest

from conftest import complete, complete_bipartite, cycle, petersen, prism
from genusiso.embedding import (
    EmbeddingQuery,
    embeddings_of_genus,
    enumerate_embeddings,
    extend_embedding,
    genus_critical_subgraph,
    min_euler_genus,
    planar_embed,
)
from genusiso.errors import BudgetExceeded
from genusiso.graph import Graph
from genusiso.mapcanon import canonical_code
from genusiso.surface import euler_genus


def test_planar_embed():
    for g in (complete(4), prism(), cycle(5)):
        m = planar_embed(g)
        assert m is not None and euler_genus(m) == 0
    assert planar_embed(complete(5)) is None
    assert planar_embed(complete_bipartite(3, 3)) is None


@pytest.mark.parametrize(
    "g,expected",
    [(complete(4), 0), (complete(5), 1), (complete_bipartite(3, 3), 1), (petersen(), 1), (complete(6), 1)],
)
def test_min_euler_genus_with_witness(g, expected):
    genus, m = min_euler_genus(g, 2)
    assert genus == expected
    assert euler_genus(m) == expected
    assert sorted(map(sorted, m.graph.edges)) == sorted(map(sorted, g.edges))


def test_genus_bound_respected():
    assert min_euler_genus(complete(5), 0) is None


def test_budget_is_not_a_verdict():
    with pytest.raises(BudgetExceeded):
        min_euler_genus(complete(7), 2, budget=50)


def test_enumerate_embeddings_distinct_classes():
    maps = enumerate_embeddings(EmbeddingQuery(complete(5), 1))
    codes = [canonical_code(m) for m in maps]
    assert len(set(codes)) == len(codes) >= 1
    assert all(euler_genus(m) == 1 for m in maps)
    assert enumerate_embeddings(EmbeddingQuery(complete(4), 0))


def test_polyhedral_filter():
    # the projective K6 is a triangulation of face-width 3
    maps = enumerate_embeddings(EmbeddingQuery(complete(6), 1, minFaceWidth=3))
    assert len(maps) >= 1


def test_extend_embedding_keeps_fixed_part():
    g = complete(5)
    sub = Graph(5, [e for e in g.edges if e != (3, 4)])
    base = planar_embed(sub)
    # 3 and 4 share no face of the planar triangulation, so the new edge
    # must join two faces and the Euler genus jumps to 2
    assert extend_embedding(EmbeddingQuery(g, 1, fixedSubMap=base)) is None
    ext = extend_embedding(EmbeddingQuery(g, 2, fixedSubMap=base))
    assert ext is not None and euler_genus(ext) == 2
    for v in range(5):
        kept = [d for d in ext.rotation[v] if d // 2 < sub.m]
        assert len(kept) == len(base.rotation[v])


def test_genus_critical_subgraph_is_critical():
    g = complete(6)
    k = genus_critical_subgraph(g, 1)
    used = sorted(k.vertices)
    h, _ = k.subgraph.induced(used)
    edges = list(h.edges)
    assert min_euler_genus(h, 2)[0] == 1
    for i in range(len(edges)):
        rest = Graph(h.n, edges[:i] + edges[i + 1:])
        comps = [c for c in rest.components() if len(c) > 1]
        # every deletion makes the rest planar
        assert all(planar_embed(rest.induced(c)[0]) is not None for c in comps)


def test_embeddings_of_genus_exact():
    ms = embeddings_of_genus(complete_bipartite(3, 3), 1)
    assert ms and all(euler_genus(m) == 1 for m in ms)
