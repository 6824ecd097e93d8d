import random

from conftest import complete, one_loop_projective, random_perm, torus_grid
from genusiso.embedding import embeddings_of_genus, min_euler_genus
from genusiso.fixtures import planar_triangulation
from genusiso.embedding import planar_embed
from genusiso.mapcanon import FREE, ORIENTED, canonical_code, canonical_form, maps_isomorphic
from genusiso.surface import CombinatorialMap, euler_genus, map_from_rotation


def test_relabel_invariance():
    rng = random.Random(2)
    for m in (torus_grid(3, 4), min_euler_genus(complete(6), 1)[1], one_loop_projective()):
        base = canonical_code(m)
        for _ in range(10):
            assert canonical_code(m.relabel(random_perm(m.n, rng))) == base


def test_vertex_flip_invariance():
    m = min_euler_genus(complete(5), 1)[1]
    assert canonical_code(m.flip_vertex(2)) == canonical_code(m)


def k7_torus() -> CombinatorialMap:
    return map_from_rotation(7, [[(i + d) % 7 for d in (1, 3, 2, 6, 4, 5)] for i in range(7)])


def test_mirror_free_vs_oriented():
    m = k7_torus()
    assert euler_genus(m) == 2
    assert canonical_code(m.mirror(), FREE) == canonical_code(m, FREE)
    # the K7 triangulation of the torus is chiral
    assert canonical_code(m.mirror(), ORIENTED) != canonical_code(m, ORIENTED)
    assert maps_isomorphic(m, m.mirror(), ORIENTED) is None


def test_distinct_embeddings_distinct_codes():
    ms = embeddings_of_genus(complete(5), 1)
    codes = {canonical_code(m) for m in ms}
    for a in ms[:6]:
        for b in ms[:6]:
            same = canonical_code(a) == canonical_code(b)
            assert same == (maps_isomorphic(a, b) is not None)
    assert len(codes) >= 1


def test_maps_isomorphic_witness_maps_edges():
    rng = random.Random(5)
    m = torus_grid(3, 3)
    h = m.relabel(random_perm(m.n, rng))
    flags = maps_isomorphic(m, h)
    assert flags is not None
    phi = {m.origin(x >> 1): h.origin(y >> 1) for x, y in flags.items()}
    assert len(phi) == m.n
    hedges = {frozenset(e) for e in h.graph.edges}
    assert all(frozenset((phi[u], phi[v])) in hedges for u, v in m.graph.edges)


def test_mark_sensitivity():
    m = torus_grid(3, 3)
    # the grid is vertex-transitive: marking any single vertex gives one code
    codes = {canonical_code(m.with_marks({v: 1})) for v in range(m.n)}
    assert len(codes) == 1
    assert canonical_code(m.with_marks({0: 1})) != canonical_code(m)
    # adjacent and non-adjacent marked pairs are not related by an automorphism
    assert canonical_code(m.with_marks({0: 1, 1: 1})) != canonical_code(m.with_marks({0: 1, 4: 1}))


def test_form_orders_cover_everything():
    m = planar_embed(planar_triangulation(30, seed=1))
    f = canonical_form(m)
    assert sorted(f.vertex_order) == list(range(m.n))
    assert len(f.flag_order) == 4 * m.m
    assert canonical_code(m, ORIENTED).hex() == canonical_code(m, ORIENTED).bytes.hex()
