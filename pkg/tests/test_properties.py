from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from genusiso.codec import pack
from genusiso.decomposition import biconnected_tree, canonical_tree_code, triconnected_tree
from genusiso.engine import Canonizer, isomorphic, verify_witness
from genusiso.errors import GenusBoundExceeded
from genusiso.facewidth import all_nooses, face_width
from genusiso.graph import Graph, connectivity
from genusiso.mapcanon import canonical_code
from genusiso.oracle import brute_iso
from genusiso.surface import CombinatorialMap, cut_along, euler_genus, is_contractible

SETTINGS = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def connected_graphs(draw, max_n=7):
    n = draw(st.integers(2, max_n))
    edges = {(draw(st.integers(0, i - 1)), i) for i in range(1, n)}
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges |= set(draw(st.lists(st.sampled_from(pairs), max_size=2 * n)))
    marks = draw(st.dictionaries(st.integers(0, n - 1), st.integers(0, 1), max_size=2))
    return Graph(n, sorted(edges), marks)


@st.composite
def relabeled(draw, max_n=7):
    g = draw(connected_graphs(max_n))
    perm = draw(st.permutations(range(g.n)))
    return g, g.relabel(perm)


@st.composite
def random_maps(draw):
    n = draw(st.integers(1, 5))
    edges = [(draw(st.integers(0, i - 1)), i) for i in range(1, n)]
    edges += draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=4))
    if not edges:
        edges = [(0, 0)]
    g = Graph(n, edges, allow_loops=True)
    rot = [[] for _ in range(n)]
    for e, (u, v) in enumerate(g.edges):
        rot[u].append(2 * e)
        rot[v].append(2 * e + 1)
    rot = [draw(st.permutations(r)) for r in rot]
    sig = draw(st.lists(st.sampled_from((1, -1)), min_size=g.m, max_size=g.m))
    return CombinatorialMap(g, rot, sig)


@SETTINGS
@given(relabeled())
def test_engine_code_relabel_invariant(pair):
    g, h = pair
    cz = Canonizer(2)
    assert cz.graph_form(g)[0] == cz.graph_form(h)[0]


@SETTINGS
@given(connected_graphs(6), connected_graphs(6))
def test_engine_agrees_with_oracle(g, h):
    v = isomorphic(g, h, 2)
    assert v.isomorphic == (brute_iso(g, h) is not None)
    if v.isomorphic:
        assert verify_witness(g, h, v.witness)


@SETTINGS
@given(connected_graphs(6), connected_graphs(6))
def test_oracle_symmetric(g, h):
    assert (brute_iso(g, h) is None) == (brute_iso(h, g) is None)


@SETTINGS
@given(random_maps())
def test_map_invariants(m):
    assert sum(len(f) for f in m.trace_faces()) == 2 * m.m
    k = euler_genus(m)
    assert k >= 0
    if m.is_orientable():
        assert k % 2 == 0


@SETTINGS
@given(random_maps(), st.data())
def test_map_code_relabel_invariant(m, data):
    perm = data.draw(st.permutations(range(m.n)))
    assert canonical_code(m.relabel(perm)) == canonical_code(m)


@SETTINGS
@given(random_maps())
def test_cut_genus_monotone(m):
    for l in (1, 2):
        for c in all_nooses(m, l)[:6]:
            delta = cut_along(m, c).genusDelta
            assert delta <= 0
            if is_contractible(m, c):
                assert delta == 0


@SETTINGS
@given(random_maps())
def test_face_width_bounds(m):
    fw = face_width(m)
    if euler_genus(m) == 0:
        assert fw == float("inf")
    else:
        assert 1 <= fw <= m.n


@SETTINGS
@given(relabeled(8))
def test_tree_reconstruct_and_code(pair):
    g, h = pair
    builds = [biconnected_tree]
    if g.n >= 3 and connectivity(g, 2):
        builds.append(triconnected_tree)
    rc = Canonizer(2).rcanon
    for build in builds:
        tg, th = build(g), build(h)
        assert brute_iso(tg.reconstruct(), g) is not None
        assert sorted(t.kind for t in tg.torsos) == sorted(t.kind for t in th.torsos)
        try:
            code = canonical_tree_code(tg, rc)
        except GenusBoundExceeded:
            assume(False)
        assert code == canonical_tree_code(th, rc)


@given(st.lists(st.one_of(st.integers(-5, 5), st.binary(max_size=3)), max_size=4),
       st.lists(st.one_of(st.integers(-5, 5), st.binary(max_size=3)), max_size=4))
def test_pack_injective(a, b):
    assert (pack(*a) == pack(*b)) == (a == b and [type(x) for x in a] == [type(x) for x in b])
