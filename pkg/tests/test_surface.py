import random

import pytest

from conftest import complete, one_loop_projective, torus_grid
from genusiso.embedding import min_euler_genus
from genusiso.errors import ParseError
from genusiso.facewidth import all_nooses
from genusiso.graph import Graph
from genusiso.mapcanon import canonical_code
from genusiso.surface import (
    CombinatorialMap,
    Noose,
    cut_along,
    euler_genus,
    is_contractible,
    is_orientation_preserving,
    map_from_rotation,
    parse_map,
    radial_graph,
)


def planar_square() -> CombinatorialMap:
    return map_from_rotation(4, [[1, 3], [2, 0], [3, 1], [0, 2]])


def reglue(m: CombinatorialMap, cut) -> CombinatorialMap:
    """Undo ``cut_along``: merge every fresh copy back into its vertex."""
    g = cut.map.graph
    rot = [list(r) for r in cut.map.rotation]
    edges = [list(e) for e in g.edges]
    for v, _, new in cut.splitPairs:
        for d in rot[new]:
            edges[d >> 1][d & 1] = v
        rot[v] = rot[v] + rot[new]
    n = m.n
    h = Graph(n, [tuple(e) for e in edges], {v: c for v, c in g.marks.items() if v < n}, allow_loops=True)
    return CombinatorialMap(h, rot[:n], cut.map.signature)


def test_face_lengths_sum_to_twice_edges():
    for m in (torus_grid(3, 4), planar_square(), one_loop_projective()):
        assert sum(len(f) for f in m.trace_faces()) == 2 * m.m


def test_genus_values():
    assert euler_genus(planar_square()) == 0
    assert euler_genus(torus_grid(3, 3)) == 2
    assert euler_genus(one_loop_projective()) == 1
    assert torus_grid(3, 3).is_orientable()
    assert not one_loop_projective().is_orientable()


def test_map_text_round_trip():
    m = torus_grid(3, 3).with_marks({0: 4})
    assert parse_map(m.to_text()) == m


@pytest.mark.parametrize(
    "text",
    ["", "map 1 1\nrot 0: 0 1\n", "map 1 1\nrot 0: 0 0\nedge 0: 0 1 +\n", "map 1 1\nrot 0: 0 1\nedge 0: 0 1 *\n",
     "map 1 1\nrot 0: 0 1\nedge 0: 0 1 +\nfoo\n"],
)
def test_map_parse_errors(text):
    with pytest.raises(ParseError):
        parse_map(text)


def test_invalid_rotation_rejected():
    g = Graph(2, [(0, 1)])
    with pytest.raises(ValueError):
        CombinatorialMap(g, [[0, 1], []])


def test_radial_graph_counts_corners():
    m = torus_grid(3, 3)
    r, inc = radial_graph(m)
    assert r.n == m.n + m.num_faces
    assert r.m == len(inc) == 2 * m.m


def test_one_loop_noose_is_one_sided_and_essential():
    m = one_loop_projective()
    (c,) = all_nooses(m, 1)
    assert not is_orientation_preserving(m, c)
    assert not is_contractible(m, c)
    assert cut_along(m, c).genusDelta == -1


def test_meridian_of_torus_grid():
    m = torus_grid(3, 3)
    essential = [c for c in all_nooses(m, 3) if not is_contractible(m, c)]
    assert essential
    for c in essential[:5]:
        assert is_orientation_preserving(m, c)
        assert cut_along(m, c).genusDelta <= -1


def test_contractible_nooses_keep_genus():
    m = torus_grid(3, 4)
    for c in all_nooses(m, 2):
        if is_contractible(m, c):
            assert cut_along(m, c).genusDelta == 0


def test_cut_round_trip_restores_map():
    k6 = min_euler_genus(complete(6), 1)[1]
    grid = torus_grid(3, 3)
    for base, l in ((k6, 2), (grid, 3), (one_loop_projective(), 1)):
        for c in all_nooses(base, l)[:15]:
            cut = cut_along(base, c)
            assert canonical_code(reglue(base, cut)) == canonical_code(base)


def test_noose_canonical_is_rotation_invariant():
    m = torus_grid(3, 3)
    c = all_nooses(m, 3)[0]
    assert c.rotated(1).canonical() == c.canonical() == c.reversed().canonical()


def test_random_maps_respect_euler_parity():
    rng = random.Random(3)
    for _ in range(40):
        n = rng.randint(2, 6)
        edges = [(i, rng.randrange(i)) for i in range(1, n)]
        edges += [(rng.randrange(n), rng.randrange(n)) for _ in range(rng.randint(0, 4))]
        g = Graph(n, edges, allow_loops=True)
        rot = [[] for _ in range(n)]
        for e, (u, v) in enumerate(g.edges):
            rot[u].append(2 * e)
            rot[v].append(2 * e + 1)
        for r in rot:
            rng.shuffle(r)
        sig = [rng.choice((1, -1)) for _ in g.edges]
        m = CombinatorialMap(g, rot, sig)
        k = euler_genus(m)
        assert k >= 0
        if m.is_orientable():
            assert k % 2 == 0


def test_noose_validation():
    m = torus_grid(3, 3)
    with pytest.raises(ValueError):
        cut_along(m, Noose((0, 0), (0, 1), ((0, 1), (1, 2))))
