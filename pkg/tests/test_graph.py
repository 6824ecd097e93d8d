import pytest

from conftest import complete, complete_bipartite, cycle, petersen, prism
from genusiso.errors import ParseError
from genusiso.graph import (
    Graph,
    LabeledGraph,
    Skeleton,
    articulation_points,
    bridges_of,
    connectivity,
    is_labeled_isomorphism,
    parse_graph,
    separation_pairs,
    stabilize_bridges,
)


def test_text_round_trip_with_marks():
    g = Graph(4, [(0, 1), (1, 2), (2, 3)], {1: 2, 3: 5})
    h = parse_graph(g.to_text())
    assert h == g
    assert h.mark(1) == 2 and h.mark(0) == 0


@pytest.mark.parametrize(
    "text,line",
    [
        ("", 1),
        ("grph 2 1\n0 1\n", 1),
        ("graph 2 1\n0 5\n", 2),
        ("graph 3 2\n0 1\n1 x\n", 3),
        ("graph 2 1\n1 1\n", 2),
        ("graph 3 2\n0 1\n1 0\n", 3),
        ("graph 2 1\n0 1\nmark 0\n", 3),
        ("graph 3 3\n0 1\n1 2\n", 3),
    ],
)
def test_parse_errors_carry_line(text, line):
    with pytest.raises(ParseError) as exc:
        parse_graph(text)
    assert exc.value.line == line


def test_relabel_preserves_structure():
    g = Graph(3, [(0, 1), (1, 2)], {0: 7})
    h = g.relabel([2, 0, 1])
    assert h.has_edge(2, 0) and h.has_edge(0, 1) and not h.has_edge(2, 1)
    assert h.mark(2) == 7
    assert sorted(h.degree(v) for v in range(3)) == [1, 1, 2]


def test_connectivity_levels():
    assert connectivity(complete(5), 3)
    assert not connectivity(Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]), 3)
    with pytest.raises(ValueError):
        connectivity(complete(5), 4)
    assert connectivity(cycle(6), 2) and not connectivity(cycle(6), 3)
    assert connectivity(petersen(), 3)
    path = Graph(3, [(0, 1), (1, 2)])
    assert articulation_points(path) == {1}


def test_separation_pairs_of_cycle_and_prism():
    assert (0, 2) in separation_pairs(cycle(4))
    assert separation_pairs(prism()) == []


def test_bridges_of_cycle_skeleton_in_k4():
    g = complete(4)
    k = Skeleton.from_edges(4, [(0, 1), (1, 2), (2, 0)])
    bs = bridges_of(g, k)
    assert len(bs) == 1
    assert bs[0].attachments == frozenset({0, 1, 2})
    assert bs[0].stable


def test_skeleton_branches():
    # theta graph: two branch vertices, three branches
    k = Skeleton.from_edges(5, [(0, 2), (2, 1), (0, 3), (3, 1), (0, 4), (4, 1)])
    assert k.branchVertices == frozenset({0, 1})
    assert len(k.branches) == 3 and k.bsize == 2


def test_stabilize_bridges_terminates_with_stable_bridges():
    g = complete_bipartite(3, 3)
    k = Skeleton.from_edges(6, [(0, 3), (3, 1), (1, 4), (4, 0)])
    out = stabilize_bridges(g, k)
    assert all(b.stable for b in bridges_of(g, out))


def test_labeled_isomorphism_checks_labels():
    a = LabeledGraph(2, ((0, 1),), (b"x", b"y"))
    b = LabeledGraph(2, ((0, 1),), (b"y", b"x"))
    assert is_labeled_isomorphism(a, b, [1, 0])
    assert not is_labeled_isomorphism(a, b, [0, 1])
