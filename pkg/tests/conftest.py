import itertools
import random
from functools import lru_cache

import networkx as nx

from genusiso.graph import Graph
from genusiso.surface import CombinatorialMap, map_from_rotation


def complete(n: int) -> Graph:
    return Graph(n, list(itertools.combinations(range(n), 2)))


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def prism() -> Graph:
    return Graph(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)])


def cycle(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def petersen() -> Graph:
    h = nx.petersen_graph()
    return Graph(10, list(h.edges()))


def torus_grid(p: int, q: int) -> CombinatorialMap:
    """C_p x C_q drawn on the torus as a quadrangulation."""
    idx = lambda i, j: (i % p) * q + (j % q)
    rot = []
    for i in range(p):
        for j in range(q):
            rot.append([idx(i + 1, j), idx(i, j + 1), idx(i - 1, j), idx(i, j - 1)])
    return map_from_rotation(p * q, rot)


def one_loop_projective() -> CombinatorialMap:
    """One vertex, one twisted loop: the projective plane with one face."""
    g = Graph(1, [(0, 0)], allow_loops=True)
    return CombinatorialMap(g, [[0, 1]], [-1])


@lru_cache(maxsize=None)
def atlas_graphs() -> tuple[Graph, ...]:
    out = []
    for h in nx.graph_atlas_g():
        if h.number_of_nodes() and nx.is_connected(h):
            out.append(Graph(h.number_of_nodes(), list(h.edges())))
    return tuple(out)


def random_perm(n: int, rng: random.Random) -> list[int]:
    p = list(range(n))
    rng.shuffle(p)
    return p


def edge_set(edges) -> frozenset:
    return frozenset(frozenset(e) for e in edges)


# acceptance criterion lines, printed at the end of the run
REPORT: list[str] = []


def report(label: str, ok: bool, detail: str) -> None:
    REPORT.append(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if REPORT:
        terminalreporter.section("acceptance criteria")
        for line in REPORT:
            terminalreporter.write_line(line)
