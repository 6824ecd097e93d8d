"""Graph families used by tests, benchmarks and ``genusiso gen``.

All generators are deterministic given their arguments.
"""

from __future__ import annotations

import random

import networkx as nx

from .graph import Graph


def prism_ring(L: int = 3) -> Graph:
    """Torus ring of ``L`` cylinder pieces glued along 2-cuts {a_i, b_i}.

    Piece i has rails a_i-a_{i+1}, b_i-b_{i+1} and two hubs c_i, d_i
    joined to all four cut vertices. Face-width 2 on the torus.
    """
    if L < 3:
        raise ValueError("prism_ring needs L >= 3")
    edges = []
    for i in range(L):
        a, b, c, d = 4 * i, 4 * i + 1, 4 * i + 2, 4 * i + 3
        a2, b2 = 4 * ((i + 1) % L), 4 * ((i + 1) % L) + 1
        edges += [(a, a2), (b, b2)]
        for x in (c, d):
            edges += [(x, a), (x, b), (x, a2), (x, b2)]
    return Graph(4 * L, edges)


def flip_torus(k: int = 1, L: int = 3) -> Graph:
    """``prism_ring(L)`` with ``k`` rails replaced by diamonds; each
    diamond flips independently, giving at least 2**k torus embeddings."""
    base = prism_ring(L)
    rails = [e for e in base.edges if e[0] % 4 < 2 and e[1] % 4 < 2]
    if not 0 <= k <= len(rails):
        raise ValueError(f"flip_torus supports 0..{len(rails)} gadgets")
    n = base.n
    edges = [e for e in base.edges if e not in rails[:k]]
    for u, v in rails[:k]:
        x, y = n, n + 1
        n += 2
        edges += [(u, x), (x, v), (u, y), (y, v), (x, y)]
    return Graph(n, edges)


def mobius_ladder(L: int = 6, diagonals: int = 0, seed: int = 0) -> Graph:
    """Ladder of ``L`` rungs closed with a twist (projective plane,
    face-width 2, every rung pair a 2-noose), plus ``diagonals`` random
    square diagonals."""
    if L < 3:
        raise ValueError("mobius_ladder needs L >= 3")
    edges = []
    for i in range(L):
        edges.append((2 * i, 2 * i + 1))
        if i < L - 1:
            edges += [(2 * i, 2 * i + 2), (2 * i + 1, 2 * i + 3)]
    edges += [(2 * L - 2, 1), (2 * L - 1, 0)]
    rng = random.Random(seed)
    squares = list(range(L - 1))
    rng.shuffle(squares)
    for i in squares[:diagonals]:
        edges.append((2 * i, 2 * i + 3) if rng.random() < 0.5 else (2 * i + 1, 2 * i + 2))
    return Graph(2 * L, edges)


def apex_cylinder(k: int = 5, layers: int = 3) -> Graph:
    """Stacked k-cycles (a cylinder grid) plus one apex joined to every
    vertex of both end cycles. For (5, 3) and (4, 4) every minimum-genus
    embedding has face-width 1, the noose passing through the apex."""
    edges = []
    for l in range(layers):
        for i in range(k):
            edges.append((l * k + i, l * k + (i + 1) % k))
            if l < layers - 1:
                edges.append((l * k + i, (l + 1) * k + i))
    n = k * layers
    edges += [(n, i) for i in range(k)] + [(n, i) for i in range(n - k, n)]
    return Graph(n + 1, edges)


def band_with_hub(L: int = 6, hub: tuple[int, ...] = (0, 2, 4)) -> Graph:
    """``mobius_ladder(L)`` plus a vertex joined to ``hub``, drawn in the
    disk face. Projective, face-width 2; the 2-nooses through the rungs
    are pairwise homotopic, so they share one Mobius band."""
    g = mobius_ladder(L)
    return Graph(g.n + 1, list(g.edges) + [(g.n, a) for a in hub])


def planar_triangulation(n: int = 10, seed: int = 0) -> Graph:
    """Random stacked triangulation: repeatedly put a vertex in a random face."""
    if n < 3:
        raise ValueError("triangulations need n >= 3")
    rng = random.Random(seed)
    edges = [(0, 1), (1, 2), (0, 2)]
    faces = [(0, 1, 2), (0, 2, 1)]
    for v in range(3, n):
        i = rng.randrange(len(faces))
        a, b, c = faces[i]
        faces[i] = (a, b, v)
        faces += [(b, c, v), (c, a, v)]
        edges += [(a, v), (b, v), (c, v)]
    return Graph(n, edges)


def add_random_edges(g: Graph, count: int, seed: int = 0) -> Graph:
    """Add ``count`` new edges between random non-adjacent vertices."""
    rng = random.Random(seed)
    have = {(min(u, v), max(u, v)) for u, v in g.edges}
    edges = list(g.edges)
    free = [(u, v) for u in range(g.n) for v in range(u + 1, g.n) if (u, v) not in have]
    for u, v in rng.sample(free, min(count, len(free))):
        edges.append((u, v))
    return Graph(g.n, edges, g.marks)


def relabel_random(g: Graph, rng: random.Random) -> tuple[Graph, list[int]]:
    perm = list(range(g.n))
    rng.shuffle(perm)
    return g.relabel(perm), perm


def degree_preserving_swap(g: Graph, rng: random.Random, swaps: int = 1) -> Graph | None:
    """A connected simple graph with the same degree sequence, or None."""
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    try:
        nx.connected_double_edge_swap(h, nswap=swaps, seed=rng.randrange(2**31))
    except (nx.NetworkXError, nx.NetworkXAlgorithmError):
        return None
    return Graph(g.n, sorted(tuple(sorted(e)) for e in h.edges()), g.marks)


def crosscap(n: int = 10, extra: int = 1, seed: int = 0) -> Graph:
    """Stacked triangulation plus ``extra`` random edges; usually Euler
    genus 1 or 2 for one or two extra edges."""
    return add_random_edges(planar_triangulation(n, seed=seed), extra, seed=seed)


# name -> (builder, integer parameters in order, uses seed)
FAMILIES = {
    "figa": (flip_torus, ("k", "L"), False),
    "fige": (band_with_hub, ("L",), False),
    "algotorus": (prism_ring, ("L",), False),
    "fw1": (apex_cylinder, ("k", "layers"), False),
    "mobius": (mobius_ladder, ("L", "diagonals"), True),
    "triangulation": (planar_triangulation, ("n",), True),
    "crosscap": (crosscap, ("n", "extra"), True),
}
