"""Ground truth by exhaustive search.

``brute_iso`` shares nothing with the engine beyond the graph type: it
refines vertex colours by degree and neighbour colours, then
backtracks over colour-compatible assignments.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .errors import BudgetExceeded
from .graph import Graph


@dataclass(frozen=True)
class OracleBudget:
    maxNodes: int = 5_000_000
    timeLimit: float | None = None


class _Clock:
    def __init__(self, budget: OracleBudget):
        self.left = budget.maxNodes
        self.deadline = None if budget.timeLimit is None else time.monotonic() + budget.timeLimit

    def tick(self) -> None:
        self.left -= 1
        if self.left < 0:
            raise BudgetExceeded("oracle node budget exhausted")
        if self.deadline is not None and self.left % 4096 == 0 and time.monotonic() > self.deadline:
            raise BudgetExceeded("oracle time budget exhausted")


def _refine(g: Graph, seed: list) -> list:
    """Iterated colour refinement; returns hashable colours."""
    col = list(seed)
    adj = g.adj
    while True:
        sig = [(col[v], tuple(sorted(col[w] for w in adj[v]))) for v in range(g.n)]
        table = {s: i for i, s in enumerate(sorted(set(sig)))}
        new = [(table[s],) for s in sig]
        if len(set(new)) == len(set(col)):
            return sig
        col = new


def brute_iso(g1: Graph, g2: Graph, budget: OracleBudget | None = None) -> dict[int, int] | None:
    """A mark-preserving isomorphism from g1 to g2, or None."""
    clock = _Clock(budget or OracleBudget())
    if g1.n != g2.n or g1.m != g2.m:
        return None
    n = g1.n
    # refine both graphs jointly so colour names are comparable
    joint = Graph(2 * n, list(g1.edges) + [(u + n, v + n) for u, v in g2.edges], allow_loops=True)
    seed = [(g1.mark(v), g1.degree(v)) for v in range(n)] + [(g2.mark(v), g2.degree(v)) for v in range(n)]
    col = _refine(joint, seed)
    c1, c2 = col[:n], col[n:]
    if sorted(c1) != sorted(c2):
        return None
    mult1: dict[tuple[int, int], int] = {}
    for u, v in g1.edges:
        for key in ((u, v), (v, u)):
            mult1[key] = mult1.get(key, 0) + 1
    mult2: dict[tuple[int, int], int] = {}
    for u, v in g2.edges:
        for key in ((u, v), (v, u)):
            mult2[key] = mult2.get(key, 0) + 1
    loops1 = [mult1.get((v, v), 0) for v in range(n)]
    loops2 = [mult2.get((v, v), 0) for v in range(n)]

    # most constrained first: small colour classes, then connectivity to placed vertices
    size = {}
    for c in c1:
        size[c] = size.get(c, 0) + 1
    order: list[int] = []
    placed = [False] * n
    adj1 = g1.adj
    while len(order) < n:
        best = max(
            (v for v in range(n) if not placed[v]),
            key=lambda v: (sum(placed[w] for w in adj1[v]), -size[c1[v]], -v),
        )
        placed[best] = True
        order.append(best)
    earlier = []
    pos = {v: i for i, v in enumerate(order)}
    for v in order:
        earlier.append(sorted({w for w in adj1[v] if pos[w] < pos[v]}))

    by_col: dict = {}
    for v in range(n):
        by_col.setdefault(c2[v], []).append(v)
    phi = [-1] * n
    used = [False] * n

    def rec(i: int) -> bool:
        clock.tick()
        if i == n:
            return True
        v = order[i]
        for w in by_col[c1[v]]:
            if used[w] or loops1[v] != loops2[w]:
                continue
            ok = True
            for x in earlier[i]:
                if mult1.get((v, x), 0) != mult2.get((w, phi[x]), 0):
                    ok = False
                    break
            if ok:
                # non-edges to earlier vertices must stay non-edges
                cnt = sum(1 for x in order[:i] if mult2.get((w, phi[x]), 0))
                if cnt != len(earlier[i]):
                    ok = False
            if not ok:
                continue
            phi[v] = w
            used[w] = True
            if rec(i + 1):
                return True
            phi[v] = -1
            used[w] = False
        return False

    if rec(0):
        return {v: phi[v] for v in range(n)}
    return None


def exhaustive_nooses(g: Graph, gmax: int, l: int, budget: int | None = None):
    """Every minimum-genus embedding of ``g`` paired with each of its
    non-contractible nooses of length at most ``l``.

    Embeddings are all labeled embeddings (one per class of local
    orientation switches), not isomorphism classes, so the vertex sets
    hit by nooses are complete.
    """
    from .embedding import iter_embeddings, min_euler_genus
    from .facewidth import all_nooses
    from .surface import euler_genus, is_contractible

    found = min_euler_genus(g, gmax, budget)
    if found is None or found[0] == 0:
        return []
    genus = found[0]
    out = []
    for m in iter_embeddings(g, genus, budget):
        if euler_genus(m) != genus:
            continue
        for k in range(1, l + 1):
            for c in all_nooses(m, k):
                if not is_contractible(m, c):
                    out.append((m, c))
    return out
