"""Embedding search at desk scale.

Embeddings are built by inserting edges one at a time into corners of a
growing connected partial map. A tree edge to a new vertex never
changes the Euler genus. A further edge between two placed vertices
either splits a face (+0), runs through one face with a twist (+1) or
joins two different faces (+2, with either signature). Euler genus is
therefore monotone along every branch and branches above the bound are
cut immediately.

Search order: the first vertex is one of maximum degree (lowest id on
ties); each later vertex is the unplaced vertex with the most edges to
placed ones (then higher degree, then lower id). Its lowest-id edge to
a placed vertex is the tree edge (signature +1), and its other edges to
placed vertices follow in edge-id order. Corners are tried in rotation
order from the vertex's first dart; signature +1 before -1. The first
leaf reached is the witness returned by ``min_euler_genus``.

Tree edges always carry +1, which fixes each embedding up to a global
mirror image. The mirror duplicate is removed by fixing the cyclic
order of the first three darts at the first vertex.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Iterator

import networkx as nx

from .errors import BudgetExceeded
from .graph import Graph, Skeleton
from .surface import CombinatorialMap, euler_genus

DEFAULT_BUDGET = 20_000_000


@dataclass(frozen=True)
class EmbeddingQuery:
    graph: Graph
    maxGenus: int
    fixedSubMap: CombinatorialMap | None = None
    minFaceWidth: int | None = None
    enumerateAll: bool = True
    budget: int | None = None


class _Budget:
    __slots__ = ("left", "deadline")

    def __init__(self, nodes: int | None, seconds: float | None = None):
        self.left = DEFAULT_BUDGET if nodes is None else nodes
        self.deadline = None if seconds is None else time.monotonic() + seconds

    def spend(self) -> None:
        self.left -= 1
        if self.left < 0:
            raise BudgetExceeded("embedding search node budget exhausted")
        if self.deadline is not None and (self.left & 1023) == 0 and time.monotonic() > self.deadline:
            raise BudgetExceeded("embedding search time budget exhausted")


class _Search:
    """Backtracking over corner insertions for a connected loopless graph."""

    def __init__(self, g: Graph, gmax: int, budget: _Budget, fixed: CombinatorialMap | None = None):
        self.g = g
        self.gmax = gmax
        self.budget = budget
        nd = 2 * g.m
        self.succ = [-1] * nd
        self.pred = [-1] * nd
        self.sig = [1] * g.m
        self.first = [-1] * g.n  # first dart placed at each vertex
        self.ndarts = [0] * g.n
        self.genus = 0
        self.root = -1
        self.steps: list[tuple[int, int, bool]] = []  # (edge, tail vertex, is_tree)
        placed = [False] * g.n
        done = [False] * g.m
        inc: list[list[int]] = [[] for _ in range(g.n)]
        for e, (u, v) in enumerate(g.edges):
            if u == v:
                raise ValueError("embedding search does not support loops")
            inc[u].append(e)
            inc[v].append(e)
        self.inc = inc
        if fixed is not None:
            self._load_fixed(fixed, placed, done)
        else:
            r = max(range(g.n), key=lambda v: (len(inc[v]), -v))
            self.root = r
            placed[r] = True
        initial = list(placed)
        count = [0] * g.n
        for e, (u, v) in enumerate(g.edges):
            if done[e]:
                continue
            if placed[u] and placed[v]:
                self.steps.append((e, u, False))
                done[e] = True
        for v in range(g.n):
            if placed[v]:
                for e in inc[v]:
                    w = self._other(e, v)
                    if not placed[w]:
                        count[w] += 1
        while True:
            cands = [v for v in range(g.n) if not placed[v] and count[v] > 0]
            if not cands:
                break
            v = max(cands, key=lambda x: (count[x], len(inc[x]), -x))
            placed[v] = True
            es = sorted(e for e in inc[v] if placed[self._other(e, v)] and not done[e])
            tree = es[0]
            self.steps.append((tree, self._other(tree, v), True))
            done[tree] = True
            for e in es[1:]:
                self.steps.append((e, v, False))
                done[e] = True
            for e in inc[v]:
                w = self._other(e, v)
                if not placed[w]:
                    count[w] += 1
        if not all(placed):
            raise ValueError("embedding search needs a connected graph")
        self.groups = self._cofacial_groups(initial)

    def _cofacial_groups(self, initial: list[bool]) -> list[list[tuple[int, ...]]]:
        """Per step: vertex sets that must share a face if no more genus
        may be spent. A pending edge needs its two ends on one face, and a
        connected block of unplaced vertices lands inside a single face,
        so all its placed neighbours must lie on that face."""
        g = self.g
        placed = list(initial)
        out = []
        for i in range(len(self.steps) + 1):
            grp = set()
            for e, _, t in self.steps[i:]:
                u, v = g.edges[e]
                if not t and placed[u] and placed[v]:
                    grp.add((min(u, v), max(u, v)))
            seen = [False] * g.n
            for s in range(g.n):
                if placed[s] or seen[s]:
                    continue
                att = set()
                stack = [s]
                seen[s] = True
                while stack:
                    x = stack.pop()
                    for y in g.adj[x]:
                        if placed[y]:
                            att.add(y)
                        elif not seen[y]:
                            seen[y] = True
                            stack.append(y)
                if len(att) > 1:
                    grp.add(tuple(sorted(att)))
            out.append(sorted(grp))
            if i < len(self.steps):
                e, tail, t = self.steps[i]
                if t:
                    placed[self._other(e, tail)] = True
        return out

    def _stuck(self, i: int) -> bool:
        """True when some group of step ``i`` has no common face."""
        groups = self.groups[i]
        if not groups:
            return False
        succ, pred, sig = self.succ, self.pred, self.sig
        fid = [-1] * (4 * self.g.m)
        nxt = 0
        vf: dict[int, set[int]] = {}
        for grp in groups:
            common = None
            for v in grp:
                fs = vf.get(v)
                if fs is None:
                    fs = set()
                    f0 = self.first[v]
                    a = f0
                    while True:
                        b = succ[a]
                        x = 2 * a + 1
                        if fid[x] < 0:
                            # walk the directed face and its reverse
                            for x0 in (x, 2 * b):
                                if fid[x0] >= 0:
                                    continue
                                y = x0
                                while True:
                                    fid[y] = nxt
                                    t = (y >> 1) ^ 1
                                    s = (y & 1) ^ (sig[t >> 1] == -1)
                                    y = 2 * (pred[t] if s else succ[t]) + s
                                    if y == x0:
                                        break
                            nxt += 1
                        fs.add(fid[x])
                        a = b
                        if a == f0:
                            break
                    vf[v] = fs
                common = set(fs) if common is None else common & fs
                if not common:
                    return True
        return False

    def _other(self, e: int, v: int) -> int:
        a, b = self.g.edges[e]
        return b if a == v else a

    def _dart(self, e: int, v: int) -> int:
        return 2 * e if self.g.edges[e][0] == v else 2 * e + 1

    def _load_fixed(self, fm: CombinatorialMap, placed: list[bool], done: list[bool]) -> None:
        g = self.g
        if fm.n > g.n:
            raise ValueError("fixed sub-map has vertices outside the graph")
        pool: dict[tuple[int, int], list[int]] = {}
        for e, (u, v) in enumerate(g.edges):
            pool.setdefault((min(u, v), max(u, v)), []).append(e)
        dmap = [0] * (2 * fm.m)
        for fe, (a, b) in enumerate(fm.graph.edges):
            lst = pool.get((min(a, b), max(a, b)))
            if not lst:
                raise ValueError(f"sub-map edge ({a}, {b}) is not in the graph")
            e = lst.pop(0)
            done[e] = True
            self.sig[e] = fm.signature[fe]
            da = self._dart(e, a)
            dmap[2 * fe] = da
            dmap[2 * fe + 1] = da ^ 1
        used = [v for v in range(fm.n) if fm.rotation[v]]
        if not used:
            raise ValueError("fixed sub-map has no edges")
        sub = Graph(g.n, fm.graph.edges, allow_loops=True)
        if len({v for c in sub.components() if len(c) > 1 for v in c}) != len(used) or \
                sum(1 for c in sub.components() if len(c) > 1) != 1:
            raise ValueError("fixed sub-map must be connected")
        for v in used:
            rot = [dmap[d] for d in fm.rotation[v]]
            k = len(rot)
            for i, d in enumerate(rot):
                self.succ[d] = rot[(i + 1) % k]
                self.pred[d] = rot[i - 1]
            self.first[v] = rot[0]
            self.ndarts[v] = k
            placed[v] = True
        self.genus = _genus_of_fixed(fm)

    # -- primitive edits -----------------------------------------------

    def _link(self, d: int, v: int, after: int) -> None:
        if after < 0:
            self.succ[d] = self.pred[d] = d
            self.first[v] = d
        else:
            nx_ = self.succ[after]
            self.succ[after] = d
            self.pred[d] = after
            self.succ[d] = nx_
            self.pred[nx_] = d
        self.ndarts[v] += 1

    def _unlink(self, d: int, v: int) -> None:
        self.ndarts[v] -= 1
        if self.ndarts[v] == 0:
            self.first[v] = -1
        else:
            p, s = self.pred[d], self.succ[d]
            self.succ[p] = s
            self.pred[s] = p
        self.succ[d] = self.pred[d] = -1

    def _corners(self, v: int) -> list[int]:
        f = self.first[v]
        if f < 0:
            return [-1]
        out = [f]
        x = self.succ[f]
        while x != f:
            out.append(x)
            x = self.succ[x]
        return out

    def _orbit(self, x0: int) -> set[int]:
        succ, pred, sig = self.succ, self.pred, self.sig
        out = set()
        x = x0
        while True:
            out.add(x)
            t = (x >> 1) ^ 1
            s = (x & 1) ^ (sig[t >> 1] == -1)
            x = 2 * (pred[t] if s else succ[t]) + s
            if x == x0:
                return out

    # -- search ----------------------------------------------------------

    def run(self, emit: Callable[[], bool]) -> None:
        """Depth-first search; ``emit`` is called at every leaf and stops
        the search by returning True."""
        self._stop = False
        self._emit = emit
        self._rec(0)

    def _rec(self, i: int) -> None:
        self.budget.spend()
        if i == len(self.steps):
            if self._emit():
                self._stop = True
            return
        if self.genus == self.gmax and self._stuck(i):
            return
        e, tail, is_tree = self.steps[i]
        if is_tree:
            head = self._other(e, tail)
            dt = self._dart(e, tail)
            dh = dt ^ 1
            corners = self._corners(tail)
            if tail == self.root and self.ndarts[tail] == 2:
                corners = [self.succ[self.first[tail]]]
            for a in corners:
                self._link(dt, tail, a)
                self._link(dh, head, -1)
                self.sig[e] = 1
                self._rec(i + 1)
                self._unlink(dh, head)
                self._unlink(dt, tail)
                if self._stop:
                    return
            return
        u = tail
        v = self._other(e, u)
        du = self._dart(e, u)
        dv = du ^ 1
        cu = self._corners(u)
        cv = self._corners(v)
        if u == self.root and self.ndarts[u] == 2:
            cu = [self.succ[self.first[u]]]
        if v == self.root and self.ndarts[v] == 2:
            cv = [self.succ[self.first[v]]]
        g0 = self.genus
        room = self.gmax - g0
        for a in cu:
            orb = self._orbit(2 * a + 1)
            for b in cv:
                if 2 * b + 1 in orb:
                    opts = ((1, 0), (-1, 1))
                elif 2 * self.succ[b] in orb:
                    opts = ((1, 1), (-1, 0))
                else:
                    opts = ((1, 2), (-1, 2))
                for s, delta in opts:
                    if delta > room:
                        continue
                    self._link(du, u, a)
                    self._link(dv, v, b)
                    self.sig[e] = s
                    self.genus = g0 + delta
                    self._rec(i + 1)
                    self.genus = g0
                    self._unlink(dv, v)
                    self._unlink(du, u)
                    if self._stop:
                        return

    def current_map(self) -> CombinatorialMap:
        rot = [tuple(self._corners(v)) if self.first[v] >= 0 else () for v in range(self.g.n)]
        return CombinatorialMap(self.g, rot, self.sig)


def _genus_of_fixed(fm: CombinatorialMap) -> int:
    used = [v for v in range(fm.n) if fm.rotation[v]]
    return 2 - (len(used) - fm.m + fm.num_faces)


# ---------------------------------------------------------------------
# public operations


def _girth(g: Graph) -> float:
    if not g.is_simple():
        return 2
    best = float("inf")
    for s in range(g.n):
        dist = {s: 0}
        parent = {s: -1}
        frontier = [s]
        while frontier:
            nxt = []
            for x in frontier:
                for y in g.adj[x]:
                    if y not in dist:
                        dist[y] = dist[x] + 1
                        parent[y] = x
                        nxt.append(y)
                    elif parent[x] != y:
                        best = min(best, dist[x] + dist[y] + 1)
            frontier = nxt
    return best


def genus_lower_bound(g: Graph) -> int:
    """Euler-formula bound using the girth: every face needs at least
    girth many edge sides."""
    if g.m == 0:
        return 0
    gi = _girth(g)
    if gi == float("inf"):
        return 0
    return max(0, 2 - g.n + g.m - int(2 * g.m // gi))


def planar_embed(g: Graph) -> CombinatorialMap | None:
    """A genus-0 map of a connected loopless graph, or None."""
    if not g.is_connected():
        raise ValueError("planar_embed needs a connected graph")
    if g.m == 0:
        return CombinatorialMap(g, [()] * g.n)
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    groups: dict[tuple[int, int], list[int]] = {}
    for e, (u, v) in enumerate(g.edges):
        if u == v:
            raise ValueError("planar_embed does not support loops")
        h.add_edge(u, v)
        groups.setdefault((min(u, v), max(u, v)), []).append(e)
    ok, emb = nx.check_planarity(h)
    if not ok:
        return None
    rot = []
    for v in range(g.n):
        r = []
        for w in emb.neighbors_cw_order(v):
            es = groups[(min(v, w), max(v, w))]
            ds = [2 * e if g.edges[e][0] == v else 2 * e + 1 for e in es]
            r.extend(ds if v < w else reversed(ds))
        rot.append(r)
    m = CombinatorialMap(g, rot)
    if euler_genus(m) != 0:  # pragma: no cover - defensive
        raise AssertionError("planarity embedding produced a non-planar map")
    return m


def _search_first(g: Graph, gmax: int, budget: _Budget, fixed: CombinatorialMap | None = None):
    s = _Search(g, gmax, budget, fixed)
    found: list[CombinatorialMap] = []

    def emit() -> bool:
        found.append(s.current_map())
        return True

    s.run(emit)
    return found[0] if found else None


def min_euler_genus(g: Graph, gmax: int, budget: int | None = None) -> tuple[int, CombinatorialMap] | None:
    """Smallest Euler genus <= gmax admitting an embedding, with a witness."""
    if not g.is_connected():
        raise ValueError("min_euler_genus needs a connected graph")
    pm = planar_embed(g)
    if pm is not None:
        return 0, pm
    b = _Budget(budget)
    for k in range(max(1, genus_lower_bound(g)), gmax + 1):
        m = _search_first(g, k, b)
        if m is not None:
            return k, m
    return None


def has_embedding(g: Graph, genus: int, budget: _Budget | None = None) -> bool:
    """Whether every component together fits in total Euler genus <= genus."""
    b = budget or _Budget(None)
    total = 0
    for comp in g.components():
        if len(comp) < 2:
            continue
        h, _ = g.induced(comp)
        if planar_embed(h) is not None:
            continue
        lo = max(1, genus_lower_bound(h))
        found = None
        for k in range(lo, genus - total + 1):
            if _search_first(h, k, b) is not None:
                found = k
                break
        if found is None:
            return False
        total += found
    return total <= genus


def iter_embeddings(g: Graph, genus: int, budget: int | None = None) -> Iterator[CombinatorialMap]:
    """Every embedding of Euler genus <= ``genus`` up to vertex flips and
    the global mirror image, in search order."""
    if not g.is_connected():
        raise ValueError("embedding enumeration needs a connected graph")
    if g.m == 0:
        yield CombinatorialMap(g, [()] * g.n)
        return
    s = _Search(g, genus, _Budget(budget))
    out: list[CombinatorialMap] = []

    def emit() -> bool:
        out.append(s.current_map())
        return False

    s.run(emit)
    yield from out


def embeddings_of_genus(g: Graph, genus: int, budget: int | None = None) -> list[CombinatorialMap]:
    """All embeddings of Euler genus exactly ``genus`` (no isomorphism
    dedup; one per mirror pair)."""
    return [m for m in iter_embeddings(g, genus, budget) if euler_genus(m) == genus]


def extend_embedding(q: EmbeddingQuery) -> CombinatorialMap | None:
    """Extend ``q.fixedSubMap`` to the whole graph without raising the
    Euler genus above ``q.maxGenus``; rotations and signatures of the
    fixed darts are preserved."""
    if q.fixedSubMap is None:
        raise ValueError("extend_embedding needs a fixed sub-map")
    fm = q.fixedSubMap
    if fm.m == q.graph.m:
        if sorted(map(sorted, fm.graph.edges)) != sorted(map(sorted, q.graph.edges)):
            raise ValueError("fixed sub-map is not a subgraph")
        return fm if _genus_of_fixed(fm) <= q.maxGenus else None
    s = _Search(q.graph, q.maxGenus, _Budget(q.budget), fm)
    if s.genus > q.maxGenus:
        return None
    found: list[CombinatorialMap] = []

    def emit() -> bool:
        found.append(s.current_map())
        return True

    s.run(emit)
    return found[0] if found else None


def enumerate_embeddings(q: EmbeddingQuery) -> list[CombinatorialMap]:
    """All embeddings with Euler genus <= maxGenus (and face-width at
    least minFaceWidth when given), one per map-isomorphism class,
    sorted by free canonical code."""
    from .facewidth import face_width_at_least
    from .mapcanon import canonical_code

    seen: dict[bytes, CombinatorialMap] = {}
    for m in iter_embeddings(q.graph, q.maxGenus, q.budget):
        if q.minFaceWidth is not None and not face_width_at_least(m, q.minFaceWidth):
            continue
        code = canonical_code(m).bytes
        if code not in seen:
            seen[code] = m
    return [seen[c] for c in sorted(seen)]


def genus_critical_subgraph(g: Graph, genus: int, budget: int | None = None) -> Skeleton:
    """Greedy edge deletion in edge-id order, keeping an edge only when
    its removal would let the rest embed in smaller Euler genus."""
    if genus <= 0:
        raise ValueError("genus-critical subgraphs need positive genus")
    b = _Budget(budget)
    keep = list(range(g.m))
    i = 0
    while i < len(keep):
        trial = keep[:i] + keep[i + 1:]
        h = Graph(g.n, [g.edges[e] for e in trial], allow_loops=True)
        if has_embedding(h, genus - 1, b):
            i += 1
        else:
            keep = trial
    return Skeleton.from_edges(g.n, [g.edges[e] for e in keep])
