"""Undirected multigraphs with vertex marks, connectivity queries and
bridge analysis relative to a skeleton subgraph."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import ParseError


class Graph:
    """Undirected multigraph on vertices ``0..n-1`` with integer marks.

    Edges are kept in insertion order; the position of an edge in
    ``edges`` is its edge id. Unmarked vertices have color 0.
    """

    __slots__ = ("n", "edges", "_marks", "_adj")

    def __init__(
        self,
        n: int,
        edges: Iterable[Sequence[int]] = (),
        marks: Mapping[int, int] | None = None,
        *,
        allow_loops: bool = False,
    ):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        es = []
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) has an undeclared endpoint")
            if u == v and not allow_loops:
                raise ValueError(f"self-loop at {u} not allowed here")
            es.append((u, v))
        mk: dict[int, int] = {}
        for v, c in (marks or {}).items():
            v, c = int(v), int(c)
            if not 0 <= v < n:
                raise ValueError(f"mark on undeclared vertex {v}")
            if c < 0:
                raise ValueError("mark colors must be non-negative")
            if c:
                mk[v] = c
        self.n = n
        self.edges: tuple[tuple[int, int], ...] = tuple(es)
        self._marks = mk
        self._adj: list[list[int]] | None = None

    # -- basic queries -------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def marks(self) -> dict[int, int]:
        return dict(self._marks)

    def mark(self, v: int) -> int:
        return self._marks.get(v, 0)

    def vertices(self) -> range:
        return range(self.n)

    @property
    def adj(self) -> list[list[int]]:
        """Neighbor lists with multiplicity (a loop contributes twice)."""
        if self._adj is None:
            adj: list[list[int]] = [[] for _ in range(self.n)]
            for u, v in self.edges:
                adj[u].append(v)
                adj[v].append(u)
            self._adj = adj
        return self._adj

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def is_simple(self) -> bool:
        seen = set()
        for u, v in self.edges:
            if u == v:
                return False
            key = (u, v) if u < v else (v, u)
            if key in seen:
                return False
            seen.add(key)
        return True

    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset((u, v) if u < v else (v, u) for u, v in self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def key(self) -> tuple:
        """Hashable identity of the labeled graph (edge multiset + marks)."""
        es = tuple(sorted((u, v) if u < v else (v, u) for u, v in self.edges))
        return (self.n, es, tuple(sorted(self._marks.items())))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m}, marks={len(self._marks)})"

    # -- derived graphs ------------------------------------------------

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Return the image under ``v -> perm[v]``."""
        if sorted(perm) != list(range(self.n)):
            raise ValueError("relabeling must be a permutation of the vertices")
        return Graph(
            self.n,
            [(perm[u], perm[v]) for u, v in self.edges],
            {perm[v]: c for v, c in self._marks.items()},
            allow_loops=True,
        )

    def with_marks(self, marks: Mapping[int, int]) -> "Graph":
        return Graph(self.n, self.edges, marks, allow_loops=True)

    def induced(self, keep: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph with dense ids; also returns new->old ids."""
        old = sorted(set(keep))
        pos = {v: i for i, v in enumerate(old)}
        es = [(pos[u], pos[v]) for u, v in self.edges if u in pos and v in pos]
        mk = {pos[v]: c for v, c in self._marks.items() if v in pos}
        return Graph(len(old), es, mk, allow_loops=True), old

    def without_edge(self, index: int) -> "Graph":
        es = self.edges[:index] + self.edges[index + 1:]
        return Graph(self.n, es, self._marks, allow_loops=True)

    def components(self) -> list[list[int]]:
        seen = [False] * self.n
        out = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            comp = [s]
            dq = deque([s])
            while dq:
                x = dq.popleft()
                for y in self.adj[x]:
                    if not seen[y]:
                        seen[y] = True
                        comp.append(y)
                        dq.append(y)
            out.append(sorted(comp))
        return out

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    # -- text format ---------------------------------------------------

    def to_text(self) -> str:
        lines = [f"graph {self.n} {self.m}"]
        lines += [f"{u} {v}" for u, v in self.edges]
        lines += [f"mark {v} {c}" for v, c in sorted(self._marks.items())]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Graph":
        return parse_graph(text)


def parse_graph(text: str) -> Graph:
    """Parse the edge-list format ``graph n m`` / ``u v`` / ``mark v c``."""
    rows = [(i + 1, ln.split()) for i, ln in enumerate(text.split("\n"))]
    rows = [(i, t) for i, t in rows if t]
    if not rows:
        raise ParseError(1, "empty input")
    ln, head = rows[0]
    if len(head) != 3 or head[0] != "graph":
        raise ParseError(ln, "expected header 'graph <n> <m>'")
    n, m = _ints(ln, head[1:])
    if n < 0 or m < 0:
        raise ParseError(ln, "counts must be non-negative")
    if len(rows) < 1 + m:
        raise ParseError(rows[-1][0], f"expected {m} edge lines, found {len(rows) - 1}")
    edges = []
    seen = set()
    for ln, tok in rows[1:1 + m]:
        if len(tok) != 2:
            raise ParseError(ln, "expected edge line 'u v'")
        u, v = _ints(ln, tok)
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(ln, f"vertex out of range 0..{n - 1}")
        if u == v:
            raise ParseError(ln, "self-loops are not allowed in input graphs")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ParseError(ln, "parallel edges are not allowed in input graphs")
        seen.add(key)
        edges.append((u, v))
    marks = {}
    for ln, tok in rows[1 + m:]:
        if len(tok) != 3 or tok[0] != "mark":
            raise ParseError(ln, "expected 'mark <v> <color>'")
        v, c = _ints(ln, tok[1:])
        if not 0 <= v < n:
            raise ParseError(ln, f"vertex out of range 0..{n - 1}")
        if c < 0:
            raise ParseError(ln, "mark colors must be non-negative")
        marks[v] = c
    return Graph(n, edges, marks)


def _ints(line: int, toks: Sequence[str]) -> list[int]:
    try:
        return [int(t) for t in toks]
    except ValueError:
        raise ParseError(line, f"expected integers, got {' '.join(toks)!r}") from None


# ---------------------------------------------------------------------
# connectivity


@dataclass(frozen=True)
class Separation:
    sideA: frozenset[int]
    sideB: frozenset[int]

    @property
    def order(self) -> int:
        return len(self.sideA & self.sideB)


def _connected_without(g: Graph, removed: set[int]) -> bool:
    start = next((v for v in range(g.n) if v not in removed), None)
    if start is None:
        return True
    seen = {start}
    dq = deque([start])
    while dq:
        x = dq.popleft()
        for y in g.adj[x]:
            if y not in removed and y not in seen:
                seen.add(y)
                dq.append(y)
    return len(seen) == g.n - len(removed)


def articulation_points(g: Graph, removed: frozenset[int] = frozenset()) -> set[int]:
    """Cut vertices of ``g - removed`` (iterative Tarjan lowpoint)."""
    n = g.n
    disc = [-1] * n
    low = [0] * n
    out: set[int] = set()
    t = 0
    for root in range(n):
        if root in removed or disc[root] >= 0:
            continue
        disc[root] = low[root] = t
        t += 1
        children = 0
        # stack of (vertex, parent, neighbor iterator, skipped-parent-edge flag)
        stack = [(root, -1, iter(g.adj[root]), False)]
        while stack:
            v, p, it, skipped = stack[-1]
            advanced = False
            for w in it:
                if w in removed:
                    continue
                if w == p and not skipped:
                    skipped = True
                    stack[-1] = (v, p, it, True)
                    continue
                if disc[w] < 0:
                    disc[w] = low[w] = t
                    t += 1
                    if v == root:
                        children += 1
                    stack.append((w, v, iter(g.adj[w]), False))
                    advanced = True
                    break
                low[v] = min(low[v], disc[w])
            if advanced:
                continue
            stack.pop()
            if stack:
                u = stack[-1][0]
                low[u] = min(low[u], low[v])
                if u != root and low[v] >= disc[u]:
                    out.add(u)
        if children > 1:
            out.add(root)
    return out


def connectivity(g: Graph, k: int) -> bool:
    """True iff ``g`` is k-connected, for k in {1, 2, 3}."""
    if k not in (1, 2, 3):
        raise ValueError("k must be 1, 2 or 3")
    if g.n < k + 1:
        raise ValueError(f"{k}-connectivity needs at least {k + 1} vertices")
    if not _connected_without(g, set()):
        return False
    if k == 1:
        return True
    if articulation_points(g):
        return False
    if k == 2:
        return True
    for v in range(g.n):
        if articulation_points(g, frozenset([v])):
            return False
    return True


def separation_pairs(g: Graph) -> list[tuple[int, int]]:
    """All vertex pairs whose removal disconnects a 2-connected graph."""
    out = []
    for v in range(g.n):
        for w in sorted(articulation_points(g, frozenset([v]))):
            if v < w:
                out.append((v, w))
    return out


# ---------------------------------------------------------------------
# skeletons and bridges


@dataclass(frozen=True)
class Skeleton:
    """A subgraph K of a host graph, split into branches.

    ``subgraph`` shares the host's vertex ids (vertices outside K are
    isolated). Branches are paths between branch vertices (degree != 2
    in K); a cycle component without branch vertices is kept as a
    closed branch, listed last, whose first and last entries coincide.
    """

    subgraph: Graph
    vertices: frozenset[int]
    branchVertices: frozenset[int]
    branches: tuple[tuple[int, ...], ...]
    closed: tuple[bool, ...] = field(default=())

    @property
    def bsize(self) -> int:
        return len(self.branchVertices)

    def open_branches(self) -> list[tuple[int, ...]]:
        return [b for b, c in zip(self.branches, self.closed) if not c]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Skeleton":
        sub = Graph(n, edges, allow_loops=True)
        verts = frozenset(v for e in sub.edges for v in e)
        deg = {v: sub.degree(v) for v in verts}
        bv = frozenset(v for v in verts if deg[v] != 2)
        used = [False] * sub.m
        inc: dict[int, list[int]] = {v: [] for v in verts}
        for i, (u, v) in enumerate(sub.edges):
            inc[u].append(i)
            if v != u:
                inc[v].append(i)
        branches: list[tuple[int, ...]] = []

        def walk(start: int, eid: int) -> tuple[int, ...]:
            path = [start]
            cur, e = start, eid
            while True:
                used[e] = True
                a, b = sub.edges[e]
                nxt = b if a == cur else a
                path.append(nxt)
                if nxt in bv or nxt == start:
                    return tuple(path)
                e = next(x for x in inc[nxt] if not used[x])
                cur = nxt

        for v in sorted(bv):
            for e in sorted(inc[v]):
                if not used[e]:
                    p = walk(v, e)
                    if p[-1] < p[0] or (p[-1] == p[0] and len(p) > 2 and p[-2] < p[1]):
                        p = p[::-1]
                    branches.append(p)
        branches.sort()
        closed_list: list[tuple[int, ...]] = []
        for v in sorted(verts):
            for e in sorted(inc[v]):
                if not used[e]:
                    p = walk(v, e)
                    if len(p) > 2 and p[-2] < p[1]:
                        p = p[::-1]
                    closed_list.append(p)
        return cls(
            sub, verts, bv, tuple(branches) + tuple(closed_list),
            tuple([False] * len(branches) + [True] * len(closed_list)),
        )


@dataclass(frozen=True)
class Bridge:
    kernel: frozenset[int]
    attachments: frozenset[int]
    stable: bool
    edges: tuple[int, ...] = ()  # host edge ids belonging to the bridge


def _skeleton_edge_ids(g: Graph, k: Skeleton) -> set[int]:
    """Match skeleton edges to host edge ids (multiset-aware)."""
    pool: dict[tuple[int, int], list[int]] = {}
    for i, (u, v) in enumerate(g.edges):
        pool.setdefault((min(u, v), max(u, v)), []).append(i)
    out = set()
    for u, v in k.subgraph.edges:
        lst = pool.get((min(u, v), max(u, v)))
        if not lst:
            raise ValueError(f"skeleton edge ({u}, {v}) is not an edge of the graph")
        out.add(lst.pop(0))
    return out


def bridges_of(g: Graph, k: Skeleton) -> list[Bridge]:
    """All K-bridges of ``g``: chords and components of G - V(K) with
    their attachment edges."""
    if k.subgraph.n != g.n:
        raise ValueError("skeleton must use the host graph's vertex ids")
    skel_ids = _skeleton_edge_ids(g, k)
    kv = k.vertices
    open_sets = [frozenset(b) for b in k.open_branches()]

    def is_stable(att: frozenset[int]) -> bool:
        return not any(att <= b for b in open_sets)

    out: list[Bridge] = []
    comp = [-1] * g.n
    comps: list[list[int]] = []
    for s in range(g.n):
        if s in kv or comp[s] >= 0:
            continue
        cid = len(comps)
        comp[s] = cid
        members = [s]
        dq = deque([s])
        while dq:
            x = dq.popleft()
            for y in g.adj[x]:
                if y not in kv and comp[y] < 0:
                    comp[y] = cid
                    members.append(y)
                    dq.append(y)
        comps.append(members)
    comp_edges: list[list[int]] = [[] for _ in comps]
    comp_att: list[set[int]] = [set() for _ in comps]
    for i, (u, v) in enumerate(g.edges):
        if i in skel_ids:
            continue
        if u in kv and v in kv:
            att = frozenset((u, v))
            out.append(Bridge(frozenset(), att, is_stable(att), (i,)))
            continue
        c = comp[u] if u not in kv else comp[v]
        comp_edges[c].append(i)
        for x in (u, v):
            if x in kv:
                comp_att[c].add(x)
    for c, members in enumerate(comps):
        att = frozenset(comp_att[c])
        out.append(Bridge(frozenset(members), att, is_stable(att), tuple(comp_edges[c])))
    out.sort(key=lambda b: (sorted(b.kernel), sorted(b.attachments), b.edges))
    return out


def _bridge_path(g: Graph, b: Bridge, s: int, t: int) -> list[int]:
    """Shortest s-t path whose interior lies in the bridge kernel; ties
    broken toward smaller vertex ids."""
    if not b.kernel:
        return [s, t]
    allowed = b.kernel | {t}
    edge_ok = set(b.edges)
    nbrs: dict[int, list[int]] = {}
    for i in edge_ok:
        u, v = g.edges[i]
        nbrs.setdefault(u, []).append(v)
        nbrs.setdefault(v, []).append(u)
    prev = {s: -1}
    dq = deque([s])
    while dq:
        x = dq.popleft()
        if x == t:
            break
        if x != s and x not in b.kernel:
            continue
        for y in sorted(nbrs.get(x, ())):
            if y in allowed and y not in prev:
                prev[y] = x
                dq.append(y)
    path = [t]
    while path[-1] != s:
        path.append(prev[path[-1]])
    return path[::-1]


def stabilize_bridges(g: Graph, k: Skeleton, max_steps: int | None = None) -> Skeleton:
    """Reroute branches through local bridges until every bridge is stable.

    A proper rerouting replaces the sub-path of an open branch between
    the two extreme attachments of a local bridge by a shortest path
    through that bridge. Candidates are tried in order of (branch index,
    smallest attachment pair) and a rerouting is applied only when it
    strictly lowers the number of unstable bridges; that count is the
    termination measure, so at most that many steps happen. Branch
    vertices never change.
    """
    cur = k
    steps = 0
    while True:
        bridges = bridges_of(g, cur)
        unstable = [b for b in bridges if not b.stable]
        if not unstable or (max_steps is not None and steps >= max_steps):
            return cur
        best = None
        opens = cur.open_branches()
        cands = []
        for bi, br in enumerate(opens):
            pos = {v: i for i, v in enumerate(br)}
            for b in unstable:
                if not b.attachments <= set(br):
                    continue
                idx = sorted(pos[a] for a in b.attachments)
                if len(idx) < 2:
                    continue
                i, j = idx[0], idx[-1]
                cands.append((bi, tuple(sorted((br[i], br[j]))), i, j, b))
        cands.sort(key=lambda c: (c[0], c[1]))
        for bi, _, i, j, b in cands:
            br = opens[bi]
            path = _bridge_path(g, b, br[i], br[j])
            new_branch = br[:i] + tuple(path) + br[j + 1:]
            edges = []
            for other in cur.branches:
                if other is br:
                    continue
                edges += list(zip(other, other[1:]))
            edges += list(zip(new_branch, new_branch[1:]))
            cand = Skeleton.from_edges(g.n, edges)
            if cand.branchVertices != cur.branchVertices:
                continue
            if sum(not x.stable for x in bridges_of(g, cand)) < len(unstable):
                best = cand
                break
        if best is None:
            return cur
        cur = best
        steps += 1


# ---------------------------------------------------------------------
# labeled graphs for canonical forms


@dataclass(frozen=True)
class LabeledGraph:
    """Graph whose vertices and darts carry byte-string labels.

    ``dlab`` has one entry per dart: ``dlab[2 * i]`` is edge ``i`` seen
    from ``edges[i][0]`` and ``dlab[2 * i + 1]`` from ``edges[i][1]``.
    ``None`` means every dart carries the empty label.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    vlab: tuple[bytes, ...]
    dlab: tuple[bytes, ...] | None = None

    @classmethod
    def from_graph(cls, g: Graph) -> "LabeledGraph":
        from .codec import pack

        return cls(g.n, g.edges, tuple(pack("v", g.mark(v)) for v in range(g.n)))

    def graph(self) -> Graph:
        return Graph(self.n, self.edges, allow_loops=True)

    def dart_label(self, i: int, side: int) -> bytes:
        return b"" if self.dlab is None else self.dlab[2 * i + side]

    def relabel(self, perm: Sequence[int]) -> "LabeledGraph":
        vl = [b""] * self.n
        for v in range(self.n):
            vl[perm[v]] = self.vlab[v]
        return LabeledGraph(self.n, tuple((perm[u], perm[v]) for u, v in self.edges), tuple(vl), self.dlab)

    def key(self) -> tuple:
        return (self.n, self.edges, self.vlab, self.dlab)


def is_labeled_isomorphism(a: LabeledGraph, b: LabeledGraph, phi: Sequence[int]) -> bool:
    """Check that ``phi`` maps ``a`` onto ``b`` preserving vertex and dart labels."""
    if a.n != b.n or len(a.edges) != len(b.edges) or sorted(phi) != list(range(a.n)):
        return False
    if any(a.vlab[v] != b.vlab[phi[v]] for v in range(a.n)):
        return False
    from collections import Counter

    def darts(g: LabeledGraph, f) -> Counter:
        c: Counter = Counter()
        for i, (u, v) in enumerate(g.edges):
            c[(f(u), f(v), g.dart_label(i, 0), g.dart_label(i, 1))] += 1
            c[(f(v), f(u), g.dart_label(i, 1), g.dart_label(i, 0))] += 1
        return c

    return darts(a, lambda x: phi[x]) == darts(b, lambda x: x)
