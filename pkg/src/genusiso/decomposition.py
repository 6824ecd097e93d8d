"""Block and triconnected component trees, and canonical codes built on them.

Triconnected components are found by repeatedly splitting a component
at its least separation pair {a, b} (splitting off the side that holds
the smallest remaining vertex), separating parallel edges into bonds,
and finally merging adjacent bonds with bonds and adjacent cycles with
cycles. Quadratic per split, which is plenty at the sizes used here.

Canonical codes are computed bottom-up on the trees rooted at their
unique center. Every code comes with a vertex order such that the code
determines the graph relabeled by that order; isomorphisms are read off
by zipping two orders.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Callable, Sequence

import networkx as nx

from .codec import pack
from .embedding import planar_embed
from .graph import Graph, LabeledGraph, articulation_points, connectivity
from .mapcanon import FREE, CanonicalCode, canonical_form
from .surface import CombinatorialMap

# canonizer for 3-connected torsos: labeled graph -> (code, vertex order)
RCanon = Callable[[LabeledGraph], tuple[bytes, list[int]]]


@dataclass(frozen=True)
class Torso:
    """One node of a decomposition tree.

    ``kind`` is "R", "S" or "P" (3-connected, cycle, bond) in a
    triconnected tree and "B" or "C" (block, cut vertex) in a
    biconnected one. ``edges`` are host edge ids; ``virtual`` lists
    ``(tree edge index, a, b)``.
    """

    kind: str
    vertices: tuple[int, ...]
    edges: tuple[int, ...]
    virtual: tuple[tuple[int, int, int], ...] = ()


@dataclass(frozen=True)
class DecompTree:
    kind: str
    graph: Graph
    torsos: tuple[Torso, ...]
    treeEdges: tuple[tuple[int, int, tuple[int, ...]], ...]

    @property
    def bags(self) -> tuple[tuple[int, ...], ...]:
        return tuple(t.vertices for t in self.torsos)

    def reconstruct(self) -> Graph:
        """Glue the bags back together, dropping virtual edges. Raises if a
        host edge is claimed by no bag or by two."""
        owner = [0] * self.graph.m
        for t in self.torsos:
            for e in t.edges:
                owner[e] += 1
        if any(c != 1 for c in owner):
            raise ValueError("bags do not partition the edge set")
        edges = [self.graph.edges[e] for t in self.torsos for e in t.edges]
        return Graph(self.graph.n, edges, self.graph.marks, allow_loops=True)

    def dump(self) -> str:
        lines = [f"tree {self.kind} {len(self.torsos)} {len(self.treeEdges)}"]
        for i, t in enumerate(self.torsos):
            lines.append(f"bag {i}: " + " ".join(map(str, t.vertices)) + f"  # {t.kind}")
        for i, j, adh in self.treeEdges:
            lines.append(f"adh {i} {j}: " + " ".join(map(str, adh)))
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------
# block tree


def _blocks(g: Graph) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    eid: dict[tuple[int, int], list[int]] = defaultdict(list)
    for i, (u, v) in enumerate(g.edges):
        if u == v:
            raise ValueError("block decomposition does not support loops")
        h.add_edge(u, v)
        eid[(min(u, v), max(u, v))].append(i)
    out = []
    for es in nx.biconnected_component_edges(h):
        verts = sorted({x for e in es for x in e})
        ids = sorted(i for u, v in es for i in eid[(min(u, v), max(u, v))])
        out.append((tuple(verts), tuple(ids)))
    out.sort()
    return out


def biconnected_tree(g: Graph) -> DecompTree:
    """Block-cut vertex tree: one node per block, then one per cut vertex."""
    if not g.is_connected():
        raise ValueError("biconnected_tree needs a connected graph")
    if g.n == 1:
        return DecompTree("biconnected", g, (Torso("B", (0,), ()),), ())
    blocks = _blocks(g)
    where: dict[int, list[int]] = defaultdict(list)
    for i, (vs, _) in enumerate(blocks):
        for v in vs:
            where[v].append(i)
    cuts = sorted(v for v, bs in where.items() if len(bs) > 1)
    torsos = [Torso("B", vs, es) for vs, es in blocks] + [Torso("C", (c,), ()) for c in cuts]
    tedges = []
    for k, c in enumerate(cuts):
        for b in where[c]:
            tedges.append((b, len(blocks) + k, (c,)))
    tedges.sort()
    return DecompTree("biconnected", g, tuple(torsos), tuple(tedges))


# ---------------------------------------------------------------------
# triconnected components


def _find_split(n: int, comp: list[tuple[int, int, int]]):
    verts = sorted({x for u, v, _ in comp for x in (u, v)})
    if len(verts) <= 3:
        return None
    g = Graph(n, [(u, v) for u, v, _ in comp])
    for a in verts:
        aps = articulation_points(g, frozenset([a]))
        if not aps:
            continue
        b = min(aps)
        start = min(x for x in verts if x != a and x != b)
        side = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in g.adj[x]:
                if y != a and y != b and y not in side:
                    side.add(y)
                    stack.append(y)
        return min(a, b), max(a, b), side
    return None


def _tricomponents(n: int, edges: Sequence[tuple[int, int]]):
    """Split into bonds, cycles and 3-connected pieces, then merge.

    Returns ``(kind, edge list)`` pairs; an edge is ``(u, v, id)`` with
    ``id >= len(edges)`` for virtual edges, each shared by two pieces.
    """
    m = len(edges)
    counter = [m]
    final: list[tuple[str, list[tuple[int, int, int]]]] = []
    work: list[list[tuple[int, int, int]]] = []

    def fresh() -> int:
        counter[0] += 1
        return counter[0] - 1

    def push(comp: list[tuple[int, int, int]]) -> None:
        groups: dict[tuple[int, int], list[tuple[int, int, int]]] = defaultdict(list)
        for e in comp:
            groups[(min(e[0], e[1]), max(e[0], e[1]))].append(e)
        if len(groups) == 1:
            final.append(("P", comp))
            return
        rest: list[tuple[int, int, int]] = []
        for (a, b), es in sorted(groups.items()):
            if len(es) >= 2:
                vid = fresh()
                final.append(("P", es + [(a, b, vid)]))
                rest.append((a, b, vid))
            else:
                rest.extend(es)
        work.append(rest)

    push([(u, v, i) for i, (u, v) in enumerate(edges)])
    while work:
        comp = work.pop()
        split = _find_split(n, comp)
        if split is None:
            nv = len({x for u, v, _ in comp for x in (u, v)})
            final.append(("S" if len(comp) == nv else "R", comp))
            continue
        a, b, side = split
        e1 = [e for e in comp if e[0] in side or e[1] in side]
        e2 = [e for e in comp if not (e[0] in side or e[1] in side)]
        vid = fresh()
        push(e1 + [(a, b, vid)])
        push(e2 + [(a, b, vid)])

    # merge bonds with bonds and cycles with cycles
    owner: dict[int, list[int]] = defaultdict(list)
    for i, (_, es) in enumerate(final):
        for e in es:
            if e[2] >= m:
                owner[e[2]].append(i)
    parent = list(range(len(final)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    internal = set()
    for vid, (x, y) in owner.items():
        if final[x][0] == final[y][0] and final[x][0] in "PS":
            internal.add(vid)
            parent[find(x)] = find(y)
    merged: dict[int, list[tuple[int, int, int]]] = defaultdict(list)
    for i, (_, es) in enumerate(final):
        merged[find(i)].extend(e for e in es if e[2] not in internal)
    return [(final[r][0], es) for r, es in merged.items()]


def triconnected_tree(g: Graph) -> DecompTree:
    """Triconnected component tree of a 2-connected graph."""
    if g.n == 2 and g.m >= 1:
        return DecompTree("triconnected", g, (Torso("P", (0, 1), tuple(range(g.m))),), ())
    if g.n < 3 or not connectivity(g, 2):
        raise ValueError("triconnected_tree needs a 2-connected graph")
    return _build_tree(g, _tricomponents(g.n, g.edges))


def _build_tree(g: Graph, comps) -> DecompTree:
    m = g.m
    nodes = []
    for kind, es in comps:
        verts = tuple(sorted({x for u, v, _ in es for x in (u, v)}))
        real = tuple(sorted(i for _, _, i in es if i < m))
        virt = sorted((i, min(u, v), max(u, v)) for u, v, i in es if i >= m)
        nodes.append((verts, kind, real, tuple((a, b) for _, a, b in virt), virt))
    order = sorted(range(len(nodes)), key=lambda i: nodes[i][:4])
    pos = {old: new for new, old in enumerate(order)}
    ends: dict[int, list[int]] = defaultdict(list)
    pair: dict[int, tuple[int, int]] = {}
    for i, nd in enumerate(nodes):
        for vid, a, b in nd[4]:
            ends[vid].append(pos[i])
            pair[vid] = (a, b)
    tedges = sorted((min(x, y), max(x, y), pair[vid], vid) for vid, (x, y) in ends.items())
    tindex = {t[3]: k for k, t in enumerate(tedges)}
    torsos = []
    for old in order:
        verts, kind, real, _, virt = nodes[old]
        torsos.append(Torso(kind, verts, real, tuple(sorted((tindex[vid], a, b) for vid, a, b in virt))))
    return DecompTree("triconnected", g, tuple(torsos), tuple((i, j, adh) for i, j, adh, _ in tedges))


# ---------------------------------------------------------------------
# canonical forms


def planar_rcanon(lg: LabeledGraph) -> tuple[bytes, list[int]]:
    """Canonical form of a planar 3-connected labeled graph through its
    unique embedding (reflections allowed)."""
    m = planar_embed(lg.graph())
    if m is None:
        raise ValueError("non-planar 3-connected piece needs a surface canonizer")
    dl = None if lg.dlab is None else list(lg.dlab)
    f = canonical_form(m, FREE, list(lg.vlab), dl)
    return pack("planar", f.code), list(f.vertex_order)


Form = tuple[bytes, list[int]]


def _lab(x: int, r0: int, r1: int, base: Sequence[bytes]) -> bytes:
    return pack(base[x], 1 if x == r0 else 2 if x == r1 else 0)


class _TreeCanon:
    """Center-rooted canonical form of a triconnected component tree."""

    def __init__(self, t: DecompTree, labels: Sequence[bytes], rcanon: RCanon):
        self.t = t
        self.labels = labels
        self.rcanon = rcanon
        self.memo: dict[tuple[int, int, int], Form] = {}
        self.other: dict[tuple[int, int], int] = {}
        for k, (i, j, _) in enumerate(t.treeEdges):
            self.other[(i, k)] = j
            self.other[(j, k)] = i

    def form(self) -> Form:
        t = self.t
        nc, ne = len(t.torsos), len(t.treeEdges)
        if ne == 0:
            return self.sub(0, -1, -1, -1)
        # bipartite tree: torsos 0..nc-1, tree edges nc..nc+ne-1
        deg = [0] * (nc + ne)
        adj: list[list[int]] = [[] for _ in range(nc + ne)]
        for k, (i, j, _) in enumerate(t.treeEdges):
            for x in (i, j):
                adj[x].append(nc + k)
                adj[nc + k].append(x)
                deg[x] += 1
            deg[nc + k] = 2
        alive = nc + ne
        leaves = [x for x in range(nc + ne) if deg[x] <= 1]
        removed = [False] * (nc + ne)
        while alive > 2:
            nxt = []
            for x in leaves:
                removed[x] = True
                alive -= 1
                for y in adj[x]:
                    if not removed[y]:
                        deg[y] -= 1
                        if deg[y] == 1:
                            nxt.append(y)
            leaves = nxt
        centers = [x for x in range(nc + ne) if not removed[x]]
        # leaves are torsos, so the center is unique
        c = centers[0] if len(centers) == 1 else next(x for x in centers if x >= nc)
        if c < nc:
            return self.sub(c, -1, -1, -1)
        k = c - nc
        i, j, (a, b) = t.treeEdges[k]
        best = None
        for x, y in ((a, b), (b, a)):
            f1, f2 = sorted([self.sub(i, k, x, y), self.sub(j, k, x, y)], key=lambda f: f[0])
            key = pack("edge", f1[0], f2[0])
            if best is None or key < best[0]:
                best = (key, [x, y], f1, f2)
        key, order, f1, f2 = best
        seen = set(order)
        for f in (f1, f2):
            for v in f[1]:
                if v not in seen:
                    seen.add(v)
                    order.append(v)
        return key, order

    def sub(self, c: int, pk: int, r0: int, r1: int) -> Form:
        mk = (c, pk, r0)
        if mk in self.memo:
            return self.memo[mk]
        t = self.t
        torso = t.torsos[c]
        base = self.labels
        lab = {x: _lab(x, r0, r1, base) for x in torso.vertices}
        darts: list[tuple[int, int, bytes, bytes, int]] = []  # u, v, label at u, label at v, child
        for e in torso.edges:
            u, v = t.graph.edges[e]
            darts.append((u, v, b"E", b"E", -1))
        for k, a, b in torso.virtual:
            if k == pk:
                darts.append((a, b, b"P", b"P", -1))
            else:
                c2 = self.other[(c, k)]
                fa = self.sub(c2, k, a, b)
                fb = self.sub(c2, k, b, a)
                darts.append((a, b, pack("V", fa[0]), pack("V", fb[0]), k))
        if torso.kind == "P":
            tcode, torder = self._bond(torso, lab, darts, pk >= 0, r0, r1)
        elif torso.kind == "S":
            tcode, torder = self._cycle(torso, lab, darts, pk >= 0, r0, r1)
        else:
            tcode, torder = self._rigid(torso, lab, darts)
        posn = {v: i for i, v in enumerate(torder)}
        order = list(torder)
        seen = set(order)
        kids = []
        for u, v, lu, lv, k in darts:
            if k < 0:
                continue
            x, y, lx = (u, v, lu) if posn[u] < posn[v] else (v, u, lv)
            kids.append(((posn[x], posn[y], lx), k, x, y))
        kids.sort(key=lambda z: z[0])
        for _, k, x, y in kids:
            for w in self.sub(self.other[(c, k)], k, x, y)[1]:
                if w not in seen:
                    seen.add(w)
                    order.append(w)
        res = (pack(torso.kind, tcode), order)
        self.memo[mk] = res
        return res

    @staticmethod
    def _bond(torso, lab, darts, rooted, r0, r1) -> Form:
        p, q = torso.vertices
        opts = [(r0, r1)] if rooted else [(p, q), (q, p)]
        best = None
        for x, y in opts:
            pairs = sorted((lu, lv) if u == x else (lv, lu) for u, v, lu, lv, _ in darts)
            key = pack(lab[x], lab[y], [list(pr) for pr in pairs])
            if best is None or key < best[0]:
                best = (key, [x, y])
        return best

    @staticmethod
    def _cycle(torso, lab, darts, rooted, r0, r1) -> Form:
        nbr: dict[int, list[tuple[int, bytes, bytes]]] = defaultdict(list)
        for u, v, lu, lv, _ in darts:
            nbr[u].append((v, lu, lv))
            nbr[v].append((u, lv, lu))
        k = len(torso.vertices)
        best = None
        starts = [r0] if rooted else list(torso.vertices)
        for s in starts:
            for first in nbr[s]:
                if rooted and first[0] != r1:
                    continue
                seq = [s]
                items = []
                prev, cur, step = s, first[0], first
                items.append([lab[s], step[1], step[2]])
                while cur != s:
                    seq.append(cur)
                    step = next(z for z in nbr[cur] if z[0] != prev)
                    items.append([lab[cur], step[1], step[2]])
                    prev, cur = cur, step[0]
                if len(seq) != k:
                    raise AssertionError("cycle torso walk did not close properly")
                key = pack(items)
                if best is None or key < best[0]:
                    best = (key, seq)
        return best

    def _rigid(self, torso, lab, darts) -> Form:
        loc = {v: i for i, v in enumerate(torso.vertices)}
        edges = tuple((loc[u], loc[v]) for u, v, _, _, _ in darts)
        dl = []
        for _, _, lu, lv, _ in darts:
            dl += [lu, lv]
        lg = LabeledGraph(len(loc), edges, tuple(lab[v] for v in torso.vertices), tuple(dl))
        code, order = self.rcanon(lg)
        return code, [torso.vertices[i] for i in order]


def _block_form(g: Graph, labels: Sequence[bytes], rcanon: RCanon) -> Form:
    """Canonical form of a 2-connected graph (or a single edge)."""
    if g.n == 2:
        best = None
        for x, y in ((0, 1), (1, 0)):
            key = pack("K2", labels[x], labels[y], g.m)
            if best is None or key < best[0]:
                best = (key, [x, y])
        return best
    tc = _TreeCanon(triconnected_tree(g), labels, rcanon)
    code, order = tc.form()
    return pack("spqr", code), order


def _connected_form(g: Graph, labels: Sequence[bytes], rcanon: RCanon) -> Form:
    if g.n == 1:
        return pack("one", labels[0]), [0]
    bt = biconnected_tree(g)
    blocks = [t for t in bt.torsos if t.kind == "B"]
    nb = len(blocks)
    cut_of = {t.vertices[0]: nb + i for i, t in enumerate(bt.torsos[nb:])}
    adj: dict[int, list[int]] = defaultdict(list)
    for i, j, _ in bt.treeEdges:
        adj[i].append(j)
        adj[j].append(i)
    memo: dict[tuple[int, int], Form] = {}

    def cut_form(c: int, parent: int) -> Form:
        key = (c, parent)
        if key in memo:
            return memo[key]
        v = bt.torsos[c].vertices[0]
        kids = sorted((block_form(b, v) for b in adj[c] if b != parent), key=lambda f: f[0])
        order = [v]
        seen = {v}
        for f in kids:
            for w in f[1]:
                if w not in seen:
                    seen.add(w)
                    order.append(w)
        res = (pack("cut", labels[v], [f[0] for f in kids]), order)
        memo[key] = res
        return res

    def block_form(b: int, root: int) -> Form:
        key = (b, root)
        if key in memo:
            return memo[key]
        t = bt.torsos[b]
        old = list(t.vertices)
        loc = {v: i for i, v in enumerate(old)}
        sub = Graph(len(old), [(loc[g.edges[e][0]], loc[g.edges[e][1]]) for e in t.edges])
        lab = []
        for v in old:
            if v == root:
                lab.append(pack("r", labels[v]))
            elif v in cut_of:
                lab.append(pack("h", cut_form(cut_of[v], b)[0]))
            else:
                lab.append(pack("p", labels[v]))
        code, lorder = _block_form(sub, lab, rcanon)
        order = [old[i] for i in lorder]
        seen = set(order)
        for v in list(order):
            if v != root and v in cut_of:
                for w in cut_form(cut_of[v], b)[1]:
                    if w not in seen:
                        seen.add(w)
                        order.append(w)
        res = (pack("block", code), order)
        memo[key] = res
        return res

    # center of the block-cut tree; leaves are blocks, so it is unique
    total = len(bt.torsos)
    deg = {x: len(adj[x]) for x in range(total)}
    removed = set()
    leaves = [x for x in range(total) if deg[x] <= 1]
    alive = total
    while alive > 1:
        nxt = []
        for x in leaves:
            removed.add(x)
            alive -= 1
            for y in adj[x]:
                if y not in removed:
                    deg[y] -= 1
                    if deg[y] == 1:
                        nxt.append(y)
        leaves = nxt
    center = next(x for x in range(total) if x not in removed)
    if center >= nb:
        return cut_form(center, -1)
    return block_form(center, -1)


def _subdivide(lg: LabeledGraph) -> tuple[LabeledGraph, int]:
    if lg.dlab is None or not any(lg.dlab):
        return lg, lg.n
    n = lg.n
    vl = [pack("o", x) for x in lg.vlab]
    edges = []
    for i, (u, v) in enumerate(lg.edges):
        la, lb = lg.dlab[2 * i], lg.dlab[2 * i + 1]
        if not la and not lb:
            edges.append((u, v))
            continue
        w1, w2 = len(vl), len(vl) + 1
        vl += [pack("d", la), pack("d", lb)]
        edges += [(u, w1), (w1, w2), (w2, v)]
    return LabeledGraph(len(vl), tuple(edges), tuple(vl)), n


def canonical_graph_form(lg: LabeledGraph, rcanon: RCanon | None = None) -> Form:
    """Canonical code and vertex order of a labeled graph.

    Connected components are canonized through their block and
    triconnected trees; ``rcanon`` handles 3-connected pieces (planar
    ones by default).
    """
    rc = rcanon or planar_rcanon
    h, n0 = _subdivide(lg)
    g = Graph(h.n, h.edges)
    if not g.is_simple():
        raise ValueError("canonical forms need a simple graph")
    forms = []
    for comp in g.components():
        sub, old = g.induced(comp)
        code, order = _connected_form(sub, [h.vlab[v] for v in old], rc)
        forms.append((code, [old[i] for i in order]))
    forms.sort(key=lambda f: f[0])
    order = [v for _, o in forms for v in o if v < n0]
    return pack("graph", [f[0] for f in forms]), order


def canonical_tree_code(t: DecompTree, componentCanon: RCanon | None = None) -> CanonicalCode:
    """Relabeling-invariant code of a decomposition tree and its graph.

    For a triconnected tree the given tree is canonized directly; for a
    biconnected tree each block goes through its own triconnected tree.
    Vertex marks of the underlying graph are honored.
    """
    rc = componentCanon or planar_rcanon
    labels = [pack("v", t.graph.mark(v)) for v in range(t.graph.n)]
    if t.kind == "triconnected":
        if not t.treeEdges and t.torsos[0].kind == "P" and t.graph.n == 2:
            code, _ = _block_form(t.graph, labels, rc)
        else:
            code, _ = _TreeCanon(t, labels, rc).form()
        return CanonicalCode(pack("tri", code))
    code, _ = _connected_form(t.graph, labels, rc)
    return CanonicalCode(pack("bi", code))


# ---------------------------------------------------------------------
# paths of triconnected trees in cut-open graphs


@dataclass(frozen=True)
class CylinderPath:
    """Triconnected tree path of a cut-open graph between its two
    boundary edges, with the maximal cylinder prefix and suffix.

    ``units[i]`` holds the real edge ids of path node i together with
    everything hanging off it (boundary edges excluded). ``adhesions[i]``
    separates unit i from unit i + 1. ``j1`` is the last unit of the
    prefix cylinder T1, ``j2`` the first unit of the suffix cylinder T2.
    """

    kinds: tuple[str, ...]
    units: tuple[tuple[int, ...], ...]
    adhesions: tuple[tuple[int, int], ...]
    j1: int
    j2: int

    @property
    def degenerate(self) -> bool:
        """The two cylinders meet: the whole graph is one cylinder chain."""
        return self.j1 + 1 >= self.j2

    def t1_edges(self) -> tuple[int, ...]:
        return tuple(sorted(e for u in self.units[: self.j1 + 1] for e in u))

    def t2_edges(self) -> tuple[int, ...]:
        return tuple(sorted(e for u in self.units[self.j2:] for e in u))

    @property
    def inner1(self) -> tuple[int, int] | None:
        return self.adhesions[self.j1] if self.j1 < len(self.adhesions) else None

    @property
    def inner2(self) -> tuple[int, int] | None:
        return self.adhesions[self.j2 - 1] if self.j2 > 0 else None


def _is_cylinder(g: Graph, edge_ids: Sequence[int], p: tuple[int, int], q: tuple[int, int]) -> bool:
    """Planar with one apex on pair p and another on pair q: the edges fit
    in an annulus with p on one rim and q on the other."""
    h = nx.MultiGraph()
    for e in edge_ids:
        h.add_edge(*g.edges[e])
    h.add_edges_from([("s", p[0]), ("s", p[1]), ("t", q[0]), ("t", q[1])])
    return nx.check_planarity(nx.Graph(h))[0]


def spqr_path_cylinders(gcut: Graph, x1: int, y1: int, x2: int, y2: int) -> CylinderPath:
    """Path analysis of the cut-open graph ``gcut``.

    ``gcut`` must end with the boundary edges x1y1 and x2y2 (in that
    order) and be 2-connected. T1 is the longest prefix of the path that
    passes the cylinder test against {x1, y1}; T2 symmetrically from the
    other end.
    """
    m = gcut.m
    if m < 2 or {*gcut.edges[m - 2]} != {x1, y1} or {*gcut.edges[m - 1]} != {x2, y2}:
        raise ValueError("gcut must end with the boundary edges x1y1 and x2y2")
    t = triconnected_tree(gcut)
    node_of = {}
    for i, tor in enumerate(t.torsos):
        for e in tor.edges:
            node_of[e] = i
    adj: dict[int, list[tuple[int, tuple[int, ...]]]] = defaultdict(list)
    for i, j, adh in t.treeEdges:
        adj[i].append((j, adh))
        adj[j].append((i, adh))
    s, goal = node_of[m - 2], node_of[m - 1]
    prev: dict[int, tuple[int, tuple[int, ...]] | None] = {s: None}
    queue = [s]
    for x in queue:
        for y, adh in sorted(adj[x]):
            if y not in prev:
                prev[y] = (x, adh)
                queue.append(y)
    path = [goal]
    adhs: list[tuple[int, int]] = []
    while prev[path[-1]] is not None:
        x, adh = prev[path[-1]]
        adhs.append((adh[0], adh[1]))
        path.append(x)
    path.reverse()
    adhs.reverse()
    # hang every other node on the path node it attaches to
    home = {p: k for k, p in enumerate(path)}
    queue = list(path)
    for x in queue:
        for y, _ in sorted(adj[x]):
            if y not in home:
                home[y] = home[x]
                queue.append(y)
    units: list[list[int]] = [[] for _ in path]
    for i, tor in enumerate(t.torsos):
        units[home[i]].extend(e for e in tor.edges if e < m - 2)
    units_t = tuple(tuple(sorted(u)) for u in units)
    kinds = tuple(t.torsos[p].kind for p in path)
    k = len(path)
    j1 = 0
    for j in range(k - 1):
        edges = [e for u in units_t[: j + 1] for e in u]
        if _is_cylinder(gcut, edges, (x1, y1), adhs[j]):
            j1 = j
    j2 = k - 1
    for j in range(k - 1, 0, -1):
        edges = [e for u in units_t[j:] for e in u]
        if _is_cylinder(gcut, edges, (x2, y2), adhs[j - 1]):
            j2 = j
    if k == 1:
        j1, j2 = 0, 0
    return CylinderPath(kinds, units_t, tuple(adhs), j1, j2)


@dataclass(frozen=True)
class ChainDecomposition:
    """Cyclic chain of pieces glued along 2-vertex cuts.

    ``cuts[i]`` is the pair shared by ``pieces[i - 1]`` and
    ``pieces[i]``; ``cutEdges[i]`` lists edges spanned by that pair that
    belong to no piece. ``codes`` is the canonical code sequence the
    start and direction were chosen by.
    """

    pieces: tuple[tuple[int, ...], ...]
    pieceEdges: tuple[tuple[int, ...], ...]
    cuts: tuple[tuple[int, int], ...]
    cutEdges: tuple[tuple[int, ...], ...]
    circular: bool
    codes: tuple[bytes, ...] = ()

    def interval_property(self) -> bool:
        """Each vertex sits in a cyclically contiguous run of pieces."""
        l = len(self.pieces)
        where: dict[int, list[int]] = defaultdict(list)
        for i, p in enumerate(self.pieces):
            for v in p:
                where[v].append(i)
        for idx in where.values():
            if len(idx) in (1, l):
                continue
            s = set(idx)
            starts = [i for i in idx if (i - 1) % l not in s]
            if len(starts) != 1:
                return False
        return True


def _piece_code(g: Graph, edges: Sequence[int], left: Sequence[int], right: Sequence[int]) -> bytes:
    verts = sorted({x for e in edges for x in g.edges[e]} | set(left) | set(right))
    idx = {v: i for i, v in enumerate(verts)}
    lab = []
    for v in verts:
        tag = ("L" if v in left else "") + ("R" if v in right else "")
        lab.append(pack(tag or "v", g.mark(v)))
    mult: dict[tuple[int, int], int] = defaultdict(int)
    for e in edges:
        a, b = idx[g.edges[e][0]], idx[g.edges[e][1]]
        mult[(min(a, b), max(a, b))] += 1
    pairs = sorted(mult)
    # parallel edges collapse to one edge carrying its multiplicity
    dl = tuple(pack("x", mult[p]) for p in pairs for _ in (0, 1))
    lg = LabeledGraph(len(verts), tuple(pairs), tuple(lab), dl)
    return canonical_graph_form(lg)[0]


def circular_chain(gcut: Graph, x1: int, y1: int, x2: int, y2: int) -> ChainDecomposition:
    """Circular chain decomposition of the graph obtained from ``gcut``
    by identifying x2 with x1 and y2 with y1.

    ``gcut`` is a cut-open torus or Klein bottle graph ending with the
    boundary edges x1y1 and x2y2, as for ``spqr_path_cylinders``. Every
    non-bond node on the triconnected path is a piece; bonds become cut
    decorations. Start and direction minimize the code sequence.
    """
    cp = spqr_path_cylinders(gcut, x1, y1, x2, y2)
    ident = {x2: x1, y2: y1}
    base = Graph(gcut.n, [(ident.get(u, u), ident.get(v, v)) for u, v in gcut.edges[:-2]], gcut.marks,
                 allow_loops=True)
    pieces: list[tuple[int, ...]] = []
    cuts: list[tuple[int, int]] = []
    deco: list[list[int]] = []
    cur_cut: tuple[int, int] = (x1, y1)
    cur_deco: list[int] = []
    for i, (kind, unit) in enumerate(zip(cp.kinds, cp.units)):
        if kind == "P":
            cur_deco.extend(unit)
        else:
            cuts.append(cur_cut)
            deco.append(cur_deco)
            pieces.append(unit)
            cur_deco = []
        if i < len(cp.adhesions):
            cur_cut = cp.adhesions[i]
    if not pieces:
        raise ValueError("cut-open graph has no cylinder piece")
    # the closing cut {x2, y2} is the opening cut {x1, y1}
    deco[0] = sorted(deco[0] + cur_deco)
    cuts = [(ident.get(a, a), ident.get(b, b)) for a, b in cuts]
    l = len(pieces)

    def cut_code(i: int) -> bytes:
        a, b = cuts[i]
        return _piece_code(base, deco[i], (a, b), (a, b))

    ccodes = [cut_code(i) for i in range(l)]
    fwd = [_piece_code(base, pieces[i], cuts[i], cuts[(i + 1) % l]) for i in range(l)]
    rev = [_piece_code(base, pieces[i], cuts[(i + 1) % l], cuts[i]) for i in range(l)]
    best = None
    for r in range(l):
        seq_f = tuple(x for j in range(l) for x in (ccodes[(r + j) % l], fwd[(r + j) % l]))
        order_f = [(r + j) % l for j in range(l)]
        # backwards: piece p is entered through cut p + 1
        order_b = [(r - j) % l for j in range(l)]
        seq_b = tuple(x for p in order_b for x in (ccodes[(p + 1) % l], rev[p]))
        for seq, order, d in ((seq_f, order_f, 0), (seq_b, order_b, 1)):
            if best is None or seq < best[0]:
                best = (seq, order, d)
    seq, order, d = best
    out_cuts = [cuts[p] if d == 0 else cuts[(p + 1) % l] for p in order]
    out_deco = [deco[p] if d == 0 else deco[(p + 1) % l] for p in order]

    def verts(edges: Sequence[int], extra: Sequence[int]) -> tuple[int, ...]:
        return tuple(sorted({x for e in edges for x in base.edges[e]} | set(extra)))

    return ChainDecomposition(
        pieces=tuple(verts(pieces[p], cuts[p] + cuts[(p + 1) % l]) for p in order),
        pieceEdges=tuple(tuple(sorted(pieces[p])) for p in order),
        cuts=tuple(tuple(sorted(c)) for c in out_cuts),
        cutEdges=tuple(tuple(sorted(x)) for x in out_deco),
        circular=True,
        codes=seq,
    )
