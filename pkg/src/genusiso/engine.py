"""Isomorphism of graphs of bounded Euler genus.

The engine computes a canonical code and a matching vertex order for
each input; two graphs are isomorphic exactly when their codes agree,
and the witness pairs the two orders. Block and triconnected trees do
the reduction to 3-connected pieces. Planar pieces are canonized via
their unique embedding. A non-planar 3-connected piece is handled on
its minimum Euler genus:

* if some minimum-genus embedding has face-width at least 3, the code
  is the least labeled map code among those (polyhedral case);
* otherwise let l be the largest face-width reached (2 or 1). Every
  non-contractible noose of length l in every such embedding gives a
  cut graph whose split copies are marked; the least canonical code of
  these cut graphs, computed recursively on a smaller genus, is the code.

Both candidate sets are closed under relabeling, so the minimum is an
invariant, and the marks let the original piece be rebuilt from the
cut graph, so equal codes imply isomorphism.
"""

from __future__ import annotations

import hashlib
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from .codec import pack
from .decomposition import (
    ChainDecomposition,
    canonical_graph_form,
    circular_chain,
    planar_rcanon,
    spqr_path_cylinders,
)
from .embedding import (
    EmbeddingQuery,
    embeddings_of_genus,
    enumerate_embeddings,
    extend_embedding,
    genus_critical_subgraph,
    min_euler_genus,
    planar_embed,
)
from .errors import GenusBoundExceeded
from .facewidth import capped_face_width, enumerate_nooses, face_width_capped
from .graph import Graph, LabeledGraph, Skeleton, connectivity, is_labeled_isomorphism
from .mapcanon import FREE, canonical_form
from .surface import (
    CombinatorialMap,
    Noose,
    add_vertices,
    cut_along,
    insert_edge,
    is_orientation_preserving,
)

POLYHEDRAL = "polyhedral"
FACEWIDTH2 = "facewidth2"
FACEWIDTH2_DEGENERATE = "facewidth2-degenerate"
FACEWIDTH1 = "facewidth1"


@dataclass
class IsoVerdict:
    isomorphic: bool
    witness: dict[int, int] | None
    trace: list[str] = field(default_factory=list)


def wl_invariant(lg: LabeledGraph, rounds: int = 3) -> bytes:
    """Colour-refinement fingerprint; equal for isomorphic labeled graphs."""
    nbr: list[list[tuple[int, bytes, bytes]]] = [[] for _ in range(lg.n)]
    for i, (u, v) in enumerate(lg.edges):
        a, b = lg.dart_label(i, 0), lg.dart_label(i, 1)
        nbr[u].append((v, a, b))
        nbr[v].append((u, b, a))
    col = [hashlib.blake2b(x, digest_size=12).digest() for x in lg.vlab]
    for _ in range(rounds):
        new = []
        for v in range(lg.n):
            h = hashlib.blake2b(col[v], digest_size=12)
            for part in sorted(pack(a, b, col[w]) for w, a, b in nbr[v]):
                h.update(part)
            new.append(h.digest())
        col = new
    return pack(lg.n, len(lg.edges), sorted(col))


class Canonizer:
    """Canonical forms for graphs of Euler genus at most ``gmax``."""

    def __init__(self, gmax: int, budget: int | None = None):
        self.gmax = gmax
        self.budget = budget
        self.trace: list[str] = []
        self._cache: dict[tuple, tuple[bytes, list[int]]] = {}
        self._depth = 0

    # -- public ------------------------------------------------------

    def form(self, lg: LabeledGraph) -> tuple[bytes, list[int]]:
        return canonical_graph_form(lg, self.rcanon)

    def graph_form(self, g: Graph) -> tuple[bytes, list[int]]:
        return self.form(LabeledGraph.from_graph(g))

    # -- 3-connected pieces --------------------------------------------

    def rcanon(self, lg: LabeledGraph) -> tuple[bytes, list[int]]:
        key = lg.key()
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        g = lg.graph()
        if planar_embed(g) is not None:
            res = planar_rcanon(lg)
        else:
            res = self._surface(lg, g)
        self._cache[key] = res
        return res

    def _surface(self, lg: LabeledGraph, g: Graph) -> tuple[bytes, list[int]]:
        found = min_euler_genus(g, self.gmax, self.budget)
        if found is None:
            raise GenusBoundExceeded(f"a 3-connected piece needs Euler genus above {self.gmax}")
        genus = found[0]
        dl = None if lg.dlab is None else list(lg.dlab)
        vl = list(lg.vlab)
        scored = [(face_width_capped(m, 3), m) for m in embeddings_of_genus(g, genus, self.budget)]
        top = max(s[0] for s in scored)
        pool = [m for fw, m in scored if fw == top]
        # cheap invariant first, full map codes only for the least class
        inv = [_map_invariant(m, vl) for m in pool]
        low = min(inv)
        best = None
        for key, m in zip(inv, pool):
            if key != low:
                continue
            f = canonical_form(m, FREE, vl, dl)
            if best is None or f.code < best[0].code:
                best = (f, m)
        f, m = best
        pad = "  " * self._depth
        if top >= 3:
            self.trace.append(f"{pad}piece n={lg.n} genus={genus}: {POLYHEDRAL} ({len(scored)} embeddings)")
            return pack("poly", genus, f.code), list(f.vertex_order)
        # the least map is canonical up to automorphism, so its nooses
        # form a relabeling-invariant candidate set
        tag = FACEWIDTH2 if top == 2 else FACEWIDTH1
        _, nooses = capped_face_width(m, 3)
        cands: list[tuple[bytes, LabeledGraph, Noose]] = []
        for c in nooses:
            cut = cut_along(m, c)
            if cut.genusDelta >= 0:  # pragma: no cover - guarded by non-contractibility
                raise AssertionError("cut along a non-contractible noose kept the genus")
            if tag == FACEWIDTH2 and genus == 2 and cut.genusDelta == -2:
                tag = FACEWIDTH2_DEGENERATE
            for lab in _cut_labelings(lg, c):
                h = LabeledGraph(cut.map.n, cut.map.graph.edges, lab, lg.dlab)
                cands.append((wl_invariant(h), h, c))
        self.trace.append(f"{pad}piece n={lg.n} genus={genus}: {tag} ({len(scored)} embeddings, {len(cands)} cuts)")
        low = min(k for k, _, _ in cands)
        best = None
        self._depth += 1
        try:
            for k, h, c in cands:
                if k != low:
                    continue
                code, order = self.form(h)
                if best is None or code < best[0]:
                    best = (code, order, c)
        finally:
            self._depth -= 1
        code, horder, c = best
        n = lg.n
        back = [v if v < n else c.verts[v - n] for v in horder]
        order, seen = [], set()
        for v in back:
            if v not in seen:
                seen.add(v)
                order.append(v)
        return pack("cut", genus, top, code), order


def _map_invariant(m: CombinatorialMap, vlab: list[bytes]) -> bytes:
    """Per vertex: its label and the lengths of its incident faces."""
    nf = m.num_faces
    size = [len(m.face_vertices(f)) for f in range(nf)]
    rows = sorted(
        pack(vlab[v], sorted(size[m.corner_face(v, k)] for k in m.corners(v)))
        for v in range(m.n)
    )
    return pack(sorted(size), rows)


def _cut_labelings(lg: LabeledGraph, c: Noose) -> list[tuple[bytes, ...]]:
    """Labels for the cut graph: both copies of a hit vertex get the same
    tag, one tag per hit vertex, each assignment of tags to hit
    vertices tried once."""
    n = lg.n
    k = len(c.verts)
    base = list(lg.vlab) + [b""] * k
    tag_sets = [("X",)] if k == 1 else [("X", "Y"), ("Y", "X")]
    out = []
    for tags in tag_sets:
        lab = list(base)
        for i, v in enumerate(c.verts):
            lab[v] = lab[n + i] = pack(tags[i], lg.vlab[v])
        out.append(tuple(lab))
    return out


# ---------------------------------------------------------------------
# top level


def _quick_reject(g1: Graph, g2: Graph) -> str | None:
    if (g1.n, g1.m) != (g2.n, g2.m):
        return "size"
    if sorted(g1.mark(v) for v in range(g1.n)) != sorted(g2.mark(v) for v in range(g2.n)):
        return "marks"
    d1 = sorted((g1.degree(v), g1.mark(v)) for v in range(g1.n))
    d2 = sorted((g2.degree(v), g2.mark(v)) for v in range(g2.n))
    if d1 != d2:
        return "degrees"
    if wl_invariant(LabeledGraph.from_graph(g1)) != wl_invariant(LabeledGraph.from_graph(g2)):
        return "refinement"
    return None


def verify_witness(g1: Graph, g2: Graph, phi: dict[int, int]) -> bool:
    perm = [phi.get(v, -1) for v in range(g1.n)]
    return is_labeled_isomorphism(LabeledGraph.from_graph(g1), LabeledGraph.from_graph(g2), perm)


def isomorphic(g1: Graph, g2: Graph, gmax: int, budget: int | None = None,
               canonizer: Canonizer | None = None) -> IsoVerdict:
    """Decide isomorphism (marks respected) of two graphs of Euler genus
    at most ``gmax``; positive answers carry a verified witness."""
    for g in (g1, g2):
        if not g.is_simple():
            raise ValueError("inputs must be simple graphs")
    reason = _quick_reject(g1, g2)
    if reason is not None:
        return IsoVerdict(False, None, [f"rejected: {reason}"])
    cz = canonizer or Canonizer(gmax, budget)
    start = len(cz.trace)
    f1 = cz.graph_form(g1)
    f2 = cz.graph_form(g2)
    verdict = finish_step6([f1], [f2])
    verdict.trace = cz.trace[start:] + verdict.trace
    if verdict.isomorphic:
        if not verify_witness(g1, g2, verdict.witness):  # pragma: no cover - would be a bug
            raise AssertionError("canonical orders produced an invalid witness")
        verdict.trace.append("witness verified")
    return verdict


def finish_step6(pieces1: Sequence[tuple[bytes, list[int]]], pieces2: Sequence[tuple[bytes, list[int]]]) -> IsoVerdict:
    """Match leaf forms by code; orders of matched leaves are zipped into
    a single correspondence, which must be consistent."""
    a = sorted(pieces1, key=lambda f: f[0])
    b = sorted(pieces2, key=lambda f: f[0])
    if [f[0] for f in a] != [f[0] for f in b]:
        return IsoVerdict(False, None, ["leaf codes differ"])
    phi: dict[int, int] = {}
    for (_, o1), (_, o2) in zip(a, b):
        if len(o1) != len(o2):
            return IsoVerdict(False, None, ["leaf sizes differ"])
        for x, y in zip(o1, o2):
            if phi.setdefault(x, y) != y:
                return IsoVerdict(False, None, ["inconsistent leaf correspondence"])
    if len(set(phi.values())) != len(phi):
        return IsoVerdict(False, None, ["inconsistent leaf correspondence"])
    return IsoVerdict(True, phi, [f"{len(a)} leaves matched"])


# ---------------------------------------------------------------------
# case analysis of a single 3-connected non-planar graph


@dataclass
class CasePlan:
    caseTag: str
    genus: int
    skeletons: list[tuple[Skeleton, CombinatorialMap]]
    artifacts: dict = field(default_factory=dict)


def _top_maps(g: Graph, genus: int, budget: int | None) -> tuple[int, list[CombinatorialMap], list[CombinatorialMap]]:
    """Largest capped face-width among minimum-genus embeddings, the
    labeled embeddings reaching it, and one map per isomorphism class."""
    scored = [(face_width_capped(m, 3), m) for m in embeddings_of_genus(g, genus, budget)]
    top = max(fw for fw, _ in scored)
    maps = [m for fw, m in scored if fw == top]
    vl = [pack("v", g.mark(v)) for v in range(g.n)]
    classes: dict[bytes, CombinatorialMap] = {}
    for m in maps:
        classes.setdefault(canonical_form(m, FREE, vl).code, m)
    return top, maps, [classes[c] for c in sorted(classes)]


def plan_case(g: Graph, gmax: int, budget: int | None = None) -> CasePlan:
    """Minimum genus and face-width case of a 3-connected non-planar graph."""
    if not connectivity(g, 3) or not g.is_simple():
        raise ValueError("plan_case needs a simple 3-connected graph")
    if planar_embed(g) is not None:
        raise ValueError("plan_case needs a non-planar graph")
    found = min_euler_genus(g, gmax, budget)
    if found is None:
        raise GenusBoundExceeded(f"Euler genus above {gmax}")
    genus = found[0]
    top, maps, classes = _top_maps(g, genus, budget)
    whole = Skeleton.from_edges(g.n, g.edges)
    if top >= 3:
        return CasePlan(POLYHEDRAL, genus, [(whole, m) for m in classes], {"maps": len(classes)})
    if top == 2:
        tag = FACEWIDTH2
        if genus == 2:
            for m in classes:
                if any(cut_along(m, c).genusDelta == -2 for c in capped_face_width(m, 3)[1]):
                    tag = FACEWIDTH2_DEGENERATE
                    break
        return CasePlan(tag, genus, [(whole, m) for m in classes], {"maps": len(classes), "embeddings": maps})
    f = genus_critical_subgraph(g, genus, budget)
    return CasePlan(FACEWIDTH1, genus, [(f, m) for m in classes], {"maps": len(classes), "embeddings": maps})


def case_polyhedral(g: Graph, plan: CasePlan, budget: int | None = None) -> list[CombinatorialMap]:
    """All polyhedral minimum-genus embeddings, one per map class."""
    if plan.caseTag != POLYHEDRAL:
        raise ValueError("case_polyhedral needs a polyhedral plan")
    return enumerate_embeddings(EmbeddingQuery(g, plan.genus, minFaceWidth=3, budget=budget))


@dataclass(frozen=True)
class SplitPair:
    """G = G' + L' with edge-disjoint parts meeting in ``boundary``.

    ``lEdges`` / ``gEdges`` are edge ids of the input graph; L' is the
    cylinder (or Mobius band) around a family of homotopic 2-nooses.
    """

    lEdges: tuple[int, ...]
    gEdges: tuple[int, ...]
    lVerts: tuple[int, ...]
    gVerts: tuple[int, ...]
    boundary: tuple[int, ...]

    def _part(self, g: Graph, verts: Sequence[int], edges: Sequence[int]) -> tuple[Graph, list[int]]:
        idx = {v: i for i, v in enumerate(verts)}
        marks = {idx[v]: 1 for v in self.boundary}
        return Graph(len(verts), [(idx[g.edges[e][0]], idx[g.edges[e][1]]) for e in edges], marks), list(verts)

    def lprime(self, g: Graph) -> tuple[Graph, list[int]]:
        """L' with the boundary marked 1, and its vertex ids in ``g``."""
        return self._part(g, self.lVerts, self.lEdges)

    def gprime(self, g: Graph) -> tuple[Graph, list[int]]:
        return self._part(g, self.gVerts, self.gEdges)


class DegenerateCase(ValueError):
    """The cylinder around a 2-noose is the whole graph."""


def _gcut(m: CombinatorialMap, c: Noose, swap: bool = False) -> tuple[Graph, tuple[int, int, int, int], int]:
    """Cut graph plus the two boundary edges x1y1 and x2y2 (last two edges).

    ``swap`` pairs x with the other copy of y, which only makes sense for
    a one-sided noose where both copies of y border x's copies.
    """
    cut = cut_along(m, c)
    n = m.n
    x, y = c.verts
    h = cut.map.graph
    ends = (x, n + 1, n, y) if swap else (x, y, n, n + 1)
    gc = Graph(h.n, list(h.edges) + [ends[:2], ends[2:]], h.marks)
    return gc, ends, cut.genusDelta


def _split_for(g: Graph, m: CombinatorialMap, c: Noose) -> list[SplitPair]:
    """Splits for one noose; a one-sided noose gets one per pairing of
    the copies, since which copy keeps the old id depends on labels."""
    out = []
    one_sided = not is_orientation_preserving(m, c)
    back = {m.n + i: v for i, v in enumerate(c.verts)}
    for swap in ((False, True) if one_sided else (False,)):
        gc, (x1, y1, x2, y2), delta = _gcut(m, c, swap)
        if not connectivity(gc, 2):
            continue
        cp = spqr_path_cylinders(gc, x1, y1, x2, y2)
        if cp.degenerate:
            if delta == -2:
                raise DegenerateCase("the cylinder around the noose covers the whole graph")
            # one-sided noose whose Mobius band is everything: L' is the whole
            # graph and G' is empty; no boundary is kept since it would depend
            # on which noose of the family was met first
            out.append(SplitPair(tuple(range(g.m)), (), tuple(range(g.n)), (), ()))
            continue
        l_edges = tuple(sorted(set(cp.t1_edges()) | set(cp.t2_edges())))
        lset = set(l_edges)
        g_edges = tuple(e for e in range(g.m) if e not in lset)
        inner = {back.get(v, v) for v in (cp.inner1 or ()) + (cp.inner2 or ())}
        l_verts = {v for e in l_edges for v in g.edges[e]} | set(c.verts)
        g_verts = {v for e in g_edges for v in g.edges[e]} | inner
        out.append(SplitPair(l_edges, g_edges, tuple(sorted(l_verts)), tuple(sorted(g_verts)),
                             tuple(sorted(l_verts & g_verts))))
    return out


def case_facewidth2(g: Graph, plan: CasePlan) -> list[SplitPair]:
    """The (G', L') pairs: one per distinct cylinder around the
    non-contractible 2-nooses of the face-width-2 embeddings.

    Every labeled minimum-genus embedding of face-width 2 and every
    non-contractible 2-noose in it is processed; homotopic nooses give
    the same cylinder, so duplicates collapse.
    """
    if plan.caseTag not in (FACEWIDTH2, FACEWIDTH2_DEGENERATE):
        raise ValueError("case_facewidth2 needs a face-width 2 plan")
    if plan.caseTag == FACEWIDTH2_DEGENERATE:
        raise DegenerateCase("torus or Klein bottle chain; use case_facewidth2_degenerate")
    out: dict[tuple, SplitPair] = {}
    for m in plan.artifacts["embeddings"]:
        for c in capped_face_width(m, 3)[1]:
            for sp in _split_for(g, m, c):
                out.setdefault((sp.lEdges, sp.gEdges), sp)
    return [out[k] for k in sorted(out)]


def case_facewidth2_degenerate(g: Graph, plan: CasePlan) -> ChainDecomposition:
    """Circular chain of a torus or Klein bottle graph of face-width 2,
    read off the least embedding class and its first genus-2 cut."""
    if plan.caseTag != FACEWIDTH2_DEGENERATE:
        raise ValueError("case_facewidth2_degenerate needs a degenerate plan")
    for _, m in plan.skeletons:
        for c in capped_face_width(m, 3)[1]:
            gc, (x1, y1, x2, y2), delta = _gcut(m, c)
            if delta == -2:
                return circular_chain(gc, x1, y1, x2, y2)
    raise ValueError("no noose reduces the genus by two")  # pragma: no cover


def _loop_gadget(mf: CombinatorialMap, g: Graph, c: Noose, gen: int) -> tuple[Graph, CombinatorialMap] | None:
    """Skeleton map plus a path u-w1-w2-u drawn along the 1-noose ``c``."""
    (u,) = c.verts
    cin, cout = c.corners[0]
    ru = mf.rotation[u]
    w1, w2 = g.n, g.n + 1
    base = add_vertices(mf, g.n + 2 - mf.n)
    m1 = insert_edge(base, u, ru[cout], w1, None)
    fm = None
    m2 = insert_edge(m1, w1, m1.rotation[w1][0], w2, None)
    for s in (1, -1):
        m3 = insert_edge(m2, w2, m2.rotation[w2][0], u, ru[cin], s)
        used = [v for v in range(m3.n) if m3.rotation[v]]
        if 2 - (len(used) - m3.m + m3.num_faces) == gen:
            fm = m3
            break
    if fm is None:
        return None
    return Graph(g.n + 2, list(g.edges) + [(u, w1), (w1, w2), (w2, u)], g.marks), fm


def case_facewidth1(g: Graph, plan: CasePlan, budget: int | None = None) -> tuple[frozenset[int], list[Graph]]:
    """Vertices hit by a non-contractible one-vertex noose in some
    minimum-genus embedding, and the split graph of each.

    Every embedding of the genus-critical skeleton F is tried with a loop
    gadget along each of its non-contractible 1-nooses; the vertex
    counts when the rest of the graph extends without raising the genus.
    """
    if plan.caseTag != FACEWIDTH1:
        raise ValueError("case_facewidth1 needs a face-width 1 plan")
    f = plan.skeletons[0][0]
    old = sorted(f.vertices)
    idx = {v: i for i, v in enumerate(old)}
    fg = Graph(len(old), [(idx[u], idx[v]) for u, v in f.subgraph.edges])
    v1: set[int] = set()
    splits: dict[int, Graph] = {}
    for mf_local in embeddings_of_genus(fg, plan.genus, budget):
        mf = _lift(mf_local, old, g.n)
        for c in enumerate_nooses(mf, 1):
            (u,) = c.verts
            if u in v1:
                continue
            if not is_orientation_preserving(mf, c):  # pragma: no cover - minimal genus forbids it
                raise AssertionError("one-sided 1-noose at minimum genus")
            gadget = _loop_gadget(mf, g, c, plan.genus)
            if gadget is None:
                continue
            gg, fm = gadget
            full = extend_embedding(EmbeddingQuery(gg, plan.genus, fixedSubMap=fm, budget=budget))
            if full is None:
                continue
            v1.add(u)
            splits[u] = _split_at(full, g, u)
    return frozenset(v1), [splits[u] for u in sorted(splits)]


def _lift(m: CombinatorialMap, old: list[int], n: int) -> CombinatorialMap:
    """Map on vertex ids ``old`` inside a host with ``n`` vertices."""
    rot: list[tuple[int, ...]] = [()] * n
    for i, r in enumerate(m.rotation):
        rot[old[i]] = tuple(r)
    g = Graph(n, [(old[u], old[v]) for u, v in m.graph.edges], {old[v]: c for v, c in m.graph.marks.items()},
              allow_loops=True)
    return CombinatorialMap(g, rot, m.signature)


def _split_at(full: CombinatorialMap, g: Graph, u: int) -> Graph:
    """Split ``u`` along the gadget loop of an extended map: the darts on
    either side of the loop go to the two copies (marked 1)."""
    w_edges = [i for i, (a, b) in enumerate(full.graph.edges) if i >= g.m and u in (a, b)]
    darts = [2 * i if full.graph.edges[i][0] == u else 2 * i + 1 for i in w_edges]
    r = list(full.rotation[u])
    i, j = sorted(r.index(d) for d in darts)
    side = {d >> 1 for d in r[i + 1: j]}
    edges = []
    for e, (a, b) in enumerate(g.edges):
        if e in side:
            a, b = (g.n if a == u else a), (g.n if b == u else b)
        edges.append((a, b))
    marks = dict(g.marks)
    marks[u] = marks[g.n] = 1
    return Graph(g.n + 1, edges, marks)


# ---------------------------------------------------------------------
# step 1 reduction


@dataclass
class StepOne:
    pieces: list[LabeledGraph]
    code: bytes
    order: list[int]


def reduce_step1(g1: Graph, g2: Graph, gmax: int, budget: int | None = None) -> tuple[StepOne, StepOne]:
    """Block and triconnected reduction of both graphs.

    Returns, per graph, the non-planar 3-connected torsos met while
    canonizing (adhesion marks in their labels) together with the
    graph's canonical code; equal codes are necessary and sufficient
    for isomorphism. Planar graphs never reach the surface canonizer.
    """
    out = []
    for g in (g1, g2):
        cz = Canonizer(gmax, budget)
        seen: list[LabeledGraph] = []
        inner = cz.rcanon

        def rec(lg: LabeledGraph, inner=inner, seen=seen) -> tuple[bytes, list[int]]:
            if cz._depth == 0 and planar_embed(lg.graph()) is None:
                seen.append(lg)
            return inner(lg)

        cz.rcanon = rec  # type: ignore[method-assign]
        code, order = cz.graph_form(g)
        out.append(StepOne(seen, code, order))
    return out[0], out[1]
