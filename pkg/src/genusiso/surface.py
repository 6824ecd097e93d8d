"""Combinatorial maps: rotation systems with edge signatures.

Darts of edge ``e`` are ``2e`` and ``2e + 1``; dart ``2e`` starts at
the first endpoint listed for the edge. A flag is a dart together with
a side bit and is encoded as ``2 * dart + side``. Flag ``(d, 0)`` sits
in the corner between ``pred(d)`` and ``d``; flag ``(d, 1)`` sits in
the corner between ``d`` and ``succ(d)``. Corner ``k`` of vertex ``v``
is the angle between ``rot[v][k]`` and ``rot[v][k + 1]``.

Face tracing: from flag ``(d, s)`` go to the twin ``d ^ 1``, flip the
side when the edge signature is -1, then step to the rotation successor
(side 0) or predecessor (side 1). Every face is traced twice, once per
direction; the canonical walk of a face is the orbit holding its
smallest flag id and faces are numbered by that id.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import ParseError
from .graph import Graph


class CombinatorialMap:
    __slots__ = ("graph", "rotation", "signature", "__dict__")

    def __init__(
        self,
        graph: Graph,
        rotation: Sequence[Sequence[int]],
        signature: Sequence[int] | None = None,
    ):
        m = graph.m
        if len(rotation) != graph.n:
            raise ValueError("need one rotation per vertex")
        sig = tuple(int(s) for s in signature) if signature is not None else (1,) * m
        if len(sig) != m or any(s not in (1, -1) for s in sig):
            raise ValueError("signature must give +1 or -1 per edge")
        seen = [False] * (2 * m)
        for v, rot in enumerate(rotation):
            for d in rot:
                if not 0 <= d < 2 * m:
                    raise ValueError(f"dart {d} out of range")
                if seen[d]:
                    raise ValueError(f"dart {d} appears twice in the rotation")
                seen[d] = True
                if graph.edges[d >> 1][d & 1] != v:
                    raise ValueError(f"dart {d} listed at {v}, not at its origin")
        if not all(seen):
            raise ValueError(f"dart {seen.index(False)} missing from the rotation")
        self.graph = graph
        self.rotation: tuple[tuple[int, ...], ...] = tuple(tuple(r) for r in rotation)
        self.signature: tuple[int, ...] = sig

    # -- basic structure -----------------------------------------------

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def m(self) -> int:
        return self.graph.m

    def origin(self, d: int) -> int:
        return self.graph.edges[d >> 1][d & 1]

    @cached_property
    def _pos(self) -> list[int]:
        pos = [0] * (2 * self.m)
        for rot in self.rotation:
            for i, d in enumerate(rot):
                pos[d] = i
        return pos

    @cached_property
    def succ(self) -> list[int]:
        out = [0] * (2 * self.m)
        for rot in self.rotation:
            k = len(rot)
            for i, d in enumerate(rot):
                out[d] = rot[(i + 1) % k]
        return out

    @cached_property
    def pred(self) -> list[int]:
        out = [0] * (2 * self.m)
        for rot in self.rotation:
            k = len(rot)
            for i, d in enumerate(rot):
                out[d] = rot[i - 1]
        return out

    def face_step(self, x: int) -> int:
        t = (x >> 1) ^ 1
        s = (x & 1) ^ (self.signature[t >> 1] == -1)
        return 2 * (self.pred[t] if s else self.succ[t]) + s

    def flag_reverse(self, x: int) -> int:
        d = x >> 1
        s = (x & 1) ^ (self.signature[d >> 1] == -1)
        return 2 * (d ^ 1) + (1 - s)

    @cached_property
    def _faces(self) -> tuple[list[tuple[int, ...]], list[int]]:
        nf = 4 * self.m
        face_of = [-1] * nf
        walks: list[tuple[int, ...]] = []
        succ, pred, sig = self.succ, self.pred, self.signature
        for x0 in range(nf):
            if face_of[x0] >= 0:
                continue
            fid = len(walks)
            walk = []
            x = x0
            while True:
                walk.append(x)
                face_of[x] = fid
                t = (x >> 1) ^ 1
                s = (x & 1) ^ (sig[t >> 1] == -1)
                x = 2 * (pred[t] if s else succ[t]) + s
                if x == x0:
                    break
            for y in walk:
                face_of[self.flag_reverse(y)] = fid
            walks.append(tuple(walk))
        return walks, face_of

    def trace_faces(self) -> list[tuple[int, ...]]:
        """Canonical facial walks (tuples of flag ids), ordered by their
        smallest flag id."""
        return list(self._faces[0])

    def face_of_flag(self, x: int) -> int:
        return self._faces[1][x]

    @property
    def num_faces(self) -> int:
        if self.m == 0:
            return self.n  # each isolated vertex sits on a sphere
        return len(self._faces[0])

    def face_vertices(self, f: int) -> list[int]:
        return [self.origin(x >> 1) for x in self._faces[0][f]]

    def corner_flag(self, v: int, k: int) -> tuple[int, int]:
        """Flag of corner ``k`` at ``v`` on the face's canonical walk,
        returned with its side bit."""
        rot = self.rotation[v]
        a = 2 * rot[k] + 1
        b = 2 * rot[(k + 1) % len(rot)]
        walks, face_of = self._faces
        canon = self._canonical_flags
        return (a, 1) if a in canon else (b, 0)

    @cached_property
    def _canonical_flags(self) -> frozenset[int]:
        return frozenset(x for w in self._faces[0] for x in w)

    def corner_face(self, v: int, k: int) -> int:
        return self._faces[1][2 * self.rotation[v][k] + 1]

    def corners(self, v: int) -> range:
        return range(len(self.rotation[v]))

    # -- invariants ----------------------------------------------------

    def components(self) -> list[list[int]]:
        return self.graph.components()

    def euler_characteristic(self) -> int:
        return self.n - self.m + self.num_faces

    def is_orientable(self) -> bool:
        """True iff some vertex flipping makes every signature +1."""
        side = [-1] * self.n
        for s in range(self.n):
            if side[s] >= 0:
                continue
            side[s] = 0
            dq = deque([s])
            while dq:
                v = dq.popleft()
                for d in self.rotation[v]:
                    w = self.origin(d ^ 1)
                    want = side[v] ^ (self.signature[d >> 1] == -1)
                    if side[w] < 0:
                        side[w] = want
                        dq.append(w)
                    elif side[w] != want:
                        return False
        return True

    # -- transformations -----------------------------------------------

    def flip_vertex(self, v: int) -> "CombinatorialMap":
        rot = list(self.rotation)
        rot[v] = tuple(reversed(rot[v]))
        sig = list(self.signature)
        for i, (a, b) in enumerate(self.graph.edges):
            if (a == v) != (b == v):
                sig[i] = -sig[i]
        return CombinatorialMap(self.graph, rot, sig)

    def normalized(self) -> "CombinatorialMap":
        """Equivalent map whose BFS spanning-tree edges (from the lowest
        vertex of each component, darts in rotation order) are all +1."""
        flip = [0] * self.n
        seen = [False] * self.n
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            dq = deque([s])
            while dq:
                v = dq.popleft()
                for d in self.rotation[v]:
                    w = self.origin(d ^ 1)
                    if not seen[w]:
                        seen[w] = True
                        flip[w] = flip[v] ^ (self.signature[d >> 1] == -1)
                        dq.append(w)
        rot = [tuple(reversed(r)) if flip[v] else r for v, r in enumerate(self.rotation)]
        sig = [
            s * (-1 if flip[a] ^ flip[b] else 1)
            for s, (a, b) in zip(self.signature, self.graph.edges)
        ]
        return CombinatorialMap(self.graph, rot, sig)

    def mirror(self) -> "CombinatorialMap":
        return CombinatorialMap(self.graph, [tuple(reversed(r)) for r in self.rotation], self.signature)

    def relabel(self, perm: Sequence[int]) -> "CombinatorialMap":
        """Rename vertices by ``perm``; dart and edge ids are kept."""
        g = Graph(
            self.n,
            [(perm[u], perm[v]) for u, v in self.graph.edges],
            {perm[v]: c for v, c in self.graph.marks.items()},
            allow_loops=True,
        )
        rot = [()] * self.n
        for v, r in enumerate(self.rotation):
            rot[perm[v]] = r
        return CombinatorialMap(g, rot, self.signature)

    def with_marks(self, marks: Mapping[int, int]) -> "CombinatorialMap":
        return CombinatorialMap(self.graph.with_marks(marks), self.rotation, self.signature)

    def key(self) -> tuple:
        return (self.graph.key(), self.graph.edges, self.rotation, self.signature)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CombinatorialMap) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"CombinatorialMap(n={self.n}, m={self.m}, faces={self.num_faces})"

    # -- text format ---------------------------------------------------

    def to_text(self) -> str:
        lines = [f"map {self.n} {self.m}"]
        for v, r in enumerate(self.rotation):
            lines.append(f"rot {v}:" + "".join(f" {d}" for d in r))
        for e, s in enumerate(self.signature):
            lines.append(f"edge {e}: {2 * e} {2 * e + 1} {'+' if s > 0 else '-'}")
        lines += [f"mark {v} {c}" for v, c in sorted(self.graph.marks.items())]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "CombinatorialMap":
        return parse_map(text)


def parse_map(text: str) -> CombinatorialMap:
    rows = [(i + 1, ln.replace(":", " : ").split()) for i, ln in enumerate(text.split("\n"))]
    rows = [(i, t) for i, t in rows if t]
    if not rows:
        raise ParseError(1, "empty input")
    ln, head = rows[0]
    if len(head) != 3 or head[0] != "map":
        raise ParseError(ln, "expected header 'map <n> <m>'")
    n, m = _ints(ln, head[1:])
    rot: list[list[int] | None] = [None] * n
    sig: list[int | None] = [None] * m
    marks: dict[int, int] = {}
    for ln, tok in rows[1:]:
        kind = tok[0]
        if kind == "rot":
            if len(tok) < 3 or tok[2] != ":":
                raise ParseError(ln, "expected 'rot <v>: d1 d2 ...'")
            (v,) = _ints(ln, tok[1:2])
            if not 0 <= v < n:
                raise ParseError(ln, "vertex out of range")
            if rot[v] is not None:
                raise ParseError(ln, f"duplicate rotation for vertex {v}")
            ds = _ints(ln, tok[3:])
            if any(not 0 <= d < 2 * m for d in ds):
                raise ParseError(ln, "dart out of range")
            rot[v] = ds
        elif kind == "edge":
            if len(tok) != 6 or tok[2] != ":" or tok[5] not in "+-":
                raise ParseError(ln, "expected 'edge <e>: dA dB <+|->'")
            e, a, b = _ints(ln, [tok[1], tok[3], tok[4]])
            if not 0 <= e < m:
                raise ParseError(ln, "edge out of range")
            if {a, b} != {2 * e, 2 * e + 1}:
                raise ParseError(ln, f"edge {e} must own darts {2 * e} and {2 * e + 1}")
            if sig[e] is not None:
                raise ParseError(ln, f"duplicate edge line for {e}")
            sig[e] = 1 if tok[5] == "+" else -1
        elif kind == "mark":
            if len(tok) != 3:
                raise ParseError(ln, "expected 'mark <v> <color>'")
            v, c = _ints(ln, tok[1:])
            if not 0 <= v < n or c < 0:
                raise ParseError(ln, "bad mark")
            marks[v] = c
        else:
            raise ParseError(ln, f"unknown line kind {kind!r}")
    last = rows[-1][0]
    origin = [-1] * (2 * m)
    for v, ds in enumerate(rot):
        if ds is None:
            rot[v] = []
            continue
        for d in ds:
            if origin[d] >= 0:
                raise ParseError(last, f"dart {d} appears twice")
            origin[d] = v
    if -1 in origin:
        raise ParseError(last, f"dart {origin.index(-1)} is in no rotation")
    if None in sig:
        raise ParseError(last, f"missing edge line for edge {sig.index(None)}")
    g = Graph(n, [(origin[2 * e], origin[2 * e + 1]) for e in range(m)], marks, allow_loops=True)
    return CombinatorialMap(g, rot, sig)


def _ints(line: int, toks: Sequence[str]) -> list[int]:
    try:
        return [int(t) for t in toks]
    except ValueError:
        raise ParseError(line, f"expected integers, got {' '.join(toks)!r}") from None


# ---------------------------------------------------------------------
# construction helpers


def insert_edge(
    m: CombinatorialMap,
    u: int,
    after_u: int | None,
    v: int,
    after_v: int | None,
    sign: int = 1,
) -> CombinatorialMap:
    """Add an edge u-v whose new darts follow ``after_u`` / ``after_v``
    in the rotations (``None`` when the vertex has no darts yet)."""
    e = m.m
    g = Graph(m.n, m.graph.edges + ((u, v),), m.graph.marks, allow_loops=True)
    rot = [list(r) for r in m.rotation]
    for x, after, d in ((u, after_u, 2 * e), (v, after_v, 2 * e + 1)):
        if after is None:
            rot[x].append(d)
        else:
            rot[x].insert(rot[x].index(after) + 1, d)
    if u == v and after_u == after_v:
        # both darts went after the same dart; keep 2e before 2e+1
        r = rot[u]
        i = r.index(2 * e + 1)
        j = r.index(2 * e)
        if j > i:
            r[i], r[j] = r[j], r[i]
    return CombinatorialMap(g, rot, m.signature + (sign,))


def add_vertices(m: CombinatorialMap, count: int, marks: Mapping[int, int] | None = None) -> CombinatorialMap:
    mk = m.graph.marks
    mk.update(marks or {})
    g = Graph(m.n + count, m.graph.edges, mk, allow_loops=True)
    return CombinatorialMap(g, list(m.rotation) + [()] * count, m.signature)


def map_from_rotation(
    n: int,
    rotation: Sequence[Sequence[int]],
    signature: Mapping[tuple[int, int], int] | None = None,
    marks: Mapping[int, int] | None = None,
) -> CombinatorialMap:
    """Build a map of a simple graph from neighbor rotations.

    ``rotation[v]`` lists the neighbors of ``v`` in cyclic order. Edge
    ids follow sorted (u, v) pairs with u < v.
    """
    pairs = sorted({(min(u, w), max(u, w)) for u in range(n) for w in rotation[u]})
    eid = {p: i for i, p in enumerate(pairs)}
    rot = []
    for v in range(n):
        r = []
        for w in rotation[v]:
            e = eid[(min(v, w), max(v, w))]
            r.append(2 * e if v < w else 2 * e + 1)
        rot.append(r)
    sig = [1] * len(pairs)
    for (a, b), s in (signature or {}).items():
        sig[eid[(min(a, b), max(a, b))]] = s
    return CombinatorialMap(Graph(n, pairs, marks), rot, sig)


# ---------------------------------------------------------------------
# genus


def component_genera(m: CombinatorialMap) -> list[int]:
    """Euler genus of each connected component (vertex-sorted order)."""
    comps = m.components()
    comp_of = [0] * m.n
    for i, c in enumerate(comps):
        for v in c:
            comp_of[v] = i
    ne = [0] * len(comps)
    for u, _ in m.graph.edges:
        ne[comp_of[u]] += 1
    nf = [0] * len(comps)
    if m.m:
        for w in m.trace_faces():
            nf[comp_of[m.origin(w[0] >> 1)]] += 1
    out = []
    for i, c in enumerate(comps):
        f = nf[i] if ne[i] else 1
        out.append(2 - (len(c) - ne[i] + f))
    return out


def euler_genus(m: CombinatorialMap) -> int:
    if not m.graph.is_connected():
        raise ValueError("euler_genus needs a connected map")
    return 2 - m.euler_characteristic()


def total_genus(m: CombinatorialMap) -> int:
    return sum(component_genera(m))


def radial_graph(m: CombinatorialMap) -> tuple[Graph, list[tuple[int, int, int]]]:
    """Vertex-face incidence multigraph.

    Node ``v`` is vertex ``v``; node ``n + f`` is face ``f``. Each edge
    corresponds to one corner; the returned list gives, per radial edge,
    ``(vertex, corner index, face)``.
    """
    inc = []
    for v in range(m.n):
        for k in m.corners(v):
            inc.append((v, k, m.corner_face(v, k)))
    g = Graph(m.n + m.num_faces, [(v, m.n + f) for v, _, f in inc])
    return g, inc


# ---------------------------------------------------------------------
# nooses


@dataclass(frozen=True)
class Noose:
    """Closed curve meeting the map only at ``verts``.

    Between ``verts[i]`` and ``verts[i + 1]`` it runs through face
    ``faces[i]``; ``corners[i] = (c_in, c_out)`` are the corners by
    which it enters and leaves ``verts[i]``.
    """

    verts: tuple[int, ...]
    faces: tuple[int, ...]
    corners: tuple[tuple[int, int], ...]

    @property
    def length(self) -> int:
        return len(self.verts)

    @property
    def sequence(self) -> tuple[int, ...]:
        out: list[int] = []
        for v, f in zip(self.verts, self.faces):
            out += [v, f]
        return tuple(out)

    def to_text(self) -> str:
        return "noose " + " ".join(str(x) for x in self.sequence)

    def reversed(self) -> "Noose":
        k = len(self.verts)
        verts = tuple(self.verts[(-i) % k] for i in range(k))
        faces = tuple(self.faces[(-i - 1) % k] for i in range(k))
        corners = tuple((self.corners[(-i) % k][1], self.corners[(-i) % k][0]) for i in range(k))
        return Noose(verts, faces, corners)

    def rotated(self, r: int) -> "Noose":
        return Noose(
            self.verts[r:] + self.verts[:r],
            self.faces[r:] + self.faces[:r],
            self.corners[r:] + self.corners[:r],
        )

    def canonical(self) -> "Noose":
        """Representative up to cyclic rotation and reversal."""
        opts = []
        for base in (self, self.reversed()):
            for r in range(len(base.verts)):
                c = base.rotated(r)
                opts.append(((c.verts, c.corners, c.faces), c))
        return min(opts, key=lambda t: t[0])[1]


def validate_noose(m: CombinatorialMap, c: Noose) -> None:
    k = len(c.verts)
    if k < 1 or len(c.faces) != k or len(c.corners) != k:
        raise ValueError("noose needs equally many vertices, faces and corner pairs")
    if len(set(c.verts)) != k:
        raise ValueError("noose vertices must be distinct")
    for i, v in enumerate(c.verts):
        if not 0 <= v < m.n:
            raise ValueError(f"noose vertex {v} out of range")
        deg = len(m.rotation[v])
        cin, cout = c.corners[i]
        if not (0 <= cin < deg and 0 <= cout < deg):
            raise ValueError(f"corner index out of range at vertex {v}")
        if cin == cout:
            raise ValueError(f"noose enters and leaves {v} through the same corner")
        if m.corner_face(v, cout) != c.faces[i]:
            raise ValueError(f"corner {cout} of {v} is not on face {c.faces[i]}")
        if m.corner_face(v, cin) != c.faces[i - 1]:
            raise ValueError(f"corner {cin} of {v} is not on face {c.faces[i - 1]}")


def _transport(m: CombinatorialMap, c: Noose) -> tuple[list[int], int]:
    """Local frame orientation at each hit vertex, and the final twist."""
    eps = [0] * len(c.verts)
    e = 0
    k = len(c.verts)
    for i in range(k):
        eps[i] = e
        v = c.verts[i]
        s_out = m.corner_flag(v, c.corners[i][1])[1]
        w = c.verts[(i + 1) % k]
        s_in = m.corner_flag(w, c.corners[(i + 1) % k][0])[1]
        e ^= s_out ^ s_in
    return eps, e


def is_orientation_preserving(m: CombinatorialMap, c: Noose) -> bool:
    validate_noose(m, c)
    return _transport(m, c)[1] == 0


@dataclass(frozen=True)
class CutResult:
    map: CombinatorialMap
    splitPairs: tuple[tuple[int, int, int], ...]
    genusDelta: int


def cut_along(m: CombinatorialMap, c: Noose) -> CutResult:
    """Cut the surface along ``c`` and cap the new boundary with disks.

    Each hit vertex splits into two copies holding the two rotation arcs
    between the entry and exit corners. The copy on the left of the
    transported frame keeps the old id; the other gets a fresh id. For a
    one-sided curve the left/right naming is relative to the frame
    carried from ``verts[0]``.
    """
    validate_noose(m, c)
    eps, _ = _transport(m, c)
    rot = [list(r) for r in m.rotation]
    edges = [list(e) for e in m.graph.edges]
    marks = m.graph.marks
    n = m.n
    pairs = []
    for i, v in enumerate(c.verts):
        r = m.rotation[v]
        deg = len(r)
        cin, cout = c.corners[i]
        arc1 = [r[(cin + 1 + j) % deg] for j in range((cout - cin) % deg)]
        arc2 = [r[(cout + 1 + j) % deg] for j in range((cin - cout) % deg)]
        left, right = (arc1, arc2) if eps[i] == 0 else (arc2, arc1)
        new = n + i
        rot[v] = left
        rot.append(right)
        for d in right:
            edges[d >> 1][d & 1] = new
        if v in marks:
            marks[new] = marks[v]
        pairs.append((v, v, new))
    g = Graph(n + len(c.verts), [tuple(e) for e in edges], marks, allow_loops=True)
    out = CombinatorialMap(g, rot, m.signature)
    delta = total_genus(out) - total_genus(m)
    return CutResult(out, tuple(pairs), delta)


def is_contractible(m: CombinatorialMap, c: Noose) -> bool:
    """True iff ``c`` bounds a disk: the cut falls into two pieces and one
    of them, capped, is a sphere.

    Works on dart arrays directly instead of building the cut map.
    """
    validate_noose(m, c)
    n, k = m.n, len(c.verts)
    succ = list(m.succ)
    pred = list(m.pred)
    owner = [m.origin(d) for d in range(2 * m.m)]
    for i, v in enumerate(c.verts):
        r = m.rotation[v]
        deg = len(r)
        cin, cout = c.corners[i]
        arc1 = [r[(cin + 1 + j) % deg] for j in range((cout - cin) % deg)]
        arc2 = [r[(cout + 1 + j) % deg] for j in range((cin - cout) % deg)]
        for arc in (arc1, arc2):
            for j, d in enumerate(arc):
                succ[d] = arc[(j + 1) % len(arc)]
                pred[d] = arc[j - 1]
        for d in arc2:
            owner[d] = n + i
    # components of the cut graph
    parent = list(range(n + k))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in range(m.m):
        a, b = find(owner[2 * e]), find(owner[2 * e + 1])
        if a != b:
            parent[a] = b
    roots_before = len(m.components())
    touched = {find(v) for v in c.verts} | {find(n + i) for i in range(k)}
    roots_after = len({find(x) for x in range(n + k)})
    if roots_after != roots_before + 1:
        return False
    nv: dict[int, int] = {}
    for x in range(n + k):
        r = find(x)
        if r in touched:
            nv[r] = nv.get(r, 0) + 1
    ne: dict[int, int] = {}
    for e in range(m.m):
        r = find(owner[2 * e])
        if r in touched:
            ne[r] = ne.get(r, 0) + 1
    nf: dict[int, int] = {}
    sig = m.signature
    seen = [False] * (4 * m.m)
    for x0 in range(4 * m.m):
        if seen[x0]:
            continue
        r = find(owner[x0 >> 1])
        x = x0
        while True:
            seen[x] = True
            d = x >> 1
            rs = (x & 1) ^ (sig[d >> 1] == -1)
            seen[2 * (d ^ 1) + (1 - rs)] = True
            t = d ^ 1
            s_ = (x & 1) ^ (sig[t >> 1] == -1)
            x = 2 * (pred[t] if s_ else succ[t]) + s_
            if x == x0:
                break
        if r in touched:
            nf[r] = nf.get(r, 0) + 1
    for r in touched:
        f = nf.get(r, 0) if ne.get(r, 0) else 1
        if 2 - (nv[r] - ne.get(r, 0) + f) == 0:
            return True
    return False
