"""Face-width, short nooses and bridge placement around them.

Nooses are enumerated on the radial graph: a noose of length l visits
l distinct vertices and l distinct faces, entering and leaving each
vertex through two different corners. Face-width is found by iterative
deepening on l with a contractibility test on each candidate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product

from .embedding import EmbeddingQuery, extend_embedding
from .graph import Graph, Skeleton, bridges_of
from .surface import (
    CombinatorialMap,
    Noose,
    add_vertices,
    cut_along,
    euler_genus,
    insert_edge,
    is_contractible,
    is_orientation_preserving,
)

UNBOUNDED = math.inf


@dataclass(frozen=True)
class NooseClass:
    representative: Noose
    branchVertexSignature: tuple[int, ...]
    orientationPreserving: bool
    members: tuple[Noose, ...] = ()


@dataclass(frozen=True)
class SideAssignment:
    leftBridges: frozenset[int]
    rightBridges: frozenset[int]
    splitArcs: dict = field(default_factory=dict)
    undetermined: frozenset[int] = frozenset()


def _face_corners(m: CombinatorialMap) -> list[list[tuple[int, int]]]:
    out: list[list[tuple[int, int]]] = [[] for _ in range(m.num_faces)]
    for v in range(m.n):
        for k in m.corners(v):
            out[m.corner_face(v, k)].append((v, k))
    return out


def _sort_key(c: Noose):
    return (c.verts, c.corners, c.faces)


def _iter_nooses(m: CombinatorialMap, l: int):
    """Nooses of length ``l`` starting at their least vertex; a class
    may appear more than once (rotation of direction)."""
    fc = _face_corners(m)
    verts: list[int] = []
    faces: list[int] = []
    corners: list[tuple[int, int]] = []

    def grow():
        if len(verts) == l:
            v0 = verts[0]
            f = faces[-1]
            if l > 1 and f == faces[0]:
                return
            for w, k in fc[f]:
                if w == v0 and k != corners[0][1]:
                    yield Noose(tuple(verts), tuple(faces), ((k, corners[0][1]),) + tuple(corners[1:]))
            return
        f = faces[-1]
        for w, kin in fc[f]:
            if w <= verts[0] or w in verts:
                continue
            for kout in m.corners(w):
                if kout == kin:
                    continue
                f2 = m.corner_face(w, kout)
                if f2 in faces:
                    continue
                verts.append(w)
                faces.append(f2)
                corners.append((kin, kout))
                yield from grow()
                verts.pop()
                faces.pop()
                corners.pop()

    for v0 in range(m.n):
        for kout in m.corners(v0):
            verts[:] = [v0]
            faces[:] = [m.corner_face(v0, kout)]
            corners[:] = [(-1, kout)]
            yield from grow()


def all_nooses(m: CombinatorialMap, l: int) -> list[Noose]:
    """Every noose of length exactly ``l`` (contractible or not), one per
    rotation/reversal class, sorted."""
    if l < 1:
        raise ValueError("noose length must be positive")
    if m.m == 0:
        return []
    return sorted({c.canonical() for c in _iter_nooses(m, l)}, key=_sort_key)


def _has_essential(m: CombinatorialMap, l: int) -> bool:
    return m.m > 0 and any(not is_contractible(m, c) for c in _iter_nooses(m, l))


def enumerate_nooses(m: CombinatorialMap, l: int) -> list[Noose]:
    """Non-contractible nooses of length exactly ``l`` (1 or 2)."""
    if l not in (1, 2):
        raise ValueError("enumerate_nooses supports l in {1, 2}")
    return [c for c in all_nooses(m, l) if not is_contractible(m, c)]


def face_width(m: CombinatorialMap) -> float:
    """Least length of a non-contractible noose; ``UNBOUNDED`` on the sphere."""
    if euler_genus(m) == 0:
        return UNBOUNDED
    for l in range(1, m.n + 1):
        if _has_essential(m, l):
            return l
    raise AssertionError("non-planar map without a non-contractible noose")


def face_width_at_least(m: CombinatorialMap, k: int) -> bool:
    if euler_genus(m) == 0:
        return True
    for l in range(1, k):
        if _has_essential(m, l):
            return False
    return True


def face_width_capped(m: CombinatorialMap, cap: int) -> int:
    """``min(face_width(m), cap)``, stopping at the first witness."""
    if euler_genus(m) == 0:
        return cap
    for l in range(1, cap):
        if _has_essential(m, l):
            return l
    return cap


def capped_face_width(m: CombinatorialMap, cap: int) -> tuple[int, list[Noose]]:
    """``(min(face_width, cap), nooses)`` where ``nooses`` are the
    non-contractible nooses of that length when it is below ``cap``."""
    if euler_genus(m) == 0:
        return cap, []
    for l in range(1, cap):
        hits = [c for c in all_nooses(m, l) if not is_contractible(m, c)]
        if hits:
            return l, hits
    return cap, []


# ---------------------------------------------------------------------
# homotopy buckets


def _cut_signature(m: CombinatorialMap, c: Noose) -> tuple:
    res = cut_along(m, c)
    comps = res.map.components()
    orient = []
    for comp in comps:
        orient.append(_sub_orientable(res.map, comp))
    return (res.genusDelta, len(comps), tuple(sorted(orient)))


def _sub_orientable(m: CombinatorialMap, comp: list[int]) -> bool:
    # orientability of one component via two-colouring of vertex frames
    inside = set(comp)
    frame = {comp[0]: 0}
    stack = [comp[0]]
    while stack:
        v = stack.pop()
        for d in m.rotation[v]:
            e = d >> 1
            w = m.origin(d ^ 1)
            want = frame[v] ^ (m.signature[e] == -1)
            if w not in inside:
                continue
            if w in frame:
                if frame[w] != want:
                    return False
            else:
                frame[w] = want
                stack.append(w)
    return True


def _slides(k: Skeleton, v: int) -> tuple[int, ...]:
    if v in k.branchVertices:
        return (v,)
    for b, closed in zip(k.branches, k.closed):
        if v in b[1:-1] or (closed and v == b[0]):
            return (v,) if closed else tuple(sorted({b[0], b[-1]}))
    return (v,)


def homotopy_buckets(m: CombinatorialMap, l: int, skeleton: Skeleton | None = None) -> list[NooseClass]:
    """Group the non-contractible nooses of length ``l`` by the branch
    vertices they can be slid to, their orientation character and the
    outcome of cutting along them.

    Nooses that share a slid branch-vertex tuple and agree on the other
    two parts of the key are merged (transitively).
    """
    if l not in (1, 2):
        raise ValueError("homotopy_buckets supports l in {1, 2}")
    if euler_genus(m) == 0:
        return []
    k = skeleton or Skeleton.from_edges(m.n, m.graph.edges)
    nooses = enumerate_nooses(m, l)
    parent = list(range(len(nooses)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    owner: dict[tuple, int] = {}
    info = []
    for i, c in enumerate(nooses):
        op = is_orientation_preserving(m, c)
        sig = _cut_signature(m, c)
        tuples = {tuple(sorted(t)) for t in product(*(_slides(k, v) for v in c.verts))}
        info.append((op, sig, tuples))
        for t in tuples:
            key = (op, sig, t)
            if key in owner:
                a, b = find(owner[key]), find(i)
                if a != b:
                    parent[max(a, b)] = min(a, b)
            else:
                owner[key] = i
    groups: dict[int, list[int]] = {}
    for i in range(len(nooses)):
        groups.setdefault(find(i), []).append(i)
    out = []
    for members in groups.values():
        op = info[members[0]][0]
        sig_t = min(t for i in members for t in info[i][2])
        reps = tuple(nooses[i] for i in members)
        out.append(NooseClass(min(reps, key=_sort_key), sig_t, op, reps))
    out.sort(key=lambda nc: (nc.branchVertexSignature, not nc.orientationPreserving, _sort_key(nc.representative)))
    return out


# ---------------------------------------------------------------------
# bridge sides and cut vertices around two adjacent faces


def _face_vertex_sets(mk: CombinatorialMap) -> list[frozenset[int]]:
    return [frozenset(mk.face_vertices(f)) for f in range(mk.num_faces)]


def _check_faces(mk: CombinatorialMap, k: Skeleton, w1: int, w2: int, r1: int, r2: int) -> None:
    nf = mk.num_faces
    if not (0 <= w1 < nf and 0 <= w2 < nf) or w1 == w2:
        raise ValueError("W1 and W2 must be two distinct faces")
    fv = _face_vertex_sets(mk)
    for r in (r1, r2):
        if not 0 <= r < len(k.branches):
            raise ValueError(f"branch {r} out of range")
        if not set(k.branches[r]) <= fv[w1] & fv[w2]:
            raise ValueError(f"branch {r} is not on the boundary of both faces")


def assign_bridge_sides(
    g: Graph, k: Skeleton, mk: CombinatorialMap, w1: int, w2: int, r1: int, r2: int
) -> SideAssignment | None:
    """Place every bridge that attaches to the interior of R1 or R2 and
    also somewhere else.

    A bridge can only sit in a face whose boundary holds all of its
    attachments. It goes left (W1) or right (W2) when exactly one of the
    two qualifies; when both do it is reported as undetermined. When
    such a bridge fits in no face at all, the skeleton embedding has no
    extension and the result is None.
    """
    _check_faces(mk, k, w1, w2, r1, r2)
    bridges = bridges_of(g, k)
    if any(not b.stable for b in bridges):
        raise ValueError("assign_bridge_sides needs stable bridges")
    fv = _face_vertex_sets(mk)
    inner = set(k.branches[r1][1:-1]) | set(k.branches[r2][1:-1])
    outer_ok = set(k.branches[r1]) | set(k.branches[r2])
    left, right, both = set(), set(), set()
    for i, b in enumerate(bridges):
        if not (b.attachments & inner) or b.attachments <= outer_ok:
            continue
        fits = [f for f in range(len(fv)) if b.attachments <= fv[f]]
        if not fits:
            return None
        a, c = w1 in fits, w2 in fits
        if a and c:
            both.add(i)
        elif a:
            left.add(i)
        elif c:
            right.add(i)
    return SideAssignment(frozenset(left), frozenset(right), {}, frozenset(both))


def _corners_in(mk: CombinatorialMap, v: int, f: int) -> list[int]:
    return [c for c in mk.corners(v) if mk.corner_face(v, c) == f]


def two_vertex_noose(mk: CombinatorialMap, u: int, v: int, w1: int, w2: int) -> list[Noose]:
    """Non-contractible nooses u -> W1 -> v -> W2 -> u in the skeleton map."""
    out = []
    for uin, uout, vin, vout in product(
        _corners_in(mk, u, w2), _corners_in(mk, u, w1), _corners_in(mk, v, w1), _corners_in(mk, v, w2)
    ):
        if uin == uout or vin == vout:
            continue
        c = Noose((u, v), (w1, w2), ((uin, uout), (vin, vout)))
        if not is_contractible(mk, c):
            out.append(c)
    return out


def candidate_cut_vertices(
    g: Graph,
    k: Skeleton,
    mk: CombinatorialMap,
    assignment: SideAssignment,
    w1: int,
    w2: int,
    r1: int,
    r2: int,
    budget: int | None = None,
) -> tuple[int, int] | None:
    """Least pair (u on R1, v on R2) such that some embedding of ``g``
    extending ``mk`` admits a non-contractible noose through exactly u
    and v.

    Each pair is tested with a gadget: two new vertices w1, w2 joined to
    both u and v and forced into W1 and W2 respectively. An extension of
    the gadget map keeps the 4-cycle u w1 v w2 free of crossings, so the
    curve along it meets ``g`` only at u and v.
    """
    _check_faces(mk, k, w1, w2, r1, r2)
    gen = euler_genus(mk)
    us = sorted(set(k.branches[r1]))
    vs = sorted(set(k.branches[r2]))
    a1, a2 = g.n, g.n + 1
    gadget_base = add_vertices(mk, g.n + 2 - mk.n)
    for u, v in sorted(product(us, vs)):
        if u == v:
            continue
        for c in two_vertex_noose(mk, u, v, w1, w2):
            (uin, uout), (vin, vout) = c.corners
            ru, rv = mk.rotation[u], mk.rotation[v]
            fm = _add_path(gadget_base, u, ru[uout], a1, v, rv[vin], gen)
            fm = fm and _add_path(fm, v, rv[vout], a2, u, ru[uin], gen)
            if fm is None:
                continue
            gadget = Graph(g.n + 2, g.edges + ((u, a1), (a1, v), (v, a2), (a2, u)), g.marks)
            q = EmbeddingQuery(gadget, gen, fixedSubMap=fm, budget=budget)
            if extend_embedding(q) is not None:
                return (u, v)
    return None


def _add_path(m: CombinatorialMap, x: int, after_x: int, mid: int, y: int, after_y: int, gen: int):
    """Path x - mid - y through the corners after ``after_x`` and
    ``after_y``, with the signature that keeps the Euler genus."""
    m1 = insert_edge(m, x, after_x, mid, None)
    for s in (1, -1):
        m2 = insert_edge(m1, mid, m1.rotation[mid][0], y, after_y, s)
        if _placed_genus(m2) == gen:
            return m2
    return None


def _placed_genus(m: CombinatorialMap) -> int:
    used = [v for v in range(m.n) if m.rotation[v]]
    return 2 - (len(used) - m.m + m.num_faces)
