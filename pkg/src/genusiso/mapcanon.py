"""Canonical forms and isomorphism for marked combinatorial maps.

Every flag has three fixed-point-free involutions: ``t0`` moves to the
other end of the edge, ``t1`` to the neighboring edge around the
vertex, ``t2`` to the other side of the same dart. From a root flag a
breadth-first walk numbers flags in first-visit order and records, for
each visited flag, the numbers of its three neighbors together with
the vertex mark and dart label. The canonical code is the least such
word over admissible roots; words are compared while they are being
produced, so most roots are abandoned after a few steps.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .codec import pack, pack_ints, rank
from .surface import CombinatorialMap

FREE = "free"
ORIENTED = "oriented"
SCHEME = "flagwalk-1"


@dataclass(frozen=True)
class CanonicalCode:
    bytes: bytes
    scheme: str = SCHEME

    def hex(self) -> str:
        return self.bytes.hex()

    def __lt__(self, other: "CanonicalCode") -> bool:
        return self.bytes < other.bytes


@dataclass(frozen=True)
class MapForm:
    """Result of canonicalization: the code plus the traversal that
    produced it (flags and vertices in canonical order)."""

    code: bytes
    flag_order: tuple[int, ...]
    vertex_order: tuple[int, ...]


def _involutions(m: CombinatorialMap) -> tuple[list[int], list[int]]:
    nf = 4 * m.m
    succ, pred, sig = m.succ, m.pred, m.signature
    t0 = [0] * nf
    t1 = [0] * nf
    for x in range(nf):
        d = x >> 1
        s = x & 1
        t0[x] = 2 * (d ^ 1) + (1 - (s ^ (sig[d >> 1] == -1)))
        t1[x] = 2 * pred[d] + 1 if s == 0 else 2 * succ[d]
    return t0, t1


def canonical_form(
    m: CombinatorialMap,
    mode: str = FREE,
    vertex_labels: Sequence[bytes] | None = None,
    dart_labels: Sequence[bytes] | None = None,
) -> MapForm:
    """Canonical form of a connected map.

    ``vertex_labels`` default to the graph marks; ``dart_labels`` (one
    per dart, as seen from its origin) default to all equal.
    """
    if mode not in (FREE, ORIENTED):
        raise ValueError("mode must be 'free' or 'oriented'")
    n, ne = m.n, m.m
    if vertex_labels is None:
        vertex_labels = [pack(m.graph.mark(v)) for v in range(n)]
    vr, vtable = rank(list(vertex_labels))
    if ne == 0:
        if n != 1:
            raise ValueError("canonical_form needs a connected map")
        return MapForm(pack("empty", vtable), (), (0,))
    if not m.graph.is_connected():
        raise ValueError("canonical_form needs a connected map")
    if dart_labels is None:
        dr, dtable = [0] * (2 * ne), [b""]
    else:
        dr, dtable = rank(list(dart_labels))
    if mode == ORIENTED and any(s < 0 for s in m.signature):
        if m.is_orientable():
            m = m.normalized()
    t0, t1 = _involutions(m)
    nf = 4 * ne
    origin = [m.origin(x >> 1) for x in range(nf)]
    fmark = [vr[origin[x]] for x in range(nf)]
    flab = [dr[x >> 1] for x in range(nf)]
    deg = [len(r) for r in m.rotation]
    # cheap invariant per root flag; only minimal roots are walked
    walks = m.trace_faces()
    flen = [0] * nf
    for w in walks:
        for x in w:
            flen[x] = len(w)
            flen[m.flag_reverse(x)] = len(w)
    roots = range(nf)
    if mode == ORIENTED and all(s > 0 for s in m.signature):
        roots = range(0, nf, 2)
    keys = {x: (fmark[x], deg[origin[x]], flab[x], flen[x], deg[origin[t0[x]]]) for x in roots}
    kmin = min(keys.values())
    roots = [x for x in roots if keys[x] == kmin]

    best: list[int] | None = None
    best_order: list[int] | None = None
    for r in roots:
        res = _walk(r, t0, t1, fmark, flab, nf, best)
        if res is not None:
            best, best_order = res
    assert best is not None and best_order is not None
    seen = [False] * n
    vorder = []
    for x in best_order:
        v = origin[x]
        if not seen[v]:
            seen[v] = True
            vorder.append(v)
    head = pack(SCHEME, n, ne, vtable, dtable, list(kmin))
    return MapForm(head + pack_ints(best), tuple(best_order), tuple(vorder))


def _walk(root, t0, t1, fmark, flab, nf, best):
    """Produce the word for ``root``; return None as soon as it is known
    to exceed ``best``."""
    num = [-1] * nf
    num[root] = 0
    order = [root]
    word: list[int] = []
    nxt = 1
    smaller = best is None
    p = 0
    i = 0
    while i < len(order):
        x = order[i]
        i += 1
        for y in (t0[x], t1[x], x ^ 1):
            k = num[y]
            if k < 0:
                k = num[y] = nxt
                nxt += 1
                order.append(y)
            word.append(k)
        word.append(fmark[x])
        word.append(flab[x])
        if not smaller:
            while p < len(word):
                a, b = word[p], best[p]
                if a < b:
                    smaller = True
                    break
                if a > b:
                    return None
                p += 1
    if not smaller:
        return None  # identical to best; keep the earlier root
    return word, order


def canonical_code(m: CombinatorialMap, mode: str = FREE) -> CanonicalCode:
    return CanonicalCode(canonical_form(m, mode).code)


def maps_isomorphic(a: CombinatorialMap, b: CombinatorialMap, mode: str = FREE) -> dict[int, int] | None:
    """Flag bijection from ``a`` to ``b`` preserving the flag involutions
    and marks, or None."""
    if (a.n, a.m) != (b.n, b.m):
        return None
    fa = canonical_form(a, mode)
    fb = canonical_form(b, mode)
    if fa.code != fb.code:
        return None
    return dict(zip(fa.flag_order, fb.flag_order))
