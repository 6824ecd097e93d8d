"""Injective byte encoding for nested codes.

Comparisons between encoded values are plain ``bytes`` comparisons,
which gives every canonical form a total order without mixing Python
types.
"""

from __future__ import annotations

import struct
import sys
from array import array
from typing import Iterable

_I = struct.Struct(">q")
_L = struct.Struct(">I")


def pack(*items) -> bytes:
    out = bytearray()
    for it in items:
        _pack_one(it, out)
    return bytes(out)


def _pack_one(it, out: bytearray) -> None:
    if isinstance(it, (bytes, bytearray)):
        out += b"b"
        out += _L.pack(len(it))
        out += it
    elif isinstance(it, bool):
        out += b"i"
        out += _I.pack(int(it))
    elif isinstance(it, int):
        out += b"i"
        out += _I.pack(it)
    elif isinstance(it, str):
        data = it.encode()
        out += b"s"
        out += _L.pack(len(data))
        out += data
    elif isinstance(it, (list, tuple)):
        out += b"l"
        out += _L.pack(len(it))
        for x in it:
            _pack_one(x, out)
    else:
        raise TypeError(f"cannot encode {type(it).__name__}")


def pack_ints(values: Iterable[int]) -> bytes:
    """Fixed-width big-endian encoding of non-negative ints (order-preserving)."""
    arr = array("I", values)
    if sys.byteorder == "little":
        arr.byteswap()
    return bytes(arr)


def rank(values: list[bytes]) -> tuple[list[int], list[bytes]]:
    """Replace byte strings by their rank among the distinct values."""
    table = sorted(set(values))
    pos = {v: i for i, v in enumerate(table)}
    return [pos[v] for v in values], table
