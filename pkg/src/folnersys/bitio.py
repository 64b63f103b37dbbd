"""Bit-exact window serialization.

Format: one ASCII header line ``FBM1 <group> <lo> <hi>`` followed by the
window bits packed little-endian (bit 0 of the first byte is the first
element of the canonical enumeration; trailing pad bits are zero).
Canonical enumeration: ascending for Z, lexicographic for lattice and
Heisenberg boxes.  Multi-coordinate window bounds are comma-joined.
"""
from __future__ import annotations

from typing import Sequence, Tuple, Union

import numpy as np

Bound = Union[int, Tuple[int, ...]]

MAGIC = b"FBM1"


def _fmt_bound(b: Bound) -> str:
    if isinstance(b, tuple):
        return ",".join(str(x) for x in b)
    return str(b)


def _parse_bound(s: str) -> Bound:
    if "," in s:
        return tuple(int(x) for x in s.split(","))
    return int(s)


def expected_length(lo: Bound, hi: Bound) -> int:
    if isinstance(lo, tuple):
        n = 1
        for a, b in zip(lo, hi):
            n *= max(0, b - a)
        return n
    return max(0, hi - lo)


def serialize_bitmask(group: str, lo: Bound, hi: Bound, bits: Sequence[int]) -> bytes:
    arr = np.asarray(bits, dtype=bool)
    if len(arr) != expected_length(lo, hi):
        raise ValueError("bit count does not match the window")
    header = f"{MAGIC.decode()} {group} {_fmt_bound(lo)} {_fmt_bound(hi)}\n".encode()
    return header + np.packbits(arr, bitorder="little").tobytes()


def parse_bitmask(data: bytes) -> Tuple[str, Bound, Bound, np.ndarray]:
    nl = data.index(b"\n")
    header = data[:nl].decode()
    parts = header.split(" ")
    if len(parts) != 4 or parts[0] != MAGIC.decode():
        raise ValueError("bad bitmask header")
    group = parts[1]
    lo = _parse_bound(parts[2])
    hi = _parse_bound(parts[3])
    n = expected_length(lo, hi)
    payload = np.frombuffer(data[nl + 1:], dtype=np.uint8)
    if len(payload) != (n + 7) // 8:
        raise ValueError("payload length does not match the window")
    bits = np.unpackbits(payload, bitorder="little")[:n].astype(bool)
    if n % 8 and np.any(np.unpackbits(payload, bitorder="little")[n:]):
        raise ValueError("nonzero pad bits")
    return group, lo, hi, bits
