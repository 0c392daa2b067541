"""Bulk address sets as numpy arrays.

A set of addresses is held as a ``(N, 2)`` uint64 array of (high, low)
halves, sorted ascending and duplicate free.  The on-disk day-file record is
the same pair stored big-endian, so reads and writes are single buffer copies.
"""

from __future__ import annotations

import numpy as np

from .addr_core import LOW64

RECORD = np.dtype(">u8")


def empty():
    return np.zeros((0, 2), dtype=np.uint64)


def from_ints(values):
    values = list(values)
    out = np.empty((len(values), 2), dtype=np.uint64)
    if values:
        out[:, 0] = [int(v) >> 64 for v in values]
        out[:, 1] = [int(v) & LOW64 for v in values]
    return out


def to_ints(arr):
    hi = arr[:, 0].tolist()
    lo = arr[:, 1].tolist()
    return [(h << 64) | l for h, l in zip(hi, lo)]


def from_packed(buf):
    """Decode concatenated 16-byte big-endian records."""
    if len(buf) % 16:
        raise ValueError(f"packed buffer length {len(buf)} is not a multiple of 16")
    return np.frombuffer(buf, dtype=RECORD).reshape(-1, 2).astype(np.uint64)


def to_packed(arr):
    return np.ascontiguousarray(arr, dtype=RECORD).tobytes()


def sort_unique(arr):
    if len(arr) == 0:
        return empty()
    order = np.lexsort((arr[:, 1], arr[:, 0]))
    arr = arr[order]
    keep = np.ones(len(arr), dtype=bool)
    keep[1:] = (arr[1:, 0] != arr[:-1, 0]) | (arr[1:, 1] != arr[:-1, 1])
    return arr[keep]


def is_sorted_unique(arr):
    if len(arr) < 2:
        return True
    hi, lo = arr[:, 0], arr[:, 1]
    return bool(np.all((hi[1:] > hi[:-1]) | ((hi[1:] == hi[:-1]) & (lo[1:] > lo[:-1]))))


def _bit_length32(x):
    # exact: uint32 values are representable in float64
    _, exp = np.frexp(x.astype(np.float64))
    return np.where(x == 0, 0, exp).astype(np.int64)


def bit_length64(x):
    x = x.astype(np.uint64)
    high = (x >> np.uint64(32)).astype(np.uint32)
    low = (x & np.uint64(0xFFFFFFFF)).astype(np.uint32)
    return np.where(high != 0, 32 + _bit_length32(high), _bit_length32(low))


def adjacent_common_prefix(arr):
    """Common-prefix length of each consecutive pair in a sorted unique array."""
    hi, lo = arr[:, 0], arr[:, 1]
    dhi = hi[1:] ^ hi[:-1]
    dlo = lo[1:] ^ lo[:-1]
    return np.where(dhi != 0, 64 - bit_length64(dhi), 128 - bit_length64(dlo))


def mask(arr, length):
    """Clear every bit at or past ``length``."""
    out = arr.copy()
    if length >= 64:
        keep = length - 64
        out[:, 1] &= np.uint64(((LOW64 << (64 - keep)) & LOW64) if keep else 0)
    else:
        out[:, 1] = 0
        out[:, 0] &= np.uint64(((LOW64 << (64 - length)) & LOW64) if length else 0)
    return out


def count_prefixes(arr, length):
    """Distinct length-``length`` prefixes covering a sorted unique array."""
    if len(arr) == 0:
        return 0
    return 1 + int(np.count_nonzero(adjacent_common_prefix(arr) < length))
