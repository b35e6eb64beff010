"""On-disk cache for lambda sieves and order tables.

Layout: 8-byte magic, then four little-endian uint64 header words
(kind, lo, hi, count), then `count` little-endian int64 records holding the
values for arguments lo..hi.
"""

from __future__ import annotations

import os
import struct
from pathlib import Path

import numpy as np

from .orders import lambda_sieve, order_table

MAGIC = b"ORDSTAT1"
KIND_LAMBDA = 1
KIND_ORDER = 2
_HEADER = struct.Struct("<8s4Q")


class CacheFormatError(ValueError):
    pass


def write_table(path, kind: int, lo: int, hi: int, values) -> None:
    values = np.ascontiguousarray(values, dtype="<i8")
    if len(values) != hi - lo + 1:
        raise ValueError("record count does not match the range")
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, kind, lo, hi, len(values)))
        fh.write(values.tobytes())
    os.replace(tmp, path)


def read_table(path) -> tuple[int, int, int, np.ndarray]:
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size)
        if len(head) != _HEADER.size:
            raise CacheFormatError(f"{path}: truncated header")
        magic, kind, lo, hi, count = _HEADER.unpack(head)
        if magic != MAGIC:
            raise CacheFormatError(f"{path}: bad magic {magic!r}")
        body = fh.read()
    if len(body) % 8:
        raise CacheFormatError(f"{path}: record data is not a whole number of int64 words")
    data = np.frombuffer(body, dtype="<i8")
    if len(data) != count or count != hi - lo + 1:
        raise CacheFormatError(f"{path}: expected {count} records, found {len(data)}")
    return kind, lo, hi, data.astype(np.int64)


def cached_lambda_sieve(x: int, path) -> np.ndarray:
    """lambda(n) for 0 <= n <= x, reusing `path` when it covers the range."""
    if Path(path).exists():
        kind, lo, hi, data = read_table(path)
        if kind == KIND_LAMBDA and lo == 0 and hi >= x:
            return data[: x + 1]
    lam = lambda_sieve(x)
    write_table(path, KIND_LAMBDA, 0, x, lam)
    return lam


def cached_order_table(p: int, path) -> np.ndarray:
    """Orders of residues 0..p-1 mod p, keyed by the range [0, p-1]."""
    if Path(path).exists():
        kind, lo, hi, data = read_table(path)
        if kind == KIND_ORDER and lo == 0 and hi == p - 1:
            return data
    ords = order_table(p).ord.astype(np.int64)
    write_table(path, KIND_ORDER, 0, p - 1, ords)
    return ords
