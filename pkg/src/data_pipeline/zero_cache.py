# src/data_pipeline/zero_cache.py
"""Binary cache: b"ZFPZ", u32 LE version, u64 LE count, count float64 LE values."""
import logging
import struct
from typing import BinaryIO

import numpy as np

from src.data_pipeline.zero_store import ZeroSet
from src.utils.errors import CacheBadMagicError, CacheTruncatedError, CacheVersionError

logger = logging.getLogger(__name__)

MAGIC = b"ZFPZ"
VERSION = 1
HEADER = struct.Struct("<4sIQ")
_VALUE_DTYPE = np.dtype("<f8")


def write_cache(zeros: ZeroSet, sink: BinaryIO) -> int:
    """Write ``zeros`` to ``sink``; returns the number of bytes written"""
    payload = zeros.gammas.astype(_VALUE_DTYPE, copy=False).tobytes()
    sink.write(HEADER.pack(MAGIC, VERSION, zeros.count))
    sink.write(payload)
    byte_count = HEADER.size + len(payload)
    logger.info(f"Wrote cache with {zeros.count} zeros ({byte_count} bytes)")
    return byte_count


def load_cache(source: BinaryIO) -> ZeroSet:
    header = source.read(HEADER.size)
    if len(header) < 4 or header[:4] != MAGIC:
        raise CacheBadMagicError(f"expected magic {MAGIC!r}, found {header[:4]!r}")
    if len(header) < HEADER.size:
        raise CacheTruncatedError(f"header is {len(header)} bytes, expected {HEADER.size}")
    _, version, count = HEADER.unpack(header)
    if version != VERSION:
        raise CacheVersionError(f"cache version {version}, this build reads version {VERSION}")

    expected = count * _VALUE_DTYPE.itemsize
    payload = source.read(expected)
    if len(payload) < expected:
        raise CacheTruncatedError(f"payload holds {len(payload)} of {expected} bytes")

    gammas = np.frombuffer(payload, dtype=_VALUE_DTYPE).astype(np.float64)
    return ZeroSet(gammas)
