# src/number_theory/summation.py
"""Deterministic compensated summation over large arrays.

Terms are cut into fixed-size chunks; each chunk is Kahan-summed on its own
and the chunk totals are combined by a pairwise tree in chunk-index order.
The worker count only decides who computes a chunk, so the result is
bitwise independent of it.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Sequence, Tuple

import numpy as np
from numba import njit

logger = logging.getLogger(__name__)

DEFAULT_CHUNK_SIZE = 2 ** 16


@njit(nogil=True, fastmath=False, cache=False)
def kahan_sum(values):
    """Kahan-compensated sum of a 1-D float64 array, strict IEEE order"""
    total = 0.0
    compensation = 0.0
    for i in range(values.shape[0]):
        y = values[i] - compensation
        t = total + y
        compensation = (t - total) - y
        total = t
    return total


def pairwise_combine(partials: Sequence[float]) -> float:
    """Pairwise tree reduction with a fixed shape for a given length"""
    level = list(partials)
    if not level:
        return 0.0
    while len(level) > 1:
        paired = [level[i] + level[i + 1] for i in range(0, len(level) - 1, 2)]
        if len(level) % 2:
            paired.append(level[-1])
        level = paired
    return float(level[0])


def chunk_bounds(length: int, chunk_size: int = DEFAULT_CHUNK_SIZE) -> List[Tuple[int, int]]:
    if chunk_size < 1:
        raise ValueError(f"chunk_size must be positive, got {chunk_size}")
    return [(start, min(start + chunk_size, length)) for start in range(0, length, chunk_size)]


def map_chunks(function: Callable[[int, int], object], length: int,
               chunk_size: int = DEFAULT_CHUNK_SIZE, workers: int = 1) -> list:
    """Apply ``function(start, stop)`` to every chunk; results in chunk order"""
    bounds = chunk_bounds(length, chunk_size)
    if workers <= 1 or len(bounds) <= 1:
        return [function(start, stop) for start, stop in bounds]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda b: function(*b), bounds))


def compensated_sum(values: np.ndarray, chunk_size: int = DEFAULT_CHUNK_SIZE, workers: int = 1) -> float:
    values = np.ascontiguousarray(values, dtype=np.float64)
    partials = map_chunks(lambda start, stop: kahan_sum(values[start:stop]),
                          values.shape[0], chunk_size, workers)
    return pairwise_combine(partials)


def compensated_complex_sum(term_chunk: Callable[[int, int], Tuple[np.ndarray, np.ndarray]],
                            length: int, chunk_size: int = DEFAULT_CHUNK_SIZE, workers: int = 1) -> complex:
    """Sum complex terms produced chunk by chunk as (real, imag) arrays"""

    def reduce_chunk(start: int, stop: int) -> Tuple[float, float]:
        real, imag = term_chunk(start, stop)
        return kahan_sum(real), kahan_sum(imag)

    partials = map_chunks(reduce_chunk, length, chunk_size, workers)
    real = pairwise_combine([p[0] for p in partials])
    imag = pairwise_combine([p[1] for p in partials])
    return complex(real, imag)
