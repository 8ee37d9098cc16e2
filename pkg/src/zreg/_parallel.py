"""Deterministic chunked reductions with optional thread parallelism.

Chunk boundaries depend only on the input length, never on the thread count,
and partial results are combined left to right, so output is bit-identical
for any number of workers.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence, TypeVar

import numpy as np

T = TypeVar("T")

CHUNK = 8192
_threads = 1


def set_threads(k: int) -> None:
    global _threads
    if k < 1:
        raise ValueError("thread count must be >= 1")
    _threads = int(k)


def get_threads() -> int:
    return _threads


def default_threads() -> int:
    return max(1, min(8, os.cpu_count() or 1))


def chunk_bounds(n: int, chunk: int = CHUNK) -> list[tuple[int, int]]:
    return [(lo, min(lo + chunk, n)) for lo in range(0, n, chunk)]


def map_ordered(fn: Callable[..., T], items: Sequence, threads: int | None = None) -> list[T]:
    threads = _threads if threads is None else threads
    if threads <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _seq_prod(values: np.ndarray) -> complex:
    acc = complex(1.0)
    for v in values.tolist():
        acc *= v
    return acc


def ordered_product(values: np.ndarray) -> complex:
    """Product of a complex array, chunks multiplied in ascending order."""
    values = np.asarray(values, dtype=np.complex128)
    bounds = chunk_bounds(len(values))
    parts = map_ordered(lambda b: _seq_prod(values[b[0]:b[1]]), bounds)
    acc = complex(1.0)
    for p in parts:
        acc *= p
    return acc


def _seq_prod_m1(values: np.ndarray) -> complex:
    acc = complex(0.0)
    for v in values.tolist():
        acc += v + acc * v
    return acc


def ordered_product_m1(deltas: np.ndarray) -> complex:
    """prod(1 + d) - 1, carried as the offset from 1 so factors near 1 keep full precision."""
    deltas = np.asarray(deltas, dtype=np.complex128)
    bounds = chunk_bounds(len(deltas))
    parts = map_ordered(lambda b: _seq_prod_m1(deltas[b[0]:b[1]]), bounds)
    acc = complex(0.0)
    for p in parts:
        acc += p + acc * p
    return acc


def complex_fsum(values: np.ndarray) -> complex:
    """Correctly rounded sum of real and imaginary parts (order independent)."""
    values = np.asarray(values, dtype=np.complex128)
    return complex(math.fsum(values.real.tolist()), math.fsum(values.imag.tolist()))
