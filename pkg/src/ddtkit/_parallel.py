"""Deterministic column-parallel evaluation.

Each output column is produced by one call of the same function on the same
inputs, so the result does not depend on how columns are spread over threads.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

ENV_THREADS = "DDTKIT_THREADS"


def thread_count() -> int:
    raw = os.environ.get(ENV_THREADS)
    if raw:
        try:
            n = int(raw)
        except ValueError:
            raise ValueError(f"{ENV_THREADS} must be an integer, got {raw!r}") from None
        return max(1, n)
    return max(1, min(8, os.cpu_count() or 1))


def map_columns(fn, n_rows: int, n_cols: int) -> np.ndarray:
    """Build an ``(n_rows, n_cols)`` complex matrix with ``out[:, k] = fn(k)``."""
    out = np.empty((n_rows, n_cols), dtype=np.complex128)
    workers = min(thread_count(), n_cols)

    def fill(ks):
        for k in ks:
            out[:, k] = fn(k)

    if workers <= 1:
        fill(range(n_cols))
    else:
        chunks = [range(i, n_cols, workers) for i in range(workers)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(fill, chunks))
    return out
