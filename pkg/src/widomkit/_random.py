"""Seeded, splittable random streams.

Repetitions are cut into fixed blocks of ``BLOCK`` and block ``k`` always
draws from the k-th child of ``SeedSequence(seed)`` (salted by the model
tag) through a Philox counter-based generator.  Results are therefore
bit-identical whatever the thread count.
"""

from __future__ import annotations

import os
import zlib
from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np

DEFAULT_SEED = 1729
BLOCK = 256
THREADS_ENV = "WIDOMKIT_THREADS"


def thread_count() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return min(8, os.cpu_count() or 1)
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ValueError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return n


def generators(seed: int, tag: str, count: int) -> list[np.random.Generator]:
    root = np.random.SeedSequence(int(seed), spawn_key=(zlib.crc32(tag.encode()),))
    return [np.random.Generator(np.random.Philox(child)) for child in root.spawn(count)]


def generator(seed: int, tag: str) -> np.random.Generator:
    return generators(seed, tag, 1)[0]


def map_blocks(
    seed: int,
    tag: str,
    reps: int,
    fn: Callable[[np.random.Generator, int], np.ndarray],
    block: int = BLOCK,
) -> np.ndarray:
    """Concatenate ``fn(rng_k, size_k)`` over the blocks covering ``reps``."""
    if reps < 1:
        raise ValueError(f"reps must be at least 1, got {reps}")
    sizes = [min(block, reps - s) for s in range(0, reps, block)]
    rngs = generators(seed, tag, len(sizes))
    workers = min(thread_count(), len(sizes))
    if workers <= 1:
        parts = [fn(g, n) for g, n in zip(rngs, sizes)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(fn, rngs, sizes))
    return np.concatenate(parts, axis=0)
