"""Seeded, splittable random streams shared by the Monte Carlo routines."""
from __future__ import annotations

from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

import numpy as np

T = TypeVar("T")

CHUNK = 50_000


def chunk_sizes(reps: int, chunk: int = CHUNK) -> list[int]:
    if reps < 1:
        raise ValueError(f"reps must be positive, got {reps}")
    full, rest = divmod(reps, chunk)
    return [chunk] * full + ([rest] if rest else [])


def run_chunks(seed: int, reps: int, work: Callable[[np.random.Generator, int], T],
               workers: int = 1) -> list[T]:
    """Run ``work(rng, size)`` over fixed-size chunks of ``reps``.

    Chunk ``i`` always gets the ``i``-th child of ``SeedSequence(seed)``, so
    the merged result does not depend on ``workers``.
    """
    sizes = chunk_sizes(reps)
    children = np.random.SeedSequence(seed).spawn(len(sizes))
    gens = [np.random.Generator(np.random.PCG64(c)) for c in children]
    if workers <= 1:
        return [work(g, s) for g, s in zip(gens, sizes)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(work, gens, sizes))
