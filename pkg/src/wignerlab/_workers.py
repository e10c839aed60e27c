"""Worker-count resolution and worker-independent seeding."""
from __future__ import annotations

import os

import numpy as np

ENV_THREADS = "WIGNERLAB_THREADS"


def worker_count(requested: int | None = None) -> int:
    """Number of workers, capped by the WIGNERLAB_THREADS environment variable."""
    n = requested if requested is not None else (os.cpu_count() or 1)
    cap = os.environ.get(ENV_THREADS)
    if cap:
        try:
            n = min(n, int(cap))
        except ValueError:
            raise ValueError(f"{ENV_THREADS} must be an integer, got {cap!r}") from None
    return max(1, n)


def chunk_generators(seed: int, n_chunks: int) -> list[np.random.Generator]:
    """One counter-based generator per fixed-size chunk of work.

    Chunk ``i`` always gets the same stream for a given seed, whatever the
    number of workers that end up processing the chunks.
    """
    children = np.random.SeedSequence(seed).spawn(n_chunks)
    return [np.random.Generator(np.random.Philox(child)) for child in children]
