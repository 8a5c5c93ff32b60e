"""Counter-based random streams addressed by (campaign seed, row, path).

Each simulated path owns its own Philox stream: the key comes from the row
seed and the path index sits in the top 64-bit word of the counter. Any
worker can therefore reproduce any path without replaying the others, and
serial and parallel campaigns draw identical numbers.
"""

import numpy as np

PATH_SHIFT = 192


def row_seed(seed: int, row: int) -> int:
    """64-bit key for one (model, query) row of a campaign."""
    state = np.random.SeedSequence(seed, spawn_key=(row,)).generate_state(1, np.uint64)
    return int(state[0])


def path_stream(key: int, path: int) -> np.random.Generator:
    """Generator for one path; streams of distinct paths never overlap in practice."""
    if path < 0:
        raise ValueError(f"path index must be >= 0, got {path}")
    return np.random.Generator(np.random.Philox(key=key, counter=path << PATH_SHIFT))
