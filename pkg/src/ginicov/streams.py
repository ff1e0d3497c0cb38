"""Reproducible random streams keyed by integer paths.

Every stochastic component draws from a counter-based Philox generator whose
key is derived from ``(seed, *path)``.  Streams for distinct paths are
independent, so work can be farmed out to any number of workers in any order
and still reproduce bit-for-bit.

Stream keys used across the package:

* permutation tests:   (seed, b) for permutation replicate b = 1..B
* scenario data:       (seed, replicate, class_index)
* study batches:       per-beta root seeds derived via derive_seed(seed, i)
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1


def _entropy(seed: int, path) -> list:
    return [int(seed) & _MASK] + [int(x) & _MASK for x in path]


def substream(seed: int, *path: int) -> np.random.Generator:
    """Generator for the stream keyed by (seed, *path)."""
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence(entropy=_entropy(seed, path)))
    )


def derive_seed(seed: int, *path: int) -> int:
    """Collapse (seed, *path) into a single 64-bit seed for a sub-component."""
    ss = np.random.SeedSequence(entropy=_entropy(seed, path))
    return int(ss.generate_state(1, np.uint64)[0])
