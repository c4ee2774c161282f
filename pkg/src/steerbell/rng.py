"""Reproducible random streams.

Every stream is a Philox4x64 counter-based generator keyed by
``SeedSequence(seed, spawn_key=key)``. A sample's stream depends only on
``(seed, key)``, never on how many other samples were drawn before it, so
work can be split across processes without changing results.
"""

from __future__ import annotations

import numpy as np

RNG_ALGORITHM = "numpy Philox4x64 keyed by SeedSequence(seed, spawn_key)"


def stream(seed: int, *key: int) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))


def random_direction(rng: np.random.Generator) -> np.ndarray:
    """Uniform point on the unit sphere (normalized Gaussian 3-vector)."""
    while True:
        v = rng.standard_normal(3)
        n = np.linalg.norm(v)
        if n > 1e-12:
            return v / n
