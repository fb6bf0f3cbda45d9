"""Counter-based randomness keyed by (seed, parameter tuple).

Every grid point derives its own generator from a stable hash of its
parameters, so per-point draws are independent of execution order and
worker count.
"""

from __future__ import annotations

import hashlib

import numpy as np


def rng_for(seed: int, *key: object) -> np.random.Generator:
    material = repr((seed,) + key).encode()
    digest = hashlib.blake2b(material, digest_size=16).digest()
    return np.random.Generator(np.random.Philox(key=int.from_bytes(digest, "big")))
