"""Seeded, splittable random streams.

Every random draw in the package comes from a Philox4x64-10 counter-based
generator (``numpy.random.Philox``).  The 128-bit Philox key for a stream is
derived from the user seed and a *path* of non-negative integers (for
example ``(PERMUTATION, replicate)``) by hashing them with
``numpy.random.SeedSequence(seed, spawn_key=path)`` and taking the first two
64-bit words of its state.  Both algorithms are fixed and platform
independent, so a (seed, path) pair always yields the same bit stream.

Large replicate families (permutations) use ``substreams``: one key for the
family and the replicate index in the top word of the 256-bit Philox
counter, which skips the per-replicate hashing.
"""

from __future__ import annotations

import secrets

import numpy as np

DEFAULT_SEED = 20200101

MASK64 = (1 << 64) - 1

# stream tags; keep values stable, they are part of the reproducibility contract
TIE_BREAK = 0
REVERSE_DIRECTION = 1
TIE_AVERAGE = 2
PERMUTATION = 3
SIMULATION = 4
CALIBRATION = 5
VERIFY = 6


def check_seed(seed: int) -> int:
    if isinstance(seed, (bool, np.bool_)) or not isinstance(seed, (int, np.integer)):
        raise TypeError(f"seed must be an integer, got {type(seed).__name__}")
    seed = int(seed)
    if not 0 <= seed <= MASK64:
        raise ValueError(f"seed must fit in 64 unsigned bits, got {seed}")
    return seed


def random_seed() -> int:
    return secrets.randbits(64)


def derive_seed(seed: int, *path: int) -> int:
    """Child 64-bit seed for ``path`` below ``seed``."""
    ss = np.random.SeedSequence(check_seed(seed), spawn_key=tuple(int(p) for p in path))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def stream(seed: int, *path: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=_key(seed, path)))


def _key(seed: int, path: tuple) -> np.ndarray:
    ss = np.random.SeedSequence(check_seed(seed), spawn_key=tuple(int(p) for p in path))
    return ss.generate_state(2, dtype=np.uint64)


def substreams(seed: int, *path: int):
    """Return ``get(b)``: the generator for replicate ``b`` of family ``path``.

    Replicate b starts at Philox counter (0, 0, 0, b), so replicates are
    disjoint for any realistic draw count.
    """
    key = _key(seed, path)

    def get(b: int) -> np.random.Generator:
        counter = np.array([0, 0, 0, b], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key, counter=counter))

    return get
