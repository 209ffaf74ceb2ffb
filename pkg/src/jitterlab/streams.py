"""
Seed Streams

Derives reproducible, order-independent random streams for trials and chains.
Every stream is keyed by (base seed, trial, role, chain) through
``numpy.random.SeedSequence`` spawn keys.
"""

from typing import Union

import numpy as np

RngLike = Union[int, np.random.Generator, np.random.SeedSequence]

# Stream roles inside one trial
SYNTHESIS = 0
GIBBS = 1
EM = 2
INIT = 3
LIKELIHOOD = 4


def as_generator(rng: RngLike) -> np.random.Generator:
    """Return a Generator for an int seed, SeedSequence or Generator"""
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def trial_seed(seed: int, trial: int) -> int:
    """
    Per-trial seed derived from the experiment seed.

    The result only depends on (seed, trial), so trial subsets can be run
    in any order and still reproduce the same rows.
    """
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=(trial,))
    return int(sequence.generate_state(1, dtype=np.uint32)[0])


def stream(seed: int, *key: int) -> np.random.Generator:
    """Independent generator for ``seed`` and a spawn key such as (role, chain)"""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=tuple(key)))
