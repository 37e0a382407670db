"""RNG Service - Counter-based random streams derived from (seed, purpose, index)."""

from enum import IntEnum

import numpy as np

from models.estimate import validate_seed


class StreamTag(IntEnum):
    """Separates the random streams of different consumers of one seed."""
    GENERATOR = 1
    ITERATION = 2
    TRIAL = 3
    EDGE_COINS = 4
    COLORS = 5


def derived_generator(seed: int, tag: StreamTag, index: int = 0) -> np.random.Generator:
    """
    Independent generator for stream `index` of purpose `tag` under `seed`.

    The result depends only on the three integers, never on how many other
    streams were drawn before, so iterations can run in any order or on any
    thread.
    """
    entropy = [validate_seed(seed), int(tag), int(index)]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


def trial_seed(seed: int, trial: int) -> int:
    """64-bit seed of one sparsification trial."""
    rng = derived_generator(seed, StreamTag.TRIAL, trial)
    return int(rng.integers(0, 2 ** 64, dtype=np.uint64))
