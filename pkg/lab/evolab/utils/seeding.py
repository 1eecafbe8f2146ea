"""
Named, order-independent random streams.

Every random draw in a run comes from a generator keyed by
(master seed, stream, generation, candidate, episode). Two draws with different
keys are statistically independent, and the same key always yields the same
generator, so results do not depend on the order in which work is scheduled.
"""

from enum import IntEnum

import numpy as np


class Stream(IntEnum):
    SAMPLING = 0
    PASS1 = 1
    PASS2 = 2
    CENTER = 3
    NORMALIZER = 4
    INIT = 5
    POSTEVAL = 6
    REPLICATION = 7
    TARGET = 8


def stream_rng(master_seed: int, stream: Stream, *key: int) -> np.random.Generator:
    """
    Builds the generator for one key of one stream.

    Args:
        master_seed (int): The run's master seed.
        stream (Stream): Which named stream to draw from.
        *key (int): Further non-negative integers, e.g. generation, candidate, episode.

    Returns:
        np.random.Generator: A fresh PCG64 generator.
    """
    sequence = np.random.SeedSequence(
        entropy=int(master_seed), spawn_key=(int(stream), *(int(k) for k in key))
    )
    return np.random.default_rng(sequence)


def derive_seed(master_seed: int, stream: Stream, *key: int) -> int:
    """Derives a plain 63-bit integer seed, e.g. one master seed per replication."""
    sequence = np.random.SeedSequence(
        entropy=int(master_seed), spawn_key=(int(stream), *(int(k) for k in key))
    )
    return int(sequence.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))
