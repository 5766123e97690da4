import zlib

import numpy as np


def consumer_key(consumer: str) -> int:
    return zlib.crc32(consumer.encode("utf-8"))


def derive_seed(root: int, consumer: str) -> int:
    """Child seed for one named consumer of the root seed.

    Streams are keyed by name, not by spawn order, so adding a consumer never
    shifts the realizations of the others.
    """
    sequence = np.random.SeedSequence(root, spawn_key=(consumer_key(consumer),))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def generator(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))
