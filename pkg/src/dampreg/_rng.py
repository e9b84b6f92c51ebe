"""Seeded random streams.

All randomness goes through Philox, a counter-based generator, keyed by
``numpy.random.SeedSequence``.  Independent substreams come from
``SeedSequence.spawn`` so that block ``i`` always sees the same numbers no
matter how many workers evaluate the blocks or in which order.
"""

import numpy as np


def generator(seed: int | None) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def substreams(seed: int | None, count: int) -> list[np.random.Generator]:
    children = np.random.SeedSequence(seed).spawn(count)
    return [np.random.Generator(np.random.Philox(c)) for c in children]
