"""Named, splittable random substreams derived from one master seed.

Every stream is ``default_rng(SeedSequence(seed, spawn_key=(replication, id)))``
so a stream depends only on the master seed, the replication index and the
stream name. Order of construction never matters.
"""

import numpy as np

STREAMS = {
    "data": 0,
    "init": 1,
    "quantizer": 2,
    "channel": 3,
    "privacy": 4,
    "solver": 5,
}


def substream(seed, name, replication=0):
    if name not in STREAMS:
        raise KeyError(f"unknown stream {name!r}; expected one of {sorted(STREAMS)}")
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(replication), STREAMS[name]))
    return np.random.default_rng(ss)


def as_generator(rng):
    """Accept a Generator, an int seed or None."""
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)
