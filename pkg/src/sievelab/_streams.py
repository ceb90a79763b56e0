"""Counter-based RNG streams.

Every source of randomness in the package draws from a Philox generator
whose 128-bit key is derived by hashing a master seed together with a
tuple of string/int labels.  Streams are therefore reproducible and
independent of execution order or worker count.
"""

import hashlib

import numpy as np


def stream_key(seed, *labels):
    """128-bit Philox key derived from a master seed and label path."""
    text = "\x1f".join([str(int(seed))] + [str(lab) for lab in labels])
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:16], "little")


def stream(seed, *labels):
    """A fresh ``numpy.random.Generator`` for the labelled stream."""
    return np.random.Generator(np.random.Philox(key=stream_key(seed, *labels)))


def substream_seed(seed, *labels):
    """A derived 63-bit integer seed, for handing to child components."""
    return stream_key(seed, *labels) % (2**63 - 1)
