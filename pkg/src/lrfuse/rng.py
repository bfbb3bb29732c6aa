"""Deterministic, labelled random streams.

Every random quantity in this package is drawn from a ``RandomStream``,
which is identified by a 64-bit root seed plus a tuple of labels (ints or
strings).  Equal (seed, labels) pairs produce bit-identical sequences on
every platform.

Algorithm: the seed and labels are folded into a ``numpy.random.SeedSequence``
which drives a PCG64 generator.  Each label is hashed with BLAKE2b under a
type tag to four 64-bit words before entering the entropy pool; hashing
(rather than using small ints verbatim) matters because SeedSequence
silently ignores trailing zero entropy words, which would make a final
label of 0 a no-op.  Gaussian variates use numpy's ziggurat sampler.  Both
are fixed for a given numpy version by numpy's random-stream compatibility
policy; the package pins ``numpy>=1.25``.
"""

from __future__ import annotations

import hashlib

import numpy as np

_MASK64 = (1 << 64) - 1


def _label_words(label) -> tuple[int, ...]:
    """Map one stream label to a stable tuple of four 64-bit words."""
    if isinstance(label, (int, np.integer)) and not isinstance(label, bool):
        payload = b"i" + (int(label) & _MASK64).to_bytes(8, "little")
    elif isinstance(label, str):
        payload = b"s" + label.encode("utf-8")
    else:
        raise TypeError(f"stream label must be int or str, got {type(label).__name__}")
    digest = hashlib.blake2b(payload, digest_size=32).digest()
    return tuple(int.from_bytes(digest[i : i + 8], "little") for i in range(0, 32, 8))


class RandomStream:
    """A named, reproducible pseudorandom stream with derived sub-streams."""

    def __init__(self, seed: int, *labels):
        if not isinstance(seed, (int, np.integer)):
            raise TypeError("seed must be an integer")
        self.seed = int(seed) & _MASK64
        self.labels = tuple(labels)
        entropy = [self.seed]
        for label in labels:
            entropy.extend(_label_words(label))
        self._seq = np.random.SeedSequence(entropy)
        self._gen = np.random.Generator(np.random.PCG64(self._seq))

    def substream(self, *labels) -> "RandomStream":
        """Independent stream derived from this stream's identity plus labels."""
        return RandomStream(self.seed, *self.labels, *labels)

    def child_seed(self, *labels) -> int:
        """A 64-bit seed derived from (seed, labels), for handing to configs."""
        seq = RandomStream(self.seed, *self.labels, *labels)._seq
        state = seq.generate_state(2, dtype=np.uint64)
        return int(state[0]) & _MASK64

    # -- draws ---------------------------------------------------------

    def normal(self, shape) -> np.ndarray:
        """Standard Gaussian deviates (numpy ziggurat)."""
        return self._gen.standard_normal(shape)

    def uniform(self, shape) -> np.ndarray:
        """Uniform deviates in [0, 1)."""
        return self._gen.random(shape)

    def permutation(self, n: int) -> np.ndarray:
        return self._gen.permutation(n)
