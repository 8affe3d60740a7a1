"""Seeded, independently addressable uniform streams."""
from __future__ import annotations

import numpy as np

_BLOCK = 4096


class RngStream:
    """Uniform variates on ``[0, 1)`` keyed by ``(seed, stream_id)``.

    The pair is fed to ``numpy.random.SeedSequence`` as entropy plus spawn key,
    so distinct stream ids give statistically independent PCG64 streams and
    equal pairs give identical sequences. Variates are drawn in blocks; the
    sequence seen by callers does not depend on the block size.

    A stream is not safe to share between threads.
    """

    def __init__(self, seed: int, stream_id: int = 0):
        if seed < 0 or stream_id < 0:
            raise ValueError("seed and stream_id must be non-negative")
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,))
        self._gen = np.random.Generator(np.random.PCG64(ss))
        self._buf = []
        self._pos = 0

    def __repr__(self):
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id})"

    def uniform(self) -> float:
        if self._pos == len(self._buf):
            self._buf = self._gen.random(_BLOCK).tolist()
            self._pos = 0
        x = self._buf[self._pos]
        self._pos += 1
        return x

    def uniforms(self, n: int) -> list:
        return [self.uniform() for _ in range(n)]
