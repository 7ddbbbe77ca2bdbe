"""Counter-based random streams.

The translation of cover n (1-based) uses draws (n-1)d .. nd-1 of a Philox
stream keyed by the seed, so any block of covers can be regenerated without
replaying the prefix.
"""
from __future__ import annotations

import numpy as np

from .errors import InvalidInputError, StreamExhaustedError

MAX_SEED = 2**64 - 1
# Philox4x64 emits four 64-bit words per counter step
_WORDS_PER_STEP = 4
# keep any single block below ~2^62 draws; the counter itself is 256-bit
MAX_INDEX = 2**62


def check_seed(seed) -> int:
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise InvalidInputError(f"seed must be an integer, got {seed!r}")
    seed = int(seed)
    if not 0 <= seed <= MAX_SEED:
        raise InvalidInputError(f"seed must fit in 64 bits, got {seed}")
    return seed


def philox_at(seed: int, position: int, stream: int = 0) -> np.random.Generator:
    """Generator positioned at the ``position``-th double of stream ``stream``."""
    bg = np.random.Philox(key=np.array([check_seed(seed), stream], dtype=np.uint64))
    steps, rem = divmod(position, _WORDS_PER_STEP)
    if steps:
        bg.advance(steps)
    gen = np.random.Generator(bg)
    if rem:
        gen.random(rem)
    return gen


class XiStream:
    """Uniform translations xi_1, xi_2, ... on T^d."""

    def __init__(self, seed: int, d: int):
        if d < 1:
            raise InvalidInputError("dimension must be positive")
        self.seed = check_seed(seed)
        self.d = int(d)

    def block(self, start: int, stop: int) -> np.ndarray:
        """xi_n for start <= n < stop as an array of shape (stop - start, d)."""
        if start < 1 or stop < start:
            raise InvalidInputError(f"bad index block [{start}, {stop})")
        if stop - 1 > MAX_INDEX:
            raise StreamExhaustedError(f"index {stop - 1} beyond stream capacity")
        count = stop - start
        if count == 0:
            return np.empty((0, self.d))
        gen = philox_at(self.seed, (start - 1) * self.d)
        return gen.random(count * self.d).reshape(count, self.d)

    def chunks(self, start: int, stop: int, size: int = 1 << 18):
        """Yield ``(first_index, xi_block)`` pairs covering [start, stop)."""
        gen = None
        n = start
        while n < stop:
            m = min(size, stop - n)
            if gen is None:
                if stop - 1 > MAX_INDEX:
                    raise StreamExhaustedError(f"index {stop - 1} beyond stream capacity")
                gen = philox_at(self.seed, (start - 1) * self.d)
            yield n, gen.random(m * self.d).reshape(m, self.d)
            n += m

    def xi(self, n: int) -> np.ndarray:
        return self.block(n, n + 1)[0]


def substreams(seed: int, count: int) -> list[np.random.Generator]:
    """Independent generators for Monte-Carlo workers (separate from the xi stream)."""
    ss = np.random.SeedSequence(check_seed(seed))
    return [np.random.Generator(np.random.Philox(s)) for s in ss.spawn(count)]
