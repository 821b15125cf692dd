"""Named, reproducible random streams on top of numpy's SeedSequence."""

from __future__ import annotations

from dataclasses import dataclass
import zlib

import numpy as np


def _key(part: int | str) -> int:
    if isinstance(part, str):
        return zlib.crc32(part.encode("utf-8"))
    if part < 0:
        raise ValueError("stream keys must be non-negative")
    return int(part)


@dataclass(frozen=True)
class RngStream:
    """A seed plus a path of stream keys.

    Equal ``(seed, stream_id, path)`` always yields the same generator, so
    sub-streams can be handed to independent workers in any order.
    """

    seed: int
    stream_id: int = 0
    path: tuple[int, ...] = ()

    def child(self, *keys: int | str) -> RngStream:
        return RngStream(self.seed, self.stream_id, self.path + tuple(_key(k) for k in keys))

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence([self.seed & (2**64 - 1), self.stream_id & (2**64 - 1), *self.path])
        return np.random.Generator(np.random.PCG64(ss))


def as_generator(rng) -> np.random.Generator:
    """Accept an RngStream, a Generator or an int seed."""
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RngStream):
        return rng.generator()
    return np.random.default_rng(rng)
