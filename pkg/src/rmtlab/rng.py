"""Seed-deterministic random streams.

Every sample is drawn from a Philox (counter-based) generator whose key is
derived from ``(master_seed, tag, n, rep)`` through numpy's ``SeedSequence``.
The tag is hashed with CRC-32 so the derivation does not depend on Python's
randomized ``hash``.  Identical paths give bit-identical draws on every
platform numpy supports.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass

import numpy as np

MASK64 = (1 << 64) - 1


def tag_hash(tag: str) -> int:
    return zlib.crc32(tag.encode("utf-8"))


@dataclass(frozen=True)
class RngStream:
    master_seed: int
    tag: str = ""
    n: int = 0
    rep: int = 0

    def __post_init__(self):
        if not 0 <= int(self.master_seed) <= MASK64:
            raise ValueError("master_seed must fit in 64 bits")

    def child(self, tag: str | None = None, n: int | None = None,
              rep: int | None = None) -> "RngStream":
        return RngStream(self.master_seed,
                         self.tag if tag is None else tag,
                         self.n if n is None else n,
                         self.rep if rep is None else rep)

    def seed_sequence(self) -> np.random.SeedSequence:
        return np.random.SeedSequence(
            entropy=int(self.master_seed),
            spawn_key=(tag_hash(self.tag), int(self.n), int(self.rep)))

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(self.seed_sequence()))


def as_generator(rng) -> np.random.Generator:
    """Accept an RngStream, a Generator or an int seed."""
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, (int, np.integer)):
        return RngStream(int(rng)).generator()
    raise TypeError(f"cannot build a generator from {type(rng).__name__}")
