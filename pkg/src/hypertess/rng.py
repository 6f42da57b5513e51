"""Deterministic, seed-addressable Gaussian sampling.

Every random object in the library is a pure function of a (value, stream_id)
seed pair. Streams are backed by the Philox counter-based bit generator keyed
on exactly that pair, so distinct stream ids give statistically independent
streams and sub-ranges of work can be handed to workers without coordination:
``Seed.block(k)`` jumps to the k-th disjoint counter window of a stream.

Normal variates come from numpy's ziggurat sampler on top of Philox. That
fixes the byte stream for a given numpy version; portability across versions
is provided by serializing matrices (the HPM1 format), not by freezing the
sampler.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidDimensionError

_U64 = 2**64


@dataclass(frozen=True)
class Seed:
    """A (value, stream_id) pair addressing one independent random stream."""

    value: int
    stream_id: int = 0

    def __post_init__(self):
        for name in ("value", "stream_id"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or not 0 <= int(v) < _U64:
                raise ValueError(f"{name} must be an unsigned 64-bit integer, got {v!r}")

    def stream(self, stream_id: int) -> "Seed":
        """Same base value, different independent stream."""
        return Seed(self.value, stream_id)

    def _key(self) -> np.ndarray:
        return np.array([self.value, self.stream_id], dtype=np.uint64)

    def generator(self) -> np.random.Generator:
        """Fresh generator positioned at the start of this stream."""
        return np.random.Generator(np.random.Philox(key=self._key()))

    def block(self, index: int) -> np.random.Generator:
        """Generator for the index-th disjoint counter block of this stream.

        Blocks are 2**128 draws apart, so per-point or per-trial work can be
        scheduled in any order on any number of workers without overlap.
        """
        if index < 0:
            raise ValueError("block index must be nonnegative")
        counter = np.array([0, 0, index % _U64, index // _U64], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(counter=counter, key=self._key()))


@dataclass(frozen=True, eq=False)
class GaussianMatrix:
    """An m-by-n matrix of i.i.d. standard normals, the hyperplane arrangement.

    Row i is the normal of the i-th hyperplane. The array is frozen read-only;
    ``seed`` records how to regenerate it (None for crafted matrices).
    """

    entries: np.ndarray
    seed: Seed | None = None

    def __post_init__(self):
        entries = np.ascontiguousarray(np.asarray(self.entries, dtype=np.float64))
        if entries.ndim != 2 or entries.shape[0] < 1 or entries.shape[1] < 1:
            raise InvalidDimensionError(
                f"matrix must be 2-D with m >= 1 and n >= 1, got shape {entries.shape}"
            )
        if not np.all(np.isfinite(entries)):
            raise ValueError("matrix entries must be finite")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def m(self) -> int:
        return self.entries.shape[0]

    @property
    def n(self) -> int:
        return self.entries.shape[1]

    def row(self, i: int) -> np.ndarray:
        return self.entries[i]

    def content_hash(self) -> int:
        """64-bit digest of the shape and raw entry bytes."""
        h = hashlib.blake2b(digest_size=8)
        h.update(np.array(self.entries.shape, dtype="<u8").tobytes())
        h.update(self.entries.astype("<f8", copy=False).tobytes())
        return int.from_bytes(h.digest(), "little")


def gaussian_matrix(seed: Seed, m: int, n: int) -> GaussianMatrix:
    """Draw the m-by-n standard normal matrix addressed by ``seed``."""
    if m < 1 or n < 1:
        raise InvalidDimensionError(f"need m >= 1 and n >= 1, got m={m}, n={n}")
    entries = seed.generator().standard_normal((m, n))
    return GaussianMatrix(entries, seed)


def gaussian_vector(seed: Seed, n: int) -> np.ndarray:
    """Draw a length-n standard normal vector addressed by ``seed``."""
    if n < 1:
        raise InvalidDimensionError(f"need n >= 1, got n={n}")
    return seed.generator().standard_normal(n)


def as_seed(seed) -> Seed:
    """Accept a Seed, an int, or a (value, stream_id) pair."""
    if isinstance(seed, Seed):
        return seed
    if isinstance(seed, (int, np.integer)):
        return Seed(int(seed))
    if isinstance(seed, (tuple, list)) and len(seed) == 2:
        return Seed(int(seed[0]), int(seed[1]))
    raise TypeError(f"cannot interpret {seed!r} as a Seed")
