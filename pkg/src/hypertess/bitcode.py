"""Packed sign codes and the normalized Hamming distance.

A code is m bits stored little-endian in 64-bit words: bit i of the code is
bit (i mod 64) of word (i // 64). Bits past position m-1 in the last word are
always zero, so two codes of equal length compare by XOR alone. Distances are
XOR plus popcount on the packed words.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import DimensionMismatchError

WORD_BITS = 64


def words_per_code(m: int) -> int:
    return (m + WORD_BITS - 1) // WORD_BITS


def pack_bit_rows(bits: np.ndarray) -> np.ndarray:
    """Pack rows of 0/1 values into little-endian uint64 words.

    bits: (count, m) array-like of bools or 0/1 ints.
    Returns (count, ceil(m/64)) uint64; trailing pad bits are zero.
    """
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.ndim != 2:
        raise ValueError(f"expected a 2-D bit array, got shape {bits.shape}")
    count, m = bits.shape
    nbytes = words_per_code(m) * 8
    packed = np.packbits(bits, axis=1, bitorder="little")
    if packed.shape[1] < nbytes:
        packed = np.pad(packed, [(0, 0), (0, nbytes - packed.shape[1])])
    return np.ascontiguousarray(packed).view("<u8")


def unpack_bit_rows(words: np.ndarray, m: int) -> np.ndarray:
    """Inverse of pack_bit_rows: (count, W) uint64 -> (count, m) uint8."""
    words = np.ascontiguousarray(words, dtype="<u8")
    bits = np.unpackbits(words.view(np.uint8), axis=1, bitorder="little")
    return bits[:, :m]


def popcount_rows(words: np.ndarray) -> np.ndarray:
    """Number of set bits per row of a 2-D uint64 array."""
    return np.bitwise_count(words).sum(axis=1, dtype=np.int64)


@dataclass(frozen=True, eq=False)
class BitCode:
    """Image of one point under the sign map: a packed m-bit vector.

    ``source_hash`` optionally records a digest of the generating matrix so
    codes from unrelated arrangements can be told apart.
    """

    m: int
    words: np.ndarray
    source_hash: int | None = None
    _bytes: bytes = field(init=False, repr=False)

    def __post_init__(self):
        words = np.ascontiguousarray(self.words, dtype="<u8").reshape(-1)
        if words.shape[0] != words_per_code(self.m):
            raise ValueError(
                f"code of length {self.m} needs {words_per_code(self.m)} words, "
                f"got {words.shape[0]}"
            )
        tail = self.m % WORD_BITS
        if tail and int(words[-1]) >> tail:
            raise ValueError("bits beyond position m-1 must be zero")
        words.setflags(write=False)
        object.__setattr__(self, "words", words)
        object.__setattr__(self, "_bytes", words.tobytes())

    @classmethod
    def from_bits(cls, bits, source_hash: int | None = None) -> "BitCode":
        bits = np.atleast_2d(np.asarray(bits, dtype=np.uint8))
        words = pack_bit_rows(bits)
        return cls(bits.shape[1], words[0], source_hash)

    def bit(self, i: int) -> int:
        if not 0 <= i < self.m:
            raise IndexError(f"bit index {i} out of range for m={self.m}")
        return int(self.words[i // WORD_BITS] >> np.uint64(i % WORD_BITS)) & 1

    def bits(self) -> np.ndarray:
        """Unpacked 0/1 vector of length m."""
        return unpack_bit_rows(self.words.reshape(1, -1), self.m)[0]

    def hex(self) -> str:
        """Lowercase hex of the packed little-endian byte stream."""
        return self._bytes.hex()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitCode)
            and self.m == other.m
            and self._bytes == other._bytes
        )

    def __hash__(self) -> int:
        return hash((self.m, self._bytes))


def hamming_bits(c1: BitCode, c2: BitCode) -> int:
    """Number of differing coordinates."""
    if c1.m != c2.m:
        raise DimensionMismatchError(f"code length mismatch: {c1.m} vs {c2.m}")
    return int(np.bitwise_count(c1.words ^ c2.words).sum())


def hamming(c1: BitCode, c2: BitCode) -> float:
    """Fraction of coordinates where the two codes differ, in [0, 1]."""
    return hamming_bits(c1, c2) / c1.m


def codes_to_words(codes) -> np.ndarray:
    """Stack a sequence of equal-length BitCodes into a (count, W) word matrix."""
    codes = list(codes)
    if not codes:
        return np.zeros((0, 0), dtype="<u8")
    m = codes[0].m
    for k, c in enumerate(codes):
        if c.m != m:
            raise DimensionMismatchError(f"code {k} has length {c.m}, expected {m}")
    return np.stack([c.words for c in codes])


def words_to_codes(words: np.ndarray, m: int, source_hash: int | None = None):
    """Split a (count, W) word matrix into BitCodes of length m."""
    words = np.ascontiguousarray(words, dtype="<u8")
    return [BitCode(m, row, source_hash) for row in words]


def pairwise_hamming(words: np.ndarray, pairs: np.ndarray, m: int) -> np.ndarray:
    """Normalized Hamming distance for index pairs into a packed word matrix."""
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    out = np.empty(pairs.shape[0], dtype=np.float64)
    # chunked so P x W xor buffers stay small
    step = max(1, (1 << 22) // max(1, words.shape[1]))
    for lo in range(0, pairs.shape[0], step):
        sel = pairs[lo : lo + step]
        x = words[sel[:, 0]] ^ words[sel[:, 1]]
        out[lo : lo + step] = popcount_rows(x) / m
    return out


def hamming_matrix(w1: np.ndarray, w2: np.ndarray | None = None, m: int | None = None) -> np.ndarray:
    """All-pairs normalized Hamming distances between two packed code sets."""
    if w2 is None:
        w2 = w1
    if m is None:
        raise ValueError("m (code length in bits) is required")
    out = np.empty((w1.shape[0], w2.shape[0]), dtype=np.float64)
    for i in range(w1.shape[0]):
        out[i] = np.bitwise_count(w1[i] ^ w2).sum(axis=1) / m
    return out
