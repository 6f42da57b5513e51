"""The sign map into packed bit codes plus hard and soft Hamming distances.

Sign convention: an inner product of exactly zero counts as +1, so bit i of a
code is 1 iff <a_i, x> >= 0. Tie events have probability zero under Gaussian
arrangements but the convention matters for crafted inputs and reproducibility.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bitcode import BitCode, pack_bit_rows, words_per_code, words_to_codes
from .exceptions import DimensionMismatchError
from .rng import GaussianMatrix
from .validation import as_matrix, as_vector

# Fixed embedding chunk height. Keeping it constant (rather than derived from
# the worker count) makes the emitted BLAS calls, and therefore every output
# bit, independent of the parallel schedule.
_CHUNK = 512


@dataclass(frozen=True)
class SoftParams:
    """Threshold for the soft Hamming distance; may be negative."""

    t: float

    def __post_init__(self):
        if not np.isfinite(self.t):
            raise ValueError(f"threshold must be finite, got {self.t}")


def _threshold(t) -> float:
    return float(t.t) if isinstance(t, SoftParams) else float(t)


def _check_point(A: GaussianMatrix, x, name: str = "x") -> np.ndarray:
    x = as_vector(x, name)
    if x.shape[0] != A.n:
        raise DimensionMismatchError(
            f"{name} has dimension {x.shape[0]}, arrangement expects {A.n}"
        )
    return x


def embed_words(A: GaussianMatrix, X: np.ndarray, threads: int = 1) -> np.ndarray:
    """Sign-embed rows of X against A, returning packed (N, W) uint64 codes."""
    X = as_matrix(X, "points")
    if X.shape[0] and X.shape[1] != A.n:
        raise DimensionMismatchError(
            f"points have dimension {X.shape[1]}, arrangement expects {A.n}"
        )
    n_points = X.shape[0]
    out = np.zeros((n_points, words_per_code(A.m)), dtype="<u8")
    if n_points == 0:
        return out

    def run(lo: int) -> None:
        block = X[lo : lo + _CHUNK]
        bits = block @ A.entries.T >= 0.0
        out[lo : lo + _CHUNK] = pack_bit_rows(bits)

    starts = range(0, n_points, _CHUNK)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(run, starts))
    else:
        for lo in starts:
            run(lo)
    return out


def sign_embed(A: GaussianMatrix, x) -> BitCode:
    """Code of one point: bit i is 1 iff <a_i, x> >= 0."""
    x = _check_point(A, x)
    words = embed_words(A, x.reshape(1, -1))
    return BitCode(A.m, words[0], A.content_hash())


def batch_embed(A: GaussianMatrix, points, threads: int = 1) -> list[BitCode]:
    """Element-wise sign_embed, order preserved, schedule-independent.

    Accepts a 2-D array or a list of vectors; a dimension mismatch aborts
    with the index of the offending point.
    """
    if isinstance(points, np.ndarray) and points.ndim == 2:
        rows = points
        if rows.shape[0] and rows.shape[1] != A.n:
            raise DimensionMismatchError(
                f"point 0 has dimension {rows.shape[1]}, arrangement expects {A.n}"
            )
    else:
        vecs = [as_vector(p, f"point {k}") for k, p in enumerate(points)]
        for k, v in enumerate(vecs):
            if v.shape[0] != A.n:
                raise DimensionMismatchError(
                    f"point {k} has dimension {v.shape[0]}, arrangement expects {A.n}"
                )
        rows = np.stack(vecs) if vecs else np.zeros((0, A.n))
    words = embed_words(A, rows, threads=threads)
    return words_to_codes(words, A.m, A.content_hash())


def separation_fraction(A: GaussianMatrix, x, y) -> float:
    """Fraction of hyperplanes separating x and y (the hard distance).

    Defined as the Hamming distance between the two sign codes, so it agrees
    exactly with the embed-then-compare path.
    """
    from .bitcode import hamming

    return hamming(sign_embed(A, x), sign_embed(A, y))


def soft_mismatch(u: np.ndarray, v: np.ndarray, t: float) -> np.ndarray:
    """Per-hyperplane soft separation events from precomputed products."""
    return ((u > t) & (v < -t)) | ((-u > t) & (-v < -t))


def soft_hamming(A: GaussianMatrix, x, y, t) -> float:
    """Fraction of hyperplanes separating x and y with margin t.

    Positive t counts only well-separating hyperplanes, negative t also the
    nearly separating ones. Strict inequalities throughout, so the t=0 value
    can differ from the hard distance on measure-zero boundary inputs.
    """
    x = _check_point(A, x, "x")
    y = _check_point(A, y, "y")
    t = _threshold(t)
    u = A.entries @ x
    v = A.entries @ y
    return float(np.mean(soft_mismatch(u, v, t)))
