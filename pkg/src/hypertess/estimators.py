"""Scikit-learn style transformers wrapping the sign-map embeddings.

Both estimators follow the fit/transform contract and plain-attribute
get_params, so they compose with pipelines and model selection. Transform
output is either packed uint64 code words (compact, use hamming_distances to
compare) or raw 0/1 bits.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .affine import affine_words, build_affine_arrangement, normalize_diameter
from .bitcode import hamming_matrix, unpack_bit_rows
from .embedding import embed_words
from .rng import Seed, gaussian_matrix
from .validation import as_matrix


def hamming_distances(codes_a, codes_b=None, n_bits: int | None = None) -> np.ndarray:
    """Normalized Hamming distance matrix between packed code arrays."""
    codes_a = np.ascontiguousarray(codes_a, dtype="<u8")
    if codes_b is not None:
        codes_b = np.ascontiguousarray(codes_b, dtype="<u8")
    if n_bits is None:
        raise ValueError("n_bits is required to normalize distances")
    return hamming_matrix(codes_a, codes_b, n_bits)


class SignRandomProjection(TransformerMixin, BaseEstimator):
    """Embed unit-scale data into the Hamming cube by random hyperplane signs.

    Each output bit records the side of one Gaussian hyperplane; the expected
    normalized Hamming distance between two transformed points equals their
    normalized angle, so the codes are a locality-sensitive sketch.
    """

    def __init__(self, n_hyperplanes: int = 256, seed: int = 0, stream_id: int = 0, pack: bool = True):
        self.n_hyperplanes = n_hyperplanes
        self.seed = seed
        self.stream_id = stream_id
        self.pack = pack

    def fit(self, X, y=None):
        X = as_matrix(X, "X")
        self.n_features_in_ = X.shape[1]
        self.matrix_ = gaussian_matrix(
            Seed(self.seed, self.stream_id), self.n_hyperplanes, self.n_features_in_
        )
        return self

    def _check_fitted(self):
        if not hasattr(self, "matrix_"):
            raise NotFittedError("call fit before transform")

    def transform(self, X) -> np.ndarray:
        self._check_fitted()
        X = as_matrix(X, "X")
        words = embed_words(self.matrix_, X)
        if self.pack:
            return words
        return unpack_bit_rows(words, self.n_hyperplanes)

    def pairwise_distances(self, codes_a, codes_b=None) -> np.ndarray:
        """Normalized Hamming distances between packed transform outputs."""
        self._check_fitted()
        return hamming_distances(codes_a, codes_b, n_bits=self.n_hyperplanes)


class AffineSignRandomProjection(TransformerMixin, BaseEstimator):
    """Hamming-cube embedding for bounded clouds in R^n via affine hyperplanes.

    fit learns the translation and scale that normalize the training cloud to
    diameter 1, then draws the lifted arrangement; estimate_distances converts
    code distances back to Euclidean estimates in the original coordinates.
    """

    def __init__(self, n_hyperplanes: int = 1024, lift_height: float = 4.0, seed: int = 0, stream_id: int = 0):
        self.n_hyperplanes = n_hyperplanes
        self.lift_height = lift_height
        self.seed = seed
        self.stream_id = stream_id

    def fit(self, X, y=None):
        X = as_matrix(X, "X")
        self.n_features_in_ = X.shape[1]
        self.base_point_ = X[0].copy()
        _, self.scale_ = normalize_diameter(X)
        normalized = (X - self.base_point_) * self.scale_
        self.arrangement_ = build_affine_arrangement(
            normalized,
            t=self.lift_height,
            m=self.n_hyperplanes,
            seed=Seed(self.seed, self.stream_id),
            base_point=self.base_point_,
        )
        return self

    def _check_fitted(self):
        if not hasattr(self, "arrangement_"):
            raise NotFittedError("call fit before transform")

    def transform(self, X) -> np.ndarray:
        self._check_fitted()
        X = as_matrix(X, "X")
        normalized = (X - self.base_point_) * self.scale_
        return affine_words(self.arrangement_, normalized)

    def estimate_distances(self, codes_a, codes_b=None) -> np.ndarray:
        """Euclidean distance estimates lambda * d_H / scale between codes."""
        self._check_fitted()
        d = hamming_distances(codes_a, codes_b, n_bits=self.n_hyperplanes)
        return self.arrangement_.lam * d / self.scale_
