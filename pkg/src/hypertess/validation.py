"""Input validation helpers used by the library, the estimators and the CLI."""

from __future__ import annotations

import numpy as np

from .exceptions import DegenerateInputError, DimensionMismatchError

# Rows whose norm is farther than this from 1 get renormalized; the count of
# renormalized rows is surfaced in audit reports.
UNIT_NORM_TOL = 1e-9


def as_matrix(X, name: str = "X") -> np.ndarray:
    """Coerce to a 2-D C-contiguous float64 array with finite entries."""
    X = np.ascontiguousarray(np.asarray(X, dtype=np.float64))
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError(f"{name} contains non-finite values")
    return X


def as_vector(x, name: str = "x") -> np.ndarray:
    """Coerce to a 1-D float64 array with finite entries."""
    x = np.ascontiguousarray(np.asarray(x, dtype=np.float64))
    if x.ndim != 1:
        raise ValueError(f"{name} must be 1-D, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError(f"{name} contains non-finite values")
    return x


def check_length(got: int, expected: int, what: str) -> None:
    if got != expected:
        raise DimensionMismatchError(f"{what}: expected {expected}, got {got}")


def check_same_dim(x: np.ndarray, y: np.ndarray) -> None:
    if x.shape[-1] != y.shape[-1]:
        raise DimensionMismatchError(
            f"dimension mismatch: {x.shape[-1]} vs {y.shape[-1]}"
        )


def unit_rows(X, tol: float = UNIT_NORM_TOL, name: str = "points"):
    """Validate rows as unit vectors, renormalizing the out-of-tolerance ones.

    Returns (array, n_renormalized). Zero rows cannot be fixed and raise.
    """
    X = as_matrix(X, name)
    norms = np.linalg.norm(X, axis=1)
    if np.any(norms == 0.0):
        raise DegenerateInputError(f"{name} contains a zero vector")
    off = np.abs(norms - 1.0) > tol
    n_off = int(off.sum())
    if n_off:
        X = X.copy()
        X[off] /= norms[off, None]
    return X, n_off


def unit_vector(x, tol: float = UNIT_NORM_TOL, name: str = "x") -> np.ndarray:
    x = as_vector(x, name)
    norm = np.linalg.norm(x)
    if norm == 0.0:
        raise DegenerateInputError(f"{name} is the zero vector")
    if abs(norm - 1.0) > tol:
        return x / norm
    return x
