"""Spherical and Euclidean metric primitives plus greedy epsilon-nets.

The geodesic distance is normalized so antipodal points are at distance 1.
Inner products are clamped into [-1, 1] before arccos so nearly-parallel unit
vectors never produce NaN.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateInputError, EmptyInputError, NotCoveredError
from .validation import as_matrix, as_vector, check_same_dim


def euclidean(x, y) -> float:
    """l2 distance between two vectors of equal dimension."""
    x, y = as_vector(x), as_vector(y)
    check_same_dim(x, y)
    return float(np.linalg.norm(x - y))


def geodesic(x, y) -> float:
    """Normalized geodesic distance on the unit sphere, in [0, 1].

    Bitwise-equal (or exactly antipodal) inputs return exactly 0 (or 1), so
    the endpoint identities hold despite rounding in the inner product.
    """
    x, y = as_vector(x), as_vector(y)
    check_same_dim(x, y)
    if np.array_equal(x, y):
        return 0.0
    if np.array_equal(x, -y):
        return 1.0
    c = min(1.0, max(-1.0, float(np.dot(x, y))))
    return math.acos(c) / math.pi


def geodesic_rows(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Row-wise normalized geodesic distance for two stacks of unit vectors."""
    c = np.clip(np.einsum("ij,ij->i", X, Y), -1.0, 1.0)
    d = np.arccos(c) / np.pi
    d[np.all(X == Y, axis=1)] = 0.0
    d[np.all(X == -Y, axis=1)] = 1.0
    return d


def spherical_project(u) -> np.ndarray:
    """Radial projection u / ||u|| onto the unit sphere.

    Inputs whose norm is exactly 1.0 pass through unchanged, so projection is
    idempotent on the sphere.
    """
    u = as_vector(u, "u")
    norm = np.linalg.norm(u)
    if norm == 0.0:
        raise DegenerateInputError("cannot project the zero vector")
    if norm == 1.0:
        return u.copy()
    return u / norm


@dataclass(frozen=True)
class EpsilonNet:
    """A greedy Euclidean covering of a point set.

    centers: (C, n) rows, pairwise more than epsilon apart (separation);
    assignment: for each input point, the index of its nearest center, which
    is within epsilon of it (covering); center_indices: which input points
    were admitted as centers.
    """

    epsilon: float
    centers: np.ndarray
    assignment: np.ndarray
    center_indices: np.ndarray

    @property
    def size(self) -> int:
        return self.centers.shape[0]

    def sudakov_ratio(self, width: float) -> float:
        """log(net size) divided by eps^-2 * width^2, reported not asserted."""
        if self.size < 2 or width <= 0:
            return 0.0
        return math.log(self.size) * self.epsilon**2 / width**2


def build_epsilon_net(points, epsilon: float) -> EpsilonNet:
    """Single-pass greedy net: scan in input order, admit a point as a new
    center iff it is farther than epsilon (Euclidean) from every existing
    center. Deterministic in the input order by design.
    """
    points = as_matrix(points, "points")
    if points.shape[0] == 0:
        raise EmptyInputError("cannot build a net from an empty point set")
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")

    center_rows: list[int] = []
    for k in range(points.shape[0]):
        if not center_rows:
            center_rows.append(k)
            continue
        d = np.linalg.norm(points[center_rows] - points[k], axis=1)
        if np.all(d > epsilon):
            center_rows.append(k)
    centers = points[center_rows].copy()

    # nearest-center assignment over the finished net
    assignment = np.empty(points.shape[0], dtype=np.int64)
    step = max(1, (1 << 22) // max(1, centers.shape[0]))
    for lo in range(0, points.shape[0], step):
        block = points[lo : lo + step]
        d2 = (
            np.sum(block**2, axis=1)[:, None]
            - 2.0 * block @ centers.T
            + np.sum(centers**2, axis=1)[None, :]
        )
        assignment[lo : lo + step] = np.argmin(d2, axis=1)
    # argmin on squared forms can be off by rounding right at ties; distances
    # actually used for covering checks are recomputed exactly below
    for k in range(points.shape[0]):
        d = np.linalg.norm(centers[assignment[k]] - points[k])
        if d > epsilon:
            exact = np.linalg.norm(centers - points[k], axis=1)
            assignment[k] = int(np.argmin(exact))

    return EpsilonNet(
        epsilon=float(epsilon),
        centers=centers,
        assignment=assignment,
        center_indices=np.asarray(center_rows, dtype=np.int64),
    )


def decompose(x, net: EpsilonNet) -> tuple[np.ndarray, np.ndarray]:
    """Split x into its nearest net center and the tail x - center.

    The tail has norm at most epsilon (else NotCoveredError). Reconstruction
    center + tail returns x up to rounding of the subtraction (absolute error
    at most 2**-52 of the tail magnitude per component); it is exact whenever
    the difference is exactly representable, in particular when x is a center.
    """
    x = as_vector(x)
    check_same_dim(x, net.centers)
    d = np.linalg.norm(net.centers - x, axis=1)
    k = int(np.argmin(d))
    if d[k] > net.epsilon:
        raise NotCoveredError(
            f"point is {d[k]:.6g} from the nearest center, net epsilon is {net.epsilon:.6g}"
        )
    center = net.centers[k]
    return center.copy(), x - center
