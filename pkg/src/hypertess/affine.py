"""Affine hyperplane tessellations of bounded point clouds via lifting.

A diameter-1 cloud in R^n is placed on the sphere in R^(n+1) by appending a
height t and projecting radially. Linear hyperplanes upstairs then act as
affine hyperplanes downstairs (normal a_i, offset b_i = t * last coordinate
of the drawn normal), and the scaling factor lambda = pi * t converts the
separation fraction back into Euclidean distance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .audit import AuditReport, PairSample, all_pairs
from .bitcode import pack_bit_rows, pairwise_hamming
from .exceptions import (
    DegenerateInputError,
    DimensionMismatchError,
    NormalizationRequiredError,
)
from .geometry import geodesic_rows, spherical_project
from .rng import GaussianMatrix, Seed, gaussian_matrix
from .validation import as_matrix, as_vector

DIAMETER_TOL = 0.01  # accepted deviation of the input diameter from 1


@dataclass(frozen=True, eq=False)
class AffineArrangement:
    """m affine hyperplanes <a_i, x> + b_i = 0 plus the lifting metadata."""

    normals: np.ndarray
    offsets: np.ndarray
    lift_height: float
    lam: float
    base_point: np.ndarray | None = None
    seed: Seed | None = None

    def __post_init__(self):
        normals = np.ascontiguousarray(np.asarray(self.normals, dtype=np.float64))
        offsets = np.ascontiguousarray(np.asarray(self.offsets, dtype=np.float64))
        if normals.ndim != 2 or normals.shape[0] < 1:
            raise ValueError(f"normals must be (m, n) with m >= 1, got {normals.shape}")
        if offsets.shape != (normals.shape[0],):
            raise DimensionMismatchError(
                f"{normals.shape[0]} normals vs {offsets.shape[0]} offsets"
            )
        if self.lift_height < 2:
            raise ValueError(f"lift height must be at least 2, got {self.lift_height}")
        if self.lam != np.pi * self.lift_height:
            raise ValueError("lambda must equal pi times the lift height")
        normals.setflags(write=False)
        offsets.setflags(write=False)
        object.__setattr__(self, "normals", normals)
        object.__setattr__(self, "offsets", offsets)

    @property
    def m(self) -> int:
        return self.normals.shape[0]

    @property
    def n(self) -> int:
        return self.normals.shape[1]

    def generating_matrix(self) -> GaussianMatrix:
        """Regenerate the (m, n+1) Gaussian matrix this arrangement came from."""
        if self.seed is None:
            raise ValueError("arrangement has no seed to regenerate from")
        return gaussian_matrix(self.seed, self.m, self.n + 1)


def diameter(points: np.ndarray) -> float:
    """Exact max pairwise Euclidean distance, brute force."""
    points = as_matrix(points, "points")
    best = 0.0
    for i in range(points.shape[0] - 1):
        d = np.linalg.norm(points[i + 1 :] - points[i], axis=1)
        if d.size:
            best = max(best, float(d.max()))
    return best


def normalize_diameter(points) -> tuple[np.ndarray, float]:
    """Translate so the first point is the origin, rescale to diameter 1.

    Returns (scaled points, scale), where scale is the multiplier applied
    after translation.
    """
    points = as_matrix(points, "points")
    if points.shape[0] < 2:
        raise DegenerateInputError("need at least two points")
    shifted = points - points[0]
    diam = diameter(shifted)
    if diam == 0.0:
        raise DegenerateInputError("all points are identical: diameter is zero")
    scale = 1.0 / diam
    return shifted * scale, scale


def lift_point(x, t: float) -> np.ndarray:
    """Append height t and project onto the unit sphere in R^(n+1)."""
    if not t > 0:
        raise ValueError(f"lift height must be positive, got {t}")
    x = as_vector(x, "x")
    return spherical_project(np.concatenate([x, [t]]))


def lift_points(X, t: float) -> np.ndarray:
    if not t > 0:
        raise ValueError(f"lift height must be positive, got {t}")
    X = as_matrix(X, "points")
    lifted = np.concatenate([X, np.full((X.shape[0], 1), float(t))], axis=1)
    return lifted / np.linalg.norm(lifted, axis=1, keepdims=True)


def build_affine_arrangement(
    points, t: float, m: int, seed: Seed, base_point=None
) -> AffineArrangement:
    """Draw m affine hyperplanes whose lifted versions tessellate the cloud.

    The input must already be diameter-normalized (normalize_diameter); the
    drawn (m, n+1) Gaussian rows split into the first n coordinates (normals)
    and the last one times t (offsets).
    """
    points = as_matrix(points, "points")
    if t < 2:
        raise ValueError(f"lift height must be at least 2, got {t}")
    diam = diameter(points)
    if not (1.0 - DIAMETER_TOL) <= diam <= (1.0 + DIAMETER_TOL):
        raise NormalizationRequiredError(
            f"input diameter is {diam:.6g}; run normalize_diameter first"
        )
    n = points.shape[1]
    G = gaussian_matrix(seed, m, n + 1)
    normals = G.entries[:, :n].copy()
    offsets = G.entries[:, n] * float(t)
    return AffineArrangement(
        normals=normals,
        offsets=offsets,
        lift_height=float(t),
        lam=float(np.pi) * float(t),
        base_point=None if base_point is None else as_vector(base_point, "base_point"),
        seed=seed,
    )


def affine_words(arr: AffineArrangement, X) -> np.ndarray:
    """Packed sign codes of points against the affine arrangement."""
    X = as_matrix(X, "points")
    if X.shape[0] and X.shape[1] != arr.n:
        raise DimensionMismatchError(
            f"points have dimension {X.shape[1]}, arrangement expects {arr.n}"
        )
    bits = X @ arr.normals.T + arr.offsets >= 0.0
    return pack_bit_rows(bits)


def affine_separation_fraction(arr: AffineArrangement, x, y) -> float:
    """Fraction of affine hyperplanes separating x and y, sign(0) = +1."""
    x, y = as_vector(x, "x"), as_vector(y, "y")
    for name, v in (("x", x), ("y", y)):
        if v.shape[0] != arr.n:
            raise DimensionMismatchError(
                f"{name} has dimension {v.shape[0]}, arrangement expects {arr.n}"
            )
    sx = x @ arr.normals.T + arr.offsets >= 0.0
    sy = y @ arr.normals.T + arr.offsets >= 0.0
    return float(np.mean(sx != sy))


def audit_affine(
    arr: AffineArrangement,
    points,
    pairs: np.ndarray | None = None,
    bound: float | None = None,
    worst_k: int = 32,
) -> AuditReport:
    """Worst-case |lambda * d_A(x, y) - ||x - y||_2| over sampled pairs."""
    points = as_matrix(points, "points")
    if points.shape[1] != arr.n:
        raise DimensionMismatchError(
            f"points have dimension {points.shape[1]}, arrangement expects {arr.n}"
        )
    if pairs is None:
        pairs = all_pairs(points.shape[0])
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    if pairs.shape[0] == 0:
        raise DegenerateInputError("empty pair list")

    words = affine_words(arr, points)
    d_ham = pairwise_hamming(words, pairs, arr.m)
    euc = np.linalg.norm(points[pairs[:, 0]] - points[pairs[:, 1]], axis=1)
    err = np.abs(arr.lam * d_ham - euc)
    order = np.argsort(-err)[:worst_k]
    worst = [
        PairSample(
            i=int(pairs[k, 0]),
            j=int(pairs[k, 1]),
            d_geo=float(euc[k]),  # Euclidean target in the affine setting
            d_ham=float(d_ham[k]),
            x=points[pairs[k, 0]].copy(),
            y=points[pairs[k, 1]].copy(),
        )
        for k in order
    ]
    delta_max = float(err.max())
    return AuditReport(
        kind="affine",
        m=arr.m,
        n=arr.n,
        seed=arr.seed,
        t=0.0,
        pairs_evaluated=int(pairs.shape[0]),
        delta_max=delta_max,
        mean_abs_error=float(err.mean()),
        theorem_bound=bound,
        passed=None if bound is None else bool(delta_max <= bound),
        worst_pairs=worst,
        lam=arr.lam,
        lift_height=arr.lift_height,
    )
