"""Point-set families on the unit sphere with exact support oracles.

Each model carries a sampler and the exact value of sup over the set of
<g, x> for any direction g. Only families where that sup has a closed form
are included; audits of other sets should sample them into a FiniteSet.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionMismatchError, InsufficientTrialsError
from .rng import Seed
from .validation import as_vector, unit_rows

_BLOCK = 8192  # trials per counter block in Monte-Carlo loops


class SetModel:
    """Base class: a subset of the unit sphere with sampler and sup oracle."""

    name: str = "set"
    n: int = 0
    symmetric: bool = False  # whether the set equals its reflection -K

    def sample_many(self, count: int, seed: Seed) -> np.ndarray:
        raise NotImplementedError

    def sample(self, seed: Seed) -> np.ndarray:
        return self.sample_many(1, seed)[0]

    def sup_signed_rows(self, G: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _check_direction(self, g) -> np.ndarray:
        g = as_vector(g, "g")
        if g.shape[0] != self.n:
            raise DimensionMismatchError(
                f"direction has dimension {g.shape[0]}, model expects {self.n}"
            )
        return g

    def sup_signed(self, g) -> float:
        """Exact sup over the set of <g, x>."""
        g = self._check_direction(g)
        return float(self.sup_signed_rows(g.reshape(1, -1))[0])

    def sup_abs_rows(self, G: np.ndarray) -> np.ndarray:
        if self.symmetric:
            return self.sup_signed_rows(G)
        return np.maximum(self.sup_signed_rows(G), self.sup_signed_rows(-G))

    def sup_abs(self, g) -> float:
        """Exact sup over the set of |<g, x>|."""
        g = self._check_direction(g)
        return float(self.sup_abs_rows(g.reshape(1, -1))[0])


class Sphere(SetModel):
    """The whole unit sphere in dimension n."""

    symmetric = True

    def __init__(self, n: int):
        if n < 1:
            raise ValueError(f"need n >= 1, got {n}")
        self.n = int(n)
        self.name = f"sphere:n={n}"

    def sample_many(self, count, seed):
        g = seed.generator().standard_normal((count, self.n))
        norms = np.linalg.norm(g, axis=1, keepdims=True)
        norms[norms == 0.0] = 1.0
        return g / norms

    def sup_signed_rows(self, G):
        return np.linalg.norm(G, axis=1)


class FiniteSet(SetModel):
    """An explicit finite list of unit vectors."""

    def __init__(self, points):
        points, self.renormalized = unit_rows(points)
        if points.shape[0] == 0:
            raise ValueError("finite set needs at least one point")
        self.points = points
        self.n = points.shape[1]
        self.name = f"finite:k={points.shape[0]}"

    def sample_many(self, count, seed):
        idx = seed.generator().integers(0, self.points.shape[0], size=count)
        return self.points[idx]

    def sup_signed_rows(self, G):
        return (G @ self.points.T).max(axis=1)

    def sup_abs_rows(self, G):
        return np.abs(G @ self.points.T).max(axis=1)


class SparseSphere(SetModel):
    """Unit vectors with at most s nonzero coordinates."""

    symmetric = True

    def __init__(self, n: int, s: int):
        if not 1 <= s <= n:
            raise ValueError(f"need 1 <= s <= n, got s={s}, n={n}")
        self.n = int(n)
        self.s = int(s)
        self.name = f"sparse:n={n},s={s}"

    def sample_many(self, count, seed):
        rng = seed.generator()
        support = np.argsort(rng.random((count, self.n)), axis=1)[:, : self.s]
        vals = rng.standard_normal((count, self.s))
        norms = np.linalg.norm(vals, axis=1)
        while np.any(norms == 0.0):  # probability-zero guard
            redo = norms == 0.0
            vals[redo] = rng.standard_normal((int(redo.sum()), self.s))
            norms = np.linalg.norm(vals, axis=1)
        out = np.zeros((count, self.n))
        np.put_along_axis(out, support, vals / norms[:, None], axis=1)
        return out

    def sup_signed_rows(self, G):
        # sup over s-sparse unit x of <g, x> = l2 norm of the s largest |g_i|
        sq = np.partition(G * G, self.n - self.s, axis=1)[:, self.n - self.s :]
        return np.sqrt(sq.sum(axis=1))


def parse_model(spec: str) -> SetModel:
    """Parse a CLI model string: sphere:n=10 | finite:path=pts.csv | sparse:n=20,s=2."""
    kind, _, rest = spec.partition(":")
    args = {}
    if rest:
        for item in rest.split(","):
            key, _, val = item.partition("=")
            if not val:
                raise ValueError(f"bad model argument {item!r} in {spec!r}")
            args[key.strip()] = val.strip()
    try:
        if kind == "sphere":
            return Sphere(int(args["n"]))
        if kind == "sparse":
            return SparseSphere(int(args["n"]), int(args["s"]))
        if kind == "finite":
            from .formats import load_points

            return FiniteSet(load_points(args["path"]))
    except KeyError as exc:
        raise ValueError(f"model {spec!r} is missing argument {exc}") from None
    raise ValueError(f"unknown model kind {kind!r} (expected sphere, finite or sparse)")


@dataclass(frozen=True)
class MeanWidthEstimate:
    """Monte-Carlo estimate of the Gaussian mean width and friends.

    gaussian_width estimates E sup |<g, x>|; diff_width estimates the width
    of the difference set via E[sup <g, x> + sup <-g, y>]; spherical_width
    rescales by the mean Gaussian norm estimated in the same run.
    """

    gaussian_width: float
    std_error: float
    trials: int
    spherical_width: float
    diff_width: float
    mean_gauss_norm: float


def mean_width(model: SetModel, trials: int, seed: Seed) -> MeanWidthEstimate:
    """Estimate widths by averaging exact sup-oracle values over Gaussian draws.

    Trials are generated in fixed-size counter blocks of the seed's stream, so
    the estimate does not depend on how blocks are scheduled across workers.
    """
    if trials < 2:
        raise InsufficientTrialsError(f"need at least 2 trials, got {trials}")
    total = 0.0
    total_sq = 0.0
    total_diff = 0.0
    total_norm = 0.0
    for b, lo in enumerate(range(0, trials, _BLOCK)):
        count = min(_BLOCK, trials - lo)
        G = seed.block(b).standard_normal((count, model.n))
        w = model.sup_abs_rows(G)
        if model.symmetric:
            diff = 2.0 * model.sup_signed_rows(G)
        else:
            diff = model.sup_signed_rows(G) + model.sup_signed_rows(-G)
        total += float(w.sum())
        total_sq += float((w * w).sum())
        total_diff += float(diff.sum())
        total_norm += float(np.linalg.norm(G, axis=1).sum())
    mean = total / trials
    var = max(0.0, (total_sq - trials * mean * mean) / (trials - 1))
    mean_norm = total_norm / trials
    return MeanWidthEstimate(
        gaussian_width=mean,
        std_error=float(np.sqrt(var / trials)),
        trials=trials,
        spherical_width=mean / mean_norm,
        diff_width=total_diff / trials,
        mean_gauss_norm=mean_norm,
    )
