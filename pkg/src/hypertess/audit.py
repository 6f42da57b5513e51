"""Empirical verification engine for tessellation quality.

Audits compare the embedded (hard or soft) Hamming distance against the
normalized geodesic distance over sampled pairs, analyze cell diameters and
the adjacency structure of observed cells, and measure the l1-embedding,
tail-control and continuity statistics that back those guarantees.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .bitcode import BitCode, codes_to_words, pairwise_hamming, popcount_rows
from .embedding import _threshold, embed_words, soft_hamming, soft_mismatch
from .exceptions import (
    ContinuityPreconditionError,
    DimensionMismatchError,
    EmptyInputError,
)
from .geometry import geodesic_rows
from .rng import GaussianMatrix, Seed
from .validation import as_matrix, as_vector, unit_rows

_PAIR_CHUNK = 2048


@dataclass(frozen=True)
class PairSample:
    """One audited pair: indices, endpoints and their distances."""

    i: int
    j: int
    d_geo: float
    d_ham: float
    d_soft: float | None = None
    x: np.ndarray | None = None
    y: np.ndarray | None = None


@dataclass(frozen=True)
class AuditReport:
    """Outcome of a uniformity (or affine) audit over sampled pairs.

    ``passed`` is None unless the caller supplied an explicit bound; the
    library never invents one.
    """

    kind: str
    m: int
    n: int
    seed: Seed | None
    t: float
    pairs_evaluated: int
    delta_max: float
    mean_abs_error: float
    theorem_bound: float | None
    passed: bool | None
    worst_pairs: list[PairSample] = field(default_factory=list)
    renormalized: int = 0
    lam: float | None = None
    lift_height: float | None = None
    # measured constants of the lift's geodesic-vs-Euclidean control (affine only)
    c0_empirical: float | None = None
    c1_empirical: float | None = None


def all_pairs(n_points: int) -> np.ndarray:
    """All unordered index pairs (i < j) as an (n*(n-1)/2, 2) array."""
    i, j = np.triu_indices(n_points, k=1)
    return np.column_stack([i, j]).astype(np.int64)


def _rows_from_linear(k: np.ndarray, n: int) -> np.ndarray:
    # invert k = offset(i) + (j - i - 1), offset(i) = i*(2n-i-1)/2
    b = 2.0 * n - 1.0
    i = np.floor((b - np.sqrt(b * b - 8.0 * k)) / 2.0).astype(np.int64)
    i = np.clip(i, 0, n - 2)
    for _ in range(2):  # fp boundary fix-up
        off = i * (2 * n - i - 1) // 2
        i = np.where(k < off, i - 1, i)
        off_next = (i + 1) * (2 * n - i - 2) // 2
        i = np.where(k >= off_next, i + 1, i)
    off = i * (2 * n - i - 1) // 2
    j = k - off + i + 1
    return np.column_stack([i, j])


def select_pairs(points, max_pairs: int | None = None, seed: Seed | None = None) -> np.ndarray:
    """Pair-selection policy for audits.

    All pairs when the set is small enough; otherwise a seeded uniform
    subsample topped up with every nearest-neighbour pair, since near pairs
    stress the small-distance regime where discontinuity bites.
    """
    points = as_matrix(points, "points")
    n = points.shape[0]
    if n < 2:
        raise EmptyInputError("need at least two points to form pairs")
    total = n * (n - 1) // 2
    if max_pairs is None:
        if n <= 1000:
            return all_pairs(n)
        raise ValueError("for more than 1000 points, pass max_pairs (and a seed)")
    if total <= max_pairs:
        return all_pairs(n)
    if seed is None:
        raise ValueError("subsampling pairs requires a seed")
    k = seed.generator().choice(total, size=max_pairs, replace=False)
    sampled = _rows_from_linear(np.sort(k), n)

    # nearest neighbour of every point, in Euclidean metric
    nn = np.empty(n, dtype=np.int64)
    step = max(1, (1 << 22) // n)
    sq = np.sum(points**2, axis=1)
    for lo in range(0, n, step):
        block = points[lo : lo + step]
        d2 = sq[lo : lo + step, None] - 2.0 * block @ points.T + sq[None, :]
        np.fill_diagonal(d2[:, lo : lo + step], np.inf)
        nn[lo : lo + step] = np.argmin(d2, axis=1)
    nn_pairs = np.column_stack([np.arange(n), nn])
    nn_pairs = np.column_stack([nn_pairs.min(axis=1), nn_pairs.max(axis=1)])

    combined = np.vstack([sampled, nn_pairs])
    return np.unique(combined, axis=0)


def audit_uniformity(
    A: GaussianMatrix,
    points,
    pairs: np.ndarray | None = None,
    t: float = 0.0,
    bound: float | None = None,
    worst_k: int = 32,
    threads: int = 1,
) -> AuditReport:
    """Compare embedded distance against geodesic distance over pairs.

    With t = 0 the hard path is used: distances come from stored sign codes
    alone (XOR + popcount), so the audit is exactly reproducible from a code
    file. With t != 0 the soft distance is recomputed from inner products.
    """
    points, renormalized = unit_rows(points)
    if points.shape[0] == 0:
        raise EmptyInputError("no points to audit")
    if points.shape[1] != A.n:
        raise DimensionMismatchError(
            f"points have dimension {points.shape[1]}, arrangement expects {A.n}"
        )
    if pairs is None:
        pairs = select_pairs(points)
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    if pairs.shape[0] == 0:
        raise EmptyInputError("empty pair list")
    t = _threshold(t)

    d_geo = geodesic_rows(points[pairs[:, 0]], points[pairs[:, 1]])
    words = embed_words(A, points, threads=threads)
    d_hard = pairwise_hamming(words, pairs, A.m)
    if t == 0.0:
        d_emb = d_hard
    else:
        U = points @ A.entries.T
        d_emb = np.empty(pairs.shape[0])
        for lo in range(0, pairs.shape[0], _PAIR_CHUNK):
            sel = pairs[lo : lo + _PAIR_CHUNK]
            ev = soft_mismatch(U[sel[:, 0]], U[sel[:, 1]], t)
            d_emb[lo : lo + _PAIR_CHUNK] = ev.mean(axis=1)

    err = np.abs(d_emb - d_geo)
    order = np.argsort(-err)[:worst_k]
    worst = [
        PairSample(
            i=int(pairs[k, 0]),
            j=int(pairs[k, 1]),
            d_geo=float(d_geo[k]),
            d_ham=float(d_hard[k]),
            d_soft=None if t == 0.0 else float(d_emb[k]),
            x=points[pairs[k, 0]].copy(),
            y=points[pairs[k, 1]].copy(),
        )
        for k in order
    ]
    delta_max = float(err.max())
    return AuditReport(
        kind="uniformity",
        m=A.m,
        n=A.n,
        seed=A.seed,
        t=t,
        pairs_evaluated=int(pairs.shape[0]),
        delta_max=delta_max,
        mean_abs_error=float(err.mean()),
        theorem_bound=bound,
        passed=None if bound is None else bool(delta_max <= bound),
        worst_pairs=worst,
        renormalized=renormalized,
    )


@dataclass(frozen=True)
class CellReport:
    """Occupancy and diameter statistics of the observed cells."""

    cell_count: int
    occupancy: dict[int, int]
    max_diameter_geodesic: float
    max_diameter_euclidean: float
    offending_code: BitCode | None
    groups: dict[BitCode, np.ndarray]


def cell_analysis(codes, points) -> CellReport:
    """Group points by identical code and measure intra-cell diameters."""
    codes = list(codes)
    if len(codes) == 0:
        return CellReport(0, {}, 0.0, 0.0, None, {})
    points, _ = unit_rows(points)
    if len(codes) != points.shape[0]:
        raise DimensionMismatchError(
            f"{len(codes)} codes vs {points.shape[0]} points"
        )
    groups: dict[BitCode, list[int]] = {}
    for idx, code in enumerate(codes):
        groups.setdefault(code, []).append(idx)
    frozen = {c: np.asarray(v, dtype=np.int64) for c, v in groups.items()}

    occupancy: dict[int, int] = {}
    for members in frozen.values():
        occupancy[len(members)] = occupancy.get(len(members), 0) + 1

    max_geo = 0.0
    max_euc = 0.0
    offender = None
    for code, members in frozen.items():
        if len(members) < 2:
            continue
        P = points[members]
        gram = np.clip(P @ P.T, -1.0, 1.0)
        geo = float(np.arccos(np.min(gram)) / np.pi)
        diffs = P[:, None, :] - P[None, :, :]
        euc = float(np.sqrt((diffs**2).sum(axis=2).max()))
        if euc > max_euc:
            max_euc = euc
            offender = code
        max_geo = max(max_geo, geo)

    return CellReport(
        cell_count=len(frozen),
        occupancy=occupancy,
        max_diameter_geodesic=max_geo,
        max_diameter_euclidean=max_euc,
        offending_code=offender,
        groups=frozen,
    )


class PairDistances(NamedTuple):
    cube: int
    graph: int | None
    exceeds: bool


class TessellationGraph:
    """Graph of observed cells: one node per distinct code, edges between
    codes differing in exactly one bit. Graph distances are computed lazily
    per query (all-pairs BFS is opt-in by calling repeatedly)."""

    def __init__(self, codes, points=None):
        codes = list(codes)
        if points is not None:
            points = as_matrix(points, "points")
            if len(codes) != points.shape[0]:
                raise DimensionMismatchError(
                    f"{len(codes)} codes vs {points.shape[0]} points"
                )
        seen: dict[BitCode, int] = {}
        representatives: list[list[int]] = []
        for idx, code in enumerate(codes):
            node = seen.setdefault(code, len(representatives))
            if node == len(representatives):
                representatives.append([idx])
            else:
                representatives[node].append(idx)
        self.nodes: list[BitCode] = list(seen)
        self.representatives = [np.asarray(r, dtype=np.int64) for r in representatives]
        self.m = self.nodes[0].m if self.nodes else 0

        words = codes_to_words(self.nodes) if self.nodes else np.zeros((0, 0), "<u8")
        self._words = words
        self.adjacency: list[np.ndarray] = []
        for u in range(len(self.nodes)):
            diff = popcount_rows(words ^ words[u])
            self.adjacency.append(np.flatnonzero(diff == 1).astype(np.int64))

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for u, nbrs in enumerate(self.adjacency):
            out.extend((u, int(v)) for v in nbrs if u < v)
        return out

    def cube_distance(self, u: int, v: int) -> int:
        """Hamming-cube distance in bits between two node codes."""
        return int(np.bitwise_count(self._words[u] ^ self._words[v]).sum())

    def bfs_distance(self, u: int, v: int) -> int | None:
        """Hop count in the cell graph, or None if disconnected."""
        if u == v:
            return 0
        dist = {u: 0}
        queue = deque([u])
        while queue:
            cur = queue.popleft()
            for nxt in self.adjacency[cur]:
                nxt = int(nxt)
                if nxt in dist:
                    continue
                dist[nxt] = dist[cur] + 1
                if nxt == v:
                    return dist[nxt]
                queue.append(nxt)
        return None

    def pair_check(self, u: int, v: int) -> PairDistances:
        """Cube vs graph distance; flags pairs whose connecting cells were
        not all observed (graph distance exceeds cube distance)."""
        cube = self.cube_distance(u, v)
        graph = self.bfs_distance(u, v)
        return PairDistances(cube, graph, graph is None or graph > cube)


def build_tessellation_graph(codes, points=None) -> TessellationGraph:
    return TessellationGraph(codes, points)


class L1Stat(NamedTuple):
    z: float
    pair_defect: float


def l1_embedding_stat(A: GaussianMatrix, points, pairs: np.ndarray | None = None) -> L1Stat:
    """Worst-case l1 concentration defect over points and pairs.

    z measures how far (1/m)||Ax||_1 strays from sqrt(2/pi)||x||_2; the pair
    defect applies the rescaled map (1/m)sqrt(pi/2) A to differences and
    compares against Euclidean distance.
    """
    points = as_matrix(points, "points")
    if points.shape[0] == 0:
        raise EmptyInputError("no points")
    if points.shape[1] != A.n:
        raise DimensionMismatchError(
            f"points have dimension {points.shape[1]}, arrangement expects {A.n}"
        )
    U = points @ A.entries.T
    norms = np.linalg.norm(points, axis=1)
    z = float(np.abs(np.abs(U).mean(axis=1) - np.sqrt(2.0 / np.pi) * norms).max())

    if pairs is None:
        pairs = all_pairs(points.shape[0]) if points.shape[0] > 1 else np.zeros((0, 2), np.int64)
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    defect = 0.0
    scale = np.sqrt(np.pi / 2.0) / A.m
    for lo in range(0, pairs.shape[0], _PAIR_CHUNK):
        sel = pairs[lo : lo + _PAIR_CHUNK]
        l1 = np.abs(U[sel[:, 0]] - U[sel[:, 1]]).sum(axis=1) * scale
        euc = np.linalg.norm(points[sel[:, 0]] - points[sel[:, 1]], axis=1)
        defect = max(defect, float(np.abs(l1 - euc).max()))
    return L1Stat(z=z, pair_defect=defect)


def tail_stat(A: GaussianMatrix, tails) -> float:
    """Largest mean absolute inner product between rows of A and any tail."""
    tails = as_matrix(tails, "tails")
    if tails.shape[0] == 0:
        raise EmptyInputError("no tails")
    if tails.shape[1] != A.n:
        raise DimensionMismatchError(
            f"tails have dimension {tails.shape[1]}, arrangement expects {A.n}"
        )
    return float(np.abs(tails @ A.entries.T).mean(axis=1).max())


def l1_continuity_check(
    A: GaussianMatrix,
    x,
    y,
    x_pert,
    y_pert,
    t: float,
    epsilon: float,
    M: float,
) -> bool:
    """Check the two-sided continuity sandwich under l1-bounded perturbations.

    Requires ||A x'||_1 <= eps*m and ||A y'||_1 <= eps*m (verified here;
    violations raise ContinuityPreconditionError, distinct from an inequality
    failure which returns False).
    """
    if M < 1:
        raise ValueError(f"M must be at least 1, got {M}")
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    x, y = as_vector(x, "x"), as_vector(y, "y")
    xp, yp = as_vector(x_pert, "x_pert"), as_vector(y_pert, "y_pert")
    for name, v in (("x", x), ("y", y), ("x_pert", xp), ("y_pert", yp)):
        if v.shape[0] != A.n:
            raise DimensionMismatchError(
                f"{name} has dimension {v.shape[0]}, arrangement expects {A.n}"
            )
    budget = epsilon * A.m
    for name, v in (("x_pert", xp), ("y_pert", yp)):
        l1 = float(np.abs(A.entries @ v).sum())
        if l1 > budget:
            raise ContinuityPreconditionError(
                f"||A {name}||_1 = {l1:.6g} exceeds eps*m = {budget:.6g}"
            )
    slack = 2.0 / M
    d_mid = soft_hamming(A, x + xp, y + yp, t)
    upper = soft_hamming(A, x, y, t - M * epsilon) + slack
    lower = soft_hamming(A, x, y, t + M * epsilon) - slack
    return bool(lower <= d_mid <= upper)


class MidpointDiagnostic(NamedTuple):
    same_cell: bool
    midpoint_norm: float
    l1_identity_gap: float | None


def midpoint_diagnostic(A: GaussianMatrix, x, y) -> MidpointDiagnostic:
    """Diagnostics for the same-cell midpoint: when the sign codes of x and y
    agree, |<a_i, (x+y)/2>| must equal the average of |<a_i, x>| and
    |<a_i, y>| for every row; the gap reports the worst deviation."""
    from .validation import unit_vector

    x = unit_vector(x, name="x")
    y = unit_vector(y, name="y")
    for name, v in (("x", x), ("y", y)):
        if v.shape[0] != A.n:
            raise DimensionMismatchError(
                f"{name} has dimension {v.shape[0]}, arrangement expects {A.n}"
            )
    u = A.entries @ x
    v = A.entries @ y
    same_cell = bool(np.all((u >= 0.0) == (v >= 0.0)))
    z = 0.5 * (x + y)
    norm = float(np.linalg.norm(z))
    gap = None
    if same_cell:
        w = A.entries @ z
        gap = float(np.abs(np.abs(w) - 0.5 * (np.abs(u) + np.abs(v))).max())
    return MidpointDiagnostic(same_cell, norm, gap)
