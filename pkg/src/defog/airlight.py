"""Atmospheric light estimation.

Candidate light-source points are the brightest fraction of the dark
channel. The clustered estimator groups candidate positions with K-means
and reads the light's location and color from the most populated cluster,
which keeps a handful of bright distractor pixels (headlights, white
walls) from hijacking the estimate. The baseline estimator picks the
single brightest candidate, the classic dark-channel recipe, and is kept
for comparison.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

DEFAULT_FRACTION = 0.001
DEFAULT_K = 5
KMEANS_MAX_ITER = 100


@dataclass
class CandidateSet:
    """Pixels with the highest dark-channel values.

    `points` is an (n, 2) int array of (row, col), ordered by descending
    dark value with row-major order breaking ties.
    """

    points: np.ndarray
    source_fraction: float


@dataclass
class ClusterSet:
    """K-means partition of candidate positions.

    `assignments[i]` is the cluster id of point i; `centroids` is (k, 2);
    `sizes` is (k,). A cluster left empty by the degenerate all-identical
    case keeps its last centroid and size 0. `objective_history` records
    the within-cluster sum of squares after each Lloyd iteration.
    """

    assignments: np.ndarray
    centroids: np.ndarray
    sizes: np.ndarray
    k: int
    objective: float
    cluster_costs: np.ndarray
    objective_history: list = field(default_factory=list)


@dataclass
class AirlightEstimate:
    """Atmospheric light color and image location.

    `brightness` is an RGB 3-vector in [0, 1]; the location is real-valued
    (a centroid for the clustered method, a pixel for the baseline).
    """

    brightness: np.ndarray
    location_row: float
    location_col: float
    method: str
    candidates: int
    k: int | None = None
    seed: int | None = None

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "brightness": [float(c) for c in self.brightness],
            "location": [float(self.location_row), float(self.location_col)],
            "candidates": int(self.candidates),
            "k": self.k,
            "seed": self.seed,
        }


def select_candidates(dark: np.ndarray, fraction: float = DEFAULT_FRACTION) -> CandidateSet:
    """Select the max(1, floor(fraction * H * W)) brightest dark-channel pixels.

    Ties are broken by row-major scan order (smaller linear index wins),
    so the result is fully deterministic.
    """
    if not 0.0 < fraction <= 1.0:
        raise ValueError("fraction must be in (0, 1]")
    h, w = dark.shape
    n = max(1, int(np.floor(fraction * h * w)))
    flat = dark.ravel()
    order = np.argsort(-flat, kind="stable")[:n]
    points = np.stack([order // w, order % w], axis=1).astype(np.int64)
    return CandidateSet(points=points, source_fraction=float(fraction))


def _kmeans_pp_init(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """k-means++ seeding: spread initial centroids by squared distance."""
    n = len(points)
    centroids = np.empty((k, 2), dtype=np.float64)
    centroids[0] = points[rng.integers(n)]
    d2 = ((points - centroids[0]) ** 2).sum(axis=1)
    for c in range(1, k):
        total = d2.sum()
        if total <= 0.0:
            idx = int(rng.integers(n))
        else:
            cum = np.cumsum(d2 / total)
            idx = min(int(np.searchsorted(cum, rng.random(), side="right")), n - 1)
        centroids[c] = points[idx]
        d2 = np.minimum(d2, ((points - centroids[c]) ** 2).sum(axis=1))
    return centroids


def kmeans_spatial(points: np.ndarray, k: int, seed: int = 0) -> ClusterSet:
    """Lloyd's K-means on (row, col) points, deterministic for a given seed.

    Initialization is k-means++ driven by numpy's seeded generator. The
    loop stops when assignments stop changing or after 100 iterations.
    An empty cluster is re-seeded with the point currently farthest from
    its own centroid (skipped when every distance is zero, which lets the
    all-identical-points case collapse into one cluster). The objective is
    non-increasing across iterations.
    """
    points = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    n = len(points)
    if n == 0:
        raise ValueError("kmeans_spatial requires a nonempty point list")
    if k < 1:
        raise ValueError("k must be >= 1")
    k = min(k, n)

    rng = np.random.default_rng(seed)
    centroids = _kmeans_pp_init(points, k, rng)
    assign = np.full(n, -1, dtype=np.int64)
    history: list[float] = []
    prev_obj = np.inf

    for _ in range(KMEANS_MAX_ITER):
        d2 = ((points[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        new_assign = d2.argmin(axis=1)

        dist_own = d2[np.arange(n), new_assign].copy()
        for c in range(k):
            if not np.any(new_assign == c):
                j = int(dist_own.argmax())
                if dist_own[j] <= 0.0:
                    continue
                new_assign[j] = c
                centroids[c] = points[j]
                dist_own[j] = 0.0

        for c in range(k):
            members = points[new_assign == c]
            if len(members):
                centroids[c] = members.mean(axis=0)

        obj = float(((points - centroids[new_assign]) ** 2).sum())
        assert obj <= prev_obj + 1e-9 * (1.0 + abs(prev_obj)), "k-means objective increased"
        history.append(obj)
        prev_obj = obj

        if np.array_equal(new_assign, assign):
            break
        assign = new_assign

    sizes = np.bincount(assign, minlength=k).astype(np.int64)
    costs = np.zeros(k, dtype=np.float64)
    per_point = ((points - centroids[assign]) ** 2).sum(axis=1)
    np.add.at(costs, assign, per_point)
    return ClusterSet(
        assignments=assign,
        centroids=centroids,
        sizes=sizes,
        k=k,
        objective=float(per_point.sum()),
        cluster_costs=costs,
        objective_history=history,
    )


def estimate_airlight_clustered(
    img: np.ndarray,
    dark: np.ndarray,
    fraction: float = DEFAULT_FRACTION,
    k: int = DEFAULT_K,
    seed: int = 0,
) -> AirlightEstimate:
    """Estimate atmospheric light from the most populated candidate cluster.

    Candidates are clustered on their (row, col) coordinates. The largest
    cluster wins (ties: smaller within-cluster cost, then lower cluster
    id); its member centroid gives the location and the per-channel mean
    of the original image at its members gives the brightness vector.
    """
    if img.shape[:2] != dark.shape:
        raise ValueError("image and dark channel dimensions differ")
    cand = select_candidates(dark, fraction)
    clusters = kmeans_spatial(cand.points, k, seed)

    best = min(
        range(clusters.k),
        key=lambda c: (-clusters.sizes[c], clusters.cluster_costs[c], c),
    )
    members = cand.points[clusters.assignments == best]
    location = members.mean(axis=0)
    brightness = img[members[:, 0], members[:, 1], :].mean(axis=0)
    return AirlightEstimate(
        brightness=brightness,
        location_row=float(location[0]),
        location_col=float(location[1]),
        method="clustered",
        candidates=len(cand.points),
        k=clusters.k,
        seed=seed,
    )


def estimate_airlight_baseline(
    img: np.ndarray,
    dark: np.ndarray,
    fraction: float = DEFAULT_FRACTION,
) -> AirlightEstimate:
    """Estimate atmospheric light as the brightest candidate pixel.

    Brightness here is the channel mean (r+g+b)/3 in the original image;
    ties go to the smaller row-major index.
    """
    if img.shape[:2] != dark.shape:
        raise ValueError("image and dark channel dimensions differ")
    cand = select_candidates(dark, fraction)
    pts = cand.points
    w = img.shape[1]
    intensity = img[pts[:, 0], pts[:, 1], :].mean(axis=1)
    best_val = intensity.max()
    tied = np.flatnonzero(intensity == best_val)
    lin = pts[tied, 0] * w + pts[tied, 1]
    pick = tied[lin.argmin()]
    row, col = int(pts[pick, 0]), int(pts[pick, 1])
    return AirlightEstimate(
        brightness=img[row, col, :].copy(),
        location_row=float(row),
        location_col=float(col),
        method="baseline",
        candidates=len(pts),
    )
