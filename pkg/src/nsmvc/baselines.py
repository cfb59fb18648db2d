"""k-means baselines: one run per view (KM(v)) and on concatenated views (KM(All))."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dataset import MultiViewDataset, ViewMatrix, concatenate_views
from .solver import INIT_MODES, initialize


@dataclass(frozen=True)
class KMeansConfig:
    k: int
    max_iters: int = 100
    rel_tol: float = 1e-6
    seed: int = 0
    init: str = "random_assignment"

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.init not in INIT_MODES:
            raise ValueError(f"unknown init mode {self.init!r}")


@dataclass
class KMeansResult:
    assignments: np.ndarray
    centroids: np.ndarray
    inertia: list[float] = field(default_factory=list)
    view: str = ""


def _sq_dist(X, C):
    # X: (n, d), C: (k, d); explicit differences keep exact zeros exact
    out = np.empty((X.shape[0], C.shape[0]))
    for j, c in enumerate(C):
        diff = X - c
        out[:, j] = np.einsum("nd,nd->n", diff, diff)
    return out


def _means(X, labels, previous):
    C = previous.copy()
    for j in range(C.shape[0]):
        members = X[labels == j]
        if len(members):
            C[j] = members.mean(axis=0)
    return C


def _inertia(X, C, labels):
    diff = X - C[labels]
    return float(np.einsum("nd,nd->", diff, diff))


def lloyd(X, labels, centroids, max_iters=100, rel_tol=1e-6):
    """Lloyd iterations from a given start; ``X`` is ``(n, d)``, centroids ``(k, d)``.

    Each iteration recomputes the means and then assigns every sample to its
    nearest centroid (lowest index on ties). Empty clusters keep their
    previous centroid.
    """
    labels = np.asarray(labels, dtype=np.int64).copy()
    C = np.asarray(centroids, dtype=np.float64).copy()
    history = [_inertia(X, C, labels)]
    for _ in range(max_iters):
        C = _means(X, labels, C)
        labels = np.argmin(_sq_dist(X, C), axis=1)
        history.append(_inertia(X, C, labels))
        prev, cur = history[-2], history[-1]
        if prev == cur or abs(prev - cur) < rel_tol * abs(prev):
            break
    return labels, C, history


def kmeans(data, config: KMeansConfig) -> KMeansResult:
    """k-means on a single view, seeded exactly like the multi-view solver."""
    view = data if isinstance(data, ViewMatrix) else ViewMatrix("data", data)
    if view.n < config.k:
        raise ValueError(f"k={config.k} exceeds the number of samples n={view.n}")
    rng = np.random.default_rng(config.seed)
    start = initialize(MultiViewDataset((view,)), config.k, config.init, rng)
    labels, C, history = lloyd(
        view.data.T, start.assignments, start.centroids[0].T, config.max_iters, config.rel_tol
    )
    return KMeansResult(labels, C.T, history, view.name)


def kmeans_per_view(ds: MultiViewDataset, config: KMeansConfig) -> list[KMeansResult]:
    return [kmeans(view, config) for view in ds.views]


def kmeans_concat(ds: MultiViewDataset, config: KMeansConfig) -> KMeansResult:
    return kmeans(concatenate_views(ds), config)
