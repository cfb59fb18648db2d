"""Alternating optimizer for non-linear fusion with self-paced selection.

The fused objective is ``sum_v phi(v) ** eta(v)`` where ``phi(v)`` is the
squared-error of the currently selected samples of view ``v`` against the
centroid of their (shared) cluster. Each outer round refreshes the pace
thresholds, selections and exponents; the inner loop then alternates a
closed-form centroid update with a sequential per-sample assignment search.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import cdist

from . import spl
from ._kernels import sequential_assign
from .dataset import MultiViewDataset, ViewMatrix

INIT_MODES = ("random_assignment", "forgy")
MONOTONE_SLACK = 1e-9


class MonotonicityError(AssertionError):
    """An update increased the objective beyond floating-point slack."""


@dataclass
class ClusterModel:
    """Per-view centroids (each ``(d_v, k)``) and the shared assignments."""

    centroids: list[np.ndarray]
    assignments: np.ndarray

    @property
    def k(self) -> int:
        return self.centroids[0].shape[1]

    def copy(self) -> ClusterModel:
        return ClusterModel([c.copy() for c in self.centroids], self.assignments.copy())


@dataclass(frozen=True)
class SolverConfig:
    k: int
    schedule: spl.SplSchedule = field(default_factory=spl.SplSchedule)
    inner_max_iters: int = 100
    inner_rel_tol: float = 1e-6
    seed: int = 0
    init: str = "random_assignment"
    check_monotone: bool = False

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.inner_max_iters < 1:
            raise ValueError("inner_max_iters must be >= 1")
        if not self.inner_rel_tol > 0:
            raise ValueError("inner_rel_tol must be > 0")
        if self.init not in INIT_MODES:
            raise ValueError(f"unknown init mode {self.init!r}, expected one of {INIT_MODES}")


@dataclass
class RoundRecord:
    """State of one outer round; ``objectives[0]`` is the value at round start."""

    round: int
    lambdas: np.ndarray
    etas: np.ndarray
    selected: np.ndarray
    objectives: list[float]
    seconds: float = 0.0

    @property
    def inner_iters(self) -> int:
        return len(self.objectives) - 1


@dataclass
class ConvergenceTrace:
    seed: int
    init: str
    rounds: list[RoundRecord] = field(default_factory=list)

    @property
    def final_etas(self) -> np.ndarray:
        return self.rounds[-1].etas

    @property
    def final_lambdas(self) -> np.ndarray:
        return self.rounds[-1].lambdas


def _data(view) -> np.ndarray:
    return view.data if isinstance(view, ViewMatrix) else np.asarray(view, dtype=np.float64)


def fused_power(phi, eta):
    """``phi ** eta`` as ``exp(eta * log(phi))`` with ``0 ** eta = 0``."""
    phi = np.asarray(phi, dtype=np.float64)
    eta = np.broadcast_to(np.asarray(eta, dtype=np.float64), phi.shape)
    out = np.zeros_like(phi)
    pos = phi > 0
    p, e = phi[pos], eta[pos]
    out[pos] = np.where(e == 1.0, p, np.exp(e * np.log(p)))
    return out


def sample_loss(x, centroid) -> float:
    """Squared Euclidean distance between a sample and a centroid."""
    x = np.asarray(x, dtype=np.float64)
    centroid = np.asarray(centroid, dtype=np.float64)
    if x.shape != centroid.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {centroid.shape}")
    diff = x - centroid
    return float(diff @ diff)


def view_loss(losses, weights) -> float:
    """Masked loss of one view: the sum of the selected samples' losses."""
    losses = np.asarray(losses, dtype=np.float64)
    weights = np.asarray(weights, dtype=np.float64)
    if losses.shape != weights.shape:
        raise ValueError(f"length mismatch: {losses.size} losses vs {weights.size} weights")
    return float(weights @ losses)


def objective(phis, etas) -> float:
    """Fused objective ``sum_v phi(v) ** eta(v)``."""
    phis = np.asarray(phis, dtype=np.float64)
    etas = np.asarray(etas, dtype=np.float64)
    if phis.shape != etas.shape:
        raise ValueError(f"length mismatch: {phis.size} view losses vs {etas.size} exponents")
    if np.any(phis < 0):
        raise ValueError("view losses must be non-negative")
    if np.any(etas <= 0) or np.any(etas > 1):
        raise ValueError("exponents must lie in (0, 1]")
    return float(fused_power(phis, etas).sum())


def update_centroids(view, assignments, weights, k, previous=None) -> np.ndarray:
    """Weighted per-cluster means, shape ``(d, k)``.

    With binary weights the normal equations are diagonal: each centroid is
    the mean of the selected samples assigned to it. Clusters without any
    selected member keep their column of ``previous`` (zeros if omitted).
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    X = _data(view)
    assignments = np.asarray(assignments, dtype=np.int64)
    weights = np.asarray(weights, dtype=np.float64)
    n = X.shape[1]
    if assignments.shape != (n,) or weights.shape != (n,):
        raise ValueError("assignments and weights must have one entry per sample")
    member = np.zeros((k, n))
    member[assignments, np.arange(n)] = weights
    counts = member.sum(axis=1)
    sums = X @ member.T
    out = np.zeros((X.shape[0], k)) if previous is None else np.array(previous, dtype=np.float64, copy=True)
    filled = counts > 0
    out[:, filled] = sums[:, filled] / counts[filled]
    return out


def distances(view, centroids) -> np.ndarray:
    """Squared distances of every sample to every centroid, ``(n, k)``."""
    return cdist(_data(view).T, np.asarray(centroids).T, "sqeuclidean")


def _distance_stack(dataset, model):
    return np.stack([distances(v, c) for v, c in zip(dataset.views, model.centroids)])


def sample_losses(dataset: MultiViewDataset, model: ClusterModel) -> np.ndarray:
    """Loss of each sample against its own cluster centroid, ``(m, n)``."""
    out = np.empty((dataset.m, dataset.n))
    b = model.assignments
    for v, (view, c) in enumerate(zip(dataset.views, model.centroids)):
        diff = _data(view) - c[:, b]
        out[v] = np.einsum("ij,ij->j", diff, diff)
    return out


def _pace_arrays(paces):
    weights = np.stack([np.asarray(p.weights, dtype=np.float64) for p in paces])
    etas = np.array([p.eta for p in paces], dtype=np.float64)
    return weights, etas


def _phis(dist, weights, assignments):
    n = dist.shape[1]
    own = dist[:, np.arange(n), assignments]
    return (weights * own).sum(axis=1)


def model_objective(dataset, model, paces) -> float:
    weights, etas = _pace_arrays(paces)
    phis = (weights * sample_losses(dataset, model)).sum(axis=1)
    return objective(phis, etas)


def update_assignments(model: ClusterModel, dataset: MultiViewDataset, paces, dist=None):
    """Sequentially re-pick each sample's cluster with the centroids held fixed.

    Samples are visited in ascending index order. For each one, its current
    contribution is removed from every view loss, each of the ``k`` clusters
    is scored by the fused objective, and the view losses are updated before
    moving on. The previous cluster wins exact ties, then the lowest index.

    Returns the new assignment vector and the per-view losses it induces.
    """
    weights, etas = _pace_arrays(paces)
    if dist is None:
        dist = _distance_stack(dataset, model)
    b = np.array(model.assignments, dtype=np.int64, copy=True)
    phis = _phis(dist, weights, b)
    sequential_assign(np.ascontiguousarray(dist), np.ascontiguousarray(weights), etas, b, phis)
    return b, _phis(dist, weights, b)


def _check(after, before, what):
    if after > before + MONOTONE_SLACK * abs(before):
        raise MonotonicityError(f"{what} increased the objective from {before!r} to {after!r}")


def _converged(prev, cur, tol):
    if prev == cur:
        return True
    return abs(prev - cur) < tol * abs(prev)


def inner_solve(model: ClusterModel, dataset: MultiViewDataset, paces, config: SolverConfig):
    """Alternate centroid and assignment updates at fixed selection and exponents.

    Stops when the relative objective change drops below
    ``config.inner_rel_tol`` or after ``config.inner_max_iters`` iterations.
    Returns the updated model and the objective history, whose first entry is
    the objective of the incoming model.
    """
    weights, etas = _pace_arrays(paces)
    model = model.copy()
    k = model.k
    history = [objective(_phis(_distance_stack(dataset, model), weights, model.assignments), etas)]
    for _ in range(config.inner_max_iters):
        model.centroids = [
            update_centroids(view, model.assignments, weights[v], k, model.centroids[v])
            for v, view in enumerate(dataset.views)
        ]
        dist = _distance_stack(dataset, model)
        if config.check_monotone:
            _check(objective(_phis(dist, weights, model.assignments), etas), history[-1], "centroid update")
        b, phis = update_assignments(model, dataset, paces, dist)
        model.assignments = b
        obj = objective(phis, etas)
        if config.check_monotone:
            _check(obj, history[-1], "assignment update")
        history.append(obj)
        if _converged(history[-2], obj, config.inner_rel_tol):
            break
    return model, history


def initialize(dataset: MultiViewDataset, k: int, mode: str, rng: np.random.Generator) -> ClusterModel:
    """Random starting model.

    ``random_assignment`` draws each sample's cluster uniformly and uses the
    per-cluster means as centroids (an empty cluster takes a random sample).
    ``forgy`` picks ``k`` distinct samples as centroids and assigns every
    sample to the cluster minimizing its summed per-view distance.
    """
    n = dataset.n
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    if mode == "random_assignment":
        b = rng.integers(0, k, size=n).astype(np.int64)
        counts = np.bincount(b, minlength=k)
        fill = {j: int(rng.integers(0, n)) for j in np.flatnonzero(counts == 0)}
        centroids = []
        for view in dataset.views:
            c = update_centroids(view, b, np.ones(n), k)
            for j, i in fill.items():
                c[:, j] = _data(view)[:, i]
            centroids.append(c)
        return ClusterModel(centroids, b)
    if mode == "forgy":
        idx = rng.choice(n, size=k, replace=False)
        centroids = [_data(view)[:, idx].copy() for view in dataset.views]
        model = ClusterModel(centroids, np.zeros(n, dtype=np.int64))
        model.assignments = np.argmin(_distance_stack(dataset, model).sum(axis=0), axis=1).astype(np.int64)
        return model
    raise ValueError(f"unknown init mode {mode!r}")


def select(losses, schedule: spl.SplSchedule, t: int) -> list[spl.ViewPace]:
    """Pace thresholds, selections and exponents for round ``t``."""
    lambdas = np.array([spl.compute_lambda(l, schedule, t) for l in losses])
    etas = spl.compute_exponents(lambdas)
    return [spl.ViewPace(lam, spl.selection_weights(l, lam), eta) for lam, l, eta in zip(lambdas, losses, etas)]


def fit(dataset: MultiViewDataset, config: SolverConfig, init: ClusterModel | None = None):
    """Run all outer rounds of the self-paced schedule.

    ``init`` overrides the seeded random initialization. Returns the final
    model and a :class:`ConvergenceTrace`.
    """
    if dataset.n < config.k:
        raise ValueError(f"k={config.k} exceeds the number of samples n={dataset.n}")
    rng = np.random.default_rng(config.seed)
    model = init.copy() if init is not None else initialize(dataset, config.k, config.init, rng)
    trace = ConvergenceTrace(config.seed, "given" if init is not None else config.init)
    for t in range(1, config.schedule.total_rounds + 1):
        start = time.perf_counter()
        paces = select(sample_losses(dataset, model), config.schedule, t)
        model, history = inner_solve(model, dataset, paces, config)
        trace.rounds.append(
            RoundRecord(
                round=t,
                lambdas=np.array([p.lam for p in paces]),
                etas=np.array([p.eta for p in paces]),
                selected=np.array([p.selected_count for p in paces]),
                objectives=history,
                seconds=time.perf_counter() - start,
            )
        )
    return model, trace
