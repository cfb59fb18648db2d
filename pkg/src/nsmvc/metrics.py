"""External clustering metrics: ACC, Purity and NMI, plus trial summaries."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

# Recorded in experiment reports so results stay comparable.
NMI_NORMALIZATION = "geometric"
ACC_MATCHING = "hungarian, contingency table zero-padded to square"


@dataclass(frozen=True)
class ContingencyTable:
    """Counts of samples per (predicted cluster, true class) pair."""

    counts: np.ndarray

    @property
    def n(self) -> int:
        return int(self.counts.sum())


@dataclass(frozen=True)
class TrialSummary:
    mean: float
    std: float
    trials: int


def _validate(pred, truth):
    pred = np.asarray(pred).ravel()
    truth = np.asarray(truth).ravel()
    if pred.shape != truth.shape:
        raise ValueError(f"length mismatch: {pred.size} predictions vs {truth.size} labels")
    if pred.size == 0:
        raise ValueError("empty label vectors")
    return pred, truth


def contingency_table(pred, truth) -> ContingencyTable:
    pred, truth = _validate(pred, truth)
    _, p = np.unique(pred, return_inverse=True)
    _, t = np.unique(truth, return_inverse=True)
    counts = np.zeros((p.max() + 1, t.max() + 1), dtype=np.int64)
    np.add.at(counts, (p, t), 1)
    return ContingencyTable(counts)


def accuracy(pred, truth) -> float:
    """Fraction of samples correct under the best one-to-one cluster/class matching."""
    table = contingency_table(pred, truth)
    c = table.counts
    size = max(c.shape)
    square = np.zeros((size, size), dtype=np.int64)
    square[: c.shape[0], : c.shape[1]] = c
    rows, cols = linear_sum_assignment(square, maximize=True)
    return float(square[rows, cols].sum()) / table.n


def purity(pred, truth) -> float:
    table = contingency_table(pred, truth)
    return float(table.counts.max(axis=1).sum()) / table.n


def _entropy(counts, n):
    p = counts[counts > 0] / n
    return float(-(p * np.log(p)).sum())


def nmi(pred, truth) -> float:
    """Mutual information normalized by the geometric mean of the entropies."""
    table = contingency_table(pred, truth)
    c = table.counts.astype(np.float64)
    n = c.sum()
    h_pred = _entropy(c.sum(axis=1), n)
    h_true = _entropy(c.sum(axis=0), n)
    if h_pred == 0.0 and h_true == 0.0:
        return 1.0
    if h_pred == 0.0 or h_true == 0.0:
        return 0.0
    outer = np.outer(c.sum(axis=1), c.sum(axis=0))
    nz = c > 0
    mi = float((c[nz] / n * np.log(c[nz] * n / outer[nz])).sum())
    return float(np.clip(mi / np.sqrt(h_pred * h_true), 0.0, 1.0))


def evaluate(pred, truth) -> dict[str, float]:
    return {"acc": accuracy(pred, truth), "purity": purity(pred, truth), "nmi": nmi(pred, truth)}


def summarize_trials(values) -> TrialSummary:
    """Mean and sample standard deviation (``ddof=1``, 0 for a single trial)."""
    values = np.asarray(values, dtype=np.float64).ravel()
    if values.size == 0:
        raise ValueError("no trial values to summarize")
    std = float(values.std(ddof=1)) if values.size > 1 else 0.0
    return TrialSummary(float(values.mean()), std, int(values.size))
