"""Regularizer-free self-paced schedule.

Pure functions computing the per-view pace threshold, the binary sample
selection and the per-view loss exponents.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

LAMBDA_EPS = 1e-12


@dataclass(frozen=True)
class SplSchedule:
    """Pacing parameters: start point ``alpha`` and number of rounds.

    ``beta`` is derived so that the last round reaches full selection.
    """

    alpha: float = 0.5
    total_rounds: int = 6

    def __post_init__(self):
        _check_alpha_rounds(self.alpha, self.total_rounds)

    @property
    def beta(self) -> float:
        return compute_beta(self.alpha, self.total_rounds)

    def fraction(self, t: int) -> float:
        """Fraction of the loss range admitted at round ``t`` (1-based)."""
        if not 1 <= t <= self.total_rounds:
            raise ValueError(f"round {t} outside [1, {self.total_rounds}]")
        if t == self.total_rounds:
            return 1.0
        return self.alpha + (t - 1) * self.beta


@dataclass
class ViewPace:
    """Per-view selection state for one outer round."""

    lam: float
    weights: np.ndarray
    eta: float = 1.0

    @property
    def selected_count(self) -> int:
        return int(np.count_nonzero(self.weights))


def _check_alpha_rounds(alpha, total_rounds):
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    if int(total_rounds) != total_rounds or total_rounds < 1:
        raise ValueError(f"total_rounds must be an integer >= 1, got {total_rounds}")


def compute_beta(alpha: float, total_rounds: int) -> float:
    """Per-round increment of the admitted loss fraction.

    Returns ``(1 - alpha) / (T - 1)``, or 0 for a single-round schedule.
    """
    _check_alpha_rounds(alpha, total_rounds)
    if total_rounds == 1:
        return 0.0
    return (1.0 - alpha) / (total_rounds - 1)


def compute_lambda(losses, schedule: SplSchedule, t: int) -> float:
    """Pace threshold for round ``t``.

    Interpolates between the smallest and largest loss of the view. The
    final round returns the maximum loss itself so that every sample is
    admitted regardless of rounding.
    """
    losses = np.asarray(losses, dtype=np.float64)
    if losses.size == 0:
        raise ValueError("empty loss vector")
    if not np.all(np.isfinite(losses)) or np.any(losses < 0):
        raise ValueError("losses must be finite and non-negative")
    frac = schedule.fraction(t)
    lo, hi = float(losses.min()), float(losses.max())
    if frac == 1.0:
        return hi
    return lo + frac * (hi - lo)


def selection_weights(losses, lam: float) -> np.ndarray:
    """Binary selection, ``1`` where ``loss <= lam`` (inclusive)."""
    losses = np.asarray(losses, dtype=np.float64)
    if np.any(losses < 0):
        raise ValueError("losses must be non-negative")
    if lam < 0:
        raise ValueError(f"lambda must be non-negative, got {lam}")
    return (losses <= lam).astype(np.float64)


def compute_exponents(lambdas) -> np.ndarray:
    """Per-view exponents ``min(lambda) / lambda``.

    A zero threshold (a view with zero loss everywhere) is replaced by
    ``LAMBDA_EPS`` before taking the ratio.
    """
    lambdas = np.asarray(lambdas, dtype=np.float64)
    if lambdas.size == 0:
        raise ValueError("empty lambda vector")
    if np.any(lambdas < 0) or not np.all(np.isfinite(lambdas)):
        raise ValueError("lambdas must be finite and non-negative")
    lam = np.where(lambdas > 0, lambdas, LAMBDA_EPS)
    return lam.min() / lam
