"""Seeded synthetic multi-view blobs with optional per-view corruption."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dataset import MultiViewDataset, ViewMatrix

CORRUPTION_MODES = ("gaussian_noise", "label_shuffle")


@dataclass(frozen=True)
class Corruption:
    view: int
    mode: str
    strength: float

    def __post_init__(self):
        if self.mode not in CORRUPTION_MODES:
            raise ValueError(f"unknown corruption mode {self.mode!r}, expected one of {CORRUPTION_MODES}")
        if not 0.0 <= self.strength <= 1.0:
            raise ValueError(f"corruption strength must lie in [0, 1], got {self.strength}")


@dataclass(frozen=True)
class SynthSpec:
    n: int
    k: int
    dims: tuple[int, ...]
    separation: float = 5.0
    std: float = 1.0
    corruptions: tuple[Corruption, ...] = field(default_factory=tuple)
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        object.__setattr__(
            self,
            "corruptions",
            tuple(c if isinstance(c, Corruption) else Corruption(**c) for c in self.corruptions),
        )
        if self.k < 1 or self.n < self.k:
            raise ValueError(f"need n >= k >= 1, got n={self.n}, k={self.k}")
        if not self.dims or min(self.dims) < 1:
            raise ValueError("every view needs at least one dimension")
        if not self.separation > 0 or self.std < 0:
            raise ValueError("separation must be > 0 and std >= 0")
        for c in self.corruptions:
            if not 0 <= c.view < len(self.dims):
                raise ValueError(f"corruption targets view {c.view}, dataset has {len(self.dims)} views")

    @classmethod
    def from_dict(cls, doc: dict) -> SynthSpec:
        doc = dict(doc)
        doc["corruptions"] = tuple(Corruption(**c) for c in doc.get("corruptions", ()))
        return cls(**doc)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "dims": list(self.dims),
            "separation": self.separation,
            "std": self.std,
            "corruptions": [{"view": c.view, "mode": c.mode, "strength": c.strength} for c in self.corruptions],
            "seed": self.seed,
        }


def _sphere(rng, k, d, radius):
    c = rng.standard_normal((d, k))
    norms = np.linalg.norm(c, axis=0)
    norms[norms == 0] = 1.0
    return radius * c / norms


def generate(spec: SynthSpec):
    """Draw a labelled dataset and the per-view true centers (each ``(d, k)``).

    Clusters are contiguous blocks whose sizes differ by at most one. Every
    view has its own centers on a sphere of radius ``separation``.
    """
    rng = np.random.default_rng(spec.seed)
    sizes = np.full(spec.k, spec.n // spec.k)
    sizes[: spec.n % spec.k] += 1
    labels = np.repeat(np.arange(spec.k), sizes)
    views, centers = [], []
    for v, d in enumerate(spec.dims):
        c = _sphere(rng, spec.k, d, spec.separation)
        data = c[:, labels] + spec.std * rng.standard_normal((d, spec.n))
        views.append(data)
        centers.append(c)
    for i, c in enumerate(spec.corruptions):
        views[c.view] = corrupt(views[c.view], c.mode, c.strength, (spec.seed, i, c.view))
    ds = MultiViewDataset(
        tuple(ViewMatrix(f"view{v + 1}", data) for v, data in enumerate(views)), labels, "synthetic"
    )
    return ds, centers


def corrupt(view, mode: str, strength: float, seed=0):
    """Damage a ``(d, n)`` view.

    ``gaussian_noise`` blends every entry towards standard normal noise scaled
    by the view's global standard deviation; ``label_shuffle`` permutes a
    ``strength`` fraction of the sample columns among themselves. Returns the
    same type it was given.
    """
    if mode not in CORRUPTION_MODES:
        raise ValueError(f"unknown corruption mode {mode!r}, expected one of {CORRUPTION_MODES}")
    if not 0.0 <= strength <= 1.0:
        raise ValueError(f"corruption strength must lie in [0, 1], got {strength}")
    wrapped = isinstance(view, ViewMatrix)
    data = np.array(view.data if wrapped else view, dtype=np.float64, copy=True)
    if strength > 0:
        rng = np.random.default_rng(seed)
        if mode == "gaussian_noise":
            noise = rng.standard_normal(data.shape) * data.std()
            data = (1.0 - strength) * data + strength * noise
        else:
            n = data.shape[1]
            idx = np.sort(rng.choice(n, size=int(round(strength * n)), replace=False))
            data[:, idx] = data[:, rng.permutation(idx)]
    return ViewMatrix(view.name, data) if wrapped else data
