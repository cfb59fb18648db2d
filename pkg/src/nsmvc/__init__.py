"""Multi-view clustering by non-linear fusion of per-view losses with self-paced sample selection."""

__version__ = "0.1.0"

from .baselines import KMeansConfig, KMeansResult, kmeans, kmeans_concat, kmeans_per_view
from .dataset import (
    DatasetManifest,
    MultiViewDataset,
    ViewMatrix,
    concatenate_views,
    load_dataset,
    load_manifest,
)
from .metrics import accuracy, nmi, purity, summarize_trials
from .solver import ClusterModel, ConvergenceTrace, SolverConfig, fit
from .spl import SplSchedule
from .synth import Corruption, SynthSpec, corrupt, generate
