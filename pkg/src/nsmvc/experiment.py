"""Configuration-driven experiments: repeated trials, parameter sweeps, reports."""

from __future__ import annotations

import csv
import dataclasses
import datetime as _dt
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, metrics
from .baselines import KMeansConfig, kmeans, kmeans_concat
from .dataset import MultiViewDataset, load_dataset, load_manifest, write_dataset
from .solver import SolverConfig, fit
from .spl import SplSchedule
from .synth import SynthSpec, generate

log = logging.getLogger(__name__)

METHODS = ("nsmvc", "km_view", "km_all")
METRICS = ("acc", "purity", "nmi")

_SOLVER_KEYS = {"alpha", "T", "inner_max_iters", "inner_rel_tol", "init"}
_KMEANS_KEYS = {"max_iters", "rel_tol", "init"}


class ConfigError(ValueError):
    pass


class ExperimentError(RuntimeError):
    pass


@dataclass
class ExperimentConfig:
    dataset: str | None = None
    synth: dict | None = None
    method: str = "nsmvc"
    k: int | None = None
    solver: dict = field(default_factory=dict)
    kmeans: dict = field(default_factory=dict)
    trials: int = 30
    seed: int = 0
    out: str | None = None
    trace: bool = False
    metrics: bool = True

    def __post_init__(self):
        if (self.dataset is None) == (self.synth is None):
            raise ConfigError("exactly one of 'dataset' or 'synth' must be given")
        if self.method not in METHODS:
            raise ConfigError(f"unknown method {self.method!r}, expected one of {METHODS}")
        if int(self.trials) != self.trials or self.trials < 1:
            raise ConfigError(f"trials must be an integer >= 1, got {self.trials}")
        if self.seed < 0:
            raise ConfigError("seed must be non-negative")
        for name, allowed in (("solver", _SOLVER_KEYS), ("kmeans", _KMEANS_KEYS)):
            unknown = set(getattr(self, name)) - allowed
            if unknown:
                raise ConfigError(f"unknown {name} option(s) {sorted(unknown)}")
        self.schedule()

    @classmethod
    def from_dict(cls, doc: dict, base: Path | None = None) -> ExperimentConfig:
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise ConfigError(f"unknown config key(s) {sorted(unknown)}")
        doc = dict(doc)
        if doc.get("dataset") and base is not None:
            doc["dataset"] = str((base / doc["dataset"]).resolve())
        return cls(**doc)

    @classmethod
    def load(cls, path) -> ExperimentConfig:
        path = Path(path)
        try:
            doc = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
        if not isinstance(doc, dict):
            raise ConfigError(f"{path}: config must be a JSON object")
        return cls.from_dict(doc, path.parent)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def replace(self, **changes) -> ExperimentConfig:
        return dataclasses.replace(self, **changes)

    def schedule(self) -> SplSchedule:
        try:
            return SplSchedule(float(self.solver.get("alpha", 0.5)), int(self.solver.get("T", 6)))
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def solver_config(self, k: int, seed: int) -> SolverConfig:
        return SolverConfig(
            k=k,
            schedule=self.schedule(),
            inner_max_iters=int(self.solver.get("inner_max_iters", 100)),
            inner_rel_tol=float(self.solver.get("inner_rel_tol", 1e-6)),
            seed=seed,
            init=self.solver.get("init", "random_assignment"),
        )

    def kmeans_config(self, k: int, seed: int) -> KMeansConfig:
        return KMeansConfig(
            k=k,
            max_iters=int(self.kmeans.get("max_iters", 100)),
            rel_tol=float(self.kmeans.get("rel_tol", 1e-6)),
            seed=seed,
            init=self.kmeans.get("init", "random_assignment"),
        )


@dataclass
class TrialResult:
    variant: str
    trial: int
    seed: int
    scores: dict[str, float]
    etas: list[float] | None = None
    lambdas: list[float] | None = None
    trace: list[dict] | None = None

    def row(self) -> dict:
        out = {"variant": self.variant, "trial": self.trial, "seed": self.seed}
        out.update(self.scores)
        for name, values in (("eta", self.etas), ("lambda", self.lambdas)):
            for v, x in enumerate(values or (), start=1):
                out[f"{name}_{v}"] = x
        return out


@dataclass
class ResultReport:
    config: dict
    dataset: str
    n: int
    views: list[str]
    k: int
    trials: list[TrialResult]
    version: str = __version__
    timestamp: str = ""

    def variants(self) -> list[str]:
        return list(dict.fromkeys(t.variant for t in self.trials))

    def summary(self) -> dict[str, dict[str, metrics.TrialSummary]]:
        out = {}
        for variant in self.variants():
            rows = [t for t in self.trials if t.variant == variant]
            if rows and rows[0].scores:
                out[variant] = {
                    m: metrics.summarize_trials([t.scores[m] for t in rows]) for m in METRICS
                }
        return out

    def to_dict(self) -> dict:
        return {
            "tool": "nsmvc",
            "version": self.version,
            "timestamp": self.timestamp,
            "config": self.config,
            "dataset": {"name": self.dataset, "n": self.n, "views": self.views, "k": self.k},
            "metadata": {"nmi_normalization": metrics.NMI_NORMALIZATION, "acc_matching": metrics.ACC_MATCHING},
            "summary": {
                variant: {m: dataclasses.asdict(s) for m, s in per.items()}
                for variant, per in self.summary().items()
            },
            "trials": [dataclasses.asdict(t) for t in self.trials],
        }


def _load(config: ExperimentConfig) -> tuple[MultiViewDataset, str]:
    if config.synth is not None:
        ds, _ = generate(SynthSpec.from_dict(config.synth))
        return ds, "synth"
    try:
        manifest = load_manifest(config.dataset)
        return load_dataset(manifest), str(manifest.source)
    except (OSError, ValueError) as exc:
        raise ExperimentError(f"failed to load dataset {config.dataset}: {exc}") from exc


def _trace_rows(trace) -> list[dict]:
    rows = []
    for r in trace.rounds:
        for it, obj in enumerate(r.objectives):
            rows.append(
                {
                    "outer_round": r.round,
                    "inner_iter": it,
                    "objective": obj,
                    "lambda": r.lambdas.tolist(),
                    "eta": r.etas.tolist(),
                    "selected": r.selected.tolist(),
                }
            )
    return rows


def _scores(pred, labels):
    return {} if labels is None else metrics.evaluate(pred, labels)


def run_trial(ds: MultiViewDataset, config: ExperimentConfig, k: int, trial: int) -> list[TrialResult]:
    seed = config.seed + trial
    labels = ds.labels if config.metrics else None
    if config.method == "nsmvc":
        model, trace = fit(ds, config.solver_config(k, seed))
        return [
            TrialResult(
                "nsmvc",
                trial,
                seed,
                _scores(model.assignments, labels),
                trace.final_etas.tolist(),
                trace.final_lambdas.tolist(),
                _trace_rows(trace) if config.trace else None,
            )
        ]
    kcfg = config.kmeans_config(k, seed)
    if config.method == "km_all":
        return [TrialResult("km_all", trial, seed, _scores(kmeans_concat(ds, kcfg).assignments, labels))]
    return [
        TrialResult(f"km({v + 1})", trial, seed, _scores(kmeans(view, kcfg).assignments, labels))
        for v, view in enumerate(ds.views)
    ]


def run_experiment(config: ExperimentConfig, dataset: MultiViewDataset | None = None) -> ResultReport:
    """Run ``config.trials`` seeded trials; trial ``t`` uses seed ``config.seed + t``.

    Writes ``report.json``, ``trials.csv`` and (with ``trace``) per-trial
    trace files when ``config.out`` is set.
    """
    if dataset is None:
        ds, source = _load(config)
    else:
        ds, source = dataset, dataset.name
    if config.metrics and ds.labels is None:
        raise ExperimentError(f"metrics requested but dataset {source} has no labels")
    k = config.k if config.k is not None else ds.n_classes
    if k is None:
        raise ExperimentError(f"dataset {source} has no labels; set 'k' explicitly")
    results = []
    for t in range(config.trials):
        results.extend(run_trial(ds, config, k, t))
        log.debug("trial %d done", t)
    report = ResultReport(
        config=config.to_dict(),
        dataset=ds.name,
        n=ds.n,
        views=[v.name for v in ds.views],
        k=k,
        trials=results,
        timestamp=_dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    )
    if config.out:
        write_report(report, config.out)
        if config.trace:
            emit_trace(report, config.out)
    return report


def fmt(x) -> str:
    return format(x, ".17g") if isinstance(x, float) else str(x)


def _write_csv(path: Path, rows: list[dict]):
    columns = list(dict.fromkeys(key for row in rows for key in row))
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([fmt(row[c]) if c in row else "" for c in columns])


def write_report(report: ResultReport, out_dir) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    # json emits the shortest repr that round-trips each float exactly
    (out / "report.json").write_text(json.dumps(report.to_dict(), indent=2) + "\n", encoding="utf-8")
    _write_csv(out / "trials.csv", [t.row() for t in report.trials])
    return out / "report.json"


def emit_trace(report: ResultReport, out_dir) -> list[Path]:
    """Write one ``trace_<trial>.csv`` per traced trial."""
    traced = [t for t in report.trials if t.trace is not None]
    if not traced:
        raise ExperimentError("report carries no convergence traces (run with trace enabled)")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for t in traced:
        m = len(t.trace[0]["lambda"])
        columns = (
            ["outer_round", "inner_iter", "objective"]
            + [f"lambda_{v}" for v in range(1, m + 1)]
            + [f"eta_{v}" for v in range(1, m + 1)]
            + [f"selected_{v}" for v in range(1, m + 1)]
        )
        path = out / f"trace_{t.trial}.csv"
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(columns)
            for r in t.trace:
                writer.writerow(
                    [r["outer_round"], r["inner_iter"], fmt(r["objective"])]
                    + [fmt(x) for x in r["lambda"]]
                    + [fmt(x) for x in r["eta"]]
                    + r["selected"]
                )
        paths.append(path)
    return paths


@dataclass
class SweepCell:
    alpha: float
    T: int
    report: ResultReport


def sweep(config: ExperimentConfig, alphas, rounds, dataset: MultiViewDataset | None = None) -> list[SweepCell]:
    """Run a full experiment for every ``(alpha, T)`` pair.

    Writes ``sweep.json`` and a cell-indexed ``sweep.csv`` (one row per
    cell with mean and std of each metric) when ``config.out`` is set.
    """
    alphas, rounds = list(alphas), list(rounds)
    if not alphas or not rounds:
        raise ConfigError("alpha and T grids must be non-empty")
    for a in alphas:
        if not 0.0 <= a <= 1.0:
            raise ConfigError(f"alpha grid value {a} outside [0, 1]")
    for T in rounds:
        if int(T) != T or T < 1:
            raise ConfigError(f"T grid value {T} is not an integer >= 1")
    if config.method != "nsmvc":
        raise ConfigError("sweeps only apply to method 'nsmvc'")
    ds = dataset if dataset is not None else _load(config)[0]
    cells = []
    for a in alphas:
        for T in rounds:
            cell_cfg = config.replace(solver={**config.solver, "alpha": float(a), "T": int(T)}, out=None)
            cells.append(SweepCell(float(a), int(T), run_experiment(cell_cfg, ds)))
    if config.out:
        write_sweep(cells, config, config.out)
    return cells


def sweep_rows(cells: list[SweepCell]) -> list[dict]:
    rows = []
    for i, cell in enumerate(cells):
        row = {"cell": i, "alpha": cell.alpha, "T": cell.T}
        for m, s in cell.report.summary().get("nsmvc", {}).items():
            row[f"{m}_mean"] = s.mean
            row[f"{m}_std"] = s.std
        rows.append(row)
    return rows


def write_sweep(cells: list[SweepCell], config: ExperimentConfig, out_dir) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    doc = {
        "tool": "nsmvc",
        "version": __version__,
        "config": config.to_dict(),
        "cells": [
            {"alpha": c.alpha, "T": c.T, "summary": c.report.to_dict()["summary"], "trials": c.report.to_dict()["trials"]}
            for c in cells
        ],
    }
    (out / "sweep.json").write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    _write_csv(out / "sweep.csv", sweep_rows(cells))
    return out / "sweep.json"


def best_cell(cells: list[SweepCell], metric: str = "acc") -> SweepCell:
    return max(cells, key=lambda c: c.report.summary()["nsmvc"][metric].mean)


def export_synth(spec_path, out_dir) -> Path:
    doc = json.loads(Path(spec_path).read_text(encoding="utf-8"))
    ds, _ = generate(SynthSpec.from_dict(doc))
    return write_dataset(ds, out_dir)


def trial_values(report: ResultReport, variant: str, metric: str) -> np.ndarray:
    return np.array([t.scores[metric] for t in report.trials if t.variant == variant])
