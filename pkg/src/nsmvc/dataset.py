"""Multi-view dataset loading.

A dataset is described by a JSON manifest listing one CSV file per view
(rows are samples, columns are features) and an optional labels file with
one integer per line. Internally every view is stored as a
``(n_features, n_samples)`` matrix.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

NORMALIZATIONS = ("none", "zscore", "minmax", "zscore_view", "minmax_view")

_MANIFEST_KEYS = {"name", "views", "labels", "normalize", "csv"}
_CSV_KEYS = {"delimiter", "header"}


class ManifestError(ValueError):
    """Raised for malformed or inconsistent manifests."""


class DatasetError(ValueError):
    """Raised when view or label files cannot be turned into a dataset."""


@dataclass(frozen=True)
class ViewMatrix:
    """One view: ``data`` has shape ``(d, n)``, one column per sample."""

    name: str
    data: np.ndarray

    def __post_init__(self):
        data = np.array(self.data, dtype=np.float64, copy=True)
        if data.ndim != 2 or data.shape[0] < 1 or data.shape[1] < 1:
            raise DatasetError(f"view {self.name!r}: expected a non-empty 2-D matrix, got shape {data.shape}")
        if not np.all(np.isfinite(data)):
            raise DatasetError(f"view {self.name!r} contains NaN or Inf")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    @property
    def n(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True)
class MultiViewDataset:
    views: tuple[ViewMatrix, ...]
    labels: np.ndarray | None = None
    name: str = "dataset"

    def __post_init__(self):
        views = tuple(self.views)
        if not views:
            raise DatasetError("a dataset needs at least one view")
        n = views[0].n
        for v in views[1:]:
            if v.n != n:
                raise DatasetError(
                    f"sample-count mismatch: view {views[0].name!r} has {n} samples, "
                    f"view {v.name!r} has {v.n}"
                )
        object.__setattr__(self, "views", views)
        if self.labels is not None:
            labels = np.asarray(self.labels)
            if labels.shape != (n,):
                raise DatasetError(f"expected {n} labels, got {labels.size}")
            labels = remap_labels(labels)
            labels.setflags(write=False)
            object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.views[0].n

    @property
    def m(self) -> int:
        return len(self.views)

    @property
    def n_classes(self) -> int | None:
        return None if self.labels is None else int(self.labels.max()) + 1


@dataclass(frozen=True)
class DatasetManifest:
    name: str
    views: tuple[tuple[str, Path], ...]
    labels: Path | None = None
    normalize: str = "none"
    delimiter: str = ","
    header: bool = False
    source: Path | None = field(default=None, compare=False)


def remap_labels(raw) -> np.ndarray:
    """Map arbitrary label values onto contiguous ids ``0..k-1`` (sorted order)."""
    _, ids = np.unique(np.asarray(raw), return_inverse=True)
    return ids.astype(np.int64)


def load_manifest(path) -> DatasetManifest:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ManifestError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise ManifestError(f"{path}: manifest must be a JSON object")
    unknown = set(doc) - _MANIFEST_KEYS
    if unknown:
        raise ManifestError(f"{path}: unknown field(s) {sorted(unknown)}")
    for key in ("name", "views"):
        if key not in doc:
            raise ManifestError(f"{path}: missing required field {key!r}")

    base = path.parent
    views = doc["views"]
    if not isinstance(views, list) or not views:
        raise ManifestError(f"{path}: no views listed")
    entries = []
    for i, entry in enumerate(views):
        if not isinstance(entry, dict) or set(entry) != {"name", "path"}:
            raise ManifestError(f"{path}: views[{i}] must be an object with exactly 'name' and 'path'")
        if not entry["path"]:
            raise ManifestError(f"{path}: views[{i}].path is empty")
        entries.append((str(entry["name"]), (base / entry["path"]).resolve()))

    labels = doc.get("labels")
    if labels is not None:
        if not labels:
            raise ManifestError(f"{path}: labels path is empty")
        labels = (base / labels).resolve()

    normalize = doc.get("normalize", "none")
    if normalize not in NORMALIZATIONS:
        raise ManifestError(f"{path}: unknown normalization {normalize!r} (expected one of {NORMALIZATIONS})")

    opts = doc.get("csv", {})
    if not isinstance(opts, dict) or set(opts) - _CSV_KEYS:
        raise ManifestError(f"{path}: csv options must be an object with keys {sorted(_CSV_KEYS)}")
    delimiter = opts.get("delimiter", ",")
    if not isinstance(delimiter, str) or len(delimiter) != 1:
        raise ManifestError(f"{path}: csv.delimiter must be a single character")
    header = opts.get("header", False)
    if not isinstance(header, bool):
        raise ManifestError(f"{path}: csv.header must be a boolean")

    return DatasetManifest(
        name=str(doc["name"]),
        views=tuple(entries),
        labels=labels,
        normalize=normalize,
        delimiter=delimiter,
        header=header,
        source=path.resolve(),
    )


def read_view_csv(path, delimiter=",", header=False) -> np.ndarray:
    """Read a samples-by-features CSV into an ``(n, d)`` float array."""
    path = Path(path)
    rows = []
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh, delimiter=delimiter)
        for lineno, row in enumerate(reader, start=1):
            if header and lineno == 1:
                continue
            if not row or all(not cell.strip() for cell in row):
                continue
            try:
                rows.append([float(cell) for cell in row])
            except ValueError:
                col = next(j for j, cell in enumerate(row, start=1) if not _is_float(cell))
                raise DatasetError(f"{path}: non-numeric cell {row[col - 1]!r} at row {lineno}, column {col}") from None
            if len(rows[-1]) != len(rows[0]):
                raise DatasetError(f"{path}: row {lineno} has {len(rows[-1])} columns, expected {len(rows[0])}")
    if not rows:
        raise DatasetError(f"{path}: no data rows")
    data = np.array(rows, dtype=np.float64)
    bad = np.argwhere(~np.isfinite(data))
    if bad.size:
        r, c = bad[0]
        raise DatasetError(f"{path}: NaN/Inf at data row {r + 1}, column {c + 1}")
    return data


def _is_float(cell):
    try:
        float(cell)
    except ValueError:
        return False
    return True


def read_labels(path) -> np.ndarray:
    out = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            out.append(int(line.strip()))
        except ValueError:
            raise DatasetError(f"{path}: line {lineno} is not an integer: {line!r}") from None
    return np.array(out, dtype=np.int64)


def normalize(data: np.ndarray, mode: str) -> np.ndarray:
    """Normalize each feature (row of a ``(d, n)`` matrix) across samples.

    Constant features get a unit scale, so ``zscore`` maps them to zeros.
    The ``*_view`` modes additionally divide the whole view by ``sqrt(d)``,
    turning squared distances into per-feature averages so that losses of
    views with very different dimensionality are on a common scale.
    """
    if mode.endswith("_view"):
        return normalize(data, mode[: -len("_view")]) / np.sqrt(data.shape[0])
    if mode == "none":
        return data
    if mode == "zscore":
        scale = data.std(axis=1, keepdims=True)
        scale[scale == 0] = 1.0
        return (data - data.mean(axis=1, keepdims=True)) / scale
    if mode == "minmax":
        lo = data.min(axis=1, keepdims=True)
        scale = data.max(axis=1, keepdims=True) - lo
        scale[scale == 0] = 1.0
        return (data - lo) / scale
    raise ValueError(f"unknown normalization {mode!r}")


def load_dataset(manifest: DatasetManifest) -> MultiViewDataset:
    views = []
    for name, path in manifest.views:
        raw = read_view_csv(path, manifest.delimiter, manifest.header)
        views.append((name, raw))
    n0 = views[0][1].shape[0]
    for name, raw in views[1:]:
        if raw.shape[0] != n0:
            raise DatasetError(
                f"sample-count mismatch: view {views[0][0]!r} has {n0} samples, view {name!r} has {raw.shape[0]}"
            )
    matrices = tuple(ViewMatrix(name, normalize(raw.T, manifest.normalize)) for name, raw in views)
    labels = None
    if manifest.labels is not None:
        labels = read_labels(manifest.labels)
        if labels.size != n0:
            raise DatasetError(f"{manifest.labels}: expected {n0} labels, got {labels.size}")
    return MultiViewDataset(matrices, labels, manifest.name)


def concatenate_views(ds: MultiViewDataset) -> ViewMatrix:
    """Stack all views feature-wise into a single ``(sum d, n)`` view."""
    if ds.m == 1:
        return ds.views[0]
    return ViewMatrix("+".join(v.name for v in ds.views), np.vstack([v.data for v in ds.views]))


def write_dataset(ds: MultiViewDataset, out_dir, normalize="none") -> Path:
    """Write ``ds`` as a manifest plus per-view CSVs; returns the manifest path.

    Floats are written with 17 significant digits so a reload with
    ``normalize="none"`` reproduces the matrices exactly.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    entries = []
    for i, view in enumerate(ds.views, start=1):
        fname = f"view{i}.csv"
        np.savetxt(out / fname, view.data.T, delimiter=",", fmt="%.17g")
        entries.append({"name": view.name, "path": fname})
    doc = {"name": ds.name, "views": entries, "normalize": normalize, "csv": {"delimiter": ",", "header": False}}
    if ds.labels is not None:
        (out / "labels.txt").write_text("".join(f"{int(y)}\n" for y in ds.labels), encoding="utf-8")
        doc["labels"] = "labels.txt"
    path = out / "manifest.json"
    path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    return path
