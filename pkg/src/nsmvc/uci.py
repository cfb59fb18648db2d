"""Export the UCI Multiple Features (handwritten numerals) data to manifest form.

Two source layouts are understood: the original UCI files (``mfeat-fac``
etc., whitespace separated, 200 samples per digit in order) and the CSV
copies bundled with ``mvlearn`` (header row, label in the last column).
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

# View order of the six-view benchmark table.
VIEWS = (
    ("profile_correlations", "fac"),
    ("fourier", "fou"),
    ("karhunen_loeve", "kar"),
    ("morphological", "mor"),
    ("pixel_averages", "pix"),
    ("zernike", "zer"),
)


def find_mvlearn_copy() -> Path | None:
    try:
        import mvlearn
    except ImportError:
        return None
    path = Path(mvlearn.__file__).parent / "datasets" / "UCImultifeature"
    return path if path.is_dir() else None


def _read(source: Path, code: str):
    csv_path = source / f"mfeat-{code}.csv"
    if csv_path.exists():
        raw = np.loadtxt(csv_path, delimiter=",", skiprows=1)
        return raw[:, :-1], raw[:, -1].astype(np.int64)
    raw = np.loadtxt(source / f"mfeat-{code}")
    return raw, np.repeat(np.arange(10), raw.shape[0] // 10)


def export_multifeature(out_dir, source=None, normalize="none") -> Path:
    """Write the six views, labels and a manifest into ``out_dir``."""
    source = Path(source) if source is not None else find_mvlearn_copy()
    if source is None:
        raise FileNotFoundError("no UCI Multiple Features source given and mvlearn is not installed")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    labels = None
    entries = []
    for name, code in VIEWS:
        data, y = _read(source, code)
        if labels is None:
            labels = y
        elif not np.array_equal(labels, y):
            raise ValueError(f"view {code} disagrees with the other views on labels")
        np.savetxt(out / f"{code}.csv", data, delimiter=",", fmt="%.17g")
        entries.append({"name": name, "path": f"{code}.csv"})
    (out / "labels.txt").write_text("".join(f"{int(v)}\n" for v in labels), encoding="utf-8")
    manifest = {
        "name": "handwritten",
        "views": entries,
        "labels": "labels.txt",
        "normalize": normalize,
        "csv": {"delimiter": ",", "header": False},
    }
    path = out / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return path
