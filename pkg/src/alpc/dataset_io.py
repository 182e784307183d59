"""On-disk dataset format and CSV import.

A dataset directory holds ``manifest.json`` plus one raw file per view.
View files store little-endian float64 values sample by sample (all
features of sample 0, then sample 1, ...), i.e. the ``d x n`` matrix in
column-major order. Labels are little-endian uint32.
"""
import csv
import hashlib
import json
import os
from pathlib import Path

import numpy as np

from . import errors
from .types import MultiViewDataset, validate_dataset

FORMAT_VERSION = 1
MANIFEST = "manifest.json"
FLOAT = np.dtype("<f8")
LABEL = np.dtype("<u4")


def _atomic_write(path, payload):
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(payload)
    os.replace(tmp, path)


def save(dataset, directory):
    validate_dataset(dataset)
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    n = dataset.n_samples
    views = []
    for v, x in enumerate(dataset.views):
        name = f"view{v}"
        fname = f"{name}.f64"
        _atomic_write(directory / fname, np.asarray(x, dtype=FLOAT).tobytes(order="F"))
        views.append({"name": name, "dim": int(x.shape[0]), "file": fname})
    manifest = {"format_version": FORMAT_VERSION, "n": int(n), "c": int(dataset.n_clusters),
                "views": views, "labels_file": None}
    if dataset.labels is not None:
        manifest["labels_file"] = "labels.u32"
        _atomic_write(directory / "labels.u32", dataset.labels.astype(LABEL).tobytes())
    _atomic_write(directory / MANIFEST,
                  (json.dumps(manifest, indent=2) + "\n").encode("utf-8"))


def read_manifest(directory):
    path = Path(directory) / MANIFEST
    try:
        manifest = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError as err:
        raise errors.ManifestError(f"no {MANIFEST} in {directory}") from err
    except json.JSONDecodeError as err:
        raise errors.ManifestError(f"{path}: {err}") from err
    version = manifest.get("format_version")
    if version != FORMAT_VERSION:
        raise errors.FormatVersionError(f"unsupported format_version {version!r}")
    for key in ("n", "c", "views"):
        if key not in manifest:
            raise errors.ManifestError(f"manifest lacks {key!r}")
    return manifest


def _read_exact(path, name, nbytes):
    try:
        size = path.stat().st_size
    except FileNotFoundError as err:
        raise errors.DataError(f"{name}: missing file {path.name}") from err
    if size != nbytes:
        raise errors.FileSizeError(name, nbytes, size)
    return path.read_bytes()


def load(directory):
    directory = Path(directory)
    manifest = read_manifest(directory)
    n, c = int(manifest["n"]), int(manifest["c"])
    views = []
    for entry in manifest["views"]:
        dim = int(entry["dim"])
        raw = _read_exact(directory / entry["file"], entry["name"], FLOAT.itemsize * dim * n)
        views.append(np.frombuffer(raw, dtype=FLOAT).reshape((dim, n), order="F").astype(np.float64))
    labels = None
    if manifest.get("labels_file"):
        raw = _read_exact(directory / manifest["labels_file"], "labels", LABEL.itemsize * n)
        labels = np.frombuffer(raw, dtype=LABEL).astype(np.int64)
        if labels.size and labels.max() >= c:
            raise errors.LabelRangeError(f"label {labels.max()} outside [0, {c})")
    dataset = MultiViewDataset(views, c, labels)
    validate_dataset(dataset)
    return dataset


def fingerprint(directory):
    """SHA-256 over the manifest and every file it references."""
    directory = Path(directory)
    manifest = read_manifest(directory)
    h = hashlib.sha256()
    files = [e["file"] for e in manifest["views"]]
    if manifest.get("labels_file"):
        files.append(manifest["labels_file"])
    for fname in [MANIFEST] + files:
        h.update(fname.encode("utf-8") + b"\0")
        h.update((directory / fname).read_bytes())
    return h.hexdigest()


def _read_csv(path, skip_header, parse):
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if lineno == 1 and skip_header:
                continue
            if not row or all(not cell.strip() for cell in row):
                continue
            parsed = []
            for col, cell in enumerate(row, start=1):
                try:
                    parsed.append(parse(cell))
                except ValueError:
                    raise errors.CsvParseError(path, lineno, col, f"cannot parse {cell!r}") from None
            if rows and len(parsed) != len(rows[0]):
                raise errors.CsvParseError(path, lineno, len(parsed),
                                           f"expected {len(rows[0])} columns")
            rows.append(parsed)
    return rows


def _parse_float(cell):
    value = float(cell)
    if not np.isfinite(value):
        raise ValueError(cell)
    return value


def import_csv(files, c, labels=None, skip_header=False):
    """Build a dataset from per-view CSVs with one row per sample."""
    views = []
    n = None
    for path in files:
        rows = _read_csv(path, skip_header, _parse_float)
        if not rows:
            raise errors.DataError(f"{path}: no data rows")
        if n is not None and len(rows) != n:
            raise errors.SampleCountError(f"{path} has {len(rows)} rows, expected {n}")
        n = len(rows)
        views.append(np.array(rows, dtype=np.float64).T)
    label_arr = None
    if labels is not None:
        rows = _read_csv(labels, skip_header, int)
        if any(len(r) != 1 for r in rows):
            raise errors.DataError(f"{labels}: expected a single label column")
        if len(rows) != n:
            raise errors.SampleCountError(f"{labels} has {len(rows)} rows, expected {n}")
        label_arr = np.array([r[0] for r in rows], dtype=np.int64)
    dataset = MultiViewDataset(views, c, label_arr)
    validate_dataset(dataset)
    return dataset
