"""CSV ingestion, wavenumber filtering, fold assignment, and leakage-free scaling."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

__all__ = [
    "DatasetError",
    "FeatureKind",
    "FeatureDescriptor",
    "Dataset",
    "FoldAssignment",
    "Scaler",
    "load_dataset",
    "save_dataset",
    "select_wavenumber_range",
    "kfold_split",
    "standardize",
]


class DatasetError(ValueError):
    """An input file violated the CSV contract (shape, header, or cell contents)."""


class FeatureKind(Enum):
    NIR_WAVENUMBER = "nir_wavenumber"
    PROCESS = "process"


def _readonly(values, dtype=float):
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class FeatureDescriptor:
    """One input column: an NIR absorbance at a wavenumber, or a process setting."""

    name: str
    kind: FeatureKind
    wavenumber: float | None = None  # cm^-1, present exactly when kind is NIR_WAVENUMBER

    def __post_init__(self):
        if (self.kind is FeatureKind.NIR_WAVENUMBER) != (self.wavenumber is not None):
            raise ValueError(
                f"descriptor {self.name!r}: wavenumber must be present exactly for NIR features"
            )


@dataclass(frozen=True)
class Dataset:
    """Feature matrix (n samples x p features) with a molecular-weight target in Da.

    Arrays are stored read-only; all operations return new Dataset instances.
    """

    X: np.ndarray
    y: np.ndarray
    descriptors: tuple[FeatureDescriptor, ...]

    def __post_init__(self):
        X = _readonly(self.X)
        y = _readonly(self.y)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "descriptors", tuple(self.descriptors))
        if X.ndim != 2:
            raise ValueError("X must be a 2-D matrix")
        n, p = X.shape
        if y.shape != (n,):
            raise ValueError(f"y has shape {y.shape}, expected ({n},)")
        if n < 2:
            raise ValueError(f"need at least 2 samples, got {n}")
        if p < 1:
            raise ValueError("need at least 1 feature")
        if len(self.descriptors) != p:
            raise ValueError(f"{len(self.descriptors)} descriptors for {p} feature columns")
        if not (np.isfinite(X).all() and np.isfinite(y).all()):
            raise ValueError("dataset contains non-finite values")
        names = [d.name for d in self.descriptors]
        if len(set(names)) != len(names):
            raise ValueError("duplicate feature names")

    @property
    def n_samples(self) -> int:
        return self.X.shape[0]

    @property
    def n_features(self) -> int:
        return self.X.shape[1]

    def feature_names(self) -> tuple[str, ...]:
        return tuple(d.name for d in self.descriptors)


def _descriptor_from_header(name: str) -> FeatureDescriptor:
    # A header that parses as a finite number is an NIR wavenumber in cm^-1;
    # everything else is a process feature.
    try:
        wavenumber = float(name)
    except ValueError:
        return FeatureDescriptor(name, FeatureKind.PROCESS)
    if not math.isfinite(wavenumber):
        return FeatureDescriptor(name, FeatureKind.PROCESS)
    return FeatureDescriptor(name, FeatureKind.NIR_WAVENUMBER, wavenumber)


def load_dataset(path, target_column: str = "Mn") -> Dataset:
    """Read a headed, all-numeric CSV; `target_column` becomes y, the rest X.

    Cells must parse as finite numbers; empty or non-finite cells are hard
    errors reported with their file line and column name.
    """
    path = Path(path)
    if not path.exists():
        raise DatasetError(f"no such file: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [cell.strip() for cell in next(reader)]
        except StopIteration:
            raise DatasetError(f"{path}: empty file, expected a header row") from None
        if len(header) != len(set(header)):
            dupes = sorted({h for h in header if header.count(h) > 1})
            raise DatasetError(f"{path}: duplicate column names {dupes}")
        if target_column not in header:
            raise DatasetError(f"{path}: target column {target_column!r} not found in header")
        target_idx = header.index(target_column)

        rows = []
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue  # tolerate blank trailing lines
            if len(row) != len(header):
                raise DatasetError(
                    f"{path}:{line_no}: row has {len(row)} cells, header has {len(header)}"
                )
            parsed = []
            for col_name, cell in zip(header, row):
                text = cell.strip()
                try:
                    value = float(text)
                except ValueError:
                    raise DatasetError(
                        f"{path}:{line_no}: non-numeric cell {text!r} in column {col_name!r}"
                    ) from None
                if not math.isfinite(value):
                    raise DatasetError(
                        f"{path}:{line_no}: non-finite cell {text!r} in column {col_name!r}"
                    )
                parsed.append(value)
            rows.append(parsed)

    if len(rows) < 2:
        raise DatasetError(f"{path}: {len(rows)} data rows, need at least 2")
    data = np.asarray(rows, dtype=float)
    y = data[:, target_idx]
    X = np.delete(data, target_idx, axis=1)
    descriptors = tuple(
        _descriptor_from_header(name) for i, name in enumerate(header) if i != target_idx
    )
    return Dataset(X, y, descriptors)


def save_dataset(ds: Dataset, path, target_column: str = "Mn") -> None:
    """Write a Dataset back to CSV. Values use shortest round-trip formatting,
    so load_dataset(save_dataset(ds)) reproduces every double bit-exactly."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(ds.feature_names()) + [target_column])
        for i in range(ds.n_samples):
            writer.writerow([repr(float(v)) for v in ds.X[i]] + [repr(float(ds.y[i]))])


def select_wavenumber_range(ds: Dataset, lo: float, hi: float) -> Dataset:
    """Keep all process features plus NIR features with lo <= wavenumber <= hi.

    Column order is preserved; process features are never dropped.
    """
    if lo > hi:
        raise ValueError(f"invalid wavenumber range: lo={lo} > hi={hi}")
    keep = [
        i
        for i, d in enumerate(ds.descriptors)
        if d.kind is FeatureKind.PROCESS or lo <= d.wavenumber <= hi
    ]
    if not keep:
        raise ValueError(f"wavenumber range [{lo}, {hi}] removed every feature")
    return Dataset(ds.X[:, keep], ds.y, tuple(ds.descriptors[i] for i in keep))


@dataclass(frozen=True)
class FoldAssignment:
    """Partition of n samples into k folds whose sizes differ by at most one."""

    k: int
    membership: np.ndarray  # (n,) fold index per sample

    def __post_init__(self):
        membership = _readonly(self.membership, dtype=np.int64)
        object.__setattr__(self, "membership", membership)
        if self.k < 2:
            raise ValueError("need at least 2 folds")
        if membership.ndim != 1:
            raise ValueError("membership must be 1-D")
        if membership.min() < 0 or membership.max() >= self.k:
            raise ValueError("fold indices out of range")
        sizes = np.bincount(membership, minlength=self.k)
        if sizes.min() == 0:
            raise ValueError("every fold must be nonempty")
        if sizes.max() - sizes.min() > 1:
            raise ValueError("fold sizes differ by more than 1")

    @property
    def n_samples(self) -> int:
        return self.membership.shape[0]

    def fold_sizes(self) -> np.ndarray:
        return np.bincount(self.membership, minlength=self.k)

    def test_rows(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.membership == fold)

    def train_rows(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.membership != fold)


def kfold_split(n: int, k: int, seed: int) -> FoldAssignment:
    """Seeded uniform shuffle followed by round-robin fold assignment.

    Deterministic for a fixed (n, k, seed).
    """
    if k < 2:
        raise ValueError(f"need at least 2 folds, got k={k}")
    if k > n:
        raise ValueError(f"cannot split {n} samples into {k} folds")
    order = np.random.default_rng(seed).permutation(n)
    membership = np.empty(n, dtype=np.int64)
    membership[order] = np.arange(n) % k
    return FoldAssignment(k, membership)


@dataclass(frozen=True)
class Scaler:
    """Per-column z-score parameters fitted on training rows only.

    Standard deviations are population (divide by n). Constant columns are
    flagged and transform to exactly 0.
    """

    means: np.ndarray
    stds: np.ndarray
    constant: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "means", _readonly(self.means))
        object.__setattr__(self, "stds", _readonly(self.stds))
        object.__setattr__(self, "constant", _readonly(self.constant, dtype=bool))

    def transform(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        safe = np.where(self.constant, 1.0, self.stds)
        Z = (X - self.means) / safe
        if self.constant.any():
            Z[..., self.constant] = 0.0
        return Z

    def inverse_transform(self, Z) -> np.ndarray:
        Z = np.asarray(Z, dtype=float)
        return Z * self.stds + self.means

    def to_dict(self) -> dict:
        return {
            "means": [float(v) for v in self.means],
            "stds": [float(v) for v in self.stds],
            "constant": [bool(v) for v in self.constant],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "Scaler":
        return cls(
            np.asarray(doc["means"], dtype=float),
            np.asarray(doc["stds"], dtype=float),
            np.asarray(doc["constant"], dtype=bool),
        )


def standardize(train_rows, X) -> tuple[Scaler, np.ndarray]:
    """Fit a Scaler on the given training rows and transform the whole matrix.

    Returns (scaler, X_transformed); apply the scaler to later rows via
    scaler.transform.
    """
    train_rows = np.asarray(train_rows, dtype=np.int64)
    if train_rows.size == 0:
        raise ValueError("train_rows is empty")
    X = np.asarray(X, dtype=float)
    sub = X[train_rows]
    means = sub.mean(axis=0)
    stds = sub.std(axis=0)
    scaler = Scaler(means, stds, stds == 0.0)
    return scaler, scaler.transform(X)
