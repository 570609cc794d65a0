"""Pima-schema CSV ingestion, bipolar labels, standardization and fold plans."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

FEATURE_NAMES = (
    "pregnancies",
    "plasma_glucose",
    "diastolic_bp",
    "triceps_skinfold",
    "serum_insulin",
    "bmi",
    "pedigree",
    "age",
)
N_FEATURES = len(FEATURE_NAMES)


class PimaFormatError(ValueError):
    """Raised when a Pima CSV file cannot be parsed."""


@dataclass(frozen=True)
class RawRecord:
    features: tuple[float, ...]
    class_label: int

    def __post_init__(self):
        if len(self.features) != N_FEATURES:
            raise ValueError(f"expected {N_FEATURES} features, got {len(self.features)}")
        if self.class_label not in (0, 1):
            raise ValueError(f"class_label must be 0 or 1, got {self.class_label!r}")


@dataclass(frozen=True)
class Standardization:
    mean: np.ndarray
    std: np.ndarray

    def __post_init__(self):
        if np.any(self.std <= 0):
            raise ValueError("standardization stddev must be positive")

    def apply(self, x):
        return (np.asarray(x, dtype=float) - self.mean) / self.std

    def invert(self, z):
        return np.asarray(z, dtype=float) * self.std + self.mean


@dataclass(frozen=True)
class Dataset:
    """Feature matrix with bipolar labels.

    ``zero_flags`` marks cells whose raw value was exactly zero. Those cells are
    kept as-is (no imputation); the flags only record where they were.
    """

    x: np.ndarray
    y: np.ndarray
    zero_flags: np.ndarray
    standardization: Standardization | None = None

    def __post_init__(self):
        n = self.x.shape[0]
        if self.y.shape != (n,) or self.zero_flags.shape[0] != n:
            raise ValueError("x, y and zero_flags must have the same number of rows")
        if not np.all((self.y == -1) | (self.y == 1)):
            raise ValueError("labels must be -1 or +1")
        for arr in (self.x, self.y, self.zero_flags):
            arr.setflags(write=False)

    @property
    def n_samples(self) -> int:
        return self.x.shape[0]

    @property
    def n_features(self) -> int:
        return self.x.shape[1]

    def subset(self, idx) -> Dataset:
        idx = np.asarray(idx)
        return Dataset(self.x[idx].copy(), self.y[idx].copy(),
                       self.zero_flags[idx].copy(), self.standardization)


@dataclass(frozen=True)
class FoldPlan:
    k: int
    assignments: np.ndarray
    seed: int

    def __post_init__(self):
        self.assignments.setflags(write=False)

    def fold_sizes(self) -> np.ndarray:
        return np.bincount(self.assignments, minlength=self.k)

    def split(self, fold: int) -> tuple[np.ndarray, np.ndarray]:
        """Return (train_idx, test_idx) for one fold."""
        mask = self.assignments == fold
        return np.flatnonzero(~mask), np.flatnonzero(mask)


def _looks_numeric(tokens) -> bool:
    try:
        for tok in tokens:
            float(tok)
    except ValueError:
        return False
    return True


def parse_pima_csv(path, *, delimiter: str = ",", header: bool | None = None) -> list[RawRecord]:
    """Parse a 9-column Pima CSV into records, in file order.

    ``header=None`` auto-detects a header: a first line with any non-numeric
    token is skipped. Zero entries are preserved verbatim.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        rows = [(lineno, row) for lineno, row in enumerate(csv.reader(fh, delimiter=delimiter), 1)
                if row and any(tok.strip() for tok in row)]
    if not rows:
        raise PimaFormatError(f"{path}: file is empty")

    if header is None:
        header = not _looks_numeric(rows[0][1])
    if header:
        rows = rows[1:]
    if not rows:
        raise PimaFormatError(f"{path}: no data rows")

    records = []
    for lineno, row in rows:
        if len(row) != N_FEATURES + 1:
            raise PimaFormatError(
                f"{path}:{lineno}: expected {N_FEATURES + 1} fields, got {len(row)}")
        try:
            values = [float(tok) for tok in row]
        except ValueError as exc:
            raise PimaFormatError(f"{path}:{lineno}: non-numeric field ({exc})") from None
        label = values[-1]
        if label not in (0.0, 1.0):
            raise PimaFormatError(f"{path}:{lineno}: class label must be 0 or 1, got {row[-1]!r}")
        records.append(RawRecord(tuple(values[:-1]), int(label)))
    return records


def pima_csv_path() -> Path:
    """Location of the bundled 768-row Pima Indians Diabetes CSV."""
    return Path(str(resources.files("mpso_lssvm") / "resources" / "pima-indians-diabetes.csv"))


def fit_standardization(x) -> Standardization:
    x = np.asarray(x, dtype=float)
    mean = x.mean(axis=0)
    std = x.std(axis=0)  # population stddev
    bad = np.flatnonzero(std == 0)
    if bad.size:
        names = [FEATURE_NAMES[j] if x.shape[1] == N_FEATURES else str(j) for j in bad]
        raise ValueError(f"cannot standardize constant column(s): {', '.join(names)}")
    return Standardization(mean, std)


def build_dataset(records, standardize: bool = True) -> Dataset:
    """Turn parsed records into a :class:`Dataset`.

    Labels map 0 -> -1 and 1 -> +1. With ``standardize`` each column is z-scored
    using the population stddev; zero cells take part like any other value.
    """
    if not records:
        raise ValueError("cannot build a dataset from zero records")
    raw = np.array([r.features for r in records], dtype=float)
    y = np.array([1.0 if r.class_label == 1 else -1.0 for r in records])
    zero_flags = raw == 0.0
    if not standardize:
        return Dataset(raw, y, zero_flags)
    stats = fit_standardization(raw)
    return Dataset(stats.apply(raw), y, zero_flags, stats)


def load_pima(standardize: bool = True) -> Dataset:
    return build_dataset(parse_pima_csv(pima_csv_path()), standardize=standardize)


def stratified_kfold(labels, k: int, seed: int = 0) -> FoldPlan:
    """Seeded stratified assignment of rows to ``k`` folds.

    Each class is shuffled independently and the classes are then dealt
    round-robin as one continuous sequence, which keeps both the total fold
    sizes and each class's per-fold counts within one of each other.
    """
    labels = np.asarray(labels)
    if k < 2:
        raise ValueError("k must be at least 2")
    rng = np.random.default_rng(seed)
    order = []
    for cls in np.unique(labels):
        members = np.flatnonzero(labels == cls)
        if members.size < k:
            raise ValueError(f"class {cls:+g} has {members.size} members, fewer than k={k}")
        order.append(rng.permutation(members))
    if len(order) < 2:
        raise ValueError("stratified folds need both classes present")
    order = np.concatenate(order)
    assignments = np.empty(labels.size, dtype=np.int64)
    assignments[order] = np.arange(order.size) % k
    return FoldPlan(k, assignments, seed)
