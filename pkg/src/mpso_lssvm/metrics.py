"""Confusion-matrix accounting with +1 as the positive class."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int = 0
    tn: int = 0
    fp: int = 0
    fn: int = 0

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn


def _bipolar(v, name):
    v = np.asarray(v)
    if v.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    if not np.all((v == 1) | (v == -1)):
        raise ValueError(f"{name} contains values other than -1/+1")
    return v


def confusion(predicted, actual) -> ConfusionMatrix:
    predicted = _bipolar(predicted, "predicted")
    actual = _bipolar(actual, "actual")
    if predicted.shape != actual.shape:
        raise ValueError(f"length mismatch: {predicted.size} predictions, {actual.size} labels")
    pos_pred = predicted == 1
    pos_true = actual == 1
    return ConfusionMatrix(
        tp=int(np.count_nonzero(pos_pred & pos_true)),
        tn=int(np.count_nonzero(~pos_pred & ~pos_true)),
        fp=int(np.count_nonzero(pos_pred & ~pos_true)),
        fn=int(np.count_nonzero(~pos_pred & pos_true)),
    )


def accuracy(cm: ConfusionMatrix) -> float:
    if cm.total == 0:
        raise ValueError("accuracy of an empty confusion matrix is undefined")
    return (cm.tp + cm.tn) / cm.total


def rates(cm: ConfusionMatrix) -> tuple[float | None, float | None]:
    """(sensitivity, specificity); a rate with an empty denominator is None."""
    sens = cm.tp / (cm.tp + cm.fn) if cm.tp + cm.fn else None
    spec = cm.tn / (cm.tn + cm.fp) if cm.tn + cm.fp else None
    return sens, spec
