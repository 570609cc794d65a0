"""Least-squares SVM classifier with an RBF kernel.

Training solves one dense linear system. Two forms are available:

``AS_PRINTED``
    ``(K + I/gamma) alpha = y`` with no bias term; decision value
    ``sum_k alpha_k K(x, x_k)``.
``BORDERED``
    the saddle-point system with a bias row and column,
    ``[[0, 1^T], [1, K + I/gamma]] [b; alpha] = [0; y]``, which enforces
    ``sum(alpha) = 0`` and adds ``b`` to the decision value.
"""

from __future__ import annotations

import enum
import json
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import linalg

from .data import Dataset, Standardization
from .kernel import cross_kernel, gram_matrix

FORMAT_VERSION = 1
RESIDUAL_TOL = 1e-8
MAX_CONDITION = 1e14


class Variant(enum.Enum):
    AS_PRINTED = "as-printed"
    BORDERED = "bordered"


class SolverError(RuntimeError):
    """The training system could not be solved to the required accuracy."""

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


@dataclass(frozen=True)
class LssvmHyperParams:
    gamma: float
    sigma: float

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError(f"gamma must be positive, got {self.gamma!r}")
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma!r}")


@dataclass(frozen=True)
class LssvmModel:
    x_train: np.ndarray
    alpha: np.ndarray
    bias: float
    hyper: LssvmHyperParams
    variant: Variant = Variant.AS_PRINTED
    standardization: Standardization | None = None

    def __post_init__(self):
        if self.alpha.shape != (self.x_train.shape[0],):
            raise ValueError("alpha must have one entry per training row")

    @property
    def n_features(self) -> int:
        return self.x_train.shape[1]


class _SpdSolver:
    """Factor a symmetric system once, solve many right-hand sides.

    Cholesky first; on failure one retry with a small diagonal jitter; then LU
    with partial pivoting, refused when the 1-norm condition estimate exceeds
    ``MAX_CONDITION``.
    """

    def __init__(self, a):
        self.a = a
        n = a.shape[0]
        try:
            self._cho = linalg.cho_factor(a, lower=True, check_finite=False)
            return
        except linalg.LinAlgError:
            pass
        jitter = 1e-10 * np.trace(a) / n
        try:
            self._cho = linalg.cho_factor(a + jitter * np.eye(n), lower=True, check_finite=False)
            return
        except linalg.LinAlgError:
            pass
        self._cho = None
        cond = np.linalg.cond(a, 1)
        if not np.isfinite(cond) or cond > MAX_CONDITION:
            raise SolverError(f"training system is ill-conditioned (cond ~ {cond:.3g})", cond)
        self._lu = linalg.lu_factor(a, check_finite=False)

    def _raw_solve(self, b):
        if self._cho is not None:
            return linalg.cho_solve(self._cho, b, check_finite=False)
        return linalg.lu_solve(self._lu, b, check_finite=False)

    def solve(self, b):
        x = self._raw_solve(b)
        # one step of iterative refinement against the unjittered matrix
        x = x + self._raw_solve(b - self.a @ x)
        return x


def system_matrix(gram, gamma):
    a = gram.copy()
    a[np.diag_indices_from(a)] += 1.0 / gamma
    return a


def kkt_residual(model: LssvmModel, y) -> float:
    """Max-norm residual of the model's training system for labels ``y``."""
    a = system_matrix(gram_matrix(model.x_train, model.hyper.sigma), model.hyper.gamma)
    res = np.max(np.abs(a @ model.alpha + model.bias - np.asarray(y, dtype=float)))
    if model.variant is Variant.BORDERED:
        res = max(res, abs(model.alpha.sum()))
    return float(res)


def _solve(gram, y, gamma, variant):
    a = system_matrix(gram, gamma)
    solver = _SpdSolver(a)
    if variant is Variant.AS_PRINTED:
        alpha = solver.solve(y)
        bias = 0.0
        res = np.max(np.abs(a @ alpha - y))
    else:
        # block elimination of the bordered system: two SPD solves
        ones = np.ones_like(y)
        eta = solver.solve(ones)
        nu = solver.solve(y)
        bias = float(nu.sum() / eta.sum())
        alpha = nu - bias * eta
        res = max(np.max(np.abs(a @ alpha + bias - y)), abs(alpha.sum()))
    if not np.all(np.isfinite(alpha)) or not res < RESIDUAL_TOL:
        cond = np.linalg.cond(a, 1)
        raise SolverError(f"residual {res:.3g} exceeds {RESIDUAL_TOL:g} (cond ~ {cond:.3g})", cond)
    return alpha, bias


def fit_arrays(x, y, hyper: LssvmHyperParams, variant: Variant = Variant.AS_PRINTED, *,
               gram=None, standardization=None) -> LssvmModel:
    """Train on raw arrays; ``gram`` may be supplied when already computed."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape[0] < 2:
        raise ValueError("need at least two training points")
    if not (np.any(y == 1) and np.any(y == -1)):
        raise ValueError("training data must contain both classes")
    if gram is None:
        gram = gram_matrix(x, hyper.sigma)
    alpha, bias = _solve(gram, y, hyper.gamma, Variant(variant))
    return LssvmModel(x, alpha, bias, hyper, Variant(variant), standardization)


def train(data: Dataset, hyper: LssvmHyperParams,
          variant: Variant = Variant.AS_PRINTED) -> LssvmModel:
    return fit_arrays(data.x, data.y, hyper, variant, standardization=data.standardization)


def decision_function(model: LssvmModel, x) -> np.ndarray:
    """Decision values for each row of ``x`` (already in the model's feature space)."""
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x[None, :] if x.size else x.reshape(0, model.n_features)
    if x.shape[1] != model.n_features:
        raise ValueError(f"expected {model.n_features} features, got {x.shape[1]}")
    return cross_kernel(x, model.x_train, model.hyper.sigma) @ model.alpha + model.bias


def decision_value(model: LssvmModel, x) -> float:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError("decision_value takes a single feature vector")
    return float(decision_function(model, x)[0])


def sign_label(values):
    """Map decision values to -1/+1; an exact zero counts as +1."""
    return np.where(np.asarray(values) >= 0, 1, -1)


def classify(model: LssvmModel, x) -> int:
    return int(sign_label(decision_value(model, x)))


def predict(model: LssvmModel, x) -> np.ndarray:
    return sign_label(decision_function(model, x))


def predict_raw(model: LssvmModel, x_raw) -> tuple[np.ndarray, np.ndarray]:
    """Labels and decision values for unscaled inputs, using the model's stored scaling."""
    x = np.asarray(x_raw, dtype=float)
    if model.standardization is not None and x.size:
        x = model.standardization.apply(x)
    values = decision_function(model, x)
    return sign_label(values), values


def save_model(model: LssvmModel, path, run_config: dict | None = None) -> Path:
    """Write ``model`` as a single ``.npz`` file (atomically)."""
    path = Path(path)
    meta = {
        "format": "mpso_lssvm.model",
        "format_version": FORMAT_VERSION,
        "gamma": model.hyper.gamma,
        "sigma": model.hyper.sigma,
        "kernel": "rbf",
        "variant": model.variant.value,
        "bias": model.bias,
        "standardized": model.standardization is not None,
        "run_config": run_config,
    }
    arrays = {"x_train": model.x_train, "alpha": model.alpha}
    if model.standardization is not None:
        arrays["std_mean"] = model.standardization.mean
        arrays["std_scale"] = model.standardization.std
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    with os.fdopen(fd, "wb") as fh:
        np.savez(fh, meta=np.array(json.dumps(meta, sort_keys=True)), **arrays)
    os.replace(tmp, path)
    return path


def load_model(path) -> LssvmModel:
    with np.load(Path(path), allow_pickle=False) as npz:
        meta = json.loads(str(npz["meta"]))
        if meta.get("format") != "mpso_lssvm.model":
            raise ValueError(f"{path}: not a model file")
        if meta.get("format_version") != FORMAT_VERSION:
            raise ValueError(f"{path}: unsupported format version {meta.get('format_version')!r}")
        stats = None
        if meta["standardized"]:
            stats = Standardization(npz["std_mean"], npz["std_scale"])
        return LssvmModel(
            x_train=npz["x_train"],
            alpha=npz["alpha"],
            bias=float(meta["bias"]),
            hyper=LssvmHyperParams(meta["gamma"], meta["sigma"]),
            variant=Variant(meta["variant"]),
            standardization=stats,
        )
