"""RBF kernel and kernel-matrix assembly.

The kernel is ``exp(-||x - z||^2 / sigma^2)``, with ``sigma^2`` (not
``2 sigma^2``) in the denominator.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist


class KernelKind(enum.Enum):
    RBF = "rbf"


@dataclass(frozen=True)
class KernelSpec:
    sigma: float
    kind: KernelKind = KernelKind.RBF

    def __post_init__(self):
        _check_sigma(self.sigma)


def _check_sigma(sigma):
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma!r}")


def _as_2d(x, name):
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x[None, :]
    if x.ndim != 2:
        raise ValueError(f"{name} must be a 2-D array")
    return x


def rbf(x, z, sigma: float) -> float:
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    if x.shape != z.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {z.shape}")
    _check_sigma(sigma)
    diff = x - z
    return float(np.exp(-np.dot(diff, diff) / sigma**2))


def sq_distances(a, b) -> np.ndarray:
    """Pairwise squared Euclidean distances.

    Each entry depends only on its two rows, so slicing a larger distance matrix
    gives bitwise the same values as recomputing on the subset.
    """
    a = _as_2d(a, "a")
    b = _as_2d(b, "b")
    if a.shape[1] != b.shape[1]:
        raise ValueError(f"dimension mismatch: {a.shape[1]} vs {b.shape[1]} features")
    if a.shape[0] == 0 or b.shape[0] == 0:
        return np.zeros((a.shape[0], b.shape[0]))
    return cdist(a, b, "sqeuclidean")


def rbf_from_sq_distances(d2, sigma: float) -> np.ndarray:
    _check_sigma(sigma)
    return np.exp(-np.asarray(d2) / sigma**2)


def _sigma_of(spec):
    if isinstance(spec, KernelSpec):
        return spec.sigma
    return float(spec)


def gram_matrix(x, spec) -> np.ndarray:
    """Kernel matrix of ``x`` against itself; ``spec`` is a KernelSpec or a bare sigma."""
    sigma = _sigma_of(spec)
    return rbf_from_sq_distances(sq_distances(x, x), sigma)


def cross_kernel(x_new, x_train, spec) -> np.ndarray:
    sigma = _sigma_of(spec)
    x_train = _as_2d(x_train, "x_train")
    x_new = np.asarray(x_new, dtype=float)
    if x_new.size == 0:
        return np.zeros((0, x_train.shape[0]))
    return rbf_from_sq_distances(sq_distances(x_new, x_train), sigma)
