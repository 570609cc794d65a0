"""Swarm search over (gamma, sigma) with k-fold CV accuracy as fitness."""

from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import reference
from .data import Dataset, FoldPlan, stratified_kfold
from .kernel import rbf_from_sq_distances, sq_distances
from .lssvm import LssvmHyperParams, LssvmModel, SolverError, Variant, fit_arrays, train
from .metrics import accuracy, confusion
from .pso import PsoConfig, SearchSpace, optimize

DEFAULT_SPACE = SearchSpace(lower=(1e-2, 1e-2), upper=(1e3, 1e2), log_scale=(True, True))

PRESETS = {
    "desk": PsoConfig(swarm_size=30, max_iters=50),
    "paper": PsoConfig(swarm_size=reference.SWARM_SIZE, max_iters=reference.ITERATIONS),
}


@dataclass(frozen=True)
class TuneConfig:
    space: SearchSpace = DEFAULT_SPACE
    pso: PsoConfig = field(default_factory=lambda: PRESETS["desk"])
    folds: int = 10
    cv_seed: int = 0
    lssvm_variant: Variant = Variant.AS_PRINTED

    def __post_init__(self):
        if self.space.dims != 2:
            raise ValueError("the search space must be two-dimensional (gamma, sigma)")
        if not all(lo > 0 for lo in self.space.lower):
            raise ValueError("gamma and sigma ranges must be strictly positive")

    @classmethod
    def from_preset(cls, name: str, seed: int = 0, **kwargs) -> TuneConfig:
        try:
            pso = PRESETS[name]
        except KeyError:
            raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
        return cls(pso=replace(pso, seed=seed), cv_seed=seed, **kwargs)


@dataclass(frozen=True)
class TuneResult:
    best_gamma: float
    best_sigma: float
    best_cv_accuracy: float
    fold_accuracies: np.ndarray
    history: list[float]
    final_model: LssvmModel
    plan: FoldPlan


class CrossValidator:
    """Fold bookkeeping for one (dataset, fold plan) pair.

    Pairwise distances are computed once; each candidate then only pays for
    the kernel exponential and the per-fold solves.
    """

    def __init__(self, data: Dataset, plan: FoldPlan):
        if plan.assignments.shape != (data.n_samples,):
            raise ValueError(
                f"fold plan covers {plan.assignments.size} rows, dataset has {data.n_samples}")
        self.data = data
        self.plan = plan
        d2 = sq_distances(data.x, data.x)
        self._folds = []
        for f in range(plan.k):
            tr, te = plan.split(f)
            self._folds.append((tr, te, d2[np.ix_(tr, tr)], d2[np.ix_(te, tr)]))

    def fold_accuracy(self, f: int, hyper: LssvmHyperParams, variant: Variant) -> float:
        tr, te, d2_train, d2_test = self._folds[f]
        gram = rbf_from_sq_distances(d2_train, hyper.sigma)
        model = fit_arrays(self.data.x[tr], self.data.y[tr], hyper, variant, gram=gram)
        values = rbf_from_sq_distances(d2_test, hyper.sigma) @ model.alpha + model.bias
        pred = np.where(values >= 0, 1, -1)
        return accuracy(confusion(pred, self.data.y[te]))

    def evaluate(self, hyper: LssvmHyperParams, variant: Variant = Variant.AS_PRINTED,
                 n_jobs: int = 1) -> tuple[float, np.ndarray]:
        folds = range(self.plan.k)
        try:
            if n_jobs > 1:
                with ThreadPoolExecutor(n_jobs) as pool:
                    accs = list(pool.map(lambda f: self.fold_accuracy(f, hyper, variant), folds))
            else:
                accs = [self.fold_accuracy(f, hyper, variant) for f in folds]
        except SolverError:
            # an unsolvable candidate scores zero instead of aborting the search
            return 0.0, np.zeros(self.plan.k)
        accs = np.array(accs)
        return float(np.mean(accs)), accs


def cv_fitness(data: Dataset, plan: FoldPlan, hyper: LssvmHyperParams,
               variant: Variant = Variant.AS_PRINTED, n_jobs: int = 1) -> tuple[float, np.ndarray]:
    """Mean and per-fold accuracy of an LS-SVM with ``hyper`` under ``plan``."""
    return CrossValidator(data, plan).evaluate(hyper, variant, n_jobs)


def tune(data: Dataset, cfg: TuneConfig | None = None, *, n_jobs: int = 1,
         on_iteration=None, cache: bool = True) -> TuneResult:
    """Search (gamma, sigma) by PSO, then retrain on every row with the winner.

    One fold plan is drawn from ``cfg.cv_seed`` and reused for every candidate.
    ``n_jobs`` threads evaluate the swarm concurrently; the result does not
    depend on it. ``cache`` memoizes fitness by exact (gamma, sigma).
    """
    cfg = cfg or TuneConfig()
    plan = stratified_kfold(data.y, cfg.folds, cfg.cv_seed)
    cv = CrossValidator(data, plan)
    memo: dict[tuple[float, float], float] = {}
    lock = threading.Lock()

    def objective(point):
        key = (float(point[0]), float(point[1]))
        if cache:
            with lock:
                if key in memo:
                    return memo[key]
        score, _ = cv.evaluate(LssvmHyperParams(*key), cfg.lssvm_variant)
        if cache:
            with lock:
                memo[key] = score
        return score

    result = optimize(objective, cfg.space, cfg.pso, on_iteration, n_jobs=n_jobs)
    gamma, sigma = (float(v) for v in result.best_position)
    hyper = LssvmHyperParams(gamma, sigma)
    mean, folds = cv.evaluate(hyper, cfg.lssvm_variant)
    final = train(data, hyper, cfg.lssvm_variant)
    return TuneResult(gamma, sigma, mean, folds, list(result.history), final, plan)

