"""LS-SVM classification with swarm-tuned hyperparameters."""

from .data import Dataset, FoldPlan, RawRecord, build_dataset, load_pima, parse_pima_csv, stratified_kfold
from .kernel import KernelSpec, cross_kernel, gram_matrix, rbf
from .lssvm import (LssvmHyperParams, LssvmModel, SolverError, Variant, classify, decision_value,
                    load_model, predict, save_model, train)
from .metrics import ConfusionMatrix, accuracy, confusion, rates
from .pso import (Inertia, PsoConfig, SearchSpace, UpdateRule, constriction_factor, inertia_weight,
                  optimize, step_particle)
from .tuner import TuneConfig, TuneResult, cv_fitness, tune

__version__ = "0.1.0"
