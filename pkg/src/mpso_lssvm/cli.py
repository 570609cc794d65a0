"""Command-line front end: ``cv``, ``tune``, ``train`` and ``predict``.

Each command writes its artifacts into ``--out`` (a directory). Settings come
from defaults, then an optional JSON ``--config`` file, then flags; the
effective settings are embedded in every artifact. Machine-readable records
(``*.jsonl``) contain no timings, so reruns with one seed are byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import os
import sys
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import reference
from .data import PimaFormatError, build_dataset, parse_pima_csv, pima_csv_path, stratified_kfold
from .lssvm import (LssvmHyperParams, SolverError, Variant, load_model, predict, predict_raw,
                    save_model, train)
from .metrics import accuracy, confusion, rates
from .pso import SearchSpace, UpdateRule
from .tuner import DEFAULT_SPACE, TuneConfig, cv_fitness, tune


class CliError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    data: str | None = None
    standardize: bool = True
    gamma: float = reference.TUNED_GAMMA
    sigma: float = reference.TUNED_SIGMA
    folds: int = 10
    seed: int = 0
    preset: str = "desk"
    variant: str = Variant.AS_PRINTED.value
    rule: str = UpdateRule.MODIFIED.value
    gamma_bounds: tuple[float, float] = (DEFAULT_SPACE.lower[0], DEFAULT_SPACE.upper[0])
    sigma_bounds: tuple[float, float] = (DEFAULT_SPACE.lower[1], DEFAULT_SPACE.upper[1])
    jobs: int = 1
    out: str = "mpso_out"
    model: str | None = None
    input: str | None = None

    def as_dict(self):
        d = dataclasses.asdict(self)
        d["data"] = self.data_path()
        d["gamma_bounds"] = list(self.gamma_bounds)
        d["sigma_bounds"] = list(self.sigma_bounds)
        # not part of the numeric result
        for key in ("jobs", "out"):
            d.pop(key)
        return d

    def data_path(self) -> str:
        return self.data if self.data is not None else str(pima_csv_path())


_FIELDS = {f.name for f in dataclasses.fields(RunConfig)}


def load_config_file(path) -> dict:
    try:
        with open(path) as fh:
            values = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read config {path}: {exc}") from None
    if not isinstance(values, dict):
        raise CliError(f"config {path} must hold a JSON object")
    unknown = set(values) - _FIELDS
    if unknown:
        raise CliError(f"unknown config keys: {', '.join(sorted(unknown))}")
    for key in ("gamma_bounds", "sigma_bounds"):
        if key in values:
            values[key] = tuple(values[key])
    return values


def resolve_config(args: argparse.Namespace) -> RunConfig:
    values = {}
    if getattr(args, "config", None):
        values.update(load_config_file(args.config))
    values.update({k: v for k, v in vars(args).items() if k in _FIELDS})
    cfg = RunConfig(**values)
    if cfg.variant not in {v.value for v in Variant}:
        raise CliError(f"unknown variant {cfg.variant!r}")
    if cfg.rule not in {r.value for r in UpdateRule}:
        raise CliError(f"unknown update rule {cfg.rule!r}")
    return cfg


def _write_atomic(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _jsonl(records) -> str:
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in records)


def _load_dataset(cfg: RunConfig, standardize=None):
    path = cfg.data_path()
    try:
        records = parse_pima_csv(path)
    except FileNotFoundError:
        raise CliError(f"dataset not found: {path}") from None
    except PimaFormatError as exc:
        raise CliError(str(exc)) from None
    return build_dataset(records, cfg.standardize if standardize is None else standardize)


def _fold_table(fold_accs, published=None) -> list[str]:
    lines = []
    if published is not None:
        lines.append(f"{'Fold':>6}  {'Measured':>10}  {'Published':>10}")
        for i, (m, p) in enumerate(zip(fold_accs, published), 1):
            lines.append(f"{i:>6}  {100 * m:>9.3f}%  {p!s:>9}%")
    else:
        lines.append(f"{'Fold':>6}  {'Measured':>10}")
        for i, m in enumerate(fold_accs, 1):
            lines.append(f"{i:>6}  {100 * m:>9.3f}%")
    mean = 100 * float(np.mean(fold_accs))
    if published is not None:
        lines.append(f"{'Mean':>6}  {mean:>9.3f}%  {reference.MEAN_ACCURACY:>9.3f}%")
    else:
        lines.append(f"{'Mean':>6}  {mean:>9.3f}%")
    return lines


def _comparison_table() -> list[str]:
    lines = ["Published accuracies on the same data (reference only, not rerun):"]
    for name, acc, n in reference.COMPARISON_TABLE:
        lines.append(f"  {name:<32} {acc:>8.3f}%  {n} records")
    return lines


def _header(cmd, cfg) -> list[str]:
    return [f"# mpso_lssvm {cmd}", "# config: " + json.dumps(cfg.as_dict(), sort_keys=True)]


def cmd_cv(cfg: RunConfig) -> list[Path]:
    data = _load_dataset(cfg)
    hyper = LssvmHyperParams(cfg.gamma, cfg.sigma)
    variant = Variant(cfg.variant)
    plan = stratified_kfold(data.y, cfg.folds, cfg.seed)
    mean, folds = cv_fitness(data, plan, hyper, variant, n_jobs=cfg.jobs)

    # same folds, all four preprocessing/bias combinations
    matrix = []
    for std in (True, False):
        d = data if std == cfg.standardize else _load_dataset(cfg, standardize=std)
        for v in Variant:
            m, _ = cv_fitness(d, plan, hyper, v)
            matrix.append({"standardize": std, "variant": v.value, "mean_accuracy": m})

    published = reference.FOLD_ACCURACIES if cfg.folds == 10 else None
    gap = reference.MEAN_ACCURACY - 100 * mean
    lines = _header("cv", cfg) + [
        "",
        f"{cfg.folds}-fold cross-validation, gamma={cfg.gamma:g}, sigma={cfg.sigma:g}, "
        f"variant={variant.value}, standardize={cfg.standardize}",
        "(accuracies are on the held-out folds of the stratified fold plan)",
        "",
        *_fold_table(folds, published),
        "",
        f"Measured mean accuracy:  {100 * mean:.3f}%",
        f"Published mean accuracy: {reference.MEAN_ACCURACY:.3f}%",
        f"Gap (published - measured): {gap:+.3f} percentage points",
        "",
        "Same folds under each preprocessing / bias combination:",
        *(f"  standardize={r['standardize']!s:<5}  variant={r['variant']:<10}  "
          f"{100 * r['mean_accuracy']:.3f}%" for r in matrix),
        "",
        *_comparison_table(),
        "",
    ]
    records = [{"type": "config", **cfg.as_dict()}]
    records += [{"type": "fold", "fold": i + 1, "accuracy": float(a)} for i, a in enumerate(folds)]
    records += [{"type": "combination", **r} for r in matrix]
    records.append({"type": "summary", "mean_accuracy": mean,
                    "published_mean_accuracy": reference.MEAN_ACCURACY / 100,
                    "gap": reference.MEAN_ACCURACY / 100 - mean})
    out = Path(cfg.out)
    _write_atomic(out / "cv.jsonl", _jsonl(records))
    _write_atomic(out / "cv_report.txt", "\n".join(lines))
    return [out / "cv_report.txt", out / "cv.jsonl"]


def _tune_config(cfg: RunConfig) -> TuneConfig:
    space = SearchSpace(lower=(cfg.gamma_bounds[0], cfg.sigma_bounds[0]),
                        upper=(cfg.gamma_bounds[1], cfg.sigma_bounds[1]),
                        log_scale=(True, True))
    tc = TuneConfig.from_preset(cfg.preset, seed=cfg.seed, space=space, folds=cfg.folds,
                                lssvm_variant=Variant(cfg.variant))
    return dataclasses.replace(tc, pso=dataclasses.replace(tc.pso, update_rule=UpdateRule(cfg.rule)))


def cmd_tune(cfg: RunConfig) -> list[Path]:
    data = _load_dataset(cfg)
    tc = _tune_config(cfg)
    trace = []
    start = time.perf_counter()
    result = tune(data, tc, n_jobs=cfg.jobs, on_iteration=trace.append)
    wall = time.perf_counter() - start

    published = reference.FOLD_ACCURACIES if cfg.folds == 10 else None
    lines = _header("tune", cfg) + [
        "",
        f"Swarm: {tc.pso.swarm_size} particles x {tc.pso.max_iters} iterations, "
        f"rule={tc.pso.update_rule.value}, c1={tc.pso.c1:g}, c2={tc.pso.c2:g}",
        f"Winner: gamma={result.best_gamma:.6g}, sigma={result.best_sigma:.6g}  "
        f"(published: gamma={reference.TUNED_GAMMA:g}, sigma={reference.TUNED_SIGMA:g})",
        f"Wall time: {wall:.1f} s",
        "",
        "Cross-validation accuracy of the winner (the tuning folds themselves):",
        *_fold_table(result.fold_accuracies, published),
        "",
        f"Gap (published - measured): "
        f"{reference.MEAN_ACCURACY - 100 * result.best_cv_accuracy:+.3f} percentage points",
        "",
        "Convergence (global best CV accuracy per iteration):",
        *(f"  {r.iteration:>4}  {100 * r.best_fitness:.3f}%  "
          f"gamma={r.best_position[0]:.6g} sigma={r.best_position[1]:.6g}" for r in trace),
        "",
        *_comparison_table(),
        "",
    ]
    records = [{"type": "config", **cfg.as_dict()}]
    records += [{"type": "iteration", "iteration": r.iteration, "best_fitness": r.best_fitness,
                 "best_position": list(r.best_position)} for r in trace]
    records.append({"type": "summary", "best_gamma": result.best_gamma,
                    "best_sigma": result.best_sigma,
                    "best_cv_accuracy": result.best_cv_accuracy,
                    "fold_accuracies": [float(a) for a in result.fold_accuracies]})
    out = Path(cfg.out)
    save_model(result.final_model, out / "model.npz", run_config=cfg.as_dict())
    _write_atomic(out / "tune.jsonl", _jsonl(records))
    _write_atomic(out / "tune_report.txt", "\n".join(lines))
    return [out / "tune_report.txt", out / "tune.jsonl", out / "model.npz"]


def cmd_train(cfg: RunConfig) -> list[Path]:
    data = _load_dataset(cfg)
    model = train(data, LssvmHyperParams(cfg.gamma, cfg.sigma), Variant(cfg.variant))
    cm = confusion(predict(model, data.x), data.y)
    sens, spec = rates(cm)
    out = Path(cfg.out)
    save_model(model, out / "model.npz", run_config=cfg.as_dict())
    record = {"type": "summary", "training_accuracy": accuracy(cm), "tp": cm.tp, "tn": cm.tn,
              "fp": cm.fp, "fn": cm.fn, "sensitivity": sens, "specificity": spec,
              "positive_class": "+1 (raw label 1)"}
    _write_atomic(out / "train.jsonl", _jsonl([{"type": "config", **cfg.as_dict()}, record]))
    return [out / "model.npz", out / "train.jsonl"]


def read_feature_rows(path, n_features: int) -> np.ndarray:
    """Rows of ``n_features`` numbers; a trailing label column and a header are ignored."""
    rows = []
    try:
        with open(path, newline="") as fh:
            for lineno, row in enumerate(csv.reader(fh), 1):
                if not row or not any(t.strip() for t in row):
                    continue
                try:
                    values = [float(t) for t in row]
                except ValueError:
                    if not rows and lineno == 1:
                        continue
                    raise CliError(f"{path}:{lineno}: non-numeric field") from None
                if len(values) == n_features + 1:
                    values = values[:-1]
                if len(values) != n_features:
                    raise CliError(f"{path}:{lineno}: expected {n_features} features, "
                                   f"got {len(values)}")
                rows.append(values)
    except FileNotFoundError:
        raise CliError(f"input not found: {path}") from None
    return np.array(rows, dtype=float).reshape(len(rows), n_features)


def cmd_predict(cfg: RunConfig) -> list[Path]:
    if not cfg.model:
        raise CliError("predict needs --model")
    try:
        model = load_model(cfg.model)
    except (OSError, ValueError, KeyError) as exc:
        raise CliError(f"cannot load model {cfg.model}: {exc}") from None
    x = read_feature_rows(cfg.input or cfg.data_path(), model.n_features)
    labels, values = predict_raw(model, x)
    lines = _header("predict", cfg) + ["row,label,label01,decision_value"]
    lines += [f"{i},{int(lab)},{int(lab > 0)},{float(val)!r}"
              for i, (lab, val) in enumerate(zip(labels, values), 1)]
    out = Path(cfg.out) / "predictions.csv"
    _write_atomic(out, "\n".join(lines) + "\n")
    return [out]


COMMANDS = {"cv": cmd_cv, "tune": cmd_tune, "train": cmd_train, "predict": cmd_predict}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("data", nargs="?", help="Pima-format CSV (default: bundled copy)")
    common.add_argument("--config", help="JSON file with default settings")
    common.add_argument("--standardize", action=argparse.BooleanOptionalAction)
    common.add_argument("--gamma", type=float)
    common.add_argument("--sigma", type=float)
    common.add_argument("--folds", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--preset", choices=["desk", "paper"])
    common.add_argument("--variant", choices=[v.value for v in Variant])
    common.add_argument("--rule", choices=[r.value for r in UpdateRule])
    common.add_argument("--gamma-bounds", dest="gamma_bounds", type=float, nargs=2)
    common.add_argument("--sigma-bounds", dest="sigma_bounds", type=float, nargs=2)
    common.add_argument("--jobs", type=int, help="threads for fitness evaluation")
    common.add_argument("--out", help="output directory")

    parser = argparse.ArgumentParser(prog="mpso-lssvm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("cv", parents=[common], help="cross-validate at fixed gamma, sigma")
    sub.add_parser("tune", parents=[common], help="swarm-tune gamma, sigma and train")
    sub.add_parser("train", parents=[common], help="train at fixed gamma, sigma")
    p = sub.add_parser("predict", parents=[common], help="classify rows with a saved model")
    p.add_argument("--model", default=argparse.SUPPRESS)
    p.add_argument("--input", default=argparse.SUPPRESS)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "predict" and getattr(args, "data", None) is not None:
        args.input = getattr(args, "input", args.data)
    try:
        cfg = resolve_config(args)
        written = COMMANDS[args.command](cfg)
    except (CliError, SolverError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
