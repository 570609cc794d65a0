"""Particle swarm optimizer with constriction factor and decaying inertia.

The optimizer maximizes. Two update rules are available:

* ``MODIFIED`` (default)::

      V <- lam * (w V + c1 r1 (pbest - X) + c2 r2 (gbest - X))
      X <- X + w V

  with ``lam = 2 / |2 - C - sqrt(C^2 - 4C)|``, ``C = c1 + c2 > 4``.

* ``STANDARD``::

      V <- w V + c1 r1 (pbest - X) + c2 r2 (gbest - X)
      X <- X + V

In both rules the velocity is clamped to ``[-Vmax, Vmax]`` before the position
update, and positions leaving the box are clamped to the boundary with the
offending velocity component zeroed.

Coordinates flagged ``log_scale`` are searched in log10 space; the objective
always sees natural units.
"""

from __future__ import annotations

import enum
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np


class UpdateRule(enum.Enum):
    MODIFIED = "modified"
    STANDARD = "standard"


class InertiaKind(enum.Enum):
    LINEAR_DECAY = "linear-decay"
    CONSTANT = "constant"
    RANDOM = "random"


@dataclass(frozen=True)
class Inertia:
    kind: InertiaKind = InertiaKind.LINEAR_DECAY
    value: float | None = None

    @classmethod
    def linear_decay(cls):
        return cls(InertiaKind.LINEAR_DECAY)

    @classmethod
    def constant(cls, value: float):
        return cls(InertiaKind.CONSTANT, float(value))

    @classmethod
    def random(cls):
        return cls(InertiaKind.RANDOM)

    def __post_init__(self):
        if self.kind is InertiaKind.CONSTANT and self.value is None:
            raise ValueError("constant inertia needs a value")


class OptimizationError(RuntimeError):
    pass


@dataclass(frozen=True)
class SearchSpace:
    lower: tuple[float, ...]
    upper: tuple[float, ...]
    log_scale: tuple[bool, ...] | None = None

    def __post_init__(self):
        lower = tuple(float(v) for v in self.lower)
        upper = tuple(float(v) for v in self.upper)
        log_scale = (tuple(bool(f) for f in self.log_scale) if self.log_scale is not None
                     else (False,) * len(lower))
        if not (len(lower) == len(upper) == len(log_scale)) or not lower:
            raise ValueError("lower, upper and log_scale must have the same non-zero length")
        for i, (lo, hi, lg) in enumerate(zip(lower, upper, log_scale)):
            # lo == hi is allowed: a collapsed coordinate is simply held fixed
            if not lo <= hi:
                raise ValueError(f"dimension {i}: lower {lo} exceeds upper {hi}")
            if lg and not lo > 0:
                raise ValueError(f"dimension {i}: log-scaled bounds must be positive")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "log_scale", log_scale)
        flags = np.array(log_scale)
        lo, hi = np.array(lower), np.array(upper)
        lo[flags] = np.log10(lo[flags])
        hi[flags] = np.log10(hi[flags])
        lo.setflags(write=False)
        hi.setflags(write=False)
        object.__setattr__(self, "_bounds", (lo, hi))

    @property
    def dims(self) -> int:
        return len(self.lower)

    def search_bounds(self) -> tuple[np.ndarray, np.ndarray]:
        """Box in search coordinates (log10 applied where flagged)."""
        return self._bounds

    def to_natural(self, u) -> np.ndarray:
        x = np.array(u, dtype=float)
        flags = np.array(self.log_scale)
        lo = np.array(self.lower)
        hi = np.array(self.upper)
        x[flags] = 10.0 ** x[flags]
        x = np.clip(x, lo, hi)
        return np.where(lo == hi, lo, x)

    def to_search(self, x) -> np.ndarray:
        u = np.array(x, dtype=float)
        flags = np.array(self.log_scale)
        u[flags] = np.log10(u[flags])
        return u


@dataclass(frozen=True)
class PsoConfig:
    swarm_size: int = 30
    max_iters: int = 50
    c1: float = 2.05
    c2: float = 2.05
    inertia: Inertia = field(default_factory=Inertia.linear_decay)
    vmax_fraction: float = 0.5
    update_rule: UpdateRule = UpdateRule.MODIFIED
    seed: int = 0

    def __post_init__(self):
        if self.swarm_size < 1 or self.max_iters < 1:
            raise ValueError("swarm_size and max_iters must be positive")
        if not 0 < self.vmax_fraction <= 1:
            raise ValueError("vmax_fraction must lie in (0, 1]")
        if self.update_rule is UpdateRule.MODIFIED and not self.c1 + self.c2 > 4:
            raise ValueError(
                f"modified rule needs c1 + c2 > 4 for a real constriction factor, "
                f"got {self.c1 + self.c2}")


@dataclass(frozen=True)
class Particle:
    position: np.ndarray
    velocity: np.ndarray
    best_position: np.ndarray
    best_fitness: float = -math.inf


@dataclass(frozen=True)
class SwarmState:
    particles: tuple[Particle, ...]
    global_best_position: np.ndarray
    global_best_fitness: float
    iteration: int


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    best_fitness: float
    best_position: tuple[float, ...]

    def to_json(self) -> str:
        return json.dumps({"iteration": self.iteration, "best_fitness": self.best_fitness,
                           "best_position": list(self.best_position)})


class OptimizeResult(NamedTuple):
    best_position: np.ndarray
    best_fitness: float
    history: list[float]


def constriction_factor(c1: float, c2: float) -> float:
    c = c1 + c2
    if not c > 4:
        raise ValueError(f"constriction factor needs c1 + c2 > 4, got {c}")
    return 2.0 / abs(2.0 - c - math.sqrt(c * c - 4.0 * c))


def inertia_weight(t: int, t_max: int, strategy: Inertia | None = None, rng=None) -> float:
    strategy = strategy or Inertia.linear_decay()
    if t_max < 1 or not 0 <= t <= t_max:
        raise ValueError(f"need 0 <= t <= t_max and t_max >= 1, got t={t}, t_max={t_max}")
    if strategy.kind is InertiaKind.LINEAR_DECAY:
        return 0.9 - (t / t_max) * 0.5
    if strategy.kind is InertiaKind.CONSTANT:
        return strategy.value
    if rng is None:
        raise ValueError("random inertia needs a random generator")
    return float(rng.uniform(0.4, 0.9))


def vmax_for(space: SearchSpace, cfg: PsoConfig) -> np.ndarray:
    lo, hi = space.search_bounds()
    return cfg.vmax_fraction * (hi - lo)


def step_particle(p: Particle, gbest, omega: float, lam: float, cfg: PsoConfig,
                  space: SearchSpace, rng, *, position_weight: float | None = None) -> Particle:
    """Move one particle one step; positions are in search coordinates.

    ``position_weight`` overrides the ``w`` multiplier of the modified position
    update (used to check the modified rule against the standard one).
    """
    x = p.position
    d = x.size
    r1 = rng.random(d)
    r2 = rng.random(d)
    pull = cfg.c1 * r1 * (p.best_position - x) + cfg.c2 * r2 * (np.asarray(gbest) - x)
    vmax = vmax_for(space, cfg)
    if cfg.update_rule is UpdateRule.MODIFIED:
        v = lam * (omega * p.velocity + pull)
        v = np.clip(v, -vmax, vmax)
        x_new = x + (omega if position_weight is None else position_weight) * v
    else:
        v = omega * p.velocity + pull
        v = np.clip(v, -vmax, vmax)
        x_new = x + v

    lo, hi = space.search_bounds()
    out = (x_new < lo) | (x_new > hi)
    x_new = np.clip(x_new, lo, hi)
    v = np.where(out, 0.0, v)
    return Particle(x_new, v, p.best_position, p.best_fitness)


def _evaluate(objective, space, positions, iteration, pool):
    def one(i):
        try:
            return float(objective(space.to_natural(positions[i])))
        except Exception as exc:
            raise OptimizationError(
                f"objective failed at iteration {iteration}, particle {i}: {exc}") from exc

    idx = range(len(positions))
    if pool is None:
        return [one(i) for i in idx]
    return list(pool.map(one, idx))


def optimize(objective: Callable[[np.ndarray], float], space: SearchSpace, cfg: PsoConfig,
             on_iteration: Callable[[IterationRecord], None] | None = None, *,
             n_jobs: int = 1, standard_equivalence: bool = False) -> OptimizeResult:
    """Maximize ``objective`` over ``space``.

    The swarm is initialized uniformly in the box and evaluated, then moved and
    re-evaluated ``cfg.max_iters`` times. ``history[t]`` is the global best after
    iteration ``t + 1``. Fitness evaluations of one iteration run on ``n_jobs``
    threads; every particle draws from its own random substream, so results do
    not depend on ``n_jobs``.

    ``standard_equivalence`` forces ``lam = 1`` and a unit position weight,
    which turns the modified rule into the standard one.
    """
    lo, hi = space.search_bounds()
    vmax = vmax_for(space, cfg)
    root = np.random.SeedSequence(cfg.seed)
    streams = [np.random.default_rng(s) for s in root.spawn(cfg.swarm_size + 1)]
    swarm_rng = streams.pop()

    if standard_equivalence:
        lam, pos_weight = 1.0, 1.0
    elif cfg.update_rule is UpdateRule.MODIFIED:
        lam, pos_weight = constriction_factor(cfg.c1, cfg.c2), None
    else:
        lam, pos_weight = 1.0, None

    positions = [rng.uniform(lo, hi) for rng in streams]
    velocities = [rng.uniform(-vmax, vmax) for rng in streams]

    pool = ThreadPoolExecutor(n_jobs) if n_jobs > 1 else None
    try:
        fitness = _evaluate(objective, space, positions, 0, pool)
        particles = [Particle(x, v, x.copy(), f) for x, v, f in zip(positions, velocities, fitness)]
        g_idx = 0
        for i, p in enumerate(particles):
            if p.best_fitness > particles[g_idx].best_fitness:
                g_idx = i
        g_pos = particles[g_idx].best_position.copy()
        g_fit = particles[g_idx].best_fitness

        history = []
        for t in range(cfg.max_iters):
            omega = inertia_weight(t, cfg.max_iters, cfg.inertia, swarm_rng)
            particles = [step_particle(p, g_pos, omega, lam, cfg, space, rng,
                                       position_weight=pos_weight)
                         for p, rng in zip(particles, streams)]
            fitness = _evaluate(objective, space, [p.position for p in particles],
                                t + 1, pool)
            updated = []
            for p, f in zip(particles, fitness):
                if f > p.best_fitness:
                    p = Particle(p.position, p.velocity, p.position.copy(), f)
                updated.append(p)
                if p.best_fitness > g_fit:
                    g_fit = p.best_fitness
                    g_pos = p.best_position.copy()
            particles = updated
            history.append(g_fit)
            if on_iteration is not None:
                on_iteration(IterationRecord(t + 1, g_fit, tuple(space.to_natural(g_pos).tolist())))
    finally:
        if pool is not None:
            pool.shutdown()

    return OptimizeResult(space.to_natural(g_pos), g_fit, history)


def trace_lines(records: Sequence[IterationRecord]) -> str:
    """Line-delimited JSON trace, one record per iteration."""
    return "".join(r.to_json() + "\n" for r in records)
