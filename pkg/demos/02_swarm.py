"""The particle swarm on its own, away from any classifier."""
import numpy as np

from mpso_lssvm import (Inertia, PsoConfig, SearchSpace, UpdateRule, constriction_factor,
                        inertia_weight, optimize)

print("lambda(2.05, 2.05) =", constriction_factor(2.05, 2.05))
print("inertia over 10 steps:", [round(inertia_weight(t, 10), 3) for t in range(11)])

# Rastrigin is bumpy, so the rules and schedules actually differ
def neg_rastrigin(x):
    return -float(10 * x.size + np.sum(x**2 - 10 * np.cos(2 * np.pi * x)))

space = SearchSpace((-5.12,) * 4, (5.12,) * 4)
for rule in UpdateRule:
    for inertia in (Inertia.linear_decay(), Inertia.constant(0.7), Inertia.random()):
        best = [optimize(neg_rastrigin, space,
                         PsoConfig(swarm_size=30, max_iters=150, update_rule=rule,
                                   inertia=inertia, seed=s)).best_fitness for s in range(5)]
        print(f"{rule.value:>9} {inertia.kind.value:>12}: median best {np.median(best):8.4f}")

# log-scaled search: the swarm moves in log10 units and hands the objective natural values
space = SearchSpace((1e-3, 1e-3), (1e3, 1e3), (True, True))
res = optimize(lambda p: -float(np.sum(np.log10(p / [3.0, 0.02]) ** 2)), space,
               PsoConfig(swarm_size=15, max_iters=60, seed=1))
print("log-scale optimum near (3, 0.02):", res.best_position)
