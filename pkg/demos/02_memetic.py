"""Genetic and memetic algorithms with greedy and uniform recombination."""

import numpy as np

from bibdopt.encodings import symmetry_mask
from bibdopt.evolutionary import GAConfig, run_ma
from bibdopt.instances import derive_spec
from bibdopt.localsearch import SearchBudget

spec = derive_spec(8, 4, 3)
settings = [
    ("GA, greedy recombination", GAConfig(popsize=50, crossover="Gd"), "primal", False),
    ("GA, uniform recombination", GAConfig(popsize=50, crossover="Ux"), "primal", False),
    ("MA with tabu search", GAConfig(popsize=50, arity=4, ls_kind="Ts"), "primal", True),
    ("MA with hill climbing, dual", GAConfig(popsize=50, ls_kind="Hc"), "dual", True),
]
for name, cfg, encoding, sym in settings:
    mask = symmetry_mask(spec, encoding) if sym else None
    best, res = run_ma(cfg, spec, SearchBudget.scaled(60_000), mask, np.random.default_rng(3), encoding)
    print(f"{name:30s} best {res.best_fitness:2d}  evaluations {res.evaluations:6d}  solved {res.solved}")
