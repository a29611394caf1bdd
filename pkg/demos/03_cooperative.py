"""A ring of heterogeneous agents exchanging candidates between cycles."""

import numpy as np

from bibdopt.cooperative import check_pool_invariants, run_cooperative
from bibdopt.harness import coop_config, parse_algorithm
from bibdopt.instances import catalog_entry

entry = catalog_entry(21)
notation = "Ri3(Ts.B,Ts.D*,MA.Ts.B.A2.Gd)DR"
config = coop_config(parse_algorithm(notation), total_budget=300_000, cycles=6, workers=3)


def show(cycle, agents):
    for a in agents:
        check_pool_invariants(a)
    bests = "  ".join(f"{a.aspec.kind}.{a.encoding}={a.best_ever.fitness}" for a in agents)
    print(f"after round {cycle + 1}: {bests}")


for a in config.agents:
    print("agent", a.kind, a.encoding, "symmetry" if a.symmetry else "")
print("instance", entry.spec.label(), "notation", notation)
best, res = run_cooperative(config, entry.spec, np.random.default_rng(0), callback=show)
print(f"best fitness {res.best_fitness} using {res.evaluations} evaluations over {res.cycles} cycles")
