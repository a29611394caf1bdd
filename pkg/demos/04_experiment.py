"""Seeded runs of several algorithms, a rank table and the Friedman statistic."""

import sys

from bibdopt.harness import friedman_statistic, rank_table, run_experiment, write_rank_table, write_records
from bibdopt.instances import derive_spec
from bibdopt.localsearch import SearchBudget

instances = {"7-3-1": derive_spec(7, 3, 1), "8-4-3": derive_spec(8, 4, 3), "9-3-1": derive_spec(9, 3, 1)}
algorithms = ["Hc.B", "Ts.B", "Ts.D*", "MA.Ts.B*.A2.Gd"]
budget = SearchBudget.scaled(5_000)

records = []
for inst, spec in instances.items():
    for alg in algorithms:
        records += run_experiment(alg, spec, runs=5, base_seed=0, budget=budget, instance_id=inst)

write_records(records[:6], sys.stdout)
print("...")
table = rank_table(records)
write_rank_table(table, sys.stdout)
print(f"friedman chi2 = {friedman_statistic(table.ranks):.4f}")
