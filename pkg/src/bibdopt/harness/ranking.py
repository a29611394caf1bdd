"""Rank-based comparison of algorithms over a set of instances.

On each instance algorithms are ordered by the number of solved runs
(more is better), then by mean best fitness (lower is better); algorithms
still tied share the average of the rank positions they span.
"""

from __future__ import annotations

import csv
import math
from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateInput, IncompleteDesign


@dataclass
class RankTable:
    instances: list[str]
    algorithms: list[str]
    ranks: np.ndarray  # instances x algorithms
    solved: np.ndarray
    mean_fitness: np.ndarray

    @property
    def mean_ranks(self) -> np.ndarray:
        return self.ranks.mean(axis=0)


def average_ranks(keys) -> np.ndarray:
    """1-based ranks of sortable ``keys``; equal keys share their average position."""
    keys = list(keys)
    order = sorted(range(len(keys)), key=lambda i: keys[i])
    ranks = np.empty(len(keys))
    pos = 0
    while pos < len(order):
        end = pos
        while end + 1 < len(order) and keys[order[end + 1]] == keys[order[pos]]:
            end += 1
        for t in range(pos, end + 1):
            ranks[order[t]] = (pos + end) / 2 + 1
        pos = end + 1
    return ranks


def rank_table(records) -> RankTable:
    """Rank every algorithm on every instance found in ``records``."""
    cells = defaultdict(list)
    for r in records:
        cells[(r.instance_id, r.algorithm)].append(r)
    instances = sorted({i for i, _ in cells}, key=_natural)
    algorithms = sorted({a for _, a in cells})
    missing = [(i, a) for i in instances for a in algorithms if (i, a) not in cells]
    if missing:
        i, a = missing[0]
        raise IncompleteDesign(f"no records for algorithm {a!r} on instance {i!r} ({len(missing)} holes)")
    solved = np.zeros((len(instances), len(algorithms)), dtype=np.int64)
    mean_fit = np.zeros((len(instances), len(algorithms)))
    for x, inst in enumerate(instances):
        for y, alg in enumerate(algorithms):
            runs = cells[(inst, alg)]
            solved[x, y] = sum(r.solved for r in runs)
            fits = [r.best_fitness for r in runs]
            mean_fit[x, y] = math.inf if None in fits else sum(fits) / len(fits)
    ranks = np.stack([average_ranks(list(zip(-solved[x], mean_fit[x]))) for x in range(len(instances))])
    return RankTable(instances, algorithms, ranks, solved, mean_fit)


def _natural(text: str):
    return (0, int(text), "") if text.isdigit() else (1, 0, text)


def friedman_statistic(ranks) -> float:
    """Friedman chi-square of an instances x algorithms rank matrix."""
    R = np.asarray(ranks, dtype=float)
    if R.ndim != 2:
        raise DegenerateInput("rank matrix must be two-dimensional")
    n, k = R.shape
    if n < 2 or k < 2:
        raise DegenerateInput(f"need at least 2 instances and 2 algorithms, got {n} x {k}")
    mean = R.mean(axis=0)
    return float(12.0 * n / (k * (k + 1)) * (np.sum(mean**2) - k * (k + 1) ** 2 / 4.0))


def write_rank_table(table: RankTable, dest) -> None:
    """CSV with one row per instance and a final ``mean`` row."""
    if hasattr(dest, "write"):
        _write(table, dest)
        return
    with open(dest, "w", newline="", encoding="utf-8") as fh:
        _write(table, fh)


def _write(table, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["instance_id", *table.algorithms])
    for inst, row in zip(table.instances, table.ranks):
        w.writerow([inst, *(f"{x:g}" for x in row)])
    w.writerow(["mean", *(f"{x:.6g}" for x in table.mean_ranks)])
