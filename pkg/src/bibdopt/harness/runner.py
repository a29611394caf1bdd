"""Seeded experiment runs, run records and their CSV form.

Run ``i`` of an experiment uses seed ``base_seed + i``.  Its generator is
``default_rng(SeedSequence(seed))``; cooperative runs spawn one child
generator per agent from it, so results never depend on thread scheduling.
"""

from __future__ import annotations

import csv
import io
import re
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass, field
from pathlib import Path

import numpy as np

from ..cooperative import run_cooperative
from ..encodings import dump_candidate, random_candidate, symmetry_mask
from ..evolutionary import GAConfig, run_ma
from ..localsearch import HillClimber, SearchBudget, SearchResult, TabuConfig, TabuSearch
from .notation import AlgorithmDescriptor, agent_spec, coop_config, parse_algorithm

CSV_COLUMNS = ("instance_id", "algorithm", "seed", "best_fitness", "evaluations", "solved", "wall_ms")


@dataclass(frozen=True)
class RunRecord:
    """One run.  ``wall_ms`` is informational and excluded from equality."""

    instance_id: str
    algorithm: str
    seed: int
    best_fitness: int | None
    evaluations: int
    solved: bool
    wall_ms: float = field(default=0.0, compare=False)

    def __post_init__(self):
        if self.solved != (self.best_fitness == 0):
            raise ValueError("solved must hold exactly when best_fitness is 0")

    def fingerprint(self) -> bytes:
        """Byte string of every deterministic field."""
        return repr(astuple(self)[:-1]).encode()


@dataclass(frozen=True)
class EngineOptions:
    """Settings shared by every run of an experiment."""

    ga: GAConfig = field(default_factory=GAConfig)
    tabu: TabuConfig = field(default_factory=TabuConfig)
    cycles: int = 5
    workers: int = 1


def run_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed))


def solve(descriptor: AlgorithmDescriptor, spec, budget: SearchBudget, rng, options: EngineOptions | None = None):
    """Run one algorithm once; return ``(best, SearchResult)``."""
    options = options or EngineOptions()
    fresh = SearchBudget(budget.max_evals, budget.max_neighbor_evals, budget.stagnation_window)
    if descriptor.kind == "Coop":
        config = coop_config(descriptor, fresh.max_evals, options.cycles, options.workers, options.ga, options.tabu)
        return run_cooperative(config, spec, rng, fresh)
    agent = agent_spec(descriptor, options.ga, options.tabu)
    mask = symmetry_mask(spec, agent.encoding) if agent.symmetry else None
    if agent.kind in ("GA", "MA"):
        return run_ma(agent.ga, spec, fresh, mask, rng, agent.encoding)
    if fresh.max_evals < 1:
        return None, SearchResult(None, 0, empty=True)
    start = random_candidate(spec, agent.encoding, mask, rng)
    fresh.counter.add(1)
    if agent.kind == "Ts":
        engine = TabuSearch(start, fresh, agent.tabu, mask, rng)
    else:
        engine = HillClimber(start, fresh, mask, rng)
    engine.run(fresh.max_evals - 1)
    res = engine.result()
    res.evaluations += 1
    return engine.best, res


def run_once(descriptor, spec, seed: int, budget: SearchBudget, instance_id=None, options=None):
    """One seeded run; returns ``(RunRecord, best candidate or None)``."""
    if isinstance(descriptor, str):
        descriptor = parse_algorithm(descriptor)
    t0 = time.perf_counter()
    best, res = solve(descriptor, spec, budget, run_rng(seed), options)
    wall = round((time.perf_counter() - t0) * 1000.0, 3)
    rec = RunRecord(
        str(instance_id if instance_id is not None else spec.label()),
        str(descriptor),
        int(seed),
        res.best_fitness,
        int(res.evaluations),
        res.best_fitness == 0,
        wall,
    )
    return rec, best


def _task(args):
    return run_once(*args)


def _slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9.*_-]+", "_", text).replace("*", "s")


def run_experiment(descriptor, spec, runs: int, base_seed: int, budget: SearchBudget, instance_id=None,
                   options: EngineOptions | None = None, processes: int = 1, dump_dir=None) -> list[RunRecord]:
    """``runs`` independent runs with seeds ``base_seed + 0 .. runs - 1``, ordered by seed.

    With ``dump_dir`` every solved design is written there in the candidate
    text format.
    """
    if isinstance(descriptor, str):
        descriptor = parse_algorithm(descriptor)
    tasks = [(descriptor, spec, base_seed + i, budget, instance_id, options) for i in range(runs)]
    if processes > 1 and runs > 1:
        with ProcessPoolExecutor(processes) as pool:
            results = list(pool.map(_task, tasks))
    else:
        results = [_task(t) for t in tasks]
    if dump_dir is not None:
        out = Path(dump_dir)
        out.mkdir(parents=True, exist_ok=True)
        for rec, best in results:
            if rec.solved:
                dump_candidate(best, out / f"{_slug(rec.instance_id)}_{_slug(rec.algorithm)}_{rec.seed}.txt")
    return [rec for rec, _ in results]


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def write_records(records, dest) -> None:
    """Write records as CSV to a path or an open text stream."""
    if hasattr(dest, "write"):
        _write(records, dest)
        return
    with open(dest, "w", newline="", encoding="utf-8") as fh:
        _write(records, fh)


def _write(records, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        w.writerow([_cell(x) for x in astuple(r)])


def records_to_csv(records) -> str:
    buf = io.StringIO()
    _write(records, buf)
    return buf.getvalue()


def parse_records(text: str) -> list[RunRecord]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or tuple(h.strip() for h in header) != CSV_COLUMNS:
        raise ValueError(f"results CSV must start with the header {','.join(CSV_COLUMNS)}")
    out = []
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(CSV_COLUMNS):
            raise ValueError(f"line {lineno}: expected {len(CSV_COLUMNS)} fields, got {len(row)}")
        inst, alg, seed, fit, evals, solved, wall = row
        if solved not in ("true", "false"):
            raise ValueError(f"line {lineno}: solved must be true or false")
        out.append(RunRecord(inst, alg, int(seed), int(fit) if fit else None, int(evals), solved == "true", float(wall)))
    return out


def read_records(path) -> list[RunRecord]:
    return parse_records(Path(path).read_text(encoding="utf-8"))
