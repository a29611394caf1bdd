"""Steady-state genetic and memetic algorithms over either encoding.

Each step breeds one offspring (greedy or uniform row recombination of
tournament-selected parents, or a cloned tournament winner), mutates it,
optionally improves it with local search, and replaces the population's
worst member unless the offspring duplicates an existing genotype.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .encodings import Candidate, DualCandidate, PrimalCandidate, genotype_count, random_candidate
from .encodings.symmetry import SymmetryMask
from .errors import ConfigInvalid
from .localsearch import HillClimber, SearchBudget, SearchResult, TabuConfig, TabuSearch

_MAX_DRAWS_PER_SLOT = 1000


@dataclass(frozen=True)
class GAConfig:
    """Parameters of :class:`MemeticAlgorithm`; ``ls_kind="none"`` gives the plain GA.

    ``p_m=None`` means ``1 / (v * b)``.
    """

    popsize: int = 100
    p_x: float = 0.9
    p_m: float | None = None
    arity: int = 2
    crossover: str = "Gd"
    keep_pct: float = 10.0
    p_ls: float = 0.005
    ls_kind: str = "none"
    tabu: TabuConfig = field(default_factory=TabuConfig)

    def mutation_rate(self, spec) -> float:
        return 1.0 / spec.size if self.p_m is None else self.p_m

    def validate(self, spec=None, encoding="primal", mask=None) -> None:
        if self.popsize < 2:
            raise ConfigInvalid(f"popsize must be at least 2, got {self.popsize}")
        for name in ("p_x", "p_ls"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ConfigInvalid(f"{name} must be a probability, got {p}")
        if self.p_m is not None and not 0.0 <= self.p_m <= 1.0:
            raise ConfigInvalid(f"p_m must be a probability, got {self.p_m}")
        if self.arity < 2:
            raise ConfigInvalid(f"recombination arity must be at least 2, got {self.arity}")
        if self.crossover not in ("Gd", "Ux"):
            raise ConfigInvalid(f"unknown crossover {self.crossover!r}")
        if self.ls_kind not in ("none", "Hc", "Ts"):
            raise ConfigInvalid(f"unknown local search {self.ls_kind!r}")
        if not 0.0 < self.keep_pct <= 100.0:
            raise ConfigInvalid(f"restart keep fraction must be in (0, 100], got {self.keep_pct}")
        if spec is not None and genotype_count(spec, encoding, mask) < self.popsize:
            raise ConfigInvalid(f"{spec} has fewer than {self.popsize} distinct {encoding} genotypes")


class Population:
    """Duplicate-free pool of candidates with their fitness values."""

    def __init__(self, members=()):
        self.members: list[Candidate] = []
        self._keys: set[bytes] = set()
        for c in members:
            self.add(c)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, idx):
        return self.members[idx]

    @property
    def fitness(self) -> np.ndarray:
        return np.fromiter((c.fitness for c in self.members), dtype=np.int64, count=len(self.members))

    def contains(self, c: Candidate) -> bool:
        return c.key() in self._keys

    def add(self, c: Candidate) -> None:
        key = c.key()
        if key in self._keys:
            raise ValueError("duplicate genotype")
        self._keys.add(key)
        self.members.append(c)

    def replace(self, idx: int, c: Candidate) -> Candidate:
        key = c.key()
        old = self.members[idx]
        if key in self._keys and key != old.key():
            raise ValueError("duplicate genotype")
        self._keys.discard(old.key())
        self._keys.add(key)
        self.members[idx] = c
        return old

    def best_index(self) -> int:
        return int(np.argmin(self.fitness))

    def best(self) -> Candidate:
        return self.members[self.best_index()]

    def worst_index(self, rng=None) -> int:
        f = self.fitness
        ties = np.flatnonzero(f == f.max())
        if rng is None or len(ties) == 1:
            return int(ties[0])
        return int(ties[rng.integers(len(ties))])

    def sorted_indices(self) -> np.ndarray:
        return np.argsort(self.fitness, kind="stable")


def tournament_select(pop: Population, rng: np.random.Generator) -> Candidate:
    """Binary tournament over two distinct members; ties go either way with equal odds."""
    if len(pop) < 2:
        raise ConfigInvalid("tournament selection needs at least two individuals")
    i, j = rng.choice(len(pop), size=2, replace=False)
    fi, fj = pop[i].fitness, pop[j].fitness
    if fi == fj:
        return pop[i] if rng.random() < 0.5 else pop[j]
    return pop[i] if fi < fj else pop[j]


def _build(genotype: np.ndarray, template: Candidate) -> Candidate:
    if template.encoding == "primal":
        return PrimalCandidate(genotype, template.spec)
    return DualCandidate(genotype, template.spec)


def _free_rows(spec, mask):
    return np.arange(spec.v) if mask is None else mask.free_rows


def ux_recombine(parents, spec, rng: np.random.Generator, mask=None) -> Candidate:
    """Row ``i`` of the offspring is row ``i`` of a uniformly chosen parent."""
    src = rng.integers(len(parents), size=spec.v)
    geno = np.stack([parents[src[i]].genotype[i] for i in range(spec.v)])
    return _build(geno, parents[0])


def gd_recombine(parents, spec, rng: np.random.Generator, mask: SymmetryMask | None = None) -> Candidate:
    """Greedy multi-parent row recombination.

    All free rows of all parents form a pool.  Starting from a random pooled
    row, the pooled row with the least scalar-product violation against the
    rows already chosen is appended until the offspring is complete.  Falls
    back to :func:`ux_recombine` when the pool has too few distinct rows.
    Under a primal mask a row only fills a position whose frozen cells agree
    with its own.
    """
    first = parents[0]
    if all(p.same_genotype(first) for p in parents[1:]):
        return first.copy()
    rows = _free_rows(spec, mask)
    pool_geno = np.concatenate([p.genotype[rows] for p in parents])
    if len({g.tobytes() for g in pool_geno}) < len(rows):
        return ux_recombine(parents, spec, rng, mask)
    pool_inc = np.concatenate([p.incidence[rows] for p in parents]).astype(np.int64)
    if mask is not None and mask.encoding == "primal":
        sig_of_row = mask.values[rows][:, :2] @ np.array([2, 1])
    else:
        sig_of_row = np.zeros(len(rows), dtype=np.int64)
    pool_sig = np.tile(sig_of_row, len(parents))
    sig_ids, pool_sig = np.unique(pool_sig, return_inverse=True)
    slots = [deque(int(t) for t, s in zip(rows, sig_of_row) if s == sid) for sid in sig_ids]
    open_slots = np.array([len(q) for q in slots])

    lam = spec.lam
    pair = np.abs(lam - pool_inc @ pool_inc.T)
    geno = first.genotype.copy()
    if mask is not None:
        fixed = first.incidence[mask.frozen.all(axis=1)].astype(np.int64)
        viol = np.abs(lam - pool_inc @ fixed.T).sum(axis=1)
    else:
        viol = np.zeros(len(pool_geno), dtype=np.int64)
    available = np.ones(len(pool_geno), dtype=bool)
    never = np.iinfo(np.int64).max

    for step in range(len(rows)):
        eligible = available & (open_slots[pool_sig] > 0)
        if step == 0:
            ties = np.flatnonzero(eligible)
        else:
            score = np.where(eligible, viol, never)
            ties = np.flatnonzero(score == score.min())
        p = int(ties[rng.integers(len(ties))])
        t = slots[pool_sig[p]].popleft()
        open_slots[pool_sig[p]] -= 1
        geno[t] = pool_geno[p]
        available[p] = False
        viol += pair[p]
    return _build(geno, first)


def mutate(c: Candidate, p_m: float, mask: SymmetryMask | None, rng: np.random.Generator) -> Candidate:
    """Swap mutation in place.

    Each of the v*b gene positions fires with probability ``p_m``; a firing
    position applies one random legal swap (primal) or relabel (dual) within
    its row.  Rows of the frozen region are never touched.
    """
    if p_m <= 0:
        return c
    spec = c.spec
    rows = _free_rows(spec, mask)
    cols = np.arange(spec.b) if mask is None else mask.free_cols
    hits = rng.binomial(spec.b, p_m, size=len(rows))
    for i, n in zip(rows, hits):
        for _ in range(n):
            row = c.incidence[i, cols]
            ones = cols[row == 1]
            zeros = cols[row == 0]
            if len(ones) == 0 or len(zeros) == 0:
                break
            c._swap(int(i), int(ones[rng.integers(len(ones))]), int(zeros[rng.integers(len(zeros))]))
    return c


def _n_keep(popsize: int, keep_pct: float) -> int:
    return min(popsize, math.ceil(popsize * keep_pct / 100.0))


def _fresh(pop, spec, encoding, mask, rng) -> Candidate:
    for _ in range(_MAX_DRAWS_PER_SLOT):
        c = random_candidate(spec, encoding, mask, rng)
        if not pop.contains(c):
            return c
    raise ConfigInvalid(f"could not draw a new distinct genotype for {spec}")


def restart(pop: Population, keep_pct: float, spec, mask, rng, encoding=None, max_new=None) -> Population:
    """Keep the top ``ceil(popsize * keep_pct / 100)`` members and refill with random ones.

    ``max_new`` caps the number of fresh members; any shortfall is made up by
    keeping more of the best old members.
    """
    encoding = encoding or pop[0].encoding
    n = len(pop)
    keep = _n_keep(n, keep_pct)
    if max_new is not None:
        keep = max(keep, n - max_new)
    order = pop.sorted_indices()
    out = Population(pop[int(i)] for i in order[:keep])
    while len(out) < n:
        out.add(_fresh(out, spec, encoding, mask, rng))
    return out


class MemeticAlgorithm:
    """Resumable steady-state GA/MA.  ``run`` may be called repeatedly."""

    def __init__(self, config: GAConfig, spec, budget: SearchBudget, encoding="primal", mask=None, rng=None):
        config.validate(spec, encoding, mask)
        self.config = config
        self.spec = spec
        self.budget = budget
        self.encoding = encoding
        self.mask = mask
        self.rng = rng if rng is not None else np.random.default_rng()
        self.p_m = config.mutation_rate(spec)
        self.population: Population | None = None
        self.evaluations = 0
        self.restarts = 0
        self.ls_calls = 0
        self._best_fitness: int | None = None
        self._since_improvement = 0

    def _count(self, n):
        self.evaluations += n
        self.budget.counter.add(n)

    @property
    def best(self) -> Candidate | None:
        return None if not self.population else self.population.best()

    def initialize(self, max_evals: int) -> int:
        """Fill the population, one evaluation per member, within ``max_evals``."""
        self.population = Population()
        target = min(self.config.popsize, max_evals)
        while len(self.population) < target:
            c = _fresh(self.population, self.spec, self.encoding, self.mask, self.rng)
            self.population.add(c)
            self._count(1)
            if c.fitness == 0:
                break
        self.sync()
        return len(self.population)

    def sync(self) -> None:
        """Re-read the incumbent after the population was changed from outside."""
        if self.population:
            f = int(self.population.fitness.min())
            if self._best_fitness is None or f < self._best_fitness:
                self._best_fitness = f
                self._since_improvement = 0

    def _local_search(self, child, limit):
        kind = HillClimber if self.config.ls_kind == "Hc" else TabuSearch
        if kind is TabuSearch:
            engine = TabuSearch(child, self.budget, self.config.tabu, self.mask, self.rng)
        else:
            engine = HillClimber(child, self.budget, self.mask, self.rng)
        used = engine.run(limit)
        self.evaluations += used
        self.ls_calls += 1
        return engine.best, used

    def step(self, limit: int) -> int:
        cfg, rng, pop = self.config, self.rng, self.population
        if rng.random() < cfg.p_x:
            parents = [tournament_select(pop, rng) for _ in range(cfg.arity)]
            if cfg.crossover == "Gd":
                child = gd_recombine(parents, self.spec, rng, self.mask)
            else:
                child = ux_recombine(parents, self.spec, rng, self.mask)
        else:
            child = tournament_select(pop, rng).copy()
        mutate(child, self.p_m, self.mask, rng)
        used = 0
        if cfg.ls_kind != "none" and rng.random() < cfg.p_ls and limit > 1:
            child, used = self._local_search(child, min(self.budget.max_neighbor_evals, limit - 1))
        self._count(1)
        used += 1
        if not pop.contains(child):
            pop.replace(pop.worst_index(rng), child)
        if child.fitness < self._best_fitness:
            self._best_fitness = int(child.fitness)
            self._since_improvement = 0
        else:
            self._since_improvement += used
        if self._since_improvement >= self.budget.stagnation_window and used < limit and self._best_fitness > 0:
            before = len(pop) - _n_keep(len(pop), cfg.keep_pct)
            self.population = restart(pop, cfg.keep_pct, self.spec, self.mask, rng, self.encoding, max_new=limit - used)
            fresh = min(before, limit - used)
            self._count(fresh)
            used += fresh
            self.restarts += 1
            self._since_improvement = 0
            self.sync()
        return used

    def run(self, max_evals: int) -> int:
        used = 0
        if self.population is None:
            used += self.initialize(max_evals)
        while used < max_evals and self._best_fitness is not None and self._best_fitness > 0:
            used += self.step(max_evals - used)
        return used

    def result(self) -> SearchResult:
        if not self.population:
            return SearchResult(None, self.evaluations, empty=True)
        return SearchResult(self._best_fitness, self.evaluations, restarts=self.restarts)


def run_ma(config: GAConfig, spec, budget: SearchBudget, mask=None, rng=None, encoding="primal"):
    """Run Algorithm-1 style memetic search for ``budget.max_evals`` evaluations.

    Returns ``(best, SearchResult)``; with a zero budget the best is ``None``
    and the result is flagged ``empty``.
    """
    engine = MemeticAlgorithm(config, spec, budget, encoding, mask, rng)
    engine.run(budget.max_evals)
    return engine.best, engine.result()
