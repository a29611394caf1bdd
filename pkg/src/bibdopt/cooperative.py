"""Cooperative model: agents running their own metaheuristic, exchanging candidates.

Every cycle each agent spends its evaluation slice, then candidates migrate
along the edges of the topology.  A migrant is translated into the
destination's encoding (and relabelled into its symmetry mask when it has
one) before the destination's acceptance policy decides where it lands.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .encodings import Candidate, random_candidate, symmetry_mask, translate
from .errors import ConfigInvalid
from .evolutionary import GAConfig, MemeticAlgorithm
from .localsearch import HillClimber, SearchBudget, SearchResult, TabuConfig, TabuSearch

TOPOLOGIES = ("Ring", "Broadcast", "Random")
POLICIES = ("R", "D", "W")
AGENT_KINDS = ("Hc", "Ts", "GA", "MA")


@dataclass(frozen=True)
class AgentSpec:
    """One agent: an engine kind plus encoding, mask and engine parameters.

    ``kind`` is ``Hc`` or ``Ts`` (single-candidate pool) or ``GA``/``MA``
    (population pool).  For ``GA`` the local search of ``ga`` is ignored.
    """

    kind: str
    encoding: str = "primal"
    symmetry: bool = False
    ga: GAConfig = field(default_factory=GAConfig)
    tabu: TabuConfig = field(default_factory=TabuConfig)

    def validate(self) -> None:
        if self.kind not in AGENT_KINDS:
            raise ConfigInvalid(f"unknown agent kind {self.kind!r}")
        if self.encoding not in ("primal", "dual"):
            raise ConfigInvalid(f"unknown encoding {self.encoding!r}")
        if self.kind == "MA" and self.ga.ls_kind == "none":
            raise ConfigInvalid("an MA agent needs a local search (Hc or Ts)")

    @property
    def pool_size(self) -> int:
        return 1 if self.kind in ("Hc", "Ts") else self.ga.popsize


@dataclass(frozen=True)
class CoopConfig:
    """Network-level settings.

    ``shares`` optionally weights the per-cycle budget between agents; by
    default every agent gets ``total_budget // (n * cycles)`` per cycle.
    """

    agents: tuple
    topology: str = "Ring"
    migration: str = "R"
    acceptance: str = "R"
    cycles: int = 5
    total_budget: int = 20_000_000
    workers: int = 1
    shares: tuple | None = None

    @property
    def n(self) -> int:
        return len(self.agents)

    def slices(self) -> list[int]:
        per_cycle = self.total_budget // self.cycles
        if self.shares is None:
            return [per_cycle // self.n] * self.n
        total = float(sum(self.shares))
        return [int(per_cycle * s / total) for s in self.shares]

    def validate(self) -> None:
        if not 2 <= self.n <= 5:
            raise ConfigInvalid(f"a cooperative model needs 2 to 5 agents, got {self.n}")
        for a in self.agents:
            a.validate()
        if self.topology not in TOPOLOGIES:
            raise ConfigInvalid(f"unknown topology {self.topology!r}")
        for name in ("migration", "acceptance"):
            if getattr(self, name) not in POLICIES:
                raise ConfigInvalid(f"unknown {name} policy {getattr(self, name)!r}")
        if self.cycles < 1:
            raise ConfigInvalid("at least one cycle is required")
        if self.total_budget < 0:
            raise ConfigInvalid("budget must be non-negative")
        if self.workers < 1:
            raise ConfigInvalid("workers must be at least 1")
        if self.shares is not None and (len(self.shares) != self.n or min(self.shares) <= 0):
            raise ConfigInvalid("shares need one positive weight per agent")
        for a, s in zip(self.agents, self.slices()):
            if s < a.pool_size:
                raise ConfigInvalid(f"per-cycle slice {s} cannot even initialise a pool of {a.pool_size}")
        if self.migration == "W":
            warnings.warn("worst-candidate migration performs poorly", stacklevel=2)


def build_edges(topology: str, n: int, rng: np.random.Generator | None = None) -> list[tuple[int, int]]:
    """Directed migration edges over agents ``0..n-1``.

    Random edges are fresh on every call; call once per communication round.
    """
    if n < 2:
        raise ConfigInvalid("a topology needs at least two agents")
    if topology == "Ring":
        return [(i, (i + 1) % n) for i in range(n)]
    if topology == "Broadcast":
        return [(i, j) for i in range(n) for j in range(n) if i != j]
    if topology == "Random":
        pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
        rng = rng if rng is not None else np.random.default_rng()
        return [pairs[t] for t in rng.integers(len(pairs), size=n)]
    raise ConfigInvalid(f"unknown topology {topology!r}")


def _pick(indices, rng):
    if len(indices) == 1 or rng is None:
        return int(indices[0])
    return int(indices[rng.integers(len(indices))])


def select_migrant(source_pool, policy: str, destination_pool=None, rng=None, encoding=None, mask=None) -> Candidate:
    """Choose the candidate that leaves ``source_pool``.

    ``D`` scores each member by its minimum Hamming distance to the
    destination pool after translating it to ``encoding`` (the destination's
    encoding) under ``mask``; members that cannot be translated score -1.
    """
    pool = list(source_pool)
    if not pool:
        raise ConfigInvalid("cannot migrate from an empty pool")
    rng = rng if rng is not None else np.random.default_rng()
    if len(pool) == 1:
        return pool[0]
    if policy == "R":
        return pool[int(rng.integers(len(pool)))]
    if policy == "W":
        f = np.array([c.fitness for c in pool])
        return pool[_pick(np.flatnonzero(f == f.max()), rng)]
    if policy == "D":
        dest = list(destination_pool or [])
        if not dest:
            return pool[int(rng.integers(len(pool)))]
        encoding = encoding or dest[0].encoding
        scores = np.empty(len(pool), dtype=np.int64)
        for t, c in enumerate(pool):
            moved = translate(c, encoding, mask)
            scores[t] = -1 if moved is None else min(moved.hamming(d) for d in dest)
        return pool[_pick(np.flatnonzero(scores == scores.max()), rng)]
    raise ConfigInvalid(f"unknown migration policy {policy!r}")


def mean_pairwise_hamming(pool) -> float:
    pool = list(pool)
    if len(pool) < 2:
        return 0.0
    g = np.stack([c.genotype.ravel() for c in pool])
    n = len(g)
    # every unordered pair appears twice in the full distance matrix
    total = int(np.count_nonzero(g[:, None, :] != g[None, :, :]))
    return total / (n * (n - 1))


def accept_and_replace(pool: list, incoming: Candidate, policy: str, rng=None) -> int | None:
    """Decide whether ``incoming`` enters ``pool``; return the replaced index or ``None``.

    ``pool`` is not modified; the caller writes ``incoming`` at the returned
    index.  A genotype already in the pool is always rejected.
    """
    rng = rng if rng is not None else np.random.default_rng()
    if any(incoming.same_genotype(c) for c in pool):
        return None
    f = np.array([c.fitness for c in pool])
    worst = _pick(np.flatnonzero(f == f.max()), rng)
    if policy == "R":
        return int(rng.integers(len(pool)))
    if policy == "W":
        return worst
    if policy == "D":
        if len(pool) == 1:
            return 0
        after = list(pool)
        after[worst] = incoming
        return worst if mean_pairwise_hamming(after) > mean_pairwise_hamming(pool) else None
    raise ConfigInvalid(f"unknown acceptance policy {policy!r}")


class Agent:
    """Runtime state of one agent.  The engine persists across cycles."""

    def __init__(self, aspec: AgentSpec, spec, budget: SearchBudget, rng: np.random.Generator):
        self.aspec = aspec
        self.spec = spec
        self.encoding = aspec.encoding
        self.budget = budget
        self.rng = rng
        self.mask = symmetry_mask(spec, aspec.encoding) if aspec.symmetry else None
        self.engine = None
        self.best_ever: Candidate | None = None
        self.evaluations = 0
        if aspec.kind in ("GA", "MA"):
            ga = aspec.ga
            if aspec.kind == "GA" and ga.ls_kind != "none":
                ga = replace(ga, ls_kind="none")
            self.engine = MemeticAlgorithm(ga, spec, budget, aspec.encoding, self.mask, rng)

    @property
    def is_population(self) -> bool:
        return self.aspec.kind in ("GA", "MA")

    @property
    def pool(self) -> list:
        if self.engine is None:
            return []
        if self.is_population:
            return list(self.engine.population or [])
        return [self.engine.best]

    def _note_best(self):
        cur = self.engine.best
        if cur is not None and (self.best_ever is None or cur.fitness < self.best_ever.fitness):
            self.best_ever = cur.copy()

    def run(self, limit: int) -> int:
        used = 0
        if self.engine is None:
            if limit < 1:
                return 0
            start = random_candidate(self.spec, self.encoding, self.mask, self.rng)
            self.budget.counter.add(1)
            used = 1
            if self.aspec.kind == "Ts":
                self.engine = TabuSearch(start, self.budget, self.aspec.tabu, self.mask, self.rng)
            else:
                self.engine = HillClimber(start, self.budget, self.mask, self.rng)
        used += self.engine.run(limit - used)
        self.evaluations += used
        self._note_best()
        return used

    def receive(self, c: Candidate, idx: int) -> None:
        if self.is_population:
            self.engine.population.replace(idx, c)
            self.engine.sync()
        else:
            self.engine.resume(c)
        self._note_best()


def check_pool_invariants(agent: Agent) -> None:
    """Raise ``AssertionError`` if the agent's pool breaks a structural invariant."""
    pool = agent.pool
    assert len(pool) == agent.aspec.pool_size, "pool size changed"
    assert len({c.key() for c in pool}) == len(pool), "duplicate genotypes in pool"
    for c in pool:
        assert c.encoding == agent.encoding, "pool member in the wrong encoding"
        assert c.spec == agent.spec, "pool member for the wrong spec"
        type(c)(c.genotype, c.spec)  # re-validates row counts / all-different
        c.check()
        if agent.mask is not None:
            assert agent.mask.matches(c), "pool member violates the symmetry mask"


def run_cooperative(config: CoopConfig, spec, rng=None, budget: SearchBudget | None = None, callback=None):
    """Run the agent network; return ``(best, SearchResult)``.

    ``callback(cycle, agents)`` is invoked after every communication round.
    Agents run in parallel threads when ``config.workers > 1``; results do
    not depend on the number of workers.
    """
    config.validate()
    rng = rng if rng is not None else np.random.default_rng()
    if budget is None:
        budget = SearchBudget.scaled(config.total_budget)
    # the caller's counter is shared so it can audit consumption afterwards
    budget = SearchBudget(config.total_budget, budget.max_neighbor_evals, budget.stagnation_window, budget.counter)
    start = budget.counter.value
    agent_rngs = rng.spawn(config.n)
    agents = [Agent(a, spec, budget, r) for a, r in zip(config.agents, agent_rngs)]
    slices = config.slices()
    cycles_run = 0
    pool = ThreadPoolExecutor(config.workers) if config.workers > 1 else None
    try:
        for cycle in range(config.cycles):
            if pool is None:
                for a, s in zip(agents, slices):
                    a.run(s)
            else:
                list(pool.map(lambda pair: pair[0].run(pair[1]), zip(agents, slices)))
            cycles_run += 1
            if any(a.best_ever is not None and a.best_ever.fitness == 0 for a in agents):
                break
            if cycle == config.cycles - 1:
                break
            communicate(agents, config, rng)
            if callback is not None:
                callback(cycle, agents)
    finally:
        if pool is not None:
            pool.shutdown()
    found = [a.best_ever for a in agents if a.best_ever is not None]
    if not found:
        return None, SearchResult(None, budget.counter.value - start, empty=True)
    best = min(found, key=lambda c: c.fitness)
    return best, SearchResult(best.fitness, budget.counter.value - start, cycles=cycles_run)


def communicate(agents, config, rng) -> None:
    """One round of migration along freshly built topology edges."""
    edges = build_edges(config.topology, len(agents), rng)
    # all migrants are chosen from the pools as they stood before this round
    moves = []
    for i, j in edges:
        dest = agents[j]
        m = select_migrant(agents[i].pool, config.migration, dest.pool, rng, dest.encoding, dest.mask)
        moves.append((j, m))
    for j, m in moves:
        dest = agents[j]
        moved = translate(m, dest.encoding, dest.mask)
        if moved is None:
            continue
        idx = accept_and_replace(dest.pool, moved, config.acceptance, rng)
        if idx is not None:
            dest.receive(moved, idx)
