"""Swap-neighbourhood hill climbing and tabu search over either encoding.

One neighbour evaluation (a delta computation) costs one unit of budget,
exactly like one full evaluation.  A sweep draws a seeded permutation of
the legal moves, truncated to the remaining budget; ties between equally
good moves go to whichever comes first in that permutation.
"""

from __future__ import annotations

import threading
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .encodings import Candidate, move_space, random_candidate, swap_deltas, swap_moves
from .encodings.symmetry import SymmetryMask


class EvaluationCounter:
    """Thread-safe, monotone count of every evaluation performed."""

    def __init__(self):
        self._value = 0
        self._lock = threading.Lock()

    def add(self, n: int) -> None:
        if n < 0:
            raise ValueError("evaluation counts only grow")
        with self._lock:
            self._value += n

    @property
    def value(self) -> int:
        return self._value

    def __getstate__(self):
        return self._value

    def __setstate__(self, value):
        self._value = value
        self._lock = threading.Lock()


@dataclass
class SearchBudget:
    """Evaluation limits.

    ``max_evals`` caps one search call, ``max_neighbor_evals`` caps a local
    search nested in a memetic algorithm and ``stagnation_window`` is the
    number of evaluations without incumbent improvement that triggers
    intensification (local search) or restart (population).
    """

    max_evals: int
    max_neighbor_evals: int
    stagnation_window: int
    counter: EvaluationCounter = field(default_factory=EvaluationCounter)

    @classmethod
    def full_scale(cls) -> "SearchBudget":
        """The benchmark preset: 2e7 evaluations, 2e6 per local search, 2e5 stagnation."""
        return cls(20_000_000, 2_000_000, 200_000)

    @classmethod
    def scaled(cls, max_evals: int) -> "SearchBudget":
        """Keep the 100 : 10 : 1 ratio of the full-scale preset for any total."""
        nv = max(1, max_evals // 10)
        return cls(int(max_evals), nv, max(1, nv // 10))

    def with_max_evals(self, max_evals: int) -> "SearchBudget":
        return SearchBudget(int(max_evals), self.max_neighbor_evals, self.stagnation_window, self.counter)


@dataclass(frozen=True)
class TabuConfig:
    tenure: int = 15
    aspiration: bool = True

    def __post_init__(self):
        if self.tenure < 1:
            raise ValueError("tabu tenure must be at least 1")


@dataclass
class SearchResult:
    """Outcome of one search call (a partial run record)."""

    best_fitness: int | None
    evaluations: int
    moves: int = 0
    restarts: int = 0
    empty: bool = False
    cycles: int = 0

    @property
    def solved(self) -> bool:
        return self.best_fitness == 0


def _sweep(c: Candidate, rows, cols, rng: np.random.Generator, limit: int | None = None):
    i, a, z = swap_moves(c.incidence, rows, cols)
    order = rng.permutation(len(i))
    if limit is not None:
        order = order[:limit]
    return i[order], a[order], z[order]


def _as_public(c: Candidate, i, a, z):
    """Incidence swap -> the encoding's own move tuple."""
    if c.encoding == "primal":
        return (int(i), int(a), int(z))
    return (int(i), int(c.position[i, a]), int(z) + 1)


def neighbors_primal(c, mask: SymmetryMask | None = None, rng=None):
    """Yield every legal swap ``(row, col_one, col_zero)`` once, in seeded random order."""
    rng = rng if rng is not None else np.random.default_rng()
    rows, cols = move_space(c.spec, mask)
    for i, a, z in zip(*_sweep(c, rows, cols, rng)):
        yield _as_public(c, i, a, z)


def neighbors_dual(c, mask: SymmetryMask | None = None, rng=None):
    """Yield every legal relabel ``(row, col, new_label)`` once, in seeded random order."""
    rng = rng if rng is not None else np.random.default_rng()
    rows, cols = move_space(c.spec, mask)
    for i, a, z in zip(*_sweep(c, rows, cols, rng)):
        yield _as_public(c, i, a, z)


class LocalSearch:
    """Resumable search state.  ``run`` may be called repeatedly."""

    def __init__(self, start: Candidate, budget: SearchBudget, mask=None, rng=None):
        self.spec = start.spec
        self.encoding = start.encoding
        self.mask = mask
        self.rng = rng if rng is not None else np.random.default_rng()
        self.budget = budget
        self.rows, self.cols = move_space(self.spec, mask)
        self.evaluations = 0
        self.moves = 0
        self.restarts = 0
        self.resume(start)

    def resume(self, start: Candidate) -> None:
        """Continue the search from ``start``, forgetting the trajectory so far."""
        self.current = start.copy()
        self.best = start.copy()
        self._since_improvement = 0

    def _count(self, n: int) -> None:
        self.evaluations += n
        self.budget.counter.add(n)

    def _note(self, n_evals: int) -> None:
        if self.current.fitness < self.best.fitness:
            self.best = self.current.copy()
            self._since_improvement = 0
        else:
            self._since_improvement += n_evals

    def step(self, limit: int) -> int:
        raise NotImplementedError

    def run(self, max_evals: int) -> int:
        """Search until ``max_evals`` evaluations are spent or fitness 0 is reached."""
        used = 0
        while used < max_evals and self.best.fitness > 0:
            spent = self.step(max_evals - used)
            if spent == 0:
                break
            used += spent
        return used

    def result(self) -> SearchResult:
        return SearchResult(self.best.fitness, self.evaluations, self.moves, self.restarts)


class HillClimber(LocalSearch):
    """Steepest descent with random restarts; the incumbent survives restarts."""

    def step(self, limit: int) -> int:
        c = self.current
        i, a, z = _sweep(c, self.rows, self.cols, self.rng, limit)
        n = len(i)
        if n == 0:
            return 0
        self._count(n)
        d = swap_deltas(c, i, a, z)
        j = int(np.argmin(d))
        if d[j] < 0:
            c._swap(int(i[j]), int(a[j]), int(z[j]), int(d[j]))
            self.moves += 1
            self._note(n)
            stuck = self._since_improvement >= self.budget.stagnation_window
        else:
            self._since_improvement += n
            stuck = True
        if stuck and n < limit and self.best.fitness > 0:
            self.current = random_candidate(self.spec, self.encoding, self.mask, self.rng)
            self._count(1)
            self.restarts += 1
            self._since_improvement = 0
            if self.current.fitness < self.best.fitness:
                self.best = self.current.copy()
            n += 1
        return n


class TabuSearch(LocalSearch):
    """Best non-tabu move per step, inverse-move tabu, reset to incumbent on stagnation."""

    def __init__(self, start, budget, tabu: TabuConfig | None = None, mask=None, rng=None):
        self.tabu = tabu or TabuConfig()
        self.tabu_list: deque = deque(maxlen=self.tabu.tenure)
        super().__init__(start, budget, mask, rng)

    def resume(self, start):
        super().resume(start)
        self.tabu_list.clear()

    def _keys(self, i, a, z):
        s = self.spec
        if self.encoding == "primal":
            lo, hi = np.minimum(a, z), np.maximum(a, z)
            return (i * s.b + lo) * s.b + hi
        # (row, column, label written): forbids writing a label back into its old cell
        return (i * s.r + self.current.position[i, a]) * (s.b + 1) + z + 1

    def step(self, limit: int) -> int:
        c = self.current
        i, a, z = _sweep(c, self.rows, self.cols, self.rng, limit)
        n = len(i)
        if n == 0:
            return 0
        self._count(n)
        d = swap_deltas(c, i, a, z)
        if self.tabu_list:
            allowed = ~np.isin(self._keys(i, a, z), np.fromiter(self.tabu_list, dtype=np.int64))
            if self.tabu.aspiration:
                allowed |= c.fitness + d < self.best.fitness
            pick = np.flatnonzero(allowed)
            if len(pick) == 0:
                pick = np.arange(n)
        else:
            pick = np.arange(n)
        j = int(pick[np.argmin(d[pick])])
        mi, ma, mz = int(i[j]), int(a[j]), int(z[j])
        # attribute of the inverse move, taken before the move rewrites the cell
        if self.encoding == "primal":
            attr = (mi * self.spec.b + min(ma, mz)) * self.spec.b + max(ma, mz)
        else:
            attr = (mi * self.spec.r + int(c.position[mi, ma])) * (self.spec.b + 1) + ma + 1
        c._swap(mi, ma, mz, int(d[j]))
        self.tabu_list.append(attr)
        self.moves += 1
        self._note(n)
        if self._since_improvement >= self.budget.stagnation_window and self.best.fitness > 0:
            self.current = self.best.copy()
            self.tabu_list.clear()
            self._since_improvement = 0
            self.restarts += 1
        return n


def hill_climb(start: Candidate, spec, budget: SearchBudget, mask=None, rng=None):
    """Run :class:`HillClimber` for ``budget.max_evals`` evaluations.

    Returns the best candidate and a :class:`SearchResult`.
    """
    engine = HillClimber(start, budget, mask, rng)
    engine.run(budget.max_evals)
    return engine.best, engine.result()


def tabu_search(start: Candidate, spec, budget: SearchBudget, tabu: TabuConfig | None = None, mask=None, rng=None):
    """Run :class:`TabuSearch` for ``budget.max_evals`` evaluations."""
    engine = TabuSearch(start, budget, tabu, mask, rng)
    engine.run(budget.max_evals)
    return engine.best, engine.result()
