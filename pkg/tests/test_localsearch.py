import numpy as np
import pytest

from bibdopt.encodings import primal_fitness, random_candidate, swap_deltas, swap_moves, symmetry_mask
from bibdopt.instances import DesignSpec
from bibdopt.localsearch import (
    EvaluationCounter,
    HillClimber,
    SearchBudget,
    TabuConfig,
    TabuSearch,
    hill_climb,
    neighbors_dual,
    neighbors_primal,
    tabu_search,
)


def test_counter_is_monotone():
    c = EvaluationCounter()
    c.add(3)
    c.add(0)
    assert c.value == 3
    with pytest.raises(ValueError):
        c.add(-1)


def test_budget_presets():
    p = SearchBudget.full_scale()
    assert (p.max_evals, p.max_neighbor_evals, p.stagnation_window) == (20_000_000, 2_000_000, 200_000)
    s = SearchBudget.scaled(20_000_000)
    assert (s.max_evals, s.max_neighbor_evals, s.stagnation_window) == (20_000_000, 2_000_000, 200_000)
    assert SearchBudget.scaled(5).stagnation_window == 1


def test_tabu_config_validation():
    with pytest.raises(ValueError):
        TabuConfig(tenure=0)


def test_primal_neighbourhood_complete(spec_8, rng):
    c = random_candidate(spec_8, "primal", None, rng)
    moves = list(neighbors_primal(c, None, rng))
    assert len(moves) == len(set(moves)) == spec_8.v * spec_8.r * (spec_8.b - spec_8.r)
    assert all(c.is_legal_swap(*m) for m in moves)


def test_primal_neighbourhood_masked(spec_8, rng):
    mask = symmetry_mask(spec_8, "primal")
    c = random_candidate(spec_8, "primal", mask, rng)
    moves = list(neighbors_primal(c, mask, rng))
    expected = sum(int(c.matrix[i, 2:].sum()) * int((c.matrix[i, 2:] == 0).sum()) for i in range(2, 8))
    assert len(set(moves)) == len(moves) == expected
    assert all(c.is_legal_swap(*m, mask=mask) for m in moves)


def test_dual_neighbourhood_complete(spec_8, rng):
    mask = symmetry_mask(spec_8, "dual")
    c = random_candidate(spec_8, "dual", None, rng)
    moves = list(neighbors_dual(c, None, rng))
    assert len(set(moves)) == len(moves) == spec_8.v * spec_8.r * (spec_8.b - spec_8.r)
    assert all(c.is_legal_relabel(*m) for m in moves)
    masked = list(neighbors_dual(random_candidate(spec_8, "dual", mask, rng), mask, rng))
    assert len(masked) == (spec_8.v - 2) * spec_8.r * (spec_8.b - spec_8.r)
    assert all(row >= 2 for row, _, _ in masked)


def test_neighbourhood_order_is_seeded(spec_7):
    c = random_candidate(spec_7, "primal", None, np.random.default_rng(0))
    a = list(neighbors_primal(c, None, np.random.default_rng(5)))
    b = list(neighbors_primal(c, None, np.random.default_rng(5)))
    assert a == b


@pytest.mark.parametrize("encoding", ["primal", "dual"])
def test_tabu_takes_best_move(spec_8, encoding):
    rng = np.random.default_rng(3)
    start = random_candidate(spec_8, encoding, None, rng)
    i, a, z = swap_moves(start.incidence, np.arange(8), np.arange(14))
    best_delta = int(swap_deltas(start, i, a, z).min())
    ts = TabuSearch(start, SearchBudget(10**6, 10**5, 10**5), rng=rng)
    used = ts.step(10**6)
    assert used == len(i)
    assert ts.current.fitness == start.fitness + best_delta


@pytest.mark.parametrize("encoding", ["primal", "dual"])
def test_inverse_move_is_tabu(spec_8, encoding):
    rng = np.random.default_rng(4)
    start = random_candidate(spec_8, encoding, None, rng)
    ts = TabuSearch(start, SearchBudget(10**6, 10**5, 10**5), TabuConfig(tenure=3), rng=rng)
    before = ts.current.incidence.copy()
    ts.step(10**6)
    (row, a), (_, z) = np.argwhere(before != ts.current.incidence)[[0, 1]]
    if ts.current.incidence[row, a] == 1:
        a, z = z, a  # a: the column the object left
    # the inverse move sends the object back from z to a
    key = ts._keys(np.array([row]), np.array([z]), np.array([a]))[0]
    assert key in ts.tabu_list
    assert len(ts.tabu_list) == 1


def test_tabu_list_bounded_by_tenure(spec_8, rng):
    ts = TabuSearch(random_candidate(spec_8, "primal", None, rng), SearchBudget(10**6, 10**5, 10**5), TabuConfig(5), rng=rng)
    for _ in range(12):
        ts.step(10**6)
    assert len(ts.tabu_list) == 5


def test_stagnation_resets_to_incumbent(spec_8):
    rng = np.random.default_rng(1)
    spec = DesignSpec(14, 26, 13, 7, 6)
    start = random_candidate(spec, "primal", None, rng)
    ts = TabuSearch(start, SearchBudget(10**5, 10**4, 2000), rng=rng)
    ts.run(100_000)
    assert ts.restarts > 0
    assert ts.best.fitness <= start.fitness


@pytest.mark.parametrize("encoding", ["primal", "dual"])
@pytest.mark.parametrize("engine", ["hc", "ts"])
def test_budget_and_bookkeeping(spec_8, encoding, engine):
    rng = np.random.default_rng(11)
    budget = SearchBudget(5000, 500, 300)
    mask = symmetry_mask(spec_8, encoding)
    start = random_candidate(spec_8, encoding, mask, rng)
    run = hill_climb if engine == "hc" else tabu_search
    best, res = run(start, spec_8, budget, mask=mask, rng=rng)
    assert res.evaluations <= 5000
    assert budget.counter.value == res.evaluations
    assert res.best_fitness == best.fitness <= start.fitness
    assert mask.matches(best)
    best.check()
    assert res.solved == (best.fitness == 0)
    if not res.solved:
        assert res.evaluations == 5000


def test_hill_climber_restarts_on_local_optimum(spec_8):
    rng = np.random.default_rng(2)
    hc = HillClimber(random_candidate(DesignSpec(13, 26, 12, 6, 5), "primal", None, rng), SearchBudget(10**6, 10**5, 10**5), rng=rng)
    hc.run(400_000)
    assert hc.restarts > 0
    assert hc.evaluations == 400_000 or hc.best.fitness == 0


def test_zero_budget_does_nothing(spec_8, rng):
    start = random_candidate(spec_8, "primal", None, rng)
    best, res = tabu_search(start, spec_8, SearchBudget(0, 0, 1), rng=rng)
    assert res.evaluations == 0 and best.same_genotype(start)


@pytest.mark.parametrize("encoding", ["primal", "dual"])
def test_tabu_solves_fano(spec_7, encoding):
    rng = np.random.default_rng(0)
    best, res = tabu_search(random_candidate(spec_7, encoding, None, rng), spec_7, SearchBudget.scaled(100_000), rng=rng)
    assert res.solved and primal_fitness(best.incidence, spec_7) == 0


def test_same_seed_same_trajectory(spec_8):
    runs = []
    for _ in range(2):
        rng = np.random.default_rng(99)
        best, res = tabu_search(random_candidate(spec_8, "dual", None, rng), spec_8, SearchBudget(3000, 300, 300), rng=rng)
        runs.append((best.labels.tobytes(), res))
    assert runs[0] == runs[1]
