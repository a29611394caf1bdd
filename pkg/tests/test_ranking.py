import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.stats import friedmanchisquare, rankdata

from bibdopt.errors import DegenerateInput, IncompleteDesign
from bibdopt.harness import RunRecord, average_ranks, friedman_statistic, rank_table, write_rank_table
from oracles import friedman_textbook

HAND_MATRICES = [
    [[1, 2, 3], [2, 1, 3], [1, 3, 2]],
    [[1.5, 1.5, 3], [3, 2, 1], [2, 1, 3], [1, 2.5, 2.5]],
    [[1, 2, 3, 4], [4, 3, 2, 1], [2, 1, 4, 3]],
]


def _runs(inst, alg, fits):
    return [RunRecord(inst, alg, i, f, 10, f == 0) for i, f in enumerate(fits)]


def test_solved_count_dominates():
    t = rank_table(_runs("1", "a", [0] * 30) + _runs("1", "b", [5] * 30))
    assert t.ranks.tolist() == [[1.0, 2.0]]


def test_mean_fitness_breaks_ties():
    recs = _runs("1", "a", [0, 3, 4, 4, 3, 3]) + _runs("1", "b", [0, 1, 1, 1, 1, 2])
    t = rank_table(recs)
    assert t.solved.tolist() == [[1, 1]]
    assert t.mean_fitness[0].tolist() == pytest.approx([17 / 6, 6 / 6])
    assert t.ranks.tolist() == [[2.0, 1.0]]


def test_full_tie_shares_average():
    recs = sum((_runs("1", a, [0, 4]) for a in "xyz"), [])
    assert rank_table(recs).ranks.tolist() == [[2.0, 2.0, 2.0]]


def test_instances_in_natural_order():
    recs = []
    for inst in ["86", "9", "21", "extra"]:
        recs += _runs(inst, "a", [1]) + _runs(inst, "b", [2])
    t = rank_table(recs)
    assert t.instances == ["9", "21", "86", "extra"]
    assert t.mean_ranks.tolist() == [1.0, 2.0]


def test_missing_cell():
    with pytest.raises(IncompleteDesign):
        rank_table(_runs("1", "a", [0]) + _runs("1", "b", [0]) + _runs("2", "a", [0]))


def test_rank_table_csv(tmp_path):
    recs = _runs("1", "a", [0]) + _runs("1", "b", [3]) + _runs("2", "a", [2]) + _runs("2", "b", [2])
    write_rank_table(rank_table(recs), tmp_path / "r.csv")
    assert (tmp_path / "r.csv").read_text().splitlines() == ["instance_id,a,b", "1,1,2", "2,1.5,1.5", "mean,1.25,1.75"]


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=9))
def test_average_ranks_match_scipy(keys):
    assert np.array_equal(average_ranks(keys), rankdata(keys, method="average"))


@given(st.lists(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 4)), min_size=2, max_size=5), min_size=1, max_size=4))
def test_rank_rows_sum(cells):
    k = min(len(row) for row in cells)
    recs = []
    for i, row in enumerate(cells):
        for j, (solved, fit) in enumerate(row[:k]):
            recs += _runs(str(i), f"alg{j}", [0] * solved + [fit + 1])
    t = rank_table(recs)
    assert np.allclose(t.ranks.sum(axis=1), k * (k + 1) / 2)


@pytest.mark.parametrize("matrix", HAND_MATRICES)
def test_friedman_textbook_oracle(matrix):
    assert abs(friedman_statistic(matrix) - friedman_textbook(matrix)) < 1e-12


def test_friedman_without_ties_matches_scipy():
    rng = np.random.default_rng(0)
    ranks = np.stack([rng.permutation(5) + 1 for _ in range(8)]).astype(float)
    assert friedman_statistic(ranks) == pytest.approx(friedmanchisquare(*ranks.T).statistic, abs=1e-12)


def test_friedman_balanced_is_zero():
    assert friedman_statistic([[1, 2], [2, 1]] * 5) == pytest.approx(0.0, abs=1e-12)


def test_friedman_one_always_first():
    assert friedman_statistic([[1, 2]] * 10) == pytest.approx(10.0, abs=1e-12)


@pytest.mark.parametrize("matrix", [[[1, 2]], [[1], [1]], [1, 2, 3]])
def test_friedman_degenerate(matrix):
    with pytest.raises(DegenerateInput):
        friedman_statistic(matrix)
