"""Algorithm notation, seeded experiment runner and rank-based comparison."""

from .notation import AlgorithmDescriptor, CoopSpec, agent_spec, coop_config, format_algorithm, parse_algorithm
from .ranking import RankTable, average_ranks, friedman_statistic, rank_table, write_rank_table
from .runner import (
    CSV_COLUMNS,
    EngineOptions,
    RunRecord,
    parse_records,
    read_records,
    records_to_csv,
    run_experiment,
    run_once,
    solve,
    write_records,
)
