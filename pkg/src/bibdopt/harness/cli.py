"""Command line: ``solve``, ``rank`` and ``catalog list``.

Exit status is 0 on success, 2 for notation, configuration or instance
errors and 3 for I/O failures.
"""

from __future__ import annotations

import argparse
import sys

from ..errors import BIBDError
from ..evolutionary import GAConfig
from ..instances import CatalogEntry, catalog_entry, derive_spec, hard_catalog, load_instances
from ..localsearch import SearchBudget, TabuConfig
from .notation import parse_algorithm
from .ranking import friedman_statistic, rank_table, write_rank_table
from .runner import EngineOptions, read_records, run_experiment, write_records

EXIT_OK, EXIT_CONFIG, EXIT_IO = 0, 2, 3


def resolve_instances(text: str) -> list[CatalogEntry]:
    """``v,k,lambda`` | ``catalog:ID`` | ``file:PATH``."""
    if text.startswith("catalog:"):
        try:
            return [catalog_entry(int(text[len("catalog:"):]))]
        except (KeyError, ValueError):
            raise ValueError(f"unknown catalog instance {text!r}") from None
    if text.startswith("file:"):
        return load_instances(text[len("file:"):])
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError(f"instance must be v,k,lambda, catalog:ID or file:PATH; got {text!r}")
    try:
        v, k, lam = (int(p) for p in parts)
    except ValueError:
        raise ValueError(f"non-integer instance parameters in {text!r}") from None
    spec = derive_spec(v, k, lam)
    return [CatalogEntry(spec.label(), spec)]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bibdopt", description="Metaheuristic search for balanced incomplete block designs.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="run an algorithm on one or more instances")
    s.add_argument("--instance", required=True, help="v,k,lambda | catalog:ID | file:PATH")
    s.add_argument("--algorithm", required=True, help='notation such as "MA.Ts.B*.A4.Gd"')
    s.add_argument("--runs", type=int, default=1)
    s.add_argument("--seed", type=int, default=0, help="seed of the first run; run i uses seed+i")
    s.add_argument("--max-evals", type=int, default=20_000_000)
    s.add_argument("--neighbor-evals", type=int, default=None, help="local search cap inside a memetic algorithm (default max-evals/10)")
    s.add_argument("--stagnation", type=int, default=None, help="evaluations without improvement before restart (default neighbor-evals/10)")
    s.add_argument("--popsize", type=int, default=100)
    s.add_argument("--tenure", type=int, default=15)
    s.add_argument("--no-aspiration", action="store_true")
    s.add_argument("--cycles", type=int, default=5, help="communication cycles of cooperative models")
    s.add_argument("--workers", type=int, default=1, help="threads per cooperative run")
    s.add_argument("--processes", type=int, default=1, help="independent runs executed in parallel")
    s.add_argument("--out", default="-", help="results CSV (default stdout)")
    s.add_argument("--dump-solutions", metavar="DIR", default=None)

    r = sub.add_parser("rank", help="rank algorithms from a results CSV")
    r.add_argument("--in", dest="inp", required=True)
    r.add_argument("--out", default="-")

    c = sub.add_parser("catalog", help="list the built-in hard instances")
    c.add_argument("action", choices=["list"])
    return p


def _budget(args) -> SearchBudget:
    base = SearchBudget.scaled(args.max_evals)
    nv = args.neighbor_evals if args.neighbor_evals is not None else base.max_neighbor_evals
    ni = args.stagnation if args.stagnation is not None else max(1, nv // 10)
    if min(args.max_evals, nv, ni) < 0 or nv < 1 or ni < 1:
        raise ValueError("evaluation budgets must be positive")
    return SearchBudget(args.max_evals, nv, ni)


def _solve(args) -> int:
    descriptor = parse_algorithm(args.algorithm)
    entries = resolve_instances(args.instance)
    if args.runs < 0:
        raise ValueError("--runs must be non-negative")
    tabu = TabuConfig(args.tenure, not args.no_aspiration)
    options = EngineOptions(GAConfig(popsize=args.popsize, tabu=tabu), tabu, args.cycles, args.workers)
    budget = _budget(args)
    records = []
    for entry in entries:
        records += run_experiment(descriptor, entry.spec, args.runs, args.seed, budget, entry.id, options,
                                  args.processes, args.dump_solutions)
    if args.out == "-":
        write_records(records, sys.stdout)
    else:
        write_records(records, args.out)
    return EXIT_OK


def _rank(args) -> int:
    table = rank_table(read_records(args.inp))
    if args.out == "-":
        write_rank_table(table, sys.stdout)
    else:
        write_rank_table(table, args.out)
    if len(table.instances) >= 2 and len(table.algorithms) >= 2:
        print(f"friedman chi2 = {friedman_statistic(table.ranks):.6f}", file=sys.stderr)
    return EXIT_OK


def _catalog(args) -> int:
    print("id,v,b,r,k,lambda")
    for e in hard_catalog():
        print(",".join(str(x) for x in (e.id, *e.spec.params)))
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"solve": _solve, "rank": _rank, "catalog": _catalog}[args.command]
    try:
        return handler(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (BIBDError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
