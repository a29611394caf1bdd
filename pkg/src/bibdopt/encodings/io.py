"""Plain-text dump format for candidates.

The first line is ``primal|dual v b r k lambda``; the matrix follows one
row per line with space-separated entries.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from ..instances import DesignSpec
from .candidates import Candidate, DualCandidate, PrimalCandidate


def format_candidate(c: Candidate) -> str:
    header = " ".join([c.encoding, *map(str, c.spec.params)])
    body = "\n".join(" ".join(str(int(x)) for x in row) for row in c.genotype)
    return f"{header}\n{body}\n"


def parse_candidate(text: str) -> Candidate:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty candidate dump")
    head = lines[0].split()
    if len(head) != 6 or head[0] not in ("primal", "dual"):
        raise ValueError(f"bad candidate header {lines[0]!r}")
    spec = DesignSpec(*(int(x) for x in head[1:]))
    matrix = np.array([[int(x) for x in ln.split()] for ln in lines[1:]])
    if head[0] == "primal":
        return PrimalCandidate(matrix, spec)
    return DualCandidate(matrix, spec)


def dump_candidate(c: Candidate, path) -> None:
    Path(path).write_text(format_candidate(c), encoding="ascii")


def load_candidate(path) -> Candidate:
    return parse_candidate(Path(path).read_text(encoding="ascii"))
