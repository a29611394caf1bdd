"""Conversion between encodings and independent solution checking."""

from __future__ import annotations

from collections import Counter
from itertools import combinations

import numpy as np

from ..errors import DimensionMismatch, RowCountViolated
from ..instances import DesignSpec
from .candidates import Candidate, DualCandidate, PrimalCandidate
from .symmetry import SymmetryMask, embed


def dual_to_primal(c: DualCandidate, spec: DesignSpec | None = None) -> PrimalCandidate:
    """Incidence matrix with a 1 wherever a block label occurs in an object's row."""
    spec = spec or c.spec
    m = np.zeros((spec.v, spec.b), dtype=np.int8)
    rows = np.repeat(np.arange(spec.v), spec.r)
    m[rows, c.labels.ravel() - 1] = 1
    return PrimalCandidate(m, spec)


def primal_to_dual(c: PrimalCandidate, spec: DesignSpec | None = None) -> DualCandidate:
    """Row i lists the 1-based columns of the ones of row i, increasing."""
    spec = spec or c.spec
    m = np.asarray(c.matrix)
    counts = m.sum(axis=1)
    if (counts != spec.r).any():
        raise RowCountViolated("every primal row must hold exactly r ones")
    labels = np.nonzero(m)[1].reshape(spec.v, spec.r) + 1
    return DualCandidate(labels, spec)


def translate(c: Candidate, encoding: str, mask: SymmetryMask | None = None) -> Candidate | None:
    """Express ``c`` in ``encoding``; with a mask, also relabel into its frozen layout.

    Returns ``None`` if the candidate admits no relabelling compatible with
    ``mask``.
    """
    if c.encoding == encoding:
        out = c.copy()
    elif encoding == "primal":
        out = dual_to_primal(c)
    else:
        out = primal_to_dual(c)
    if mask is not None:
        return embed(out, mask)
    return out


def verify_solution(c, spec: DesignSpec) -> bool:
    """Check the design constraints directly on the genotype.

    Uses plain Python sets and counters, sharing nothing with the fitness
    code, so it can serve as an oracle for ``fitness == 0``.
    """
    if isinstance(c, DualCandidate):
        rows = [[int(x) for x in row] for row in c.labels]
        if len(rows) != spec.v or any(len(row) != spec.r for row in rows):
            raise DimensionMismatch("dual matrix has the wrong shape")
        blocks = [set(row) for row in rows]
        if any(len(bl) != spec.r for bl in blocks):
            return False
    else:
        m = c.matrix if isinstance(c, PrimalCandidate) else c
        rows = [[int(x) for x in row] for row in np.asarray(m)]
        if len(rows) != spec.v or any(len(row) != spec.b for row in rows):
            raise DimensionMismatch("primal matrix has the wrong shape")
        if any(sum(row) != spec.r for row in rows):
            return False
        blocks = [{j + 1 for j, x in enumerate(row) if x == 1} for row in rows]
    sizes = Counter(j for bl in blocks for j in bl)
    if any(sizes[j] != spec.k for j in range(1, spec.b + 1)):
        return False
    return all(len(p & q) == spec.lam for p, q in combinations(blocks, 2))
