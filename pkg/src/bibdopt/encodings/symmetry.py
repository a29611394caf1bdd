"""Variable-reduction symmetry breaking and random candidate generation.

A mask freezes cells of the genotype to canonical values.  For the primal
encoding the first two rows and columns are fixed; for the dual encoding
the first two rows are.  Moves, mutation, crossover and initialisation only
ever touch the free region.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from ..errors import InconsistentMask
from ..instances import DesignSpec
from .candidates import Candidate, DualCandidate, PrimalCandidate


@dataclass(frozen=True, eq=False)
class SymmetryMask:
    """Frozen cells of one encoding.

    ``frozen`` and ``values`` have the genotype's shape (v x b for primal,
    v x r for dual).  ``free_rows``/``free_cols`` index the rows and the
    incidence columns that moves may touch.
    """

    encoding: str
    spec: DesignSpec
    frozen: np.ndarray
    values: np.ndarray
    free_rows: np.ndarray
    free_cols: np.ndarray

    @property
    def frozen_cells(self) -> set[tuple[int, int]]:
        return {(int(i), int(j)) for i, j in zip(*np.nonzero(self.frozen))}

    @property
    def free_shape(self) -> tuple[int, int]:
        if self.encoding == "primal":
            return (len(self.free_rows), len(self.free_cols))
        return (len(self.free_rows), self.spec.r)

    def matches(self, c: Candidate) -> bool:
        """True if every frozen cell of ``c`` holds its canonical value."""
        if c.encoding != self.encoding:
            return False
        return bool(np.array_equal(c.genotype[self.frozen], self.values[self.frozen]))


def move_space(spec: DesignSpec, mask: SymmetryMask | None = None):
    """Rows and incidence columns open to moves."""
    if mask is None:
        return np.arange(spec.v), np.arange(spec.b)
    return mask.free_rows, mask.free_cols


def symmetry_mask_primal(spec: DesignSpec) -> SymmetryMask:
    """Fix rows 1-2 and columns 1-2 of the incidence matrix.

    Column 2 receives its remaining ``k - (m12 + m22)`` ones in the last rows
    of the matrix.
    """
    v, b, r, k, lam = spec.params
    if v < 3 or b < 3:
        raise InconsistentMask(f"{spec}: primal symmetry breaking needs v >= 3 and b >= 3")
    if 2 * r - lam > b:
        raise InconsistentMask(f"{spec}: row 2 needs 2r - lambda = {2 * r - lam} columns, only {b} exist")
    vals = np.zeros((v, b), dtype=np.int8)
    frozen = np.zeros((v, b), dtype=bool)
    vals[0, :r] = 1
    vals[1, :lam] = 1
    vals[1, r:2 * r - lam] = 1
    frozen[:2, :] = True
    vals[:k, 0] = 1
    frozen[:, 0] = True
    placed = int(vals[0, 1] + vals[1, 1])
    rest = k - placed
    if rest < 0 or rest > v - 2:
        raise InconsistentMask(f"{spec}: column 2 cannot hold exactly k ones")
    if rest:
        vals[v - rest:, 1] = 1
    frozen[:, 1] = True
    if vals[:k, 0].sum() != k or vals[:2, 0].tolist() != [1, 1]:
        raise InconsistentMask(f"{spec}: column 1 conflicts with rows 1-2")
    fixed_per_row = vals[2:, :2].sum(axis=1)
    if (fixed_per_row > r).any() or (r - fixed_per_row > b - 2).any():
        raise InconsistentMask(f"{spec}: fixed cells leave no legal completion of some row")
    if (vals.sum(axis=0) > k).any():
        raise InconsistentMask(f"{spec}: fixed cells force a column above k ones")
    return SymmetryMask("primal", spec, frozen, vals, np.arange(2, v), np.arange(2, b))


def symmetry_mask_dual(spec: DesignSpec) -> SymmetryMask:
    """Fix dual row 1 to ``1..r`` and row 2 to ``1..lambda, r+1..2r-lambda``."""
    v, b, r, k, lam = spec.params
    if v < 3:
        raise InconsistentMask(f"{spec}: dual symmetry breaking needs v >= 3")
    if 2 * r - lam > b:
        raise InconsistentMask(f"{spec}: row 2 needs labels up to {2 * r - lam} > b = {b}")
    vals = np.zeros((v, r), dtype=np.int64)
    vals[0] = np.arange(1, r + 1)
    vals[1, :lam] = np.arange(1, lam + 1)
    vals[1, lam:] = np.arange(r + 1, 2 * r - lam + 1)
    frozen = np.zeros((v, r), dtype=bool)
    frozen[:2] = True
    return SymmetryMask("dual", spec, frozen, vals, np.arange(2, v), np.arange(b))


def symmetry_mask(spec: DesignSpec, encoding: str) -> SymmetryMask:
    return symmetry_mask_primal(spec) if encoding == "primal" else symmetry_mask_dual(spec)


def _check_mask(spec, mask, encoding):
    if mask is None:
        return
    if mask.encoding != encoding:
        raise InconsistentMask(f"a {mask.encoding} mask cannot constrain a {encoding} candidate")
    if mask.spec != spec:
        raise InconsistentMask("mask built for a different spec")


def random_primal(spec: DesignSpec, mask: SymmetryMask | None, rng: np.random.Generator) -> PrimalCandidate:
    """Uniform random incidence matrix with r ones per row, honouring ``mask``."""
    _check_mask(spec, mask, "primal")
    v, b, r = spec.v, spec.b, spec.r
    if mask is None:
        keys = rng.random((v, b))
        order = np.argsort(keys, axis=1)
        m = np.zeros((v, b), dtype=np.int8)
        np.put_along_axis(m, order[:, :r], 1, axis=1)
        return PrimalCandidate(m, spec)
    m = mask.values.copy()
    rows, cols = mask.free_rows, mask.free_cols
    need = r - (m[rows] * mask.frozen[rows]).sum(axis=1)
    if (need < 0).any() or (need > len(cols)).any():
        raise InconsistentMask(f"some row cannot be completed to {r} ones")
    ranks = np.argsort(np.argsort(rng.random((len(rows), len(cols))), axis=1), axis=1)
    m[np.ix_(rows, cols)] = ranks < need[:, None]
    return PrimalCandidate(m, spec)


def random_dual(spec: DesignSpec, mask: SymmetryMask | None, rng: np.random.Generator) -> DualCandidate:
    """Each free row holds r distinct labels drawn without replacement from 1..b."""
    _check_mask(spec, mask, "dual")
    v, b, r = spec.v, spec.b, spec.r
    keys = rng.random((v, b))
    md = np.argsort(keys, axis=1)[:, :r] + 1
    if mask is not None:
        md[mask.frozen] = mask.values[mask.frozen]
    return DualCandidate(md, spec)


def random_candidate(spec, encoding, mask, rng) -> Candidate:
    if encoding == "primal":
        return random_primal(spec, mask, rng)
    return random_dual(spec, mask, rng)


def genotype_count(spec: DesignSpec, encoding: str, mask: SymmetryMask | None = None) -> int:
    """Number of distinct genotypes reachable under ``mask`` (exact integer)."""
    from math import comb, perm

    if encoding == "primal":
        if mask is None:
            return comb(spec.b, spec.r) ** spec.v
        total = 1
        for i in mask.free_rows:
            need = spec.r - int(mask.values[i, mask.frozen[i]].sum())
            total *= comb(len(mask.free_cols), need)
        return total
    rows = spec.v if mask is None else len(mask.free_rows)
    return perm(spec.b, spec.r) ** rows


def embed(c: Candidate, mask: SymmetryMask) -> Candidate | None:
    """Relabel objects and blocks of ``c`` so that it satisfies ``mask``.

    Row and column permutations (and block relabelling in the dual) leave
    the fitness unchanged, so the result is an equivalent candidate.
    Returns ``None`` when no such relabelling exists.
    """
    if c.encoding != mask.encoding:
        raise InconsistentMask("embed() expects a candidate already in the mask's encoding")
    if mask.matches(c):
        return c.copy()
    if c.encoding == "primal":
        return _embed_primal(c, mask)
    return _embed_dual(c, mask)


def _embed_dual(c: DualCandidate, mask: SymmetryMask) -> DualCandidate | None:
    s = c.spec
    lam, r = s.lam, s.r
    for i1, i2 in permutations(range(s.v), 2):
        if c.products[i1, i2] != lam:
            continue
        row1 = [int(x) for x in c.labels[i1]]
        row2 = [int(x) for x in c.labels[i2]]
        common = [x for x in row1 if x in row2]
        only1 = [x for x in row1 if x not in row2]
        only2 = [x for x in row2 if x not in row1]
        target = common + only1 + only2
        rest = [x for x in range(1, s.b + 1) if x not in target]
        relabel = np.zeros(s.b + 1, dtype=np.int64)
        relabel[target + rest] = np.arange(1, s.b + 1)
        others = [i for i in range(s.v) if i not in (i1, i2)]
        md = relabel[c.labels[[i1, i2] + others]]
        # canonical order inside the two frozen rows
        md[0] = np.arange(1, r + 1)
        md[1] = mask.values[1]
        out = DualCandidate(md, s)
        if mask.matches(out):
            return out
    return None


def _embed_primal(c: PrimalCandidate, mask: SymmetryMask) -> PrimalCandidate | None:
    s = c.spec
    v, b, r, k, lam = s.params
    m = c.incidence
    col2_needs = mask.values[:, 1]
    m12, m22 = int(col2_needs[0]), int(col2_needs[1])
    tail = k - m12 - m22
    # rows whose frozen column-1/column-2 cells are both one
    overlap = [t for t in range(2, v) if mask.values[t, 0] and mask.values[t, 1]]
    for i1, i2 in permutations(range(v), 2):
        if c.products[i1, i2] != lam:
            continue
        both = [j for j in range(b) if m[i1, j] and m[i2, j]]
        only1 = [j for j in range(b) if m[i1, j] and not m[i2, j]]
        only2 = [j for j in range(b) if m[i2, j] and not m[i1, j]]
        neither = [j for j in range(b) if not m[i1, j] and not m[i2, j]]
        others = [i for i in range(v) if i not in (i1, i2)]
        c2_pool = both if m22 else (only1 if m12 else neither)
        for c1 in both:
            if c.col_counts[c1] != k:
                continue
            for c2 in c2_pool:
                if c2 == c1 or c.col_counts[c2] != k:
                    continue
                a_rows = [i for i in others if m[i, c1] and not m[i, c2]]
                b_rows = [i for i in others if m[i, c1] and m[i, c2]]
                c_rows = [i for i in others if m[i, c2] and not m[i, c1]]
                n_rows = [i for i in others if not m[i, c1] and not m[i, c2]]
                if len(b_rows) != len(overlap) or len(c_rows) + len(b_rows) != tail:
                    continue
                row_order = [i1, i2] + a_rows + b_rows + n_rows + c_rows
                col_order = [c1, c2] + [j for g in (both, only1, only2, neither) for j in g if j not in (c1, c2)]
                out = PrimalCandidate(m[np.ix_(row_order, col_order)], s)
                if mask.matches(out):
                    return out
    return None

