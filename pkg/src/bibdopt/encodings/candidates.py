"""Primal (binary) and dual (integer) candidate designs with cached fitness.

Both encodings keep the same three caches over the object x block incidence
matrix: column counts, the v x v matrix of pairwise row scalar products, and
the current fitness.  A dual relabel of cell (i, h) from block ``a`` to block
``z`` is the same incidence update as a primal swap of the 1 at (i, a) with
the 0 at (i, z), so both encodings share one delta kernel.
"""

from __future__ import annotations

import numpy as np

from ..errors import AllDifferentViolated, DimensionMismatch, IllegalMove, RowCountViolated
from ..instances import DesignSpec

_DEBUG = False


def set_debug(flag: bool = True) -> None:
    """Revalidate caches against full recomputation after every move."""
    global _DEBUG
    _DEBUG = bool(flag)


def debug_enabled() -> bool:
    return _DEBUG


def _pair_term(products: np.ndarray, lam: int) -> int:
    # products is symmetric: halve the off-diagonal sum
    full = int(np.abs(lam - products).sum())
    return (full - int(np.abs(lam - np.diagonal(products)).sum())) // 2


class Candidate:
    """Shared cache maintenance.  Use :class:`PrimalCandidate` or :class:`DualCandidate`."""

    encoding = ""

    def __init__(self, spec: DesignSpec, incidence: np.ndarray):
        self.spec = spec
        self.incidence = incidence
        self._refresh()

    def _refresh(self):
        inc = self.incidence.astype(np.int64)
        self.col_counts = inc.sum(axis=0)
        self.products = inc @ inc.T
        self.fitness = self._cached_fitness()

    def _cached_fitness(self) -> int:
        s = self.spec
        row_counts = np.diag(self.products)
        return (
            int(np.abs(s.r - row_counts).sum())
            + int(np.abs(s.k - self.col_counts).sum())
            + _pair_term(self.products, s.lam)
        )

    @property
    def genotype(self) -> np.ndarray:
        raise NotImplementedError

    def key(self) -> bytes:
        """Genotype identity used for duplicate detection."""
        return self.genotype.tobytes()

    def same_genotype(self, other: "Candidate") -> bool:
        return self.encoding == other.encoding and np.array_equal(self.genotype, other.genotype)

    def hamming(self, other: "Candidate") -> int:
        if self.encoding != other.encoding:
            raise DimensionMismatch("Hamming distance needs candidates of the same encoding")
        return int(np.count_nonzero(self.genotype != other.genotype))

    def check(self) -> None:
        """Raise ``AssertionError`` if any cache disagrees with the matrix."""
        inc = self.incidence.astype(np.int64)
        assert np.array_equal(self.col_counts, inc.sum(axis=0)), "column counts out of sync"
        assert np.array_equal(self.products, inc @ inc.T), "scalar products out of sync"
        assert self.fitness == self._cached_fitness(), "fitness out of sync"

    def _swap(self, i: int, a: int, z: int, delta: int | None = None) -> int:
        """Move object ``i`` from block ``a`` to block ``z`` (0-based) in the incidence."""
        if delta is None:
            delta = int(swap_deltas(self, np.array([i]), np.array([a]), np.array([z]))[0])
        inc = self.incidence
        diff = inc[:, z].astype(np.int64) - inc[:, a]
        diff[i] = 0
        self.products[i] += diff
        self.products[:, i] += diff
        self.col_counts[a] -= 1
        self.col_counts[z] += 1
        inc[i, a] = 0
        inc[i, z] = 1
        self._moved(i, a, z)
        self.fitness += delta
        if _DEBUG:
            self.check()
        return delta

    def _moved(self, i: int, a: int, z: int) -> None:
        """Hook for encoding-specific state after an incidence swap."""

    def copy(self):
        new = object.__new__(type(self))
        new.spec = self.spec
        new.incidence = self.incidence.copy()
        new.col_counts = self.col_counts.copy()
        new.products = self.products.copy()
        new.fitness = self.fitness
        return new

    def __repr__(self):
        return f"{type(self).__name__}({self.spec}, fitness={self.fitness})"


class PrimalCandidate(Candidate):
    """A v x b 0/1 incidence matrix with exactly r ones per row."""

    encoding = "primal"

    def __init__(self, matrix, spec: DesignSpec):
        m = np.asarray(matrix)
        if m.shape != (spec.v, spec.b):
            raise DimensionMismatch(f"expected a {spec.v}x{spec.b} matrix, got shape {m.shape}")
        if m.size and (m.min() < 0 or m.max() > 1 or not np.array_equal(m, m.astype(np.int8))):
            raise ValueError("primal matrix entries must be 0 or 1")
        m = m.astype(np.int8)
        counts = m.sum(axis=1)
        if (counts != spec.r).any():
            bad = int(np.flatnonzero(counts != spec.r)[0])
            raise RowCountViolated(f"row {bad} has {int(counts[bad])} ones, expected {spec.r}")
        super().__init__(spec, m)

    @property
    def matrix(self) -> np.ndarray:
        return self.incidence

    @property
    def genotype(self) -> np.ndarray:
        return self.incidence

    @property
    def row_counts(self) -> np.ndarray:
        return np.diag(self.products).copy()

    def is_legal_swap(self, row, col_one, col_zero, mask=None) -> bool:
        v, b = self.spec.v, self.spec.b
        if not (0 <= row < v and 0 <= col_one < b and 0 <= col_zero < b):
            return False
        if self.incidence[row, col_one] != 1 or self.incidence[row, col_zero] != 0:
            return False
        if mask is not None and (mask.frozen[row, col_one] or mask.frozen[row, col_zero]):
            return False
        return True

    def apply_swap(self, row: int, col_one: int, col_zero: int, mask=None) -> int:
        """Exchange the 1 at ``(row, col_one)`` with the 0 at ``(row, col_zero)``; return the fitness delta."""
        if not self.is_legal_swap(row, col_one, col_zero, mask):
            raise IllegalMove(f"swap ({row}, {col_one}, {col_zero}) is not legal")
        return self._swap(row, col_one, col_zero)


class DualCandidate(Candidate):
    """A v x r matrix of 1-based block labels, pairwise distinct within each row."""

    encoding = "dual"

    def __init__(self, labels, spec: DesignSpec):
        md = np.asarray(labels)
        if md.shape != (spec.v, spec.r):
            raise DimensionMismatch(f"expected a {spec.v}x{spec.r} matrix, got shape {md.shape}")
        if not np.issubdtype(md.dtype, np.integer):
            if not np.array_equal(md, np.round(md)):
                raise ValueError("dual labels must be integers")
        md = md.astype(np.int64)
        if md.min() < 1 or md.max() > spec.b:
            raise ValueError(f"dual labels must lie in [1, {spec.b}]")
        srt = np.sort(md, axis=1)
        if (srt[:, 1:] == srt[:, :-1]).any():
            bad = int(np.flatnonzero((srt[:, 1:] == srt[:, :-1]).any(axis=1))[0])
            raise AllDifferentViolated(f"row {bad} repeats a block label")
        self.labels = md
        inc = np.zeros((spec.v, spec.b), dtype=np.int8)
        rows = np.repeat(np.arange(spec.v), spec.r)
        inc[rows, md.ravel() - 1] = 1
        # position[i, j] = column of row i holding label j+1, or -1
        self.position = np.full((spec.v, spec.b), -1, dtype=np.int64)
        self.position[rows, md.ravel() - 1] = np.tile(np.arange(spec.r), spec.v)
        super().__init__(spec, inc)

    @property
    def genotype(self) -> np.ndarray:
        return self.labels

    @property
    def block_counts(self) -> np.ndarray:
        return self.col_counts

    @property
    def coincidences(self) -> np.ndarray:
        return self.products

    def check(self) -> None:
        super().check()
        rebuilt = np.zeros_like(self.incidence)
        rows = np.repeat(np.arange(self.spec.v), self.spec.r)
        rebuilt[rows, self.labels.ravel() - 1] = 1
        assert np.array_equal(rebuilt, self.incidence), "incidence out of sync with labels"

    def is_legal_relabel(self, row, col, new_label, mask=None) -> bool:
        s = self.spec
        if not (0 <= row < s.v and 0 <= col < s.r and 1 <= new_label <= s.b):
            return False
        if self.incidence[row, new_label - 1]:
            return False
        if mask is not None and mask.frozen[row, col]:
            return False
        return True

    def relabel(self, row: int, col: int, new_label: int, mask=None) -> int:
        """Replace the label at ``(row, col)`` by ``new_label``; return the fitness delta."""
        if not self.is_legal_relabel(row, col, new_label, mask):
            raise IllegalMove(f"relabel ({row}, {col}) -> {new_label} is not legal")
        return self._swap(row, int(self.labels[row, col]) - 1, new_label - 1)

    def _moved(self, i, a, z):
        h = self.position[i, a]
        self.labels[i, h] = z + 1
        self.position[i, z] = h
        self.position[i, a] = -1

    def copy(self):
        new = super().copy()
        new.labels = self.labels.copy()
        new.position = self.position.copy()
        return new


def swap_moves(incidence: np.ndarray, rows: np.ndarray, cols: np.ndarray):
    """All incidence swaps ``(i, a, z)`` with i in ``rows``, a and z in ``cols``,
    ``incidence[i, a] == 1`` and ``incidence[i, z] == 0``, in row-major order."""
    sub = incidence[np.ix_(rows, cols)].astype(bool)
    ri, ai, zi = np.nonzero(sub[:, :, None] & ~sub[:, None, :])
    return rows[ri], cols[ai], cols[zi]


def swap_deltas(c: Candidate, rows, a, z) -> np.ndarray:
    """Fitness change of each incidence swap, without applying any of them."""
    k, lam = c.spec.k, c.spec.lam
    ca = c.col_counts[a]
    cz = c.col_counts[z]
    dcol = np.abs(k - ca + 1) - np.abs(k - ca) + np.abs(k - cz - 1) - np.abs(k - cz)
    p = c.products[rows]
    inc = c.incidence
    new = p + inc[:, z].T - inc[:, a].T
    term = np.abs(lam - new) - np.abs(lam - p)
    term[np.arange(len(rows)), rows] = 0
    return dcol + term.sum(axis=1)


def _check_dims(matrix: np.ndarray, shape) -> None:
    if matrix.shape != shape:
        raise DimensionMismatch(f"expected shape {shape}, got {matrix.shape}")


def primal_fitness(c, spec: DesignSpec) -> int:
    """Total violation of the row, column and scalar-product constraints.

    Evaluated from scratch on the matrix; ``c`` may be a
    :class:`PrimalCandidate` or any v x b 0/1 array.
    """
    m = np.asarray(c.matrix if isinstance(c, PrimalCandidate) else c).astype(np.int64)
    _check_dims(m, (spec.v, spec.b))
    rows = np.abs(spec.r - m.sum(axis=1)).sum()
    cols = np.abs(spec.k - m.sum(axis=0)).sum()
    return int(rows + cols + _pair_term(m @ m.T, spec.lam))


def dual_fitness(c, spec: DesignSpec) -> int:
    """Block-count and pairwise-coincidence violations of a dual matrix.

    Coincidences are counted by comparing every label of row i with every
    label of row j, independently of the incidence caches.
    """
    md = np.asarray(c.labels if isinstance(c, DualCandidate) else c).astype(np.int64)
    _check_dims(md, (spec.v, spec.r))
    srt = np.sort(md, axis=1)
    if (srt[:, 1:] == srt[:, :-1]).any():
        raise AllDifferentViolated("a dual row repeats a block label")
    blocks = np.arange(1, spec.b + 1)
    occurrences = (md[:, :, None] == blocks).sum(axis=(0, 1))
    coincide = (md[:, None, :, None] == md[None, :, None, :]).sum(axis=(2, 3))
    return int(np.abs(spec.k - occurrences).sum() + _pair_term(coincide, spec.lam))


def delta_swap_primal(c: PrimalCandidate, row: int, col_one: int, col_zero: int, spec=None, mask=None) -> int:
    """Fitness change of a primal swap, leaving ``c`` untouched."""
    if spec is not None and spec != c.spec:
        raise DimensionMismatch("candidate built for a different spec")
    if not c.is_legal_swap(row, col_one, col_zero, mask):
        raise IllegalMove(f"swap ({row}, {col_one}, {col_zero}) is not legal")
    return int(swap_deltas(c, np.array([row]), np.array([col_one]), np.array([col_zero]))[0])


def delta_relabel_dual(c: DualCandidate, row: int, col: int, new_label: int, spec=None, mask=None) -> int:
    """Fitness change of a dual relabel, leaving ``c`` untouched."""
    if spec is not None and spec != c.spec:
        raise DimensionMismatch("candidate built for a different spec")
    if not c.is_legal_relabel(row, col, new_label, mask):
        raise IllegalMove(f"relabel ({row}, {col}) -> {new_label} is not legal")
    a = int(c.labels[row, col]) - 1
    return int(swap_deltas(c, np.array([row]), np.array([a]), np.array([new_label - 1]))[0])
