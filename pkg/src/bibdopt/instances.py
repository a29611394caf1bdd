"""BIBD problem instances: parameter sets, admissibility and the hard catalog."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .errors import InadmissibleSpec, InstanceFileError, NonIntegralParameters


@dataclass(frozen=True)
class DesignSpec:
    """The five parameters <v, b, r, k, lambda> of a block design.

    Construction fails with :class:`InadmissibleSpec` unless ``b*k == v*r``,
    ``lam*(v-1) == r*(k-1)``, ``k < v`` and ``lam < b``.
    """

    v: int
    b: int
    r: int
    k: int
    lam: int

    def __post_init__(self):
        for name in ("v", "b", "r", "k", "lam"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise InadmissibleSpec(f"{name} must be a positive integer, got {value!r}")
        if self.b * self.k != self.v * self.r:
            raise InadmissibleSpec(f"{self}: b*k != v*r")
        if self.lam * (self.v - 1) != self.r * (self.k - 1):
            raise InadmissibleSpec(f"{self}: lambda*(v-1) != r*(k-1)")
        if not self.k < self.v:
            raise InadmissibleSpec(f"{self}: k must be smaller than v")
        if not self.lam < self.b:
            raise InadmissibleSpec(f"{self}: lambda must be smaller than b")

    @property
    def size(self) -> int:
        return self.v * self.b

    @property
    def params(self) -> tuple[int, int, int, int, int]:
        return (self.v, self.b, self.r, self.k, self.lam)

    def label(self) -> str:
        return "-".join(str(p) for p in self.params)

    def __str__(self):
        return "<{},{},{},{},{}>".format(*self.params)


def derive_spec(v: int, k: int, lam: int) -> DesignSpec:
    """Complete ``(v, k, lambda)`` to a full :class:`DesignSpec`.

    >>> derive_spec(7, 3, 1)
    DesignSpec(v=7, b=7, r=3, k=3, lam=1)
    """
    if k < 2 or v <= k or lam < 1:
        raise InadmissibleSpec(f"need k >= 2, v > k, lambda >= 1; got v={v}, k={k}, lambda={lam}")
    r_num, r_den = lam * (v - 1), k - 1
    if r_num % r_den:
        raise NonIntegralParameters(f"r = {r_num}/{r_den} is not an integer")
    r = r_num // r_den
    if (v * r) % k:
        raise NonIntegralParameters(f"b = {v * r}/{k} is not an integer")
    return DesignSpec(v, v * r // k, r, k, lam)


@dataclass(frozen=True)
class CatalogEntry:
    id: int
    spec: DesignSpec

    @property
    def size(self) -> int:
        return self.spec.size


# id, v, b, r, k, lambda
_HARD = (
    (21, 14, 26, 13, 7, 6),
    (27, 15, 30, 14, 7, 6),
    (28, 16, 30, 15, 8, 7),
    (33, 16, 32, 12, 6, 4),
    (34, 15, 35, 14, 6, 5),
    (39, 17, 34, 16, 8, 7),
    (43, 18, 34, 17, 9, 8),
    (44, 25, 25, 9, 9, 3),
    (46, 21, 30, 10, 7, 3),
    (48, 16, 40, 15, 6, 5),
    (50, 15, 45, 21, 7, 9),
    (54, 19, 38, 18, 9, 8),
    (56, 22, 33, 12, 8, 4),
    (57, 14, 52, 26, 7, 12),
    (58, 27, 27, 13, 13, 6),
    (59, 21, 35, 15, 9, 6),
    (62, 20, 38, 19, 10, 9),
    (63, 16, 48, 18, 6, 6),
    (70, 21, 42, 10, 5, 2),
    (71, 21, 42, 12, 6, 3),
    (72, 21, 42, 20, 10, 9),
    (73, 16, 56, 21, 6, 7),
    (76, 18, 51, 17, 6, 5),
    (77, 22, 42, 21, 11, 10),
    (80, 16, 60, 30, 8, 14),
    (82, 31, 31, 10, 10, 3),
    (83, 31, 31, 15, 15, 7),
    (85, 22, 44, 14, 7, 4),
    (86, 25, 40, 16, 10, 6),
)


def hard_catalog() -> list[CatalogEntry]:
    """The 29 hard instances (vb <= 1000), ordered by id."""
    return [CatalogEntry(row[0], DesignSpec(*row[1:])) for row in _HARD]


def catalog_entry(id: int) -> CatalogEntry:
    for entry in hard_catalog():
        if entry.id == id:
            return entry
    raise KeyError(f"no catalog instance with id {id}")


def parse_instances(text: str) -> list[CatalogEntry]:
    """Parse ``id,v,b,r,k,lambda`` lines; ``#`` starts a comment."""
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = [f.strip() for f in line.split(",")]
        if len(fields) != 6:
            raise InstanceFileError(f"expected 6 comma-separated fields, got {len(fields)}", lineno)
        try:
            values = [int(f) for f in fields]
        except ValueError:
            raise InstanceFileError(f"non-integer field in {line!r}", lineno) from None
        try:
            spec = DesignSpec(*values[1:])
        except InadmissibleSpec as exc:
            raise InstanceFileError(str(exc), lineno) from None
        entries.append(CatalogEntry(values[0], spec))
    return entries


def load_instances(path) -> list[CatalogEntry]:
    return parse_instances(Path(path).read_text(encoding="ascii"))
