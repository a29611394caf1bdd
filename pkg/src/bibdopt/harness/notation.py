"""Dotted algorithm notation: parser, printer and conversion to engine configs.

Grammar (whitespace between tokens is ignored)::

    algorithm := coop | single
    single    := ("Hc" | "Ts") "." enc
               | "GA" "." enc "." recomb
               | "MA" "." ("Hc" | "Ts") "." enc ["." "B"] "." recomb
    enc       := ("B" | "D") ["*"]
    recomb    := "A" digit+ "." ("Gd" | "Ux")
    coop      := ("Ri" | "Bc" | "Ra") digit+ "(" item ("," item)* ")" policy policy
    item      := [digit+] single
    policy    := "R" | "D" | "W"

``B`` is the binary (primal) encoding, ``D`` the dual one and ``*`` turns on
symmetry breaking.  A redundant ``.B`` after a dual encoding is accepted and
kept so the string reprints unchanged.  ``Ma`` is read as ``MA``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from ..cooperative import AgentSpec, CoopConfig
from ..errors import ParseError
from ..evolutionary import GAConfig
from ..localsearch import TabuConfig

TOPOLOGY_NAMES = {"Ri": "Ring", "Bc": "Broadcast", "Ra": "Random"}
ENCODING_NAMES = {"B": "primal", "D": "dual"}


@dataclass(frozen=True)
class AlgorithmDescriptor:
    """Parsed form of one algorithm string; ``str()`` prints it back."""

    kind: str
    encoding: str | None = None
    symmetry: bool = False
    arity: int | None = None
    crossover: str | None = None
    ls: str | None = None
    coop: "CoopSpec | None" = None
    redundant_b: bool = False

    def __str__(self):
        return format_algorithm(self)


@dataclass(frozen=True)
class CoopSpec:
    """Topology, agent groups ``(multiplicity, descriptor)`` and the two policies."""

    topology: str
    n: int
    groups: tuple
    migration: str
    acceptance: str

    @property
    def agents(self) -> list[AlgorithmDescriptor]:
        return [d for count, d in self.groups for _ in range(count)]


def format_algorithm(d: AlgorithmDescriptor) -> str:
    if d.kind == "Coop":
        c = d.coop
        items = ",".join((str(m) if m > 1 else "") + format_algorithm(a) for m, a in c.groups)
        return f"{c.topology}{c.n}({items}){c.migration}{c.acceptance}"
    enc = d.encoding + ("*" if d.symmetry else "")
    parts = [d.kind]
    if d.kind == "MA":
        parts.append(d.ls)
    parts.append(enc)
    if d.redundant_b:
        parts.append("B")
    if d.kind in ("GA", "MA"):
        parts += [f"A{d.arity}", d.crossover]
    return ".".join(parts)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, expected):
        raise ParseError(self.text, self.pos, expected)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self, options) -> str | None:
        self.skip()
        for tok in options:
            if self.text.startswith(tok, self.pos):
                return tok
        return None

    def take(self, options) -> str:
        tok = self.peek(options)
        if tok is None:
            self.error(options)
        self.pos += len(tok)
        return tok

    def number(self) -> int | None:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        return int(self.text[start:self.pos]) if self.pos > start else None

    def algorithm(self) -> AlgorithmDescriptor:
        if self.peek(tuple(TOPOLOGY_NAMES)):
            d = self.coop()
        else:
            d = self.single()
        self.skip()
        if self.pos != len(self.text):
            self.error(())
        return d

    def enc(self):
        e = self.take(("B", "D"))
        sym = self.peek(("*",)) is not None
        if sym:
            self.pos += 1
        return e, sym

    def recomb(self):
        self.take(("A",))
        start = self.pos
        arity = self.number()
        if arity is None:
            self.pos = start
            self.error(("<arity>",))
        self.take((".",))
        return arity, self.take(("Gd", "Ux"))

    def single(self) -> AlgorithmDescriptor:
        kind = self.take(("Hc", "Ts", "GA", "MA", "Ma"))
        kind = "MA" if kind == "Ma" else kind
        self.take((".",))
        ls = None
        if kind == "MA":
            ls = self.take(("Hc", "Ts"))
            self.take((".",))
        enc, sym = self.enc()
        if kind in ("Hc", "Ts"):
            return AlgorithmDescriptor(kind, enc, sym)
        self.take((".",))
        redundant = False
        if kind == "MA" and enc == "D" and self.peek(("B.",)):
            self.pos += 2
            redundant = True
        arity, xo = self.recomb()
        return AlgorithmDescriptor(kind, enc, sym, arity, xo, ls, redundant_b=redundant)

    def coop(self) -> AlgorithmDescriptor:
        topo = self.take(tuple(TOPOLOGY_NAMES))
        n_pos = self.pos
        n = self.number()
        if n is None:
            self.error(("<agent count>",))
        self.take(("(",))
        groups = []
        while True:
            mult = self.number()
            if mult is not None and mult < 1:
                self.error(("<positive multiplicity>",))
            groups.append((mult or 1, self.single()))
            if self.take((",", ")")) == ")":
                break
        migration = self.take(("R", "D", "W"))
        acceptance = self.take(("R", "D", "W"))
        spec = CoopSpec(topo, n, tuple(groups), migration, acceptance)
        if len(spec.agents) != n:
            self.pos = n_pos
            self.error((f"{len(spec.agents)} (the number of listed agents)",))
        return AlgorithmDescriptor("Coop", coop=spec)


def parse_algorithm(text: str) -> AlgorithmDescriptor:
    """Parse a notation string such as ``MA.Ts.B*.A4.Gd`` or ``Ri2(Ts.B,MA.Ts.B.A2.Gd)DR``."""
    return _Parser(text).algorithm()


def agent_spec(d: AlgorithmDescriptor, ga: GAConfig | None = None, tabu: TabuConfig | None = None) -> AgentSpec:
    """Engine settings for a non-cooperative descriptor.

    ``ga`` supplies the defaults (population size, rates); the descriptor
    overrides arity, crossover and local search.
    """
    if d.kind == "Coop":
        raise ValueError("a cooperative descriptor has no single agent spec")
    ga = ga or GAConfig()
    tabu = tabu or ga.tabu
    if d.kind in ("GA", "MA"):
        ga = replace(ga, arity=d.arity, crossover=d.crossover, ls_kind=d.ls or "none", tabu=tabu)
    return AgentSpec(d.kind, ENCODING_NAMES[d.encoding], d.symmetry, ga, tabu)


def coop_config(d: AlgorithmDescriptor, total_budget: int, cycles: int = 5, workers: int = 1,
                ga: GAConfig | None = None, tabu: TabuConfig | None = None) -> CoopConfig:
    c = d.coop
    agents = tuple(agent_spec(a, ga, tabu) for a in c.agents)
    return CoopConfig(agents, TOPOLOGY_NAMES[c.topology], c.migration, c.acceptance, cycles, total_budget, workers)
