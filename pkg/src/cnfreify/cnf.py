"""Propositional core: literals, clauses, formulas and DIMACS I/O."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence, TextIO


class DimacsError(ValueError):
    """Raised on malformed DIMACS input; carries the offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True, order=True)
class Literal:
    var: int
    positive: bool = True

    def __post_init__(self):
        if self.var < 1:
            raise ValueError(f"variable index must be >= 1, got {self.var}")

    @classmethod
    def from_int(cls, lit: int) -> "Literal":
        if lit == 0:
            raise ValueError("0 is not a literal")
        return cls(abs(lit), lit > 0)

    @classmethod
    def coerce(cls, lit: "Literal | int") -> "Literal":
        return lit if isinstance(lit, Literal) else cls.from_int(lit)

    def __neg__(self) -> "Literal":
        return Literal(self.var, not self.positive)

    def __int__(self) -> int:
        return self.var if self.positive else -self.var

    def __str__(self) -> str:
        return str(int(self))


@dataclass(frozen=True)
class Clause:
    literals: tuple[Literal, ...] = ()

    @classmethod
    def from_ints(cls, lits: Iterable[int]) -> "Clause":
        return cls(tuple(Literal.from_int(x) for x in lits))

    @property
    def width(self) -> int:
        return len(self.literals)

    def is_tautology(self) -> bool:
        seen = {int(l) for l in self.literals}
        return any(-x in seen for x in seen)

    def to_ints(self) -> tuple[int, ...]:
        return tuple(int(l) for l in self.literals)

    def __len__(self) -> int:
        return len(self.literals)

    def __iter__(self):
        return iter(self.literals)


@dataclass(frozen=True)
class CnfFormula:
    """A CNF formula over variables ``1..num_vars``.

    Clauses are stored as tuples of signed DIMACS integers; :attr:`clauses`
    gives the same clauses as :class:`Clause` objects.  Clause order is
    significant and preserved by every operation in this package.
    ``warnings`` collects tolerated input defects (such as a header clause
    count that disagrees with the body) and does not take part in equality.
    """

    num_vars: int
    int_clauses: tuple[tuple[int, ...], ...] = ()
    warnings: tuple[str, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        if self.num_vars < 0:
            raise ValueError("num_vars must be non-negative")
        ints = tuple(tuple(c) for c in self.int_clauses)
        object.__setattr__(self, "int_clauses", ints)
        n = self.num_vars
        for c in ints:
            for x in c:
                if x == 0 or x > n or -x > n:
                    raise ValueError(f"literal {x} outside 1..{n}")

    @classmethod
    def from_ints(cls, clauses: Iterable[Iterable[int]],
                  num_vars: int | None = None) -> "CnfFormula":
        """Build from integer clauses; ``num_vars`` defaults to the largest
        variable mentioned."""
        ints = tuple(tuple(c) for c in clauses)
        top = max((abs(x) for c in ints for x in c), default=0)
        return cls(top if num_vars is None else max(num_vars, top), ints)

    @classmethod
    def from_clauses(cls, num_vars: int, clauses: Iterable[Clause],
                     warnings: tuple[str, ...] = ()) -> "CnfFormula":
        return cls(num_vars, tuple(c.to_ints() for c in clauses), warnings)

    @cached_property
    def clauses(self) -> tuple[Clause, ...]:
        return tuple(Clause.from_ints(c) for c in self.int_clauses)

    @property
    def has_empty_clause(self) -> bool:
        return any(not c for c in self.int_clauses)

    @property
    def num_clauses(self) -> int:
        return len(self.int_clauses)

    def max_width(self) -> int:
        return max(map(len, self.int_clauses), default=0)

    def with_clause(self, clause: Clause | Iterable[int]) -> "CnfFormula":
        c = clause.to_ints() if isinstance(clause, Clause) else tuple(clause)
        return CnfFormula(self.num_vars, self.int_clauses + (c,))

    def without_clause(self, index: int) -> "CnfFormula":
        cs = self.int_clauses
        return CnfFormula(self.num_vars, cs[:index] + cs[index + 1:])

    def evaluate(self, model: Sequence[bool] | dict[int, bool]) -> bool:
        """Evaluate under a total assignment indexed by variable."""
        return all(any(model[abs(x)] == (x > 0) for x in c)
                   for c in self.int_clauses)


def parse_dimacs(text: str | TextIO) -> CnfFormula:
    if not isinstance(text, str):
        text = text.read()
    header: tuple[int, int] | None = None
    clauses: list[list[int]] = []
    current: list[int] = []
    top = 0
    warnings: list[str] = []
    lineno = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            # SATLIB files end the clause section this way
            break
        if line.startswith("p"):
            if header is not None:
                raise DimacsError("duplicate problem line", lineno)
            parts = line.split()
            if len(parts) != 4 or parts[0] != "p" or parts[1] != "cnf":
                raise DimacsError(f"malformed problem line {line!r}", lineno)
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsError(f"malformed problem line {line!r}", lineno)
            if n < 0 or m < 0:
                raise DimacsError("negative count in problem line", lineno)
            header = (n, m)
            continue
        if header is None:
            raise DimacsError("clause data before problem line", lineno)
        for tok in line.split():
            try:
                x = int(tok)
            except ValueError:
                raise DimacsError(f"non-integer token {tok!r}", lineno)
            if x == 0:
                clauses.append(current)
                current = []
            else:
                current.append(x)
                top = max(top, abs(x))
    if header is None:
        raise DimacsError("missing problem line", lineno)
    if current:
        warnings.append("last clause not terminated by 0")
        clauses.append(current)
    if len(clauses) != header[1]:
        warnings.append(
            f"header declares {header[1]} clauses, found {len(clauses)}")
    return CnfFormula(max(header[0], top), tuple(map(tuple, clauses)),
                      tuple(warnings))


def serialize_dimacs(f: CnfFormula, comments: Sequence[str] = ()) -> str:
    lines = [f"c {c}" if c else "c" for c in comments]
    lines.append(f"p cnf {f.num_vars} {f.num_clauses}")
    for c in f.int_clauses:
        lines.append(" ".join([*map(str, c), "0"]))
    return "\n".join(lines) + "\n"


def normalize(f: CnfFormula) -> CnfFormula:
    """Drop duplicate literals (first occurrence wins) and tautologies."""
    out = []
    for c in f.int_clauses:
        lits = tuple(dict.fromkeys(c))
        if any(-x in lits for x in lits):
            continue
        out.append(lits)
    return CnfFormula(f.num_vars, tuple(out), f.warnings)
