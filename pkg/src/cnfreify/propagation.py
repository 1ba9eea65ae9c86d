"""Unit propagation under three semantics.

``propagate_queue`` is the ordinary fixpoint computation (backed by the
compiled kernel when available).  ``propagate_rounds`` fixes all unit-implied
literals of a step simultaneously, which gives the step structure used by the
reification.  ``decoupled_closure`` tracks the two polarities of every
variable as independent monotone markers and never stops on a conflict; it
is what propagation on a reified formula computes, layer by layer.

``propagate_rounds`` and ``decoupled_closure`` are written directly against
the clause list and share no code with the kernel, so they can serve as
oracles for it.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .cnf import CnfFormula, Literal

if os.environ.get("CNFREIFY_PURE_PYTHON"):
    from ._upkernel_py import Propagator
    BACKEND = "python"
else:
    try:
        from ._upkernel import Propagator
        BACKEND = "cython"
    except ImportError:
        from ._upkernel_py import Propagator
        BACKEND = "python"

__all__ = [
    "Assignment", "Conflict", "ConflictInfo", "PropagationTrace",
    "DecoupledClosure", "Propagator", "BACKEND", "propagate_queue",
    "propagate_rounds", "decoupled_closure",
]

Marker = tuple[int, bool]


@dataclass(frozen=True)
class Assignment:
    values: Mapping[int, bool] = field(default_factory=dict)

    @classmethod
    def from_literals(cls, lits: Iterable[int | Literal]) -> "Assignment":
        values: dict[int, bool] = {}
        for l in map(Literal.coerce, lits):
            if values.get(l.var, l.positive) != l.positive:
                raise ValueError(f"variable {l.var} assigned both ways")
            values[l.var] = l.positive
        return cls(values)

    def value(self, var: int) -> bool | None:
        return self.values.get(var)

    def literals(self) -> list[Literal]:
        return sorted(Literal(v, b) for v, b in self.values.items())

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class Conflict:
    """Propagation derived the empty clause.

    ``clause`` is the index of a clause found falsified, or None when the
    assumptions themselves were complementary.
    """

    clause: int | None = None


@dataclass(frozen=True)
class ConflictInfo:
    round: int
    var: int | None
    clause: int | None


@dataclass(frozen=True)
class PropagationTrace:
    """Round-by-round record of synchronous propagation.

    ``rounds[i - 1]`` holds the literals fixed at step ``i``.  Step 1 fixes
    the assumptions together with the unit clauses of the formula.
    """

    rounds: tuple[frozenset[Literal], ...]
    conflict: ConflictInfo | None
    final: Assignment


@dataclass(frozen=True)
class DecoupledClosure:
    rounds: tuple[frozenset[Marker], ...]
    marked: Mapping[Marker, int]
    conflict_vars: frozenset[int]
    first_conflict_round: int | None

    def round_of(self, var: int, positive: bool) -> int | None:
        """Round at which ``(var, positive)`` was first marked."""
        return self.marked.get((var, positive))


def _assumption_ints(assumptions) -> list[int]:
    return [int(Literal.coerce(a)) for a in assumptions]


def propagate_queue(f: CnfFormula, assumptions: Iterable[int | Literal] = ()
                    ) -> Assignment | Conflict:
    lits = _assumption_ints(assumptions)
    for x in lits:
        if abs(x) > f.num_vars:
            raise ValueError(f"assumption {x} exceeds num_vars={f.num_vars}")
    failed, trail, ci = Propagator(f.num_vars, f.int_clauses).propagate(lits)
    if failed:
        return Conflict(None if ci < 0 else ci)
    return Assignment({abs(x): x > 0 for x in trail})


def propagate_rounds(f: CnfFormula, assumptions: Iterable[int | Literal] = ()
                     ) -> PropagationTrace:
    clauses = f.int_clauses
    assumed = _assumption_ints(assumptions)
    values: dict[int, bool] = {}
    rounds: list[frozenset[Literal]] = []

    if f.has_empty_clause:
        ci = next(i for i, c in enumerate(clauses) if not c)
        return PropagationTrace((), ConflictInfo(0, None, ci), Assignment())

    def is_false(x):
        v = values.get(abs(x))
        return v is not None and v != (x > 0)

    def is_true(x):
        return values.get(abs(x)) == (x > 0)

    step = 1
    while True:
        # literal -> first clause forcing it (None for assumptions)
        forced: dict[int, int | None] = {}
        if step == 1:
            for x in assumed:
                forced.setdefault(x, None)
        for ci, c in enumerate(clauses):
            if any(is_true(x) for x in c):
                continue
            open_ = [x for x in c if not is_false(x)]
            if len(open_) == 1:
                forced.setdefault(open_[0], ci)
            elif not open_:
                # falsified: every literal has all the others false
                for x in c:
                    forced.setdefault(x, ci)
        new = {x: ci for x, ci in forced.items() if not is_true(x)}
        if not new:
            return PropagationTrace(tuple(rounds), None,
                                    Assignment(dict(values)))
        rounds.append(frozenset(Literal.from_int(x) for x in new))
        clash = sorted(abs(x) for x in new if -x in new or is_false(x))
        if clash:
            v = clash[0]
            ci = new[v] if v in new else new[-v]
            return PropagationTrace(tuple(rounds), ConflictInfo(step, v, ci),
                                    Assignment(dict(values)))
        for x in sorted(new, key=lambda x: (abs(x), x > 0)):
            values[abs(x)] = x > 0
        step += 1


def decoupled_closure(f: CnfFormula, assumptions: Iterable[int | Literal] = (),
                      max_rounds: int | None = None) -> DecoupledClosure:
    if max_rounds is None:
        max_rounds = f.num_vars + 1
    if max_rounds < 1:
        raise ValueError("max_rounds must be >= 1")
    clauses = [c for c in f.int_clauses if c]
    marked: dict[Marker, int] = {}
    first = {(abs(x), x > 0) for x in _assumption_ints(assumptions)}
    first |= {(abs(c[0]), c[0] > 0) for c in clauses if len(c) == 1}
    rounds = []
    if first:
        rounds.append(frozenset(first))
        marked.update(dict.fromkeys(first, 1))
    r = 1
    while marked and r < max_rounds:
        new = set()
        for c in clauses:
            if len(c) < 2:
                continue
            for x in c:
                m = (abs(x), x > 0)
                if m in marked or m in new:
                    continue
                if all((abs(y), y < 0) in marked for y in c if y != x):
                    new.add(m)
        if not new:
            break
        r += 1
        rounds.append(frozenset(new))
        marked.update(dict.fromkeys(new, r))

    conflict_vars = frozenset(v for v, p in marked if p and (v, False) in marked)
    first_conflict = min((max(marked[v, True], marked[v, False])
                          for v in conflict_vars), default=None)
    return DecoupledClosure(tuple(rounds), marked, conflict_vars,
                            first_conflict)
