"""Failed-literal probing, natively and through a reified formula."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .cnf import CnfFormula, Literal
from .propagation import Assignment, Conflict, propagate_queue
from .reify import ReifiedVarMap, reify


class SimulationError(RuntimeError):
    """Propagation on a failed-literal simulation formula hit a conflict."""


@dataclass(frozen=True)
class ProbeResult:
    probed: Literal
    failed: bool
    implied: frozenset[Literal]


@dataclass(frozen=True)
class SimulationResult:
    probed: Literal
    reified_derives_not_w: bool


@dataclass(frozen=True)
class ProbeRecord:
    w: Literal
    native_failed: bool
    reified_derives_not_w: bool

    @property
    def agree(self) -> bool:
        return self.native_failed == self.reified_derives_not_w


@dataclass(frozen=True)
class FlpReport:
    records: tuple[ProbeRecord, ...]

    @property
    def agree(self) -> bool:
        return all(r.agree for r in self.records)

    @property
    def forced(self) -> frozenset[Literal]:
        """Literals the rule concludes, taken from the native probes."""
        return frozenset(-r.w for r in self.records if r.native_failed)


def probe_literal(f: CnfFormula, w: Literal | int) -> ProbeResult:
    w = Literal.coerce(w)
    res = propagate_queue(f, [w])
    if isinstance(res, Conflict):
        return ProbeResult(w, True, frozenset())
    return ProbeResult(w, False, frozenset(res.literals()))


def build_flp_formula(f: CnfFormula, w: Literal | int
                      ) -> tuple[CnfFormula, ReifiedVarMap]:
    """``(-l | -w)`` followed by the reification of ``f & (w)``.

    The conflict output of the reification plays the role of ``l``.  Original
    variables keep their indices, so ``-w`` in the first clause is the
    original literal.
    """
    w = Literal.coerce(w)
    if w.var > f.num_vars:
        raise ValueError(f"literal {w} exceeds num_vars={f.num_vars}")
    psi, vmap = reify(f.with_clause((int(w),)))
    head = (-vmap.s, -int(w))
    return CnfFormula.from_ints((head,) + psi.int_clauses, psi.num_vars), vmap


def simulate_flp(f: CnfFormula, w: Literal | int) -> SimulationResult:
    w = Literal.coerce(w)
    g, _ = build_flp_formula(f, w)
    res = propagate_queue(g)
    if isinstance(res, Conflict):
        raise SimulationError(f"propagation conflict while simulating probe {w}")
    assert isinstance(res, Assignment)
    return SimulationResult(w, res.value(w.var) == (not w.positive))


def _probe_both(f: CnfFormula, w: Literal) -> ProbeRecord:
    return ProbeRecord(w, probe_literal(f, w).failed,
                       simulate_flp(f, w).reified_derives_not_w)


def all_literals(n: int) -> list[Literal]:
    return [Literal(v, pos) for v in range(1, n + 1) for pos in (True, False)]


def probe_all(f: CnfFormula, workers: int = 1) -> FlpReport:
    """Probe each of the 2n literals once against the unchanged formula."""
    lits = all_literals(f.num_vars)
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            records = list(ex.map(lambda w: _probe_both(f, w), lits))
    else:
        records = [_probe_both(f, w) for w in lits]
    return FlpReport(tuple(records))
