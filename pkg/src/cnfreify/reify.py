"""Reified counterpart of a CNF formula.

For a formula over variables ``1..n`` the reified formula keeps the original
variables and adds, for every variable ``v``, layer ``i`` in ``1..L`` and
polarity, a variable meaning "``v`` is known true/false after ``i`` steps of
propagation".  Layered variables are numbered::

    [v, i, +] = n + 2n(i - 1) + 2(v - 1) + 1
    [v, i, -] = [v, i, +] + 1
    s         = n + 2nL + 1          (conflict output)

Clauses are emitted in a fixed order so that serialized output is
reproducible: seed units, then per layer transition the propagation clauses
followed by the deduction clauses, then conflict-output clauses, injection
clauses, and finally ``(s)`` if the input contains the empty clause.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .cnf import CnfFormula


class ReifyError(ValueError):
    pass


@dataclass(frozen=True)
class ReifyOptions:
    layers: int | None = None            # None: num_vars + 1
    inject: frozenset[int] | None = None  # None: every original variable
    emit_conflict_output: bool = True

    def resolve(self, n: int) -> tuple[int, tuple[int, ...]]:
        layers = n + 1 if self.layers is None else self.layers
        if layers < 1:
            raise ReifyError(f"layer count must be >= 1, got {layers}")
        inject = range(1, n + 1) if self.inject is None else self.inject
        inject = tuple(sorted(set(inject)))
        bad = [v for v in inject if not 1 <= v <= n]
        if bad:
            raise ReifyError(f"cannot inject unknown variables {bad}")
        return layers, inject


@dataclass(frozen=True)
class ReifiedVarMap:
    n: int
    layers: int
    s: int  # 0 when no conflict output is emitted

    @property
    def num_vars(self) -> int:
        return self.n + 2 * self.n * self.layers + (1 if self.s else 0)

    def var(self, v: int, i: int, positive: bool) -> int:
        if not 1 <= v <= self.n:
            raise ValueError(f"variable {v} outside 1..{self.n}")
        if not 1 <= i <= self.layers:
            raise ValueError(f"layer {i} outside 1..{self.layers}")
        base = self.n + 2 * self.n * (i - 1) + 2 * (v - 1) + 1
        return base if positive else base + 1

    def lit(self, x: int, i: int) -> int:
        """Layer-``i`` variable for signed original literal ``x``."""
        return self.var(abs(x), i, x > 0)

    def decode(self, index: int) -> tuple[int, int, bool] | None:
        """Inverse of :meth:`var`; None for original variables and ``s``."""
        off = index - self.n - 1
        if off < 0 or off >= 2 * self.n * self.layers:
            return None
        i, rest = divmod(off, 2 * self.n)
        return rest // 2 + 1, i + 1, rest % 2 == 0

    def comment_lines(self) -> list[str]:
        lines = []
        for i in range(1, self.layers + 1):
            for v in range(1, self.n + 1):
                for pos in (True, False):
                    idx = self.var(v, i, pos)
                    lines.append(f"rv {idx} {v} {i} {'p' if pos else 'n'}")
        if self.s:
            lines.append(f"rs {self.s}")
        return lines


def reified_var(vmap: ReifiedVarMap, v: int, i: int, positive: bool) -> int:
    return vmap.var(v, i, positive)


def reify(f: CnfFormula, opts: ReifyOptions | None = None
          ) -> tuple[CnfFormula, ReifiedVarMap]:
    """Build the reified counterpart of a normalized formula ``f``."""
    opts = opts or ReifyOptions()
    n = f.num_vars
    layers, inject = opts.resolve(n)
    if f.has_empty_clause and not opts.emit_conflict_output:
        raise ReifyError("formula contains the empty clause; "
                         "a conflict output variable is required")
    s = n + 2 * n * layers + 1 if opts.emit_conflict_output else 0
    vmap = ReifiedVarMap(n, layers, s)
    at = vmap.lit
    src = f.int_clauses
    for c in src:
        if len(set(map(abs, c))) != len(c):
            raise ReifyError(f"clause {list(c)} is not normalized")

    out: list[tuple[int, ...]] = []
    out.extend((at(c[0], 1),) for c in src if len(c) == 1)
    wide = [c for c in src if len(c) > 1]
    for i in range(1, layers):
        for v in range(1, n + 1):
            for pos in (False, True):
                out.append((-vmap.var(v, i, pos), vmap.var(v, i + 1, pos)))
        for c in wide:
            for x in c:
                # every other literal known false at layer i forces x at i+1
                out.append(tuple(-at(-y, i) for y in c if y != x)
                           + (at(x, i + 1),))
    if s:
        for v in range(1, n + 1):
            out.append((-vmap.var(v, layers, True),
                        -vmap.var(v, layers, False), s))
    for v in inject:
        out.append((-v, vmap.var(v, 1, True)))
        out.append((v, vmap.var(v, 1, False)))
    if f.has_empty_clause:
        out.append((s,))

    return CnfFormula.from_ints(out, vmap.num_vars), vmap


@dataclass(frozen=True)
class Counts:
    clauses: int
    variables: int


def expected_counts(n: int, units: int, widths: Sequence[int], layers: int,
                    injected: int, has_empty: bool,
                    conflict_output: bool = True) -> Counts:
    """Closed-form clause and variable counts of :func:`reify`'s output.

    ``widths`` are the widths of the non-unit, non-empty clauses.
    """
    sv = 1 if conflict_output else 0
    clauses = (units + (layers - 1) * (2 * n + sum(widths))
               + n * sv + 2 * injected + (1 if has_empty else 0))
    return Counts(clauses, n + 2 * n * layers + sv)


def expected_counts_for(f: CnfFormula, opts: ReifyOptions | None = None
                        ) -> Counts:
    opts = opts or ReifyOptions()
    layers, inject = opts.resolve(f.num_vars)
    widths = [len(c) for c in f.int_clauses if len(c) > 1]
    units = sum(1 for c in f.int_clauses if len(c) == 1)
    return expected_counts(f.num_vars, units, widths, layers, len(inject),
                           f.has_empty_clause, opts.emit_conflict_output)

