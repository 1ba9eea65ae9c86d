"""Seeded random formulas and the differential harness.

Randomness comes from splitmix64 so that a seed names the same formula in
any implementation.  Draw order for :func:`gen_random_cnf`, per clause:

1. width: ``lo + below(k_max - lo + 1)`` with ``lo = 1 if allow_units else 2``
2. variables: partial Fisher-Yates over ``[1..n]`` (reset per clause); the
   ``j``-th pick swaps position ``j`` with ``j + below(n - j)``
3. polarities: one draw per picked variable, positive iff the top bit is 0

``below(b)`` maps a 64-bit output ``x`` to ``(x * b) >> 64``.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .cnf import CnfFormula, normalize
from .flp import probe_all
from .propagation import (Conflict, Propagator, decoupled_closure,
                          propagate_queue, propagate_rounds)
from .reify import reify

MASK64 = (1 << 64) - 1
EXHAUSTIVE_LIMIT = 8


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        return (self.next() * bound) >> 64


@dataclass(frozen=True)
class GenConfig:
    seed: int
    n: int
    m: int
    k_max: int
    allow_units: bool = False

    def __post_init__(self):
        if self.n < 1 or self.m < 0 or not 1 <= self.k_max <= self.n:
            raise ValueError(f"invalid generator config {self}")
        if not self.allow_units and self.k_max < 2:
            raise ValueError("k_max must be >= 2 when unit clauses are off")


def gen_random_cnf(cfg: GenConfig) -> CnfFormula:
    rng = SplitMix64(cfg.seed)
    lo = 1 if cfg.allow_units else 2
    clauses = []
    for _ in range(cfg.m):
        width = lo + rng.below(cfg.k_max - lo + 1)
        pool = list(range(1, cfg.n + 1))
        for j in range(width):
            r = j + rng.below(cfg.n - j)
            pool[j], pool[r] = pool[r], pool[j]
        clauses.append([v if rng.next() >> 63 == 0 else -v
                        for v in pool[:width]])
    return normalize(CnfFormula.from_ints(clauses, cfg.n))


def random_partial_assignment(rng: SplitMix64, n: int) -> tuple[int, ...]:
    """Each variable unassigned / true / false with probability 1/2, 1/4, 1/4."""
    out = []
    for v in range(1, n + 1):
        r = rng.below(4)
        if r == 2:
            out.append(v)
        elif r == 3:
            out.append(-v)
    return tuple(out)


def all_partial_assignments(n: int):
    for vals in itertools.product((0, 1, -1), repeat=n):
        yield tuple(v * s for v, s in enumerate(vals, start=1) if s)


@dataclass(frozen=True, order=True)
class Mismatch:
    trial: int
    seed: int
    assumptions: tuple[int, ...]
    kind: str  # conflict | layer | final | flp | positivity | satisfiable
    detail: str = field(default="", compare=False)


@dataclass(frozen=True)
class CheckReport:
    trials: int
    checks: int
    mismatches: tuple[Mismatch, ...]

    @property
    def passed(self) -> bool:
        return not self.mismatches


class ReifiedChecker:
    """Checks one formula's reification against direct propagation.

    The reified side runs the propagation kernel on psi; the direct side
    uses the decoupled closure and the round-synchronous trace, which share
    no propagation code with the kernel.
    """

    def __init__(self, f: CnfFormula):
        self.f = f
        self.psi, self.vmap = reify(f)
        self.prop = Propagator(self.psi.num_vars, self.psi.int_clauses)

    def satisfied_by_all_true(self) -> bool:
        # every clause must hold with all reified vars (and s) true
        n = self.f.num_vars
        return all(any(x > n for x in c) for c in self.psi.int_clauses)

    def check(self, alpha: tuple[int, ...]) -> list[tuple[str, str]]:
        f, vmap, n, layers = self.f, self.vmap, self.f.num_vars, self.vmap.layers
        problems = []
        conflict, trail, _ = self.prop.propagate(alpha)
        if conflict:
            return [("conflict", "propagation on psi derived the empty clause")]
        true_set = set(trail)
        if any(x < 0 and -x > n for x in trail):
            problems.append(("positivity", "a reified variable was set false"))

        queue = propagate_queue(f, alpha)
        rounds = propagate_rounds(f, alpha)
        closure = decoupled_closure(f, alpha, n + 1)
        q_conf = isinstance(queue, Conflict)
        s_derived = vmap.s in true_set
        verdicts = {q_conf, s_derived, rounds.conflict is not None,
                    closure.first_conflict_round is not None or f.has_empty_clause}
        if len(verdicts) != 1:
            problems.append(("conflict",
                             f"queue={q_conf} s={s_derived} "
                             f"rounds={rounds.conflict is not None} "
                             f"closure={closure.first_conflict_round}"))

        marked = closure.marked
        for v in range(1, n + 1):
            for pos in (True, False):
                r = marked.get((v, pos))
                for i in range(1, layers + 1):
                    got = vmap.var(v, i, pos) in true_set
                    if got != (r is not None and r <= i):
                        problems.append(("layer", f"[{v},{i},{'+' if pos else '-'}] "
                                         f"psi={got} closure_round={r}"))
                        break

        if not q_conf:
            top_t = {v for v in range(1, n + 1)
                     if vmap.var(v, layers, True) in true_set}
            top_f = {v for v in range(1, n + 1)
                     if vmap.var(v, layers, False) in true_set}
            want_t = {v for v, b in queue.values.items() if b}
            want_f = {v for v, b in queue.values.items() if not b}
            if top_t != want_t or top_f != want_f:
                problems.append(("final", f"psi true={sorted(top_t)} "
                                 f"false={sorted(top_f)}"))
        return problems


def trial_case(seed: int, cfg: GenConfig, per_trial: int
               ) -> tuple[CnfFormula, list[tuple[int, ...]]]:
    """The formula and assumption sets a trial with this seed checks."""
    rng = SplitMix64(seed)
    n = 1 + rng.below(cfg.n)
    m = rng.below(cfg.m + 1)
    k = 1 + rng.below(min(cfg.k_max, n))
    allow_units = cfg.allow_units or k == 1
    f = gen_random_cnf(GenConfig(rng.next(), n, m, k, allow_units))
    alphas = [()] + [random_partial_assignment(rng, n) for _ in range(per_trial)]
    return f, alphas


def _run_trial(args) -> tuple[int, list[Mismatch]]:
    trial, seed, cfg, per_trial, flp = args
    f, alphas = trial_case(seed, cfg, per_trial)
    checker = ReifiedChecker(f)
    out = []
    if not checker.satisfied_by_all_true():
        out.append(Mismatch(trial, seed, (), "satisfiable"))
    for alpha in alphas:
        for kind, detail in checker.check(alpha):
            out.append(Mismatch(trial, seed, alpha, kind, detail))
    if flp:
        for r in probe_all(f).records:
            if not r.agree:
                out.append(Mismatch(trial, seed, (int(r.w),), "flp",
                                    f"native={int(r.native_failed)} "
                                    f"reified={int(r.reified_derives_not_w)}"))
    return len(alphas), out


def trial_seeds(master: int, trials: int) -> list[int]:
    rng = SplitMix64(master)
    return [rng.next() for _ in range(trials)]


def differential_check(cfg: GenConfig, trials: int,
                       assumptions_per_trial: int = 5,
                       workers: int = 1, flp: bool = False) -> CheckReport:
    """Random-formula differential check of the reification.

    ``cfg`` gives upper bounds: each trial draws ``n`` in ``[1, cfg.n]``,
    ``m`` in ``[0, cfg.m]`` and a width bound in ``[1, min(cfg.k_max, n)]``
    from its own seed, then checks the empty assignment plus
    ``assumptions_per_trial`` random partial assignments.  With ``flp``,
    every literal of each trial formula is also probed natively and through
    the reified simulation.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    jobs = [(t, s, cfg, assumptions_per_trial, flp)
            for t, s in enumerate(trial_seeds(cfg.seed, trials))]
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            results = list(ex.map(_run_trial, jobs, chunksize=32))
    else:
        results = [_run_trial(j) for j in jobs]
    mismatches = sorted(m for _, ms in results for m in ms)
    return CheckReport(trials, sum(c for c, _ in results), tuple(mismatches))


def check_formula(f: CnfFormula, assumptions) -> CheckReport:
    """Run the differential checks on ``f`` for each given assumption set."""
    checker = ReifiedChecker(f)
    out = []
    if not checker.satisfied_by_all_true():
        out.append(Mismatch(0, 0, (), "satisfiable"))
    count = 0
    for alpha in assumptions:
        alpha = tuple(alpha)
        count += 1
        out.extend(Mismatch(0, 0, alpha, kind, detail)
                   for kind, detail in checker.check(alpha))
    return CheckReport(1, count, tuple(sorted(out)))


def exhaustive_check(f: CnfFormula, limit: int = EXHAUSTIVE_LIMIT
                     ) -> CheckReport:
    if f.num_vars > limit:
        raise ValueError(f"{f.num_vars} variables exceeds the exhaustive "
                         f"limit of {limit}")
    return check_formula(f, all_partial_assignments(f.num_vars))
