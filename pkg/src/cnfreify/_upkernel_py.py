"""Pure-Python unit propagation kernel (fallback for ``_upkernel``).

Both kernels expose the same ``Propagator`` class.  Clause state is tracked
with per-clause counters of falsified literals, so the result of a call does
not depend on anything but the clause list and the assumptions.
"""

from typing import Iterable, Sequence


class Propagator:
    """Reusable unit propagation over a fixed clause list.

    Construction indexes the clauses once; :meth:`propagate` can then be
    called with different assumption sets.  Literals are signed DIMACS
    integers.
    """

    def __init__(self, num_vars: int, clauses: Sequence[Sequence[int]]):
        self.num_vars = num_vars
        self.clauses = [tuple(c) for c in clauses]
        # occ[x] lists clauses containing literal x, offset by num_vars
        occ: list[list[int]] = [[] for _ in range(2 * num_vars + 1)]
        self.units: list[int] = []
        self.empty = -1
        for ci, c in enumerate(self.clauses):
            if not c:
                if self.empty < 0:
                    self.empty = ci
                continue
            if len(c) == 1:
                self.units.append(ci)
            for x in c:
                if abs(x) > num_vars or x == 0:
                    raise ValueError(f"literal {x} out of range")
                occ[x + num_vars].append(ci)
        self.occ = occ

    def propagate(self, assumptions: Iterable[int] = ()
                  ) -> tuple[bool, list[int], int]:
        """Run propagation to fixpoint.

        Returns ``(conflict, trail, clause)``: ``trail`` holds every literal
        set true, in assignment order; ``clause`` is the index of a falsified
        clause, or -1 when there is none (or the conflict came from
        complementary assumptions).
        """
        n = self.num_vars
        clauses = self.clauses
        occ = self.occ
        value = [0] * (n + 1)
        nfalse = [0] * len(clauses)
        trail: list[int] = []

        for a in assumptions:
            v = abs(a)
            if v == 0 or v > n:
                raise ValueError(f"assumption {a} out of range")
            s = 1 if a > 0 else -1
            if value[v] == -s:
                return True, trail, -1
            if value[v] == 0:
                value[v] = s
                trail.append(a)
        if self.empty >= 0:
            return True, trail, self.empty
        for ci in self.units:
            u = clauses[ci][0]
            s = 1 if u > 0 else -1
            if value[abs(u)] == -s:
                return True, trail, ci
            if value[abs(u)] == 0:
                value[abs(u)] = s
                trail.append(u)

        head = 0
        while head < len(trail):
            x = trail[head]
            head += 1
            for ci in occ[n - x]:
                nfalse[ci] += 1
                c = clauses[ci]
                k = len(c)
                if nfalse[ci] == k:
                    return True, trail, ci
                if nfalse[ci] != k - 1:
                    continue
                free = 0
                for y in c:
                    vy = value[abs(y)]
                    if vy == 0 or (vy > 0) == (y > 0):
                        free = y
                        break
                if free == 0:
                    return True, trail, ci
                if value[abs(free)] == 0:
                    value[abs(free)] = 1 if free > 0 else -1
                    trail.append(free)
        return False, trail, -1
