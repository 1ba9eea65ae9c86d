# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled unit propagation kernel; same interface as ``_upkernel_py``."""

from libc.stdlib cimport malloc, calloc, free
from libc.string cimport memset


cdef class Propagator:
    cdef public int num_vars
    cdef public object clauses
    cdef int nclauses
    cdef int empty
    cdef int *cstart      # clause ci occupies lits[cstart[ci]:cstart[ci+1]]
    cdef int *lits
    cdef int *ostart      # occurrence lists, indexed by literal + num_vars
    cdef int *olist
    cdef int *units
    cdef int nunits
    cdef signed char *value
    cdef int *nfalse
    cdef int *trail

    def __cinit__(self):
        self.cstart = NULL
        self.lits = NULL
        self.ostart = NULL
        self.olist = NULL
        self.units = NULL
        self.value = NULL
        self.nfalse = NULL
        self.trail = NULL

    def __init__(self, int num_vars, clauses):
        cdef int ci, j, x, total = 0, nl = 2 * num_vars + 1
        self.num_vars = num_vars
        self.clauses = [tuple(c) for c in clauses]
        self.nclauses = len(self.clauses)
        self.empty = -1
        for c in self.clauses:
            total += len(c)
        self.cstart = <int *> malloc((self.nclauses + 1) * sizeof(int))
        self.lits = <int *> malloc((total + 1) * sizeof(int))
        self.ostart = <int *> calloc(nl + 1, sizeof(int))
        self.olist = <int *> malloc((total + 1) * sizeof(int))
        self.units = <int *> malloc((self.nclauses + 1) * sizeof(int))
        self.value = <signed char *> malloc((num_vars + 1) * sizeof(signed char))
        self.nfalse = <int *> malloc((self.nclauses + 1) * sizeof(int))
        self.trail = <int *> malloc((num_vars + 1) * sizeof(int))
        if (self.cstart == NULL or self.lits == NULL or self.ostart == NULL
                or self.olist == NULL or self.units == NULL or self.value == NULL
                or self.nfalse == NULL or self.trail == NULL):
            raise MemoryError()

        self.nunits = 0
        j = 0
        for ci, c in enumerate(self.clauses):
            self.cstart[ci] = j
            if len(c) == 0 and self.empty < 0:
                self.empty = ci
            if len(c) == 1:
                self.units[self.nunits] = ci
                self.nunits += 1
            for x in c:
                if x == 0 or x > num_vars or -x > num_vars:
                    raise ValueError(f"literal {x} out of range")
                self.lits[j] = x
                self.ostart[x + num_vars + 1] += 1
                j += 1
        self.cstart[self.nclauses] = j
        for x in range(1, nl + 1):
            self.ostart[x] += self.ostart[x - 1]
        # fill occurrence lists
        cdef int *cursor = <int *> malloc((nl + 1) * sizeof(int))
        if cursor == NULL:
            raise MemoryError()
        for x in range(nl):
            cursor[x] = self.ostart[x]
        for ci in range(self.nclauses):
            for j in range(self.cstart[ci], self.cstart[ci + 1]):
                x = self.lits[j] + num_vars
                self.olist[cursor[x]] = ci
                cursor[x] += 1
        free(cursor)

    def __dealloc__(self):
        free(self.cstart)
        free(self.lits)
        free(self.ostart)
        free(self.olist)
        free(self.units)
        free(self.value)
        free(self.nfalse)
        free(self.trail)

    cdef inline bint _assign(self, int x, int *tail):
        # returns False when x is already false
        cdef int v = x if x > 0 else -x
        cdef signed char s = 1 if x > 0 else -1
        if self.value[v] == -s:
            return False
        if self.value[v] == 0:
            self.value[v] = s
            self.trail[tail[0]] = x
            tail[0] += 1
        return True

    def propagate(self, assumptions=()):
        cdef int n = self.num_vars
        cdef int head = 0, tail = 0, conflict = -1, a, x, ci, k, j, y, fr, i
        cdef bint failed = False
        cdef signed char vy
        memset(self.value, 0, (n + 1) * sizeof(signed char))
        memset(self.nfalse, 0, (self.nclauses + 1) * sizeof(int))

        for a in assumptions:
            if a == 0 or a > n or -a > n:
                raise ValueError(f"assumption {a} out of range")
            if not self._assign(a, &tail):
                failed = True
                break
        if not failed and self.empty >= 0:
            failed = True
            conflict = self.empty
        if not failed:
            for i in range(self.nunits):
                ci = self.units[i]
                if not self._assign(self.lits[self.cstart[ci]], &tail):
                    failed = True
                    conflict = ci
                    break

        while not failed and head < tail:
            x = self.trail[head]
            head += 1
            for i in range(self.ostart[n - x], self.ostart[n - x + 1]):
                ci = self.olist[i]
                self.nfalse[ci] += 1
                k = self.cstart[ci + 1] - self.cstart[ci]
                if self.nfalse[ci] == k:
                    failed = True
                    conflict = ci
                    break
                if self.nfalse[ci] != k - 1:
                    continue
                fr = 0
                for j in range(self.cstart[ci], self.cstart[ci + 1]):
                    y = self.lits[j]
                    vy = self.value[y if y > 0 else -y]
                    if vy == 0 or (vy > 0) == (y > 0):
                        fr = y
                        break
                if fr == 0:
                    failed = True
                    conflict = ci
                    break
                self._assign(fr, &tail)

        return bool(failed), [self.trail[i] for i in range(tail)], conflict
