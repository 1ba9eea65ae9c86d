"""Reified unit propagation for CNF formulas."""

from .cnf import (Clause, CnfFormula, DimacsError, Literal, normalize,
                  parse_dimacs, serialize_dimacs)
from .flp import (FlpReport, ProbeResult, build_flp_formula, probe_all,
                  probe_literal, simulate_flp)
from .propagation import (BACKEND, Assignment, Conflict, DecoupledClosure,
                          PropagationTrace, decoupled_closure, propagate_queue,
                          propagate_rounds)
from .reify import (ReifiedVarMap, ReifyError, ReifyOptions, expected_counts,
                    expected_counts_for, reified_var, reify)
from .testgen import (CheckReport, GenConfig, differential_check,
                      exhaustive_check, gen_random_cnf)

__version__ = "0.1.0"
