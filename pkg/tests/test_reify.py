import pytest
from hypothesis import given, settings

from cnfreify import (CnfFormula, ReifyError, ReifyOptions, expected_counts,
                      expected_counts_for, normalize, propagate_queue,
                      reified_var, reify)
from cnfreify.propagation import Conflict
from cnfreify.reify import ReifiedVarMap
from cnfreify.testgen import all_partial_assignments

from oracles import naive_closure, naive_up
from test_cnf import raw_formulas
from test_propagation import random_cases

NAMES = {1: "a", 2: "b", 3: "c"}


def symbolic(vmap, clause):
    """Render a reified clause over layered variables as e.g. '-a2- | b3+'."""
    out = []
    for x in clause:
        v, i, pos = vmap.decode(abs(x))
        out.append(f"{'-' if x < 0 else ''}{NAMES[v]}{i}{'+' if pos else '-'}")
    return " | ".join(out)


def transition_block(psi, vmap, f, i):
    units = sum(1 for c in f.clauses if len(c) == 1)
    per = 2 * f.num_vars + sum(len(c) for c in f.clauses if len(c) > 1)
    start = units + (i - 1) * per
    return psi.int_clauses[start:start + per]


def test_reified_var_layout():
    vmap = ReifiedVarMap(3, 4, 28)
    assert reified_var(vmap, 1, 1, False) == 5
    assert reified_var(vmap, 3, 4, True) == 26
    assert vmap.s == 28
    with pytest.raises(ValueError):
        reified_var(vmap, 4, 1, True)
    with pytest.raises(ValueError):
        reified_var(vmap, 1, 5, True)


def test_layout_is_a_bijection():
    vmap = ReifiedVarMap(5, 6, 0)
    idx = [vmap.var(v, i, p) for v in range(1, 6) for i in range(1, 7)
           for p in (True, False)]
    assert sorted(idx) == list(range(6, 5 + 2 * 5 * 6 + 1))
    for v in range(1, 6):
        for i in range(1, 7):
            for p in (True, False):
                assert vmap.decode(vmap.var(v, i, p)) == (v, i, p)
    assert vmap.decode(3) is None and vmap.decode(66) is None


def test_sigma2_sizes(sigma2):
    psi, vmap = reify(sigma2)
    assert (psi.num_vars, psi.num_clauses) == (28, 46)
    assert vmap.layers == 4 and vmap.s == 28


def test_sigma2_seed_unit_is_a1_minus(sigma2):
    psi, vmap = reify(sigma2)
    assert psi.int_clauses[0] == (vmap.var(1, 1, False),)


def test_sigma2_transitions_match_displayed_subformula(sigma2):
    psi, vmap = reify(sigma2)
    for i in (1, 2, 3):
        block = transition_block(psi, vmap, sigma2, i)
        j = i + 1
        propagation = {f"-{x}{i}- | {x}{j}-" for x in "abc"} | \
                      {f"-{x}{i}+ | {x}{j}+" for x in "abc"}
        deduction = {f"-a{i}- | b{j}+", f"-b{i}- | a{j}+", f"-b{i}+ | c{j}+",
                     f"-c{i}- | b{j}-", f"-b{i}+ | c{j}-", f"-c{i}+ | b{j}-"}
        rendered = [symbolic(vmap, c) for c in block]
        assert set(rendered[:6]) == propagation
        assert set(rendered[6:]) == deduction
        assert len(rendered) == 12


def test_sigma2_propagation_clause_order(sigma2):
    psi, vmap = reify(sigma2)
    block = transition_block(psi, vmap, sigma2, 1)
    assert [symbolic(vmap, c) for c in block[:6]] == [
        "-a1- | a2-", "-a1+ | a2+", "-b1- | b2-", "-b1+ | b2+",
        "-c1- | c2-", "-c1+ | c2+"]


def test_sigma2_conflict_and_injection_clauses(sigma2):
    psi, vmap = reify(sigma2)
    tail = psi.int_clauses[-9:]
    conflict = [(-vmap.var(v, 4, True), -vmap.var(v, 4, False), 28)
                for v in (1, 2, 3)]
    assert list(tail[:3]) == conflict
    inject = []
    for v in (1, 2, 3):
        inject += [(-v, vmap.var(v, 1, True)), (v, vmap.var(v, 1, False))]
    assert list(tail[3:]) == inject


def test_single_unit_clause_example():
    f = CnfFormula.from_ints([[-1]], 1)
    psi, vmap = reify(f, ReifyOptions(layers=2, inject=frozenset({1})))
    a1p, a1n = vmap.var(1, 1, True), vmap.var(1, 1, False)
    a2p, a2n = vmap.var(1, 2, True), vmap.var(1, 2, False)
    s = vmap.s
    assert psi.int_clauses == (
        (a1n,), (-a1n, a2n), (-a1p, a2p), (-a2p, -a2n, s),
        (-1, a1p), (1, a1n))
    assert psi.num_vars == 6


def test_empty_formula():
    psi, vmap = reify(CnfFormula(0))
    assert psi.num_vars == 1 and psi.num_clauses == 0 and vmap.s == 1


def test_empty_clause_forces_s():
    f = CnfFormula.from_ints([[1, 2], []], 2)
    psi, vmap = reify(f)
    assert psi.int_clauses[-1] == (vmap.s,)
    with pytest.raises(ReifyError):
        reify(f, ReifyOptions(emit_conflict_output=False))


def test_without_conflict_output(sigma2):
    psi, vmap = reify(sigma2, ReifyOptions(emit_conflict_output=False))
    assert vmap.s == 0 and psi.num_vars == 27 and psi.num_clauses == 43


def test_inject_none_and_bad_inject(sigma2):
    psi, _ = reify(sigma2, ReifyOptions(inject=frozenset()))
    assert psi.num_clauses == 40
    with pytest.raises(ReifyError):
        reify(sigma2, ReifyOptions(inject=frozenset({4})))
    with pytest.raises(ReifyError):
        reify(sigma2, ReifyOptions(layers=0))


def test_rejects_unnormalized_clause():
    with pytest.raises(ReifyError):
        reify(CnfFormula.from_ints([[1, -1]]))


def test_expected_counts_examples():
    assert expected_counts(3, 1, [2, 2, 2], 4, 3, False).clauses == 46
    assert expected_counts(3, 1, [2, 2, 2], 4, 3, False).variables == 28
    zero = expected_counts(0, 0, [], 1, 0, False)
    assert (zero.clauses, zero.variables) == (0, 1)


@settings(max_examples=200)
@given(raw_formulas(max_vars=6))
def test_counts_match_closed_form(raw):
    f = normalize(raw)
    for opts in (ReifyOptions(), ReifyOptions(layers=2),
                 ReifyOptions(inject=frozenset({1}),
                              emit_conflict_output=f.has_empty_clause)):
        psi, _ = reify(f, opts)
        want = expected_counts_for(f, opts)
        assert (psi.num_clauses, psi.num_vars) == (want.clauses,
                                                    want.variables)


def test_every_clause_has_a_positive_reified_literal():
    for f, _ in random_cases(300, seed=21):
        psi, _ = reify(f)
        n = f.num_vars
        for c in psi.int_clauses:
            assert any(x > n for x in c)


def test_reify_is_deterministic(sigma2):
    assert reify(sigma2) == reify(sigma2)


def layer_facts(trail_values, vmap):
    """Map a fixpoint (var -> bool) over psi to the set of (v, i, pol)."""
    facts = set()
    for x, val in trail_values.items():
        d = vmap.decode(x)
        if d is not None:
            assert val, "reified variable set false"
            facts.add(d)
    return facts


def test_simulation_against_naive_oracles():
    """Simulation checked with code paths disjoint from the package's."""
    for f, alpha in random_cases(300, seed=99, max_vars=7):
        n = f.num_vars
        psi, vmap = reify(f)
        up = naive_up(psi.int_clauses, alpha)
        assert up is not None
        layers = naive_closure(f.int_clauses, alpha, n + 1)
        facts = layer_facts(up, vmap)
        for i, layer in enumerate(layers, start=1):
            want = {(abs(x), i, x > 0) for x in layer}
            got = {d for d in facts if d[1] == i}
            assert got == want
        direct = naive_up(f.int_clauses, alpha)
        assert up.get(vmap.s, False) == (direct is None)


def test_layer_monotonicity_and_positivity_exhaustive(sigma1, sigma2):
    for f in (sigma1, sigma2):
        psi, vmap = reify(f)
        for alpha in all_partial_assignments(3):
            res = propagate_queue(psi, alpha)
            assert not isinstance(res, Conflict)
            facts = layer_facts(res.values, vmap)
            for v, i, p in facts:
                assert all((v, j, p) in facts for j in range(i, vmap.layers + 1))


def test_counts_within_quadratic_bound():
    for f, _ in random_cases(1000, seed=13):
        if f.num_clauses == 0:
            continue
        psi, _ = reify(f)
        n, m, k = f.num_vars, f.num_clauses, f.max_width()
        bound = 4 * (n * n + n * k * m)
        assert psi.num_clauses <= bound and psi.num_vars <= bound
