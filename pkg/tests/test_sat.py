import random

import pytest
from hypothesis import given, settings, strategies as st

from carmc.sat import Solver, _luby, extract_state, main, parse_dimacs, solve_dimacs

from oracles import brute_force_sat, random_cnf

# (a1 | -a4 | -a5), (a3 | -a4 | -a5), (a2 | a4) with a_k as variable k
EXAMPLE1 = [[1, -4, -5], [3, -4, -5], [2, 4]]


def _three_clauses():
    s = Solver(5)
    for c in EXAMPLE1:
        s.add_clause(c)
    return s


def test_three_clauses_first_order():
    res = _three_clauses().solve([-1, 2, 4, 5, -3])
    assert not res.satisfiable
    assert set(res.core) == {-1, 4, 5}
    assert res.conflict_literal == 5


def test_three_clauses_second_order():
    res = _three_clauses().solve([5, 4, -3, 2, -1])
    assert not res.satisfiable
    assert set(res.core) == {5, 4, -3}
    assert res.conflict_literal == -3


def test_three_clauses_satisfiable_without_assumptions():
    res = _three_clauses().solve()
    assert res.satisfiable
    assert all(any(res.value(l) for l in c) for c in EXAMPLE1)


def test_core_in_supplied_order():
    res = _three_clauses().solve([-1, 2, 4, 5, -3])
    assert res.core == (-1, 4, 5)
    assert res.core[-1] == res.conflict_literal


def test_complementary_assumptions():
    s = Solver(3)
    res = s.solve([2, 1, -1])
    assert not res.satisfiable
    assert res.core == (1, -1) and res.conflict_literal == -1
    assert s.solve([1]).satisfiable


def test_contradictory_units():
    s = Solver(1)
    s.add_clause([1])
    assert not s.add_clause([-1])
    res = s.solve()
    assert not res.satisfiable and res.core == ()
    assert not s.solve([1]).satisfiable


def test_empty_clause_poisons_solver():
    s = Solver(2)
    s.add_clause([])
    assert not s.okay
    assert not s.solve([1, 2]).satisfiable


def test_tautology_has_no_effect():
    s = Solver(1)
    s.add_clause([1, -1])
    assert s.solve([1]).satisfiable and s.solve([-1]).satisfiable


def test_literal_out_of_range_rejected():
    s = Solver(2)
    with pytest.raises(ValueError):
        s.solve([5])


def test_reusable_after_unsat():
    s = _three_clauses()
    assert not s.solve([-1, 4, 5]).satisfiable
    res = s.solve([1, 4, 5])
    assert res.satisfiable and res.value(1) and res.value(4) and res.value(5)


def test_extract_state():
    s = Solver(3)
    s.add_clause([1])
    s.add_clause([-2])
    res = s.solve()
    assert extract_state(res, [1, 2]) == (1, -2)
    assert extract_state(res, []) == ()
    with pytest.raises(ValueError):
        extract_state(Solver(1).solve([1, -1]), [1])


def test_luby_sequence():
    assert [_luby(i) for i in range(15)] == [1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]


def test_random_against_enumeration():
    rng = random.Random(77)
    for _ in range(1500):
        n, clauses, assum = random_cnf(rng, 12, 50)
        s = Solver(n)
        for c in clauses:
            s.add_clause(c)
        res = s.solve(assum)
        assert res.satisfiable == brute_force_sat(n, clauses, assum)
        if res.satisfiable:
            assert all(any(res.value(l) for l in c) for c in clauses)
            assert all(res.value(a) for a in assum)
        else:
            assert set(res.core) <= set(assum)
            assert res.conflict_literal in res.core or not res.core
            assert not brute_force_sat(n, clauses, res.core)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_permuting_assumptions_keeps_verdict(seed):
    rng = random.Random(seed)
    n, clauses, assum = random_cnf(rng, 10, 45)
    s = Solver(n)
    for c in clauses:
        s.add_clause(c)
    first = s.solve(assum).satisfiable
    perm = assum[:]
    rng.shuffle(perm)
    again = s.solve(perm)
    assert again.satisfiable == first
    if not again.satisfiable:
        # the core of any order re-solves to UNSAT
        assert not s.solve(list(again.core)).satisfiable


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_incremental_sequence(seed):
    """Many queries on one instance, with clauses added between them."""
    rng = random.Random(seed)
    n = rng.randint(3, 12)
    s = Solver(n)
    clauses = []
    for _ in range(8):
        _, extra, _ = random_cnf(rng, n, 6)
        extra = [[l for l in c if abs(l) <= n] or [1] for c in extra]
        for c in extra:
            s.add_clause(c)
        clauses += extra
        k = rng.randint(0, n)
        assum = [v if rng.random() < 0.5 else -v for v in rng.sample(range(1, n + 1), k)]
        assert s.solve(assum).satisfiable == brute_force_sat(n, clauses, assum)


def test_restarts_and_seed_do_not_change_answers():
    rng = random.Random(3)
    for _ in range(300):
        n, clauses, assum = random_cnf(rng, 14, 60)
        expect = brute_force_sat(n, clauses, assum)
        for kw in ({"restarts": True}, {"seed": 9}, {"phase_saving": False}):
            s = Solver(n, **kw)
            for c in clauses:
                s.add_clause(c)
            assert s.solve(assum).satisfiable == expect


def test_parse_dimacs_with_assumptions():
    n, clauses, assum = parse_dimacs("c hi\np cnf 3 2\n1 -2 0\n2 3\n0\na -1 2 0\n")
    assert n == 3 and clauses == [[1, -2], [2, 3]] and assum == [-1, 2]


def test_solve_dimacs_output():
    text = "p cnf 5 3\n1 -4 -5 0\n3 -4 -5 0\n2 4 0\na -1 2 4 5 -3 0\n"
    res, out = solve_dimacs(text)
    assert out == "s UNSATISFIABLE\nu -1 4 5 0\n"
    res, out = solve_dimacs("p cnf 2 1\n1 2 0\na -1 0\n")
    assert out.startswith("s SATISFIABLE\nv -1 2")


def test_dimacs_main_exit_codes(tmp_path, capsys):
    f = tmp_path / "x.cnf"
    f.write_text("p cnf 1 2\n1 0\n-1 0\n")
    assert main([str(f)]) == 20
    f.write_text("p cnf 1 1\n1 0\n")
    assert main([str(f)]) == 10
    assert main([]) == 64
    assert main([str(tmp_path / "missing.cnf")]) == 65
    f.write_text("p dnf 1 1\n")
    assert main([str(f)]) == 65


def test_truth_table_oracle_against_naive_loop():
    from itertools import product

    rng = random.Random(12)
    for _ in range(300):
        n, clauses, assum = random_cnf(rng, 7, 25)
        naive = any(
            all(any((bits[abs(l) - 1] if l > 0 else not bits[abs(l) - 1]) for l in c) for c in clauses + [[a] for a in assum])
            for bits in product((False, True), repeat=n)
        )
        assert brute_force_sat(n, clauses, assum) == naive
