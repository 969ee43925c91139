from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import truth, truth_table
from dlw import sat
from dlw.logic import FALSE, TRUE, And, Implies, Not, Or, Var, atoms, forget, parse
from strategies import ATOMS, formulas

a, b, c = Var("a"), Var("b"), Var("c")


def test_consistency_examples():
    assert not sat.is_consistent([a, Not(a)])
    assert sat.is_consistent([])
    assert not sat.is_consistent([a, Implies(a, b), Not(b)])
    assert not sat.is_consistent([FALSE])
    assert sat.is_consistent([TRUE, a])


def test_entailment_examples():
    assert sat.entails([a, Implies(a, b)], b)
    assert sat.entails([], Or((a, Not(a))))
    assert not sat.entails([a], c)


def test_equivalence_examples():
    assert sat.equivalent(And((a, b)), And((b, a)))
    assert not sat.equivalent(a, Or((a, b)))
    x, y = Var("x"), Var("y")
    assert sat.equivalent(And((x, And((x, y)))), And((x, y)))


def test_var_equivalence_examples():
    x0 = Var("__x0")
    assert sat.var_equivalent(And((a, x0)), a, {"a"})
    assert not sat.var_equivalent(Or((a, x0)), a, {"a"})


def test_var_equivalence_on_simulated_extension():
    # extension of a constrained simulation of T, projected on T's atoms
    f = parse("__x0_a & __c1 & __e1 & ~__c2 & __e2 & a & (__c1 -> c) & (__c2 -> ~b)"
              " & __o1 & __t1 & (__x1_a & (__c1 -> __x1_c & __x1_b))")
    assert sat.var_equivalent(f, And((a, c)), {"a", "b", "c"})
    assert not sat.var_equivalent(f, And((a, b, c)), {"a", "b", "c"})


@settings(max_examples=1000)
@given(st.lists(formulas(max_leaves=8), max_size=3))
def test_consistency_matches_truth_table(fs):
    assert sat.Oracle().is_consistent(fs) == bool(truth_table(fs, ATOMS))


@settings(max_examples=500)
@given(st.lists(formulas(max_leaves=8), max_size=3), formulas(max_leaves=8))
def test_entailment_matches_truth_table(fs, g):
    expected = all(truth(g, m) for m in truth_table(fs, ATOMS))
    assert sat.Oracle().entails(fs, g) == expected


@settings(max_examples=200)
@given(formulas(), formulas(), st.sets(st.sampled_from(ATOMS)))
def test_var_equivalence_is_forgetting(f, g, keep):
    oracle = sat.Oracle()
    by_forgetting = oracle.equivalent(forget(f, atoms(f) - keep), forget(g, atoms(g) - keep))
    assert oracle.var_equivalent(f, g, keep) == by_forgetting


@given(formulas(), formulas())
def test_var_equivalence_on_all_atoms_is_equivalence(f, g):
    keep = atoms(f) | atoms(g)
    assert sat.var_equivalent(f, g, keep) == sat.equivalent(f, g)


@settings(max_examples=100)
@given(formulas(), formulas(), formulas(), st.sets(st.sampled_from(ATOMS)))
def test_var_equivalence_is_transitive(f, g, h, keep):
    if sat.var_equivalent(f, g, keep) and sat.var_equivalent(g, h, keep):
        assert sat.var_equivalent(f, h, keep)


def test_stats_are_monotone():
    oracle = sat.Oracle()
    before = (oracle.stats.calls, oracle.stats.decisions)
    oracle.is_consistent([Or((a, b)), Or((Not(a), c))])
    oracle.is_consistent([Or((a, b)), Or((Not(a), c))])
    assert oracle.stats.calls == before[0] + 2
    assert oracle.stats.decisions >= before[1]
    assert oracle.stats.cache_hits == 1


def test_uncached_oracle_gives_same_answers():
    fs = [Or((a, b)), Not(a), Implies(b, c)]
    assert sat.Oracle(cache=False).is_consistent(fs) == sat.Oracle().is_consistent(fs)
