import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dlw import sat
from dlw.errors import NotAProcessError, PreconditionError, ResourceLimitError, StuckError, \
    UnsupportedSemanticsError
from dlw.logic import FALSE, And, Var, parse
from dlw.process import (
    CONSTRAINED,
    JUSTIFIED,
    REITER,
    Engine,
    completable,
    construct_extension_failsafe,
    credulous_entails,
    enumerate_processes,
    extensions,
    is_closed,
    is_fail_safe_on,
    is_process,
    is_successful,
    semantics,
    skeptical_entails,
)
from dlw.theory import theory
from dlw.verify import CorpusParams, random_theory

a, b, c, h = Var("a"), Var("b"), Var("c"), Var("h")
CHOICE = theory([": b / b", ": ~b / ~b"])


def test_is_process(T):
    assert is_process(T, (0, 1))
    assert not is_process(T, (1,))
    assert is_process(T, ())


def test_invalid_processes(T):
    with pytest.raises(PreconditionError):
        is_process(T, (0, 0))
    with pytest.raises(PreconditionError):
        is_process(T, (5,))


def test_is_successful(T):
    assert not is_successful(T, "reiter", (0, 1))
    assert is_successful(T, "reiter", (0,))
    assert is_successful(T, "constrained", ())
    with pytest.raises(NotAProcessError):
        is_successful(T, "reiter", (1,))


def test_is_closed(T, turner):
    assert not is_closed(T, "reiter", (0,))
    assert is_closed(T, "constrained", (0,))
    assert is_closed(turner, "reiter", (0,))
    with pytest.raises(PreconditionError):
        is_closed(T, "reiter", (0, 1))


def test_enumerate_processes(T):
    assert enumerate_processes(T, "reiter") == []
    assert enumerate_processes(T, "constrained") == [(0,)]
    assert enumerate_processes(theory([": a / ~a"]), "reiter") == []


def test_extensions(T, turner):
    (ext,) = extensions(turner, "reiter")
    assert sat.equivalent(ext.axiom, h)
    assert ext.witnesses == [(0,)]
    first, second = extensions(CHOICE, "reiter")
    assert sat.equivalent(first.axiom, b) and sat.equivalent(second.axiom, parse("~b"))
    (ext,) = extensions(T, "constrained")
    assert sat.equivalent(ext.axiom, And((a, c)))


def test_witnesses_are_merged():
    t = theory([": a / a", ": b / b"])
    (ext,) = extensions(t, "reiter")
    assert ext.witnesses == [(0, 1), (1, 0)]


def test_entailment(T, turner):
    assert skeptical_entails(turner, "reiter", h)
    assert not skeptical_entails(CHOICE, "reiter", b)
    assert credulous_entails(CHOICE, "reiter", b)
    assert skeptical_entails(T, "reiter", FALSE)
    assert not credulous_entails(T, "reiter", a)


def test_fail_safety(T, turner):
    assert not is_fail_safe_on(turner, "reiter")
    assert Engine(turner, REITER).fail_safe_witness() == (1,)
    assert is_fail_safe_on(T, "constrained")
    assert is_fail_safe_on(theory([": b / b", "b : c / c"], "a"), "reiter")


def test_completable(T, turner):
    assert not completable(T, "reiter", (0,))
    assert completable(turner, "reiter", (0,))
    assert not completable(turner, "reiter", (1,))
    assert not completable(turner, "reiter", (2,))  # not a process at all


def test_construct_extension():
    assert construct_extension_failsafe(theory([": b / b"], "a"), "normal") == (0,)


def test_construct_extension_examples(T, turner):
    assert construct_extension_failsafe(T, "constrained") == (0,)
    assert construct_extension_failsafe(turner, "reiter") == (0,)


def test_construct_extension_gets_stuck():
    # reordered Turner theory: the greedy loop picks ~h first
    t = theory([": ~h / ~h", ": h / h", "~h : / false"])
    with pytest.raises(StuckError) as info:
        construct_extension_failsafe(t, "reiter")
    assert info.value.prefix == (0,)


def test_justified_keeps_self_defeating_theories_consistent():
    t = theory([": a / ~a"])
    assert enumerate_processes(t, "reiter") == []
    assert enumerate_processes(t, JUSTIFIED) == [()]
    t = theory([": a / b", ": ~a / c"])
    assert enumerate_processes(t, "reiter") == enumerate_processes(t, "justified")


def test_normal_preset_rejects_non_normal(turner):
    with pytest.raises(PreconditionError):
        Engine(turner, "normal")


def test_unknown_semantics():
    with pytest.raises(UnsupportedSemanticsError):
        semantics("rychlik")


def test_resource_cap():
    t = theory([f": x{i} / x{i}" for i in range(6)])
    with pytest.raises(ResourceLimitError):
        Engine(t, REITER, max_prefixes=50).enumerate_processes()


def test_cap_from_environment(monkeypatch):
    monkeypatch.setenv("DLW_MAX_PREFIXES", "2")
    with pytest.raises(ResourceLimitError):
        enumerate_processes(CHOICE, "reiter")


# -- properties over random theories ----------------------------------------

PARAMS = CorpusParams(max_defaults=3, max_atoms=3, count=10**6, seed=11)
theories = st.integers(0, PARAMS.count - 1).map(lambda i: random_theory(PARAMS, i))
specs = st.sampled_from([REITER, CONSTRAINED, JUSTIFIED])


def _all_sequences(m):
    for k in range(m + 1):
        yield from itertools.permutations(range(m), k)


@settings(max_examples=150, deadline=None)
@given(theories, specs)
def test_enumeration_is_exact(t, s):
    """Search result equals filtering every duplicate-free sequence."""
    engine = Engine(t, s)
    expected = [p for p in _all_sequences(len(t.defaults))
                if engine.is_process(p) and engine.is_successful(p) and engine.is_closed(p)]
    assert engine.enumerate_processes() == sorted(expected)


@settings(max_examples=150, deadline=None)
@given(theories, specs)
def test_fail_safe_implies_extension(t, s):
    engine = Engine(t, s)
    if engine.is_fail_safe():
        assert engine.extensions()
        p = engine.construct_extension()
        assert engine.is_closed(p)


@settings(max_examples=150, deadline=None)
@given(theories, specs)
def test_completable_means_successful_process(t, s):
    engine = Engine(t, s)
    for p in _all_sequences(len(t.defaults)):
        if engine.completable(p):
            assert engine.is_successful(p)
            assert any(q[:len(p)] == p for q in engine.enumerate_processes())


@settings(max_examples=100, deadline=None)
@given(theories)
def test_constrained_and_justified_are_fail_safe(t):
    assert Engine(t, CONSTRAINED).is_fail_safe()
    assert Engine(t, JUSTIFIED).is_fail_safe()


@settings(max_examples=150, deadline=None)
@given(theories, specs)
def test_extensions_pairwise_distinct(t, s):
    exts = Engine(t, s).extensions()
    for e, f in itertools.combinations(exts, 2):
        assert not sat.equivalent(e.axiom, f.axiom)
    for e in exts:
        assert sat.is_consistent([e.axiom]) and e.witnesses
