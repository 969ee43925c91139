import json

import pytest

from conftest import THEORIES, T_TEXT
from dlw.errors import (
    DuplicateNameError,
    InconsistentBackgroundError,
    ReservedAtomError,
    TheorySyntaxError,
)
from dlw.logic import FALSE, TRUE, Not, Var, parse
from dlw.theory import (
    Default,
    DefaultTheory,
    is_normal,
    parse_theory,
    serialize_theory,
    theory,
    theory_from_json,
    theory_to_json,
)
from dlw.translate import build_simulation
from dlw.verify import CorpusParams, random_theory


def test_parse_applicability_example(T):
    assert T.background == Var("a")
    assert [str(d) for d in T.defaults] == ["d1: a : b / c", "d2: c : a / ~b"]


def test_parse_turner(turner):
    assert turner.background is TRUE
    d3 = turner.defaults[2]
    assert (d3.prec, d3.just, d3.cons) == (Not(Var("h")), TRUE, FALSE)
    assert str(d3) == "d3: ~h : / false"


def test_inconsistent_background():
    with pytest.raises(InconsistentBackgroundError):
        parse_theory("W: a & ~a.")


def test_reserved_atoms_rejected_unless_generated():
    with pytest.raises(ReservedAtomError):
        parse_theory("d1: : __c1 / __c1.")
    t = parse_theory("#generated\nd1: : __c1 / __c1.")
    assert t.generated


def test_duplicate_names():
    with pytest.raises(DuplicateNameError):
        parse_theory("d1: : a / a. d1: : b / b.")


@pytest.mark.parametrize("text, line, column", [
    ("W: a.\nd1: a : b / .", 2, 12),
    ("d1: a : b / c", 1, 1),
    ("d1: a & : b / c.", 1, 9),
    ("W: a.\n\n  d1 a / c.", 3, 3),
    ("d1: a : b c.", 1, 8),
    ("W: a. W: b.", 1, 7),
])
def test_syntax_error_positions(text, line, column):
    with pytest.raises(TheorySyntaxError) as info:
        parse_theory(text)
    assert (info.value.line, info.value.column) == (line, column)


def test_comments_and_empty_fields():
    t = parse_theory("# header\nW: a. # fact\nd1: : / b.  # free default\n")
    d = t.defaults[0]
    assert (d.prec, d.just, d.cons) == (TRUE, TRUE, Var("b"))
    assert serialize_theory(t) == "W: a.\nd1: : / b.\n"


def test_empty_theory():
    t = parse_theory("")
    assert t.defaults == () and t.background is TRUE


def test_is_normal(turner):
    assert not is_normal(turner)
    assert is_normal(theory([": b / b"], "a"))
    # semantic, not syntactic
    assert is_normal(theory([": b & a / a & b"]))


def test_constructor_validates():
    with pytest.raises(InconsistentBackgroundError):
        DefaultTheory((), parse("a & ~a"))
    with pytest.raises(TheorySyntaxError):
        DefaultTheory((Default("bad name", TRUE, TRUE, TRUE),))


@pytest.mark.parametrize("path", sorted(THEORIES.glob("*.dlt")), ids=lambda p: p.name)
def test_round_trip_demo_theories(path):
    t = parse_theory(path.read_text())
    assert parse_theory(serialize_theory(t)) == t


def test_round_trip_random_corpus():
    params = CorpusParams(max_defaults=4, max_atoms=4, count=500, seed=7)
    for index in range(params.count):
        t = random_theory(params, index)
        assert parse_theory(serialize_theory(t)) == t
        assert theory_from_json(json.dumps(theory_to_json(t))) == t


def test_round_trip_generated(T):
    art = build_simulation(T, "reiter", Var("__a"))
    text = art.serialize()
    assert text.startswith("#generated\n#flag __a\n")
    assert parse_theory(text) == art.theory


def test_json_shape(T):
    data = theory_to_json(T)
    assert data == {"background": "a", "defaults": [
        {"name": "d1", "prec": "a", "just": "b", "cons": "c"},
        {"name": "d2", "prec": "c", "just": "a", "cons": "~b"}]}


def test_builder_matches_parser(T):
    assert theory(["a : b / c", "c : a / ~b"], "a") == parse_theory(T_TEXT)


def test_steps_and_names(T):
    assert T.steps(["d2", "d1"]) == (1, 0)
    assert T.names((1,)) == ["d2"]
    with pytest.raises(KeyError):
        T.steps(["d9"])
