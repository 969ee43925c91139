import itertools
import sys
from pathlib import Path

import pytest

from dlw.logic import FALSE, TRUE, And, Formula, Iff, Implies, Not, Or, Var
from dlw.theory import parse_theory

THEORIES = Path(__file__).resolve().parent.parent / "demos" / "theories"

T_TEXT = "W: a. d1: a : b / c. d2: c : a / ~b."
TURNER_TEXT = "d1: : h / h. d2: : ~h / ~h. d3: ~h : / false."


def truth(f: Formula, model: dict) -> bool:
    """Evaluator written against the class structure only, used as a
    reference for the package's own evaluation and SAT code."""
    if f is TRUE:
        return True
    if f is FALSE:
        return False
    if isinstance(f, Var):
        return model[f.name]
    if isinstance(f, Not):
        return not truth(f.arg, model)
    if isinstance(f, And):
        return all(truth(g, model) for g in f.args)
    if isinstance(f, Or):
        return any(truth(g, model) for g in f.args)
    if isinstance(f, Implies):
        return not truth(f.left, model) or truth(f.right, model)
    if isinstance(f, Iff):
        return truth(f.left, model) == truth(f.right, model)
    raise TypeError(f)


def truth_table(fs, names):
    """Models (as dicts) of the conjunction of ``fs`` over ``names``."""
    names = sorted(names)
    out = []
    for values in itertools.product((False, True), repeat=len(names)):
        model = dict(zip(names, values))
        if all(truth(f, model) for f in fs):
            out.append(model)
    return out


@pytest.fixture
def T():
    return parse_theory(T_TEXT)


@pytest.fixture
def turner():
    return parse_theory(TURNER_TEXT)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
