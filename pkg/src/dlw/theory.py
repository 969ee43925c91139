"""Default theories: data model, ``.dlt`` reader/writer, JSON emission.

A ``.dlt`` file is a sequence of statements, each terminated by ``.``::

    # comment
    W: a.                     background theory (at most one; default true)
    d1: a : b / c.            default  name: prec : just / cons
    d2: : ~h / ~h.            empty precondition means true
    d3: ~h : / false.         empty justification means true

A first line ``#generated`` allows atoms with the reserved ``__`` prefix.
"""

from __future__ import annotations

import enum
import json
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from dlw import sat
from dlw.errors import (
    DuplicateNameError,
    FormulaSyntaxError,
    InconsistentBackgroundError,
    ReservedAtomError,
    TheorySyntaxError,
)
from dlw.logic import TRUE, Formula, atoms, is_reserved, parse, to_str

GENERATED_HEADER = "#generated"
_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class Default:
    """The rule ``prec : just / cons``."""

    name: str
    prec: Formula
    just: Formula
    cons: Formula

    def __str__(self) -> str:
        parts = [f"{self.name}:", _opt(self.prec), ":", _opt(self.just), "/", to_str(self.cons)]
        return " ".join(p for p in parts if p)

    def atoms(self) -> frozenset[str]:
        return atoms(self.prec) | atoms(self.just) | atoms(self.cons)


def _opt(f: Formula) -> str:
    return "" if f == TRUE else to_str(f)


@dataclass(frozen=True)
class DefaultTheory:
    """An ordered list of defaults over a consistent background formula.

    Construction validates the theory: default names must be distinct,
    ``background`` must be consistent, and unless ``generated`` is set no
    atom may start with ``__``.
    """

    defaults: tuple[Default, ...]
    background: Formula = TRUE
    generated: bool = False

    def __post_init__(self):
        object.__setattr__(self, "defaults", tuple(self.defaults))
        seen = set()
        for d in self.defaults:
            if not _NAME_RE.match(d.name):
                raise TheorySyntaxError(f"invalid default name {d.name!r}", 0, 0)
            if d.name in seen:
                raise DuplicateNameError(f"duplicate default name {d.name!r}")
            seen.add(d.name)
        if not self.generated:
            reserved = sorted(a for a in self.atoms if is_reserved(a))
            if reserved:
                raise ReservedAtomError(f"reserved atom {reserved[0]!r} in a user theory")
        if not sat.is_consistent([self.background]):
            raise InconsistentBackgroundError("background theory is inconsistent")

    def __len__(self) -> int:
        return len(self.defaults)

    @cached_property
    def atoms(self) -> frozenset[str]:
        return atoms(self.background) | frozenset().union(*(d.atoms() for d in self.defaults))

    @cached_property
    def index(self) -> dict[str, int]:
        return {d.name: i for i, d in enumerate(self.defaults)}

    def names(self, steps: Iterable[int]) -> list[str]:
        return [self.defaults[i].name for i in steps]

    def steps(self, names: Iterable[str]) -> tuple[int, ...]:
        try:
            return tuple(self.index[n] for n in names)
        except KeyError as exc:
            raise KeyError(f"no default named {exc.args[0]!r}") from None

    @cached_property
    def normal(self) -> bool:
        return is_normal(self)

    def __str__(self) -> str:
        return serialize_theory(self)


class Mode(enum.Enum):
    SKEPTICAL = "skeptical"
    CREDULOUS = "credulous"


@dataclass(frozen=True)
class Query:
    formula: Formula
    mode: Mode = Mode.SKEPTICAL


def is_normal(t: DefaultTheory, oracle: sat.Oracle | None = None) -> bool:
    """True iff every justification is equivalent to its consequence."""
    return all(sat.equivalent(d.just, d.cons, oracle) for d in t.defaults)


# ---------------------------------------------------------------------------
# .dlt reader / writer
# ---------------------------------------------------------------------------

def _strip_comments(text: str) -> str:
    # blank out comments but keep offsets, so line/column stay right
    return re.sub(r"#[^\n]*", lambda m: " " * len(m.group(0)), text)


def _line_col(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


def _formula(text: str, raw: str, start: int, optional: bool) -> Formula:
    if not raw.strip():
        if optional:
            return TRUE
        raise TheorySyntaxError("missing formula", *_line_col(text, start))
    try:
        return parse(raw)
    except FormulaSyntaxError as exc:
        raise TheorySyntaxError(exc.message, *_line_col(text, start + exc.offset)) from None


def parse_theory(text: str) -> DefaultTheory:
    """Read a theory in ``.dlt`` syntax and validate it."""
    generated = text.lstrip("﻿").split("\n", 1)[0].strip() == GENERATED_HEADER
    body = _strip_comments(text)
    background: Formula | None = None
    defaults: list[Default] = []
    for m in re.finditer(r"[^.]*\.|[^.]+\Z", body):
        stmt, start = m.group(0), m.start()
        if not stmt.strip():
            continue
        if not stmt.endswith("."):
            lead = len(stmt) - len(stmt.lstrip())
            raise TheorySyntaxError("statement not terminated by '.'",
                                    *_line_col(text, start + lead))
        stmt = stmt[:-1]
        head, sep, rest = stmt.partition(":")
        lead = len(head) - len(head.lstrip())
        name = head.strip()
        if not sep:
            raise TheorySyntaxError("expected '<name>:'", *_line_col(text, start + lead))
        if not _NAME_RE.match(name):
            raise TheorySyntaxError(f"invalid name {name!r}", *_line_col(text, start + lead))
        rest_at = start + len(head) + 1
        if ":" not in rest and "/" not in rest:
            if name != "W":
                raise TheorySyntaxError(
                    "a default needs the form 'name: prec : just / cons'",
                    *_line_col(text, rest_at))
            if background is not None:
                raise TheorySyntaxError("more than one background statement",
                                        *_line_col(text, start + lead))
            background = _formula(text, rest, rest_at, optional=False)
            continue
        prec_raw, sep, tail = rest.partition(":")
        if not sep:
            raise TheorySyntaxError("expected ':' between precondition and justification",
                                    *_line_col(text, rest_at))
        just_at = rest_at + len(prec_raw) + 1
        just_raw, sep, cons_raw = tail.partition("/")
        if not sep:
            raise TheorySyntaxError("expected '/' before the consequence",
                                    *_line_col(text, just_at))
        cons_at = just_at + len(just_raw) + 1
        if ":" in tail or "/" in cons_raw:
            raise TheorySyntaxError("formulas may not contain ':' or '/'",
                                    *_line_col(text, just_at))
        defaults.append(Default(
            name,
            _formula(text, prec_raw, rest_at, optional=True),
            _formula(text, just_raw, just_at, optional=True),
            _formula(text, cons_raw, cons_at, optional=False),
        ))
    return DefaultTheory(tuple(defaults), TRUE if background is None else background,
                         generated=generated)


def serialize_theory(t: DefaultTheory, header: Sequence[str] = ()) -> str:
    """Write ``t`` in ``.dlt`` syntax; ``header`` lines are emitted as
    comments right after the optional ``#generated`` line."""
    lines = []
    if t.generated or any(is_reserved(a) for a in t.atoms):
        lines.append(GENERATED_HEADER)
    lines.extend(f"#{h}" if not h.startswith("#") else h for h in header)
    if t.background != TRUE:
        lines.append(f"W: {to_str(t.background)}.")
    lines.extend(f"{d}." for d in t.defaults)
    return "\n".join(lines) + "\n"


def theory_to_json(t: DefaultTheory) -> dict:
    return {
        "background": to_str(t.background),
        "defaults": [
            {"name": d.name, "prec": to_str(d.prec), "just": to_str(d.just),
             "cons": to_str(d.cons)}
            for d in t.defaults
        ],
    }


def theory_from_json(data: dict | str, generated: bool = False) -> DefaultTheory:
    if isinstance(data, str):
        data = json.loads(data)
    defaults = tuple(
        Default(d["name"], parse(d["prec"]), parse(d["just"]), parse(d["cons"]))
        for d in data["defaults"]
    )
    return DefaultTheory(defaults, parse(data["background"]), generated=generated)


def read_theory(path: str) -> DefaultTheory:
    with open(path, encoding="utf-8") as fh:
        return parse_theory(fh.read())


def theory(defaults: Iterable[str | tuple[str, str, str]], background: str = "true",
           generated: bool = False) -> DefaultTheory:
    """Convenience builder: defaults as ``"prec : just / cons"`` strings or
    ``(prec, just, cons)`` triples, named ``d1, d2, ...``.

    >>> theory(["a : b / c", "c : a / ~b"], "a").defaults[1].cons
    parse('~b')
    """
    built = []
    for i, spec in enumerate(defaults, 1):
        if isinstance(spec, str):
            prec, rest = spec.split(":", 1)
            just, cons = rest.split("/", 1)
        else:
            prec, just, cons = spec
        built.append(Default(
            f"d{i}",
            parse(prec) if prec.strip() else TRUE,
            parse(just) if just.strip() else TRUE,
            parse(cons),
        ))
    return DefaultTheory(tuple(built), parse(background), generated=generated)


__all__ = [
    "Default", "DefaultTheory", "Mode", "Query", "is_normal", "parse_theory",
    "serialize_theory", "theory_to_json", "theory_from_json", "read_theory",
    "theory", "GENERATED_HEADER",
]
