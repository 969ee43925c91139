"""Operational semantics: processes, successfulness, closure, extensions.

A process is a tuple of default indices.  Every semantics here is built
from consistency tests whose outcome depends only on the *set* of applied
defaults (never on their order), so the engine caches those tests per
step-set and the searches below memoize on step-sets as well.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from dlw import sat
from dlw.errors import (
    NotAProcessError,
    PreconditionError,
    ResourceLimitError,
    StuckError,
    UnsupportedSemanticsError,
)
from dlw.logic import Formula, conj, to_str
from dlw.theory import DefaultTheory

Process = tuple[int, ...]
Steps = frozenset[int]

DEFAULT_MAX_PREFIXES = 10**6


class Successfulness(enum.Enum):
    LOCAL = "local"
    GLOBAL = "global"


class Closure(enum.Enum):
    INAPPLICABILITY = "inapplicability"
    # no d outside the process extends it to a globally successful process
    MAXIMALITY = "maximality"
    # same, with local successfulness
    LOCAL_MAXIMALITY = "local-maximality"


@dataclass(frozen=True)
class SemanticsSpec:
    name: str
    successfulness: Successfulness
    closure: Closure
    normal_only: bool = False


REITER = SemanticsSpec("reiter", Successfulness.LOCAL, Closure.INAPPLICABILITY)
CONSTRAINED = SemanticsSpec("constrained", Successfulness.GLOBAL, Closure.MAXIMALITY)
JUSTIFIED = SemanticsSpec("justified", Successfulness.LOCAL, Closure.LOCAL_MAXIMALITY)
NORMAL = SemanticsSpec("normal", Successfulness.LOCAL, Closure.INAPPLICABILITY,
                       normal_only=True)

SEMANTICS = {s.name: s for s in (REITER, CONSTRAINED, JUSTIFIED, NORMAL)}


def semantics(name: str | SemanticsSpec) -> SemanticsSpec:
    if isinstance(name, SemanticsSpec):
        return name
    try:
        return SEMANTICS[name]
    except KeyError:
        raise UnsupportedSemanticsError(
            f"unknown semantics {name!r}; choose from {', '.join(SEMANTICS)}") from None


@dataclass
class Extension:
    """Deductive closure of ``axiom``, with the processes generating it."""

    axiom: Formula
    witnesses: list[Process] = field(default_factory=list)

    def to_json(self, t: DefaultTheory) -> dict:
        return {"axiom": to_str(self.axiom),
                "witnesses": [t.names(p) for p in self.witnesses]}


def max_prefixes_from_env() -> int:
    value = os.environ.get("DLW_MAX_PREFIXES")
    return int(value) if value else DEFAULT_MAX_PREFIXES


class Engine:
    """Process queries for one theory under one semantics.

    ``max_prefixes`` caps the number of prefixes (or step-sets, for the
    memoized searches) a single search may visit; exceeding it raises
    :class:`ResourceLimitError`.
    """

    def __init__(self, t: DefaultTheory, s: SemanticsSpec | str,
                 oracle: sat.Oracle | None = None, max_prefixes: int | None = None):
        self.theory = t
        self.semantics = s = semantics(s)
        if s.normal_only and not t.normal:
            raise PreconditionError(f"semantics {s.name!r} needs a normal theory")
        self.oracle = oracle or sat.default_oracle()
        self.max_prefixes = max_prefixes or max_prefixes_from_env()
        self.m = len(t.defaults)
        self._prec = [d.prec for d in t.defaults]
        self._just = [d.just for d in t.defaults]
        self._cons = [d.cons for d in t.defaults]
        self._memo: dict[tuple, bool] = {}
        self._extensions: list[Extension] | None = None

    # -- consistency tests, each a function of the step-set ------------------

    def _cached(self, key: tuple, compute) -> bool:
        try:
            return self._memo[key]
        except KeyError:
            value = self._memo[key] = compute()
            return value

    def knowledge(self, steps: Iterable[int]) -> tuple[Formula, ...]:
        """``W`` together with the consequences of ``steps``."""
        return (self.theory.background, *(self._cons[i] for i in sorted(steps)))

    def axiom(self, p: Sequence[int]) -> Formula:
        return conj(self.theory.background, *(self._cons[i] for i in p))

    def consistent(self, S: Steps) -> bool:
        return self._cached(("con", S), lambda: self.oracle.is_consistent(self.knowledge(S)))

    def prec_entailed(self, S: Steps, i: int) -> bool:
        return self._cached(("pre", S, i),
                            lambda: self.oracle.entails(self.knowledge(S), self._prec[i]))

    def just_consistent(self, S: Steps, i: int) -> bool:
        return self._cached(("jus", S, i), lambda: self.oracle.is_consistent(
            (*self.knowledge(S), self._just[i])))

    def jointly_consistent(self, S: Steps) -> bool:
        return self._cached(("glo", S), lambda: self.oracle.is_consistent(
            (*self.knowledge(S), *(self._just[i] for i in sorted(S)))))

    def locally_successful(self, S: Steps) -> bool:
        return all(self.just_consistent(S, i) for i in sorted(S))

    def successful_set(self, S: Steps) -> bool:
        if self.semantics.successfulness is Successfulness.LOCAL:
            return self.locally_successful(S)
        return self.jointly_consistent(S)

    def can_append(self, S: Steps, d: int) -> bool:
        """Whether a process with step-set ``S`` stays a process after ``d``."""
        return self.prec_entailed(S, d) and self.consistent(S | {d})

    def applicable(self, S: Steps, d: int) -> bool:
        return self.prec_entailed(S, d) and self.just_consistent(S, d)

    def closed_set(self, S: Steps) -> bool:
        closure = self.semantics.closure
        outside = (d for d in range(self.m) if d not in S)
        if closure is Closure.INAPPLICABILITY:
            return not any(self.applicable(S, d) for d in outside)
        if closure is Closure.MAXIMALITY:
            return not any(self.can_append(S, d) and self.jointly_consistent(S | {d})
                           for d in outside)
        return not any(self.can_append(S, d) and self.locally_successful(S | {d})
                       for d in outside)

    def successors(self, S: Steps) -> list[int]:
        """Defaults ``d`` (ascending) such that appending ``d`` to a
        successful process with step-set ``S`` gives a successful process."""
        return [d for d in range(self.m)
                if d not in S and self.can_append(S, d) and self.successful_set(S | {d})]

    # -- per-process predicates ----------------------------------------------

    def _validate(self, p: Sequence[int]) -> Process:
        p = tuple(p)
        for i in p:
            if not isinstance(i, int) or not 0 <= i < self.m:
                raise PreconditionError(f"default index {i!r} out of range")
        if len(set(p)) != len(p):
            raise PreconditionError(f"duplicated default in {list(p)}")
        return p

    def is_process(self, p: Sequence[int]) -> bool:
        p = self._validate(p)
        S: Steps = frozenset()
        for d in p:
            if not self.prec_entailed(S, d):
                return False
            S = S | {d}
        return self.consistent(S)

    def is_successful(self, p: Sequence[int]) -> bool:
        if not self.is_process(p):
            raise NotAProcessError(f"{self.theory.names(p)} is not a process")
        return self.successful_set(frozenset(p))

    def is_closed(self, p: Sequence[int]) -> bool:
        if not self.is_successful(p):
            raise PreconditionError(f"{self.theory.names(p)} is not successful")
        return self.closed_set(frozenset(p))

    # -- searches ------------------------------------------------------------

    def _tick(self, counter: list[int]) -> None:
        counter[0] += 1
        if counter[0] > self.max_prefixes:
            raise ResourceLimitError(
                f"search explored more than {self.max_prefixes} prefixes")

    def iter_processes(self) -> Iterator[Process]:
        """Successful and closed processes in lexicographic order.

        Depth-first over successful prefixes only: by antimonotonicity no
        unsuccessful prefix can be completed.
        """
        if not self.consistent(frozenset()):  # pragma: no cover - W is validated
            return
        counter = [0]

        def dfs(p: Process, S: Steps) -> Iterator[Process]:
            self._tick(counter)
            if self.closed_set(S):
                yield p
            for d in self.successors(S):
                yield from dfs(p + (d,), S | {d})

        yield from dfs((), frozenset())

    def enumerate_processes(self) -> list[Process]:
        return list(self.iter_processes())

    def iter_all_processes(self) -> Iterator[Process]:
        """Every process, successful or not, in lexicographic order."""
        counter = [0]

        def dfs(p: Process, S: Steps) -> Iterator[Process]:
            self._tick(counter)
            yield p
            for d in range(self.m):
                if d not in S and self.can_append(S, d):
                    yield from dfs(p + (d,), S | {d})

        yield from dfs((), frozenset())

    def iter_successful_processes(self) -> Iterator[Process]:
        counter = [0]

        def dfs(p: Process, S: Steps) -> Iterator[Process]:
            self._tick(counter)
            yield p
            for d in self.successors(S):
                yield from dfs(p + (d,), S | {d})

        yield from dfs((), frozenset())

    def extensions(self) -> list[Extension]:
        """Extensions, merged by logical equivalence of their axioms, in
        order of their first witness."""
        if self._extensions is None:
            self._extensions = self._compute_extensions()
        return [Extension(e.axiom, list(e.witnesses)) for e in self._extensions]

    def _compute_extensions(self) -> list[Extension]:
        found: list[Extension] = []
        by_set: dict[Steps, Extension] = {}
        for p in self.iter_processes():
            S = frozenset(p)
            if S in by_set:
                by_set[S].witnesses.append(p)
                continue
            axiom = self.axiom(p)
            for ext in found:
                if self.oracle.equivalent(ext.axiom, axiom):
                    ext.witnesses.append(p)
                    by_set[S] = ext
                    break
            else:
                by_set[S] = Extension(axiom, [p])
                found.append(by_set[S])
        return found

    def skeptical_entails(self, q: Formula) -> bool:
        """Entailed by every extension; vacuously true without extensions."""
        return all(self.oracle.entails([e.axiom], q) for e in self.extensions())

    def credulous_entails(self, q: Formula) -> bool:
        return any(self.oracle.entails([e.axiom], q) for e in self.extensions())

    def _completable_set(self, S: Steps, memo: dict[Steps, bool], counter: list[int]) -> bool:
        if S in memo:
            return memo[S]
        self._tick(counter)
        result = self.closed_set(S) or any(
            self._completable_set(S | {d}, memo, counter) for d in self.successors(S))
        memo[S] = result
        return result

    def completable(self, prefix: Sequence[int]) -> bool:
        """Whether some successful and closed process starts with ``prefix``."""
        prefix = self._validate(prefix)
        if not self.is_process(prefix) or not self.successful_set(frozenset(prefix)):
            return False
        return self._completable_set(frozenset(prefix), {}, [0])

    def fail_safe_witness(self) -> Process | None:
        """First successful process (lexicographically) that no successful
        and closed process extends, or None if there is none."""
        memo: dict[Steps, bool] = {}
        counter = [0]
        seen: set[Steps] = set()

        def dfs(p: Process, S: Steps) -> Process | None:
            if S in seen:
                return None
            seen.add(S)
            if not self._completable_set(S, memo, counter):
                return p
            for d in self.successors(S):
                found = dfs(p + (d,), S | {d})
                if found is not None:
                    return found
            return None

        return dfs((), frozenset())

    def is_fail_safe(self) -> bool:
        return self.fail_safe_witness() is None

    def construct_extension(self) -> Process:
        """Greedy construction: extend by the first default (by index) that
        keeps the process successful, until it is closed.

        Raises :class:`StuckError` with the offending prefix when a
        successful, non-closed process has no successful extension.
        """
        p: Process = ()
        S: Steps = frozenset()
        while not self.closed_set(S):
            for d in range(self.m):
                if d not in S and self.can_append(S, d) and self.successful_set(S | {d}):
                    break
            else:
                raise StuckError(p)
            p, S = p + (d,), S | {d}
        return p


# -- functional interface ----------------------------------------------------

def is_process(t: DefaultTheory, p: Sequence[int]) -> bool:
    return Engine(t, REITER).is_process(p)


def is_successful(t: DefaultTheory, s: SemanticsSpec | str, p: Sequence[int]) -> bool:
    return Engine(t, s).is_successful(p)


def is_closed(t: DefaultTheory, s: SemanticsSpec | str, p: Sequence[int]) -> bool:
    return Engine(t, s).is_closed(p)


def enumerate_processes(t: DefaultTheory, s: SemanticsSpec | str,
                        max_prefixes: int | None = None) -> list[Process]:
    return Engine(t, s, max_prefixes=max_prefixes).enumerate_processes()


def extensions(t: DefaultTheory, s: SemanticsSpec | str,
               max_prefixes: int | None = None) -> list[Extension]:
    return Engine(t, s, max_prefixes=max_prefixes).extensions()


def skeptical_entails(t: DefaultTheory, s: SemanticsSpec | str, q: Formula) -> bool:
    return Engine(t, s).skeptical_entails(q)


def credulous_entails(t: DefaultTheory, s: SemanticsSpec | str, q: Formula) -> bool:
    return Engine(t, s).credulous_entails(q)


def is_fail_safe_on(t: DefaultTheory, s: SemanticsSpec | str) -> bool:
    return Engine(t, s).is_fail_safe()


def completable(t: DefaultTheory, s: SemanticsSpec | str, prefix: Sequence[int]) -> bool:
    return Engine(t, s).completable(prefix)


def construct_extension_failsafe(t: DefaultTheory, s: SemanticsSpec | str) -> Process:
    return Engine(t, s).construct_extension()
