"""Consistency, entailment and equivalence tests.

Everything reduces to one question, whether a finite set of formulas has a
common model, answered by a DPLL search (unit propagation, chronological
backtracking, branching on the lexicographically smallest open atom, true
before false).  No clause learning: inputs here are desk-sized.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from dlw.logic import (
    Formula,
    Lit,
    Not,
    Var,
    atoms,
    forget,
    to_clauses,
)

_AUX = "__ts"
_CACHE_LIMIT = 500_000


@dataclass
class OracleStats:
    calls: int = 0
    decisions: int = 0
    cache_hits: int = 0


class Oracle:
    """A session of consistency tests with counters and a result cache."""

    def __init__(self, cache: bool = True):
        self.stats = OracleStats()
        self._use_cache = cache
        self._results: dict[frozenset[Formula], bool] = {}
        self._clauses: dict[Formula, list[frozenset[Lit]]] = {}

    def clear(self) -> None:
        """Drop cached results and encodings (statistics are kept)."""
        self._results.clear()
        self._clauses.clear()

    def _encode(self, f: Formula) -> list[frozenset[Lit]]:
        enc = self._clauses.get(f)
        if enc is None:
            enc = to_clauses(f, aux_prefix=_AUX)
            if len(self._clauses) > _CACHE_LIMIT:
                self._clauses.clear()
            self._clauses[f] = enc
        return enc

    def is_consistent(self, fs: Iterable[Formula]) -> bool:
        """True iff the conjunction of ``fs`` is satisfiable."""
        fs = tuple(fs)
        self.stats.calls += 1
        key = frozenset(fs)
        if self._use_cache and key in self._results:
            self.stats.cache_hits += 1
            return self._results[key]
        result = self._solve(fs)
        if self._use_cache:
            if len(self._results) > _CACHE_LIMIT:
                self._results.clear()
            self._results[key] = result
        return result

    def _solve(self, fs: Sequence[Formula]) -> bool:
        # Tseitin atoms are local to each formula: key them by position.
        named: list[list[tuple[object, bool]]] = []
        for k, f in enumerate(fs):
            for clause in self._encode(f):
                named.append([((k, lit.atom) if lit.atom.startswith(_AUX) else lit.atom,
                               lit.positive) for lit in clause])
        keys = sorted({key for clause in named for key, _ in clause}, key=_order_key)
        index = {key: i + 1 for i, key in enumerate(keys)}
        clauses = [[index[key] if pos else -index[key] for key, pos in clause]
                   for clause in named]
        return _dpll(clauses, self.stats)

    def entails(self, fs: Iterable[Formula], g: Formula) -> bool:
        """True iff every model of ``fs`` satisfies ``g``."""
        return not self.is_consistent((*fs, Not(g)))

    def equivalent(self, f: Formula, g: Formula) -> bool:
        if f == g:
            return True
        return self.entails([f], g) and self.entails([g], f)

    def projected_models(self, f: Formula, keep: Iterable[str]) -> frozenset[tuple[bool, ...]]:
        """Assignments to ``sorted(keep)`` that extend to a model of ``f``."""
        names = sorted(set(keep))
        found = set()
        n = len(names)
        for bits in range(1 << n):
            values = tuple(bool(bits >> (n - 1 - k) & 1) for k in range(n))
            lits = [Var(a) if v else Not(Var(a)) for a, v in zip(names, values)]
            if self.is_consistent((f, *lits)):
                found.add(values)
        return frozenset(found)

    def var_equivalent(self, f: Formula, g: Formula, keep: Iterable[str]) -> bool:
        """True iff ``f`` and ``g`` entail the same formulas over ``keep``.

        Equivalent to comparing ``forget(f, atoms(f) - keep)`` with
        ``forget(g, atoms(g) - keep)``; when few atoms are kept the
        projections are compared model by model instead.
        """
        keep = set(keep)
        shared = keep & (atoms(f) | atoms(g))
        dropped = (atoms(f) | atoms(g)) - keep
        if len(shared) <= max(len(dropped), 8):
            return self.projected_models(f, shared) == self.projected_models(g, shared)
        return self.equivalent(forget(f, atoms(f) - keep), forget(g, atoms(g) - keep))


def _order_key(key: object) -> tuple[int, str, int]:
    if isinstance(key, tuple):
        return (1, key[1], key[0])
    return (0, key, 0)  # type: ignore[return-value]


def _dpll(clauses: list[list[int]], stats: OracleStats) -> bool:
    if any(not clause for clause in clauses):
        return False
    clauses = _propagate(clauses)
    if clauses is None:
        return False
    if not clauses:
        return True
    var = min(abs(lit) for clause in clauses for lit in clause)
    stats.decisions += 1
    for lit in (var, -var):
        if _dpll(clauses + [[lit]], stats):
            return True
    return False


def _propagate(clauses: list[list[int]]) -> list[list[int]] | None:
    """Simplify ``clauses`` under unit propagation; None on conflict."""
    while True:
        new_units = {c[0] for c in clauses if len(c) == 1}
        if not new_units:
            return clauses
        if any(-lit in new_units for lit in new_units):
            return None
        reduced = []
        for clause in clauses:
            if any(lit in new_units for lit in clause):
                continue
            clause = [lit for lit in clause if -lit not in new_units]
            if not clause:
                return None
            reduced.append(clause)
        clauses = reduced


_default = Oracle()


def default_oracle() -> Oracle:
    return _default


def is_consistent(fs: Iterable[Formula], oracle: Oracle | None = None) -> bool:
    return (oracle or _default).is_consistent(fs)


def entails(fs: Iterable[Formula], g: Formula, oracle: Oracle | None = None) -> bool:
    return (oracle or _default).entails(fs, g)


def equivalent(f: Formula, g: Formula, oracle: Oracle | None = None) -> bool:
    return (oracle or _default).equivalent(f, g)


def var_equivalent(f: Formula, g: Formula, keep: Iterable[str],
                   oracle: Oracle | None = None) -> bool:
    return (oracle or _default).var_equivalent(f, g, keep)


__all__ = [
    "Oracle", "OracleStats", "default_oracle", "is_consistent", "entails",
    "equivalent", "var_equivalent",
]
