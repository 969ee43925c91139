"""Translations of regular semantics into normal default logic.

The core is :func:`build_simulation`, which produces a normal theory whose
processes first guess which source defaults are applied (families A and
N), then record the outcome of every consistency check the source
semantics needs (families V and G), and finally evaluate the combining
circuit (family Z): the source extension is emitted when the guessed
process is successful and closed, the formula ``F`` otherwise.

Fresh atoms, all with the reserved ``__`` prefix:

``__c<i>``       default i is in the guessed process
``__e<i>``       the guess for default i has been made
``__o<k>``       check k came out consistent
``__t<k>``       check k has been recorded
``__x<j>_<p>``   copy j of source atom p (copy 0 holds W, copy k check k)
``__a``          flag atom of the almost-consequence-preserving translation
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from dlw import sat
from dlw.errors import NoExtensionError, NotAProcessError, PreconditionError, \
    UnsupportedSemanticsError
from dlw.logic import (
    FALSE,
    TRUE,
    And,
    Formula,
    Implies,
    Not,
    Or,
    Var,
    atoms,
    conj,
    evaluate,
    is_reserved,
    rename,
)
from dlw.process import REITER, Closure, Engine, Process, SemanticsSpec, Successfulness, \
    semantics
from dlw.theory import Default, DefaultTheory, Mode, serialize_theory

FLAG = "__a"
FAMILIES = ("A", "N", "V", "G", "Z")


def c_atom(i: int) -> str:
    return f"__c{i}"


def e_atom(i: int) -> str:
    return f"__e{i}"


def o_atom(k: int) -> str:
    return f"__o{k}"


def t_atom(k: int) -> str:
    return f"__t{k}"


def copy_atom(j: int, name: str) -> str:
    return f"__x{j}_{name}"


def alphabet_copy(names, j: int) -> dict[str, str]:
    return {a: copy_atom(j, a) for a in sorted(names)}


@dataclass(frozen=True)
class CheckSuite:
    """Consistency checks over source atoms and membership atoms
    ``__c1..__cm``, and a circuit over ``__o1..__ou`` and the ``__c`` atoms.

    For every process of the source theory, setting ``__cj`` to membership
    and ``__ok`` to the consistency of check k (under those memberships)
    makes the circuit true exactly when the process is successful and
    closed.
    """

    checks: tuple[Formula, ...]
    circuit: Formula

    @property
    def u(self) -> int:
        return len(self.checks)

    def outcomes(self, members: dict[str, bool], oracle: sat.Oracle | None = None) -> dict[str, bool]:
        """Values of the ``__o`` atoms for the given membership values."""
        lits = [Var(c) if v else Not(Var(c)) for c, v in sorted(members.items())]
        return {o_atom(k): sat.is_consistent([check, *lits], oracle)
                for k, check in enumerate(self.checks, 1)}

    def evaluate(self, m: int, p: Sequence[int], oracle: sat.Oracle | None = None) -> bool:
        """Circuit verdict for a source process ``p`` (0-based indices)."""
        members = {c_atom(i + 1): i in p for i in range(m)}
        return evaluate(self.circuit, {**members, **self.outcomes(members, oracle)})


def _with_just(d: Default) -> Formula:
    return d.cons if d.just == d.cons else conj(d.cons, d.just)


def _negation(f: Formula) -> Formula:
    return FALSE if f is TRUE else Not(f)


def _membership_conj(t: DefaultTheory, with_just: bool = False) -> list[Formula]:
    out = []
    for i, d in enumerate(t.defaults, 1):
        body = _with_just(d) if with_just else d.cons
        out.append(Implies(Var(c_atom(i)), body))
    return out


def generate_checks(t: DefaultTheory, s: SemanticsSpec | str) -> CheckSuite:
    """Consistency checks and circuit for Reiter's (or normal) and
    constrained default logic."""
    s = semantics(s)
    m = len(t.defaults)
    W = t.background
    applied = _membership_conj(t)
    c = [Var(c_atom(i)) for i in range(1, m + 1)]
    o = [None] + [Var(o_atom(k)) for k in range(1, 2 * m + 2)]

    if (s.successfulness, s.closure) == (Successfulness.LOCAL, Closure.INAPPLICABILITY):
        # k = i: justification of d_i consistent with the applied consequences
        # k = m+i: precondition of d_i not entailed by them
        checks = [conj(W, *applied, d.just) for d in t.defaults]
        checks += [conj(W, *applied, _negation(d.prec)) for d in t.defaults]
        circuit = conj(*(
            conj(Implies(c[i], o[i + 1]),
                 Implies(Not(c[i]), Or((o[m + i + 1], Not(o[i + 1])))))
            for i in range(m)))
        return CheckSuite(tuple(checks), circuit)

    if (s.successfulness, s.closure) == (Successfulness.GLOBAL, Closure.MAXIMALITY):
        # k = 1: all applied justifications jointly consistent
        # k = 1+i: same after adding d_i
        # k = m+1+i: precondition of d_i not entailed
        joint = _membership_conj(t, with_just=True)
        checks = [conj(W, *joint)]
        checks += [conj(W, *joint, _with_just(d)) for d in t.defaults]
        checks += [conj(W, *applied, _negation(d.prec)) for d in t.defaults]
        circuit = conj(o[1], *(
            Implies(Not(c[i]), Or((o[m + i + 2], Not(o[i + 2]))))
            for i in range(m)))
        return CheckSuite(tuple(checks), circuit)

    raise UnsupportedSemanticsError(f"no check generator for semantics {s.name!r}")


@dataclass(frozen=True)
class SimulationArtifacts:
    """A generated normal theory plus the bookkeeping needed to read it.

    ``family_map`` maps each generated default name to its family letter
    and 1-based source index (the check index for V and G).
    """

    theory: DefaultTheory
    source: DefaultTheory
    semantics: SemanticsSpec
    checks: CheckSuite
    F: Formula
    family_map: dict[str, tuple[str, int]]
    fresh: frozenset[str] = field(default_factory=frozenset)
    flag: str | None = None

    @property
    def m(self) -> int:
        return len(self.source.defaults)

    @property
    def u(self) -> int:
        return self.checks.u

    @property
    def alphabet(self) -> frozenset[str]:
        return self.source.atoms

    def family(self, index: int) -> tuple[str, int]:
        return self.family_map[self.theory.defaults[index].name]

    def header(self) -> list[str]:
        lines = [f"family {name} {fam} {k}" for name, (fam, k) in self.family_map.items()]
        if self.flag is not None:
            lines.insert(0, f"flag {self.flag}")
        return lines

    def serialize(self) -> str:
        return serialize_theory(self.theory, self.header())


def read_family_map(text: str) -> dict[str, tuple[str, int]]:
    """Recover the ``#family`` lines written by :meth:`SimulationArtifacts.serialize`."""
    out = {}
    for line in text.splitlines():
        parts = line.split()
        if len(parts) == 4 and parts[0] == "#family":
            out[parts[1]] = (parts[2], int(parts[3]))
    return out


def build_simulation(t: DefaultTheory, s: SemanticsSpec | str, F: Formula,
                     checks: CheckSuite | None = None,
                     success_marker: Formula | None = None) -> SimulationArtifacts:
    """Normal theory simulating ``t`` under ``s``, emitting ``F`` for
    guessed processes that are not successful and closed.

    ``checks`` overrides the generated check suite.  ``success_marker`` is
    conjoined to the justification and consequence of ``z1``.
    """
    s = semantics(s)
    bad = sorted(a for a in atoms(F) if is_reserved(a) and a != FLAG)
    if bad:
        raise PreconditionError(f"F mentions generated atom {bad[0]!r}")
    if success_marker is not None and any(
            is_reserved(a) and a != FLAG for a in atoms(success_marker)):
        raise PreconditionError("success marker may only use the flag atom")
    suite = checks if checks is not None else generate_checks(t, s)
    m, u = len(t.defaults), suite.u
    X = t.atoms
    to_x0 = alphabet_copy(X, 0)
    E = conj(*(Var(e_atom(i)) for i in range(1, m + 1)))
    T = conj(*(Var(t_atom(k)) for k in range(1, u + 1)))

    defaults: list[Default] = []
    family: dict[str, tuple[str, int]] = {}

    def add(name: str, fam: str, k: int, prec: Formula, body: Formula) -> None:
        defaults.append(Default(name, prec, body, body))
        family[name] = (fam, k)

    for i, d in enumerate(t.defaults, 1):
        add(f"a{i}", "A", i, rename(d.prec, to_x0),
            conj(rename(d.cons, to_x0), Var(c_atom(i)), Var(e_atom(i))))
    for i in range(1, m + 1):
        add(f"n{i}", "N", i, TRUE, conj(Not(Var(c_atom(i))), Var(e_atom(i))))
    copies = [rename(check, alphabet_copy(X, k)) for k, check in enumerate(suite.checks, 1)]
    for k, check in enumerate(copies, 1):
        add(f"v{k}", "V", k, E, conj(check, Var(o_atom(k)), Var(t_atom(k))))
    for k, check in enumerate(copies, 1):
        add(f"g{k}", "G", k, conj(E, Not(check)), conj(Not(Var(o_atom(k))), Var(t_atom(k))))
    result = conj(t.background, *_membership_conj(t))
    if success_marker is not None:
        result = conj(result, success_marker)
    add("z1", "Z", 1, conj(E, T, suite.circuit), result)
    add("z2", "Z", 2, conj(E, T, Not(suite.circuit)), F)

    fresh = {c_atom(i) for i in range(1, m + 1)} | {e_atom(i) for i in range(1, m + 1)}
    fresh |= {o_atom(k) for k in range(1, u + 1)} | {t_atom(k) for k in range(1, u + 1)}
    fresh |= set(to_x0.values())
    for k in range(1, u + 1):
        fresh |= set(alphabet_copy(X, k).values())
    flag = FLAG if FLAG in atoms(F) | atoms(success_marker or TRUE) else None
    if flag:
        fresh.add(flag)
    out = DefaultTheory(tuple(defaults), rename(t.background, to_x0), generated=True)
    return SimulationArtifacts(out, t, s, suite, F, family, frozenset(fresh), flag)


def extract_simulated(art: SimulationArtifacts, p: Sequence[int]) -> Process:
    """Source process guessed by a process ``p`` of the simulation: its
    A-family steps, in order, mapped back to source indices."""
    if not Engine(art.theory, REITER).is_process(p):
        raise NotAProcessError(f"{art.theory.names(p)} is not a process of the simulation")
    out = []
    for step in p:
        fam, k = art.family(step)
        if fam == "A":
            out.append(k - 1)
    return tuple(out)


def first_process(t: DefaultTheory, s: SemanticsSpec | str) -> Process:
    for p in Engine(t, s).iter_processes():
        return p
    raise NoExtensionError(f"the theory has no extension under {semantics(s).name}")


def faithful_translate(t: DefaultTheory, s: SemanticsSpec | str) -> SimulationArtifacts:
    """Simulation with ``F`` set to the extension of the lexicographically
    first successful and closed process, so every extension of the result
    corresponds to one of ``t``.

    Runs a process search, so it takes exponential time in the worst case;
    the output size is polynomial.
    """
    p = first_process(t, s)
    F = conj(t.background, *(t.defaults[i].cons for i in p))
    return build_simulation(t, s, F)


def almost_translate(t: DefaultTheory, s: SemanticsSpec | str,
                     mode: Mode | str = Mode.SKEPTICAL) -> tuple[SimulationArtifacts, str]:
    """Polynomial-time translation preserving entailment up to the query
    rewrite of :func:`transform_query`.

    Skeptical: failed guesses emit the flag, so they entail ``flag | q``.
    Credulous: failed guesses emit ``~flag`` and successful ones also
    assert the flag, so exactly the successful ones can entail
    ``flag & q``.  The guarantee needs ``t`` to have an extension; that is
    not checked here.
    """
    mode = Mode(mode)
    if mode is Mode.SKEPTICAL:
        art = build_simulation(t, s, Var(FLAG))
    else:
        art = build_simulation(t, s, Not(Var(FLAG)), success_marker=Var(FLAG))
    return art, FLAG


def transform_query(q: Formula, mode: Mode | str, flag: str = FLAG) -> Formula:
    if Mode(mode) is Mode.SKEPTICAL:
        return Or((Var(flag), q))
    return And((Var(flag), q))


def enumerate_translate(t: DefaultTheory, s: SemanticsSpec | str) -> DefaultTheory:
    """One normal default per extension of ``t``; mutually exclusive
    justifications make every successful and closed process a single step."""
    exts = Engine(t, s).extensions()
    if not exts:
        raise NoExtensionError(f"the theory has no extension under {semantics(s).name}")
    k = len(exts)
    defaults = []
    for i, ext in enumerate(exts, 1):
        body = conj(Var(e_atom(i)), ext.axiom,
                    *(Not(Var(e_atom(j))) for j in range(1, k + 1) if j != i))
        defaults.append(Default(f"ext{i}", TRUE, body, body))
    return DefaultTheory(tuple(defaults), TRUE, generated=True)


def simulation_size(m: int, u: int) -> int:
    return 2 * m + 2 * u + 2


__all__ = [
    "CheckSuite", "SimulationArtifacts", "generate_checks", "build_simulation",
    "extract_simulated", "faithful_translate", "almost_translate", "transform_query",
    "enumerate_translate", "read_family_map", "first_process", "simulation_size",
    "FLAG", "FAMILIES",
]
