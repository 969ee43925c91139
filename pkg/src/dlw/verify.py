"""Brute-force checks of the engine and the translations on small theories.

Every ``check_*`` function returns a :class:`Report`.  A failing report
carries a counterexample that can be replayed: the theory in ``.dlt``
syntax plus the process, query or formula involved.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import asdict, dataclass
from typing import Iterable, Iterator, Sequence

from dlw import sat
from dlw.errors import GuardError, NoExtensionError
from dlw.logic import FALSE, TRUE, And, Formula, Not, Or, Var, conj, parse, to_str
from dlw.process import CONSTRAINED, REITER, Closure, Engine, SemanticsSpec, \
    Successfulness, semantics
from dlw.theory import Default, DefaultTheory, Mode, is_normal, parse_theory, \
    serialize_theory
from dlw.translate import CheckSuite, SimulationArtifacts, almost_translate, \
    build_simulation, enumerate_translate, extract_simulated, faithful_translate, \
    generate_checks, simulation_size, transform_query

MAX_FIXPOINT_DEFAULTS = 12
MAX_SIMULATED_DEFAULTS = 2   # every process of the simulation is enumerated
MAX_TRANSLATED_DEFAULTS = 3  # only the extensions of the translation

TURNER = parse_theory("d1: : h / h. d2: : ~h / ~h. d3: ~h : / false.")


@dataclass(frozen=True)
class CorpusParams:
    max_defaults: int = 3
    max_atoms: int = 3
    formula_depth: int = 3
    seed: int = 0
    count: int = 200

    def __post_init__(self):
        if min(self.max_defaults, self.max_atoms, self.formula_depth, self.count) < 0:
            raise ValueError("corpus bounds must be non-negative")


@dataclass
class Report:
    theory_id: str
    property: str
    passed: bool
    counterexample: dict | None = None
    detail: str = ""
    skipped: bool = False

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    def __str__(self) -> str:
        status = "SKIP" if self.skipped else ("PASS" if self.passed else "FAIL")
        text = f"{status} {self.property} [{self.theory_id}]"
        return f"{text} {self.detail}" if self.detail else text


def _fail(theory_id: str, prop: str, t: DefaultTheory, s: SemanticsSpec | None,
          detail: str, **extra) -> Report:
    cx = {"theory": serialize_theory(t)}
    if s is not None:
        cx["semantics"] = s.name
    cx.update(extra)
    return Report(theory_id, prop, False, cx, detail)


# ---------------------------------------------------------------------------
# Random corpora
# ---------------------------------------------------------------------------

def _random_formula(rng: random.Random, names: Sequence[str], depth: int) -> Formula:
    if not names:
        return rng.choice([TRUE, FALSE])
    if depth <= 0 or rng.random() < 0.4:
        atom = Var(rng.choice(names))
        return atom if rng.random() < 0.5 else Not(atom)
    op = And if rng.random() < 0.5 else Or
    return op((_random_formula(rng, names, depth - 1), _random_formula(rng, names, depth - 1)))


def _negate_nnf(f: Formula) -> Formula:
    if f is TRUE or f is FALSE:
        return FALSE if f is TRUE else TRUE
    if isinstance(f, Var):
        return Not(f)
    if isinstance(f, Not):
        return f.arg
    op = Or if isinstance(f, And) else And
    return op(tuple(_negate_nnf(g) for g in f.args))


def random_theory(params: CorpusParams, index: int) -> DefaultTheory:
    """Theory number ``index`` of the corpus described by ``params``.

    Pure function of ``(params, index)``.  Formulas are random negation
    normal forms; some preconditions and justifications are left empty
    and some consequences are ``false``, so killing defaults appear.
    """
    if not 0 <= index < params.count:
        raise IndexError(f"corpus index {index} outside 0..{params.count - 1}")
    rng = random.Random(f"dlw/{params.seed}/{index}")
    names = [chr(ord("a") + k) for k in range(min(params.max_atoms, 26))]
    depth = params.formula_depth

    def formula() -> Formula:
        return _random_formula(rng, names, rng.randint(0, depth))

    defaults = []
    # at least one default whenever allowed: empty theories test nothing
    for i in range(1, rng.randint(min(1, params.max_defaults), params.max_defaults) + 1):
        prec = TRUE if rng.random() < 0.5 else formula()
        roll = rng.random()
        targets = [d.cons for d in defaults if d.cons not in (TRUE, FALSE)]
        rival = roll < 0.35 and bool(targets)
        if rival:
            # contradict an earlier default: the usual source of competing extensions
            cons = _negate_nnf(rng.choice(targets))
        elif roll < 0.45:
            cons = FALSE
        else:
            cons = formula()
        # normal and semi-normal shapes let rivals block each other
        shape = rng.random()
        if shape < (0.7 if rival else 0.4):
            just = cons
        elif shape < (0.8 if rival else 0.6):
            just = conj(cons, formula())
        else:
            just = TRUE if rng.random() < 0.15 else formula()
        defaults.append(Default(f"d{i}", prec, just, cons))
    while True:
        background = TRUE if rng.random() < 0.6 else formula()
        if sat.is_consistent([background]):
            return DefaultTheory(tuple(defaults), background)


def corpus(params: CorpusParams) -> Iterator[tuple[str, DefaultTheory]]:
    for index in range(params.count):
        yield f"seed{params.seed}#{index}", random_theory(params, index)


def normal_restriction(t: DefaultTheory) -> DefaultTheory:
    """Same theory with every justification replaced by the consequence."""
    return DefaultTheory(tuple(Default(d.name, d.prec, d.cons, d.cons) for d in t.defaults),
                         t.background, t.generated)


def theories_with_extensions(params: CorpusParams, s: SemanticsSpec | str, wanted: int
                             ) -> list[tuple[str, DefaultTheory]]:
    """The first ``wanted`` corpus theories having an extension under ``s``."""
    out = []
    for tid, t in corpus(params):
        if Engine(t, s).extensions():
            out.append((tid, t))
            if len(out) == wanted:
                return out
    raise ValueError(f"corpus has only {len(out)} theories with extensions; raise count")


# ---------------------------------------------------------------------------
# Independent Reiter oracle
# ---------------------------------------------------------------------------

def reiter_fixpoint_extensions(t: DefaultTheory, oracle: sat.Oracle | None = None
                               ) -> list[Formula]:
    """Reiter extensions without processes.

    For every subset S of the defaults, take E = W + cons(S) and compute
    the generating defaults of E bottom-up: a default joins when the
    consequences gathered so far entail its precondition and its
    justification is consistent with E.  E is an extension iff that set
    is S.
    """
    m = len(t.defaults)
    if m > MAX_FIXPOINT_DEFAULTS:
        raise GuardError(f"{m} defaults; the subset sweep allows {MAX_FIXPOINT_DEFAULTS}")
    W = t.background
    found: list[Formula] = []
    for mask in range(1 << m):
        S = {i for i in range(m) if mask >> i & 1}
        E = [W, *(t.defaults[i].cons for i in sorted(S))]
        if not sat.is_consistent(E, oracle):
            continue
        generating: set[int] = set()
        grew = True
        while grew:
            grew = False
            base = [W, *(t.defaults[i].cons for i in sorted(generating))]
            for i, d in enumerate(t.defaults):
                if (i not in generating and sat.entails(base, d.prec, oracle)
                        and sat.is_consistent([*E, d.just], oracle)):
                    generating.add(i)
                    grew = True
        if generating == S:
            axiom = conj(*E)
            if not any(sat.equivalent(axiom, g, oracle) for g in found):
                found.append(axiom)
    return found


def _same_classes(left: Sequence[Formula], right: Sequence[Formula],
                  match) -> tuple[Formula | None, Formula | None]:
    """First member of ``left`` unmatched in ``right`` and vice versa."""
    lonely_left = next((f for f in left if not any(match(f, g) for g in right)), None)
    lonely_right = next((g for g in right if not any(match(f, g) for f in left)), None)
    return lonely_left, lonely_right


def check_oracle(t: DefaultTheory, theory_id: str = "") -> Report:
    """Operational Reiter extensions against the subset-fixpoint oracle."""
    prop = "oracle-equivalence"
    operational = [e.axiom for e in Engine(t, REITER).extensions()]
    fixpoint = reiter_fixpoint_extensions(t)
    extra, missing = _same_classes(operational, fixpoint, sat.equivalent)
    if extra is not None or missing is not None or len(operational) != len(fixpoint):
        return _fail(theory_id, prop, t, REITER,
                     f"{len(operational)} operational vs {len(fixpoint)} fixpoint extensions",
                     operational=[to_str(f) for f in operational],
                     fixpoint=[to_str(f) for f in fixpoint])
    return Report(theory_id, prop, True, detail=f"{len(fixpoint)} extensions")


# ---------------------------------------------------------------------------
# Process properties, from the definitions rather than the engine caches
# ---------------------------------------------------------------------------

def direct_successful(t: DefaultTheory, s: SemanticsSpec, p: Sequence[int]) -> bool:
    base = [t.background, *(t.defaults[i].cons for i in p)]
    if s.successfulness is Successfulness.GLOBAL:
        return sat.is_consistent([*base, *(t.defaults[i].just for i in p)])
    return all(sat.is_consistent([*base, t.defaults[i].just]) for i in p)


def _direct_is_process(t: DefaultTheory, p: Sequence[int]) -> bool:
    for k, i in enumerate(p):
        prior = [t.background, *(t.defaults[j].cons for j in p[:k])]
        if not sat.entails(prior, t.defaults[i].prec):
            return False
    return sat.is_consistent([t.background, *(t.defaults[i].cons for i in p)])


def direct_closed(t: DefaultTheory, s: SemanticsSpec, p: Sequence[int]) -> bool:
    base = [t.background, *(t.defaults[i].cons for i in p)]
    for d in range(len(t.defaults)):
        if d in p:
            continue
        if s.closure is Closure.INAPPLICABILITY:
            dd = t.defaults[d]
            if sat.entails(base, dd.prec) and sat.is_consistent([*base, dd.just]):
                return False
        else:
            longer = (*p, d)
            local = s.closure is Closure.LOCAL_MAXIMALITY
            mode = semantics("reiter" if local else "constrained")
            if _direct_is_process(t, longer) and direct_successful(t, mode, longer):
                return False
    return True


def check_process_properties(t: DefaultTheory, s: SemanticsSpec | str,
                             theory_id: str = "") -> Report:
    """Prefix closure of processes, antimonotonic successfulness, and
    invariance of successfulness and closure under reordering."""
    s = semantics(s)
    prop = f"process-properties/{s.name}"
    engine = Engine(t, s)
    count = 0
    for p in engine.iter_all_processes():
        count += 1
        for k in range(len(p)):
            if not engine.is_process(p[:k]):
                return _fail(theory_id, prop, t, s, "prefix of a process is not a process",
                             process=t.names(p), prefix=t.names(p[:k]))
        ok = direct_successful(t, s, p)
        if ok != engine.is_successful(p):
            return _fail(theory_id, prop, t, s, "engine disagrees with definition",
                         process=t.names(p))
        if ok:
            for k in range(len(p)):
                if not direct_successful(t, s, p[:k]):
                    return _fail(theory_id, prop, t, s, "successfulness not antimonotonic",
                                 process=t.names(p), prefix=t.names(p[:k]))
        closed = ok and direct_closed(t, s, p)
        for q in itertools.permutations(p):
            if q == p or not _direct_is_process(t, q):
                continue
            q_ok = direct_successful(t, s, q)
            if q_ok != ok or (q_ok and direct_closed(t, s, q) != closed):
                return _fail(theory_id, prop, t, s, "order dependence",
                             process=t.names(p), permutation=t.names(q))
    return Report(theory_id, prop, True, detail=f"{count} processes")


# ---------------------------------------------------------------------------
# Translations
# ---------------------------------------------------------------------------

def _guard(t: DefaultTheory, limit: int) -> None:
    if len(t.defaults) > limit:
        raise GuardError(f"{len(t.defaults)} defaults; this check allows {limit}")


def _phase_error(art: SimulationArtifacts, p: Sequence[int]) -> str | None:
    m, u = art.m, art.u
    fams = [art.family(step) for step in p]
    if len(p) != m + u + 1:
        return f"length {len(p)}, expected {m + u + 1}"
    guesses = fams[:m]
    if sorted(k for _, k in guesses) != list(range(1, m + 1)) or any(
            f not in "AN" for f, _ in guesses):
        return "first phase is not one A/N default per source default"
    records = fams[m:m + u]
    if sorted(k for _, k in records) != list(range(1, u + 1)) or any(
            f not in "VG" for f, _ in records):
        return "second phase is not one V/G default per check"
    if fams[-1][0] != "Z":
        return "last step is not a Z default"
    return None


def check_simulation(t: DefaultTheory, s: SemanticsSpec | str, F: Formula,
                     checks: CheckSuite | None = None, theory_id: str = "") -> Report:
    """Correspondence between ``t`` and its simulation: circuit cross-check,
    phase structure, the simulated-process lemmas, and both directions of
    the extension correspondence modulo var-equivalence."""
    s = semantics(s)
    _guard(t, MAX_SIMULATED_DEFAULTS)
    prop = f"simulation/{s.name}"
    suite = checks if checks is not None else generate_checks(t, s)
    src = Engine(t, s)
    m = len(t.defaults)
    X = t.atoms

    def fail(detail: str, **extra) -> Report:
        return _fail(theory_id, prop, t, s, detail, F=to_str(F),
                     checks=[to_str(f) for f in suite.checks],
                     circuit=to_str(suite.circuit), **extra)

    verdict: dict[frozenset, bool] = {}
    for p in src.iter_all_processes():
        expected = src.successful_set(frozenset(p)) and src.closed_set(frozenset(p))
        verdict[frozenset(p)] = expected
        if suite.evaluate(m, p) != expected:
            return fail("circuit disagrees with successful-and-closed",
                        process=t.names(p), expected=expected)

    art = build_simulation(t, s, F, checks=suite)
    sim = Engine(art.theory, REITER)
    seen: dict[frozenset, tuple[str, str]] = {}
    for p in sim.iter_processes():
        error = _phase_error(art, p)
        if error:
            return fail(error, simulation_process=art.theory.names(p))
        key = frozenset(p)
        if key in seen:
            continue
        guessed = extract_simulated(art, p)
        if not src.is_process(guessed):
            return fail("simulated process is not a source process",
                        simulation_process=art.theory.names(p), process=t.names(guessed))
        z1 = art.family(p[-1]) == ("Z", 1)
        good = verdict[frozenset(guessed)]
        if z1 != good:
            return fail("z-default choice does not match successful-and-closed",
                        simulation_process=art.theory.names(p), process=t.names(guessed))
        target = src.axiom(guessed) if good else F
        if not sat.var_equivalent(sim.axiom(p), target, X):
            return fail("simulation extension not var-equivalent to its target",
                        simulation_process=art.theory.names(p), target=to_str(target))
        seen[key] = (to_str(target), "")

    source_exts = [e.axiom for e in src.extensions()]
    sim_exts = [e.axiom for e in sim.extensions()]

    def match(f: Formula, g: Formula) -> bool:
        return sat.var_equivalent(f, g, X)

    lost, _ = _same_classes(source_exts, sim_exts, match)
    if lost is not None:
        return fail("source extension without simulation counterpart", extension=to_str(lost))
    for g in sim_exts:
        if not match(g, F) and not any(match(g, f) for f in source_exts):
            return fail("simulation extension matches neither F nor a source extension",
                        extension=to_str(g))
    return Report(theory_id, prop, True,
                  detail=f"{len(source_exts)} source / {len(sim_exts)} simulation extensions")


def extension_classes(exts: Sequence[Formula], keep: Iterable[str]
                      ) -> set[frozenset[tuple[bool, ...]]]:
    """Extensions up to var-equivalence, as sets of projected models."""
    keep = sorted(set(keep))
    return {sat.default_oracle().projected_models(f, keep) for f in exts}


def check_faithful(t: DefaultTheory, s: SemanticsSpec | str, theory_id: str = "") -> Report:
    """The faithful translation has the same extensions up to var-equivalence,
    is normal, and has ``2m + 2u + 2`` defaults."""
    s = semantics(s)
    _guard(t, MAX_TRANSLATED_DEFAULTS)
    prop = f"faithful/{s.name}"
    art = faithful_translate(t, s)
    out = art.theory
    if len(out.defaults) != simulation_size(art.m, art.u):
        return _fail(theory_id, prop, t, s, f"{len(out.defaults)} defaults")
    if not is_normal(out):
        return _fail(theory_id, prop, t, s, "translation is not normal")
    X = t.atoms
    source = extension_classes([e.axiom for e in Engine(t, s).extensions()], X)
    target = extension_classes([e.axiom for e in Engine(out, REITER).extensions()], X)
    if source != target:
        return _fail(theory_id, prop, t, s, "extension classes differ",
                     source=sorted(map(sorted, source)), target=sorted(map(sorted, target)))
    return Report(theory_id, prop, True, detail=f"{len(source)} extension classes")


def literal_queries(t: DefaultTheory) -> list[Formula]:
    """Each atom, each negated atom, and ``false``."""
    out: list[Formula] = []
    for a in sorted(t.atoms):
        out += [Var(a), Not(Var(a))]
    return out + [FALSE]


def check_almost(t: DefaultTheory, s: SemanticsSpec | str,
                 queries: Sequence[Formula] | None = None, theory_id: str = "") -> Report:
    """Skeptical ``q`` iff the translation skeptically entails ``flag | q``;
    credulous ``q`` iff the dual translation credulously entails ``flag & q``."""
    s = semantics(s)
    _guard(t, MAX_TRANSLATED_DEFAULTS)
    prop = f"almost/{s.name}"
    src = Engine(t, s)
    if not src.extensions():
        raise NoExtensionError("the theory has no extension")
    queries = literal_queries(t) if queries is None else list(queries)
    for mode in Mode:
        art, flag = almost_translate(t, s, mode)
        out = Engine(art.theory, REITER)
        for q in queries:
            q2 = transform_query(q, mode, flag)
            if mode is Mode.SKEPTICAL:
                left, right = src.skeptical_entails(q), out.skeptical_entails(q2)
            else:
                left, right = src.credulous_entails(q), out.credulous_entails(q2)
            if left != right:
                return _fail(theory_id, prop, t, s, f"{mode.value} verdicts differ",
                             query=to_str(q), mode=mode.value, translated=to_str(q2), source=left,
                             translation=right)
    return Report(theory_id, prop, True, detail=f"{len(queries)} queries")


def check_enumerate(t: DefaultTheory, s: SemanticsSpec | str, theory_id: str = "") -> Report:
    s = semantics(s)
    prop = f"enumerate/{s.name}"
    out = enumerate_translate(t, s)
    eng = Engine(out, REITER)
    procs = eng.enumerate_processes()
    if any(len(p) != 1 for p in procs) or len(procs) != len(out.defaults):
        return _fail(theory_id, prop, t, s, "processes are not the single defaults")
    X = t.atoms
    source = extension_classes([e.axiom for e in Engine(t, s).extensions()], X)
    target = extension_classes([e.axiom for e in eng.extensions()], X)
    if source != target:
        return _fail(theory_id, prop, t, s, "extension classes differ")
    return Report(theory_id, prop, True, detail=f"{len(out.defaults)} defaults")


# ---------------------------------------------------------------------------
# Fail-safety
# ---------------------------------------------------------------------------

def check_failsafe_asymmetry(params: CorpusParams) -> Report:
    """Constrained is fail-safe on the corpus, Reiter is fail-safe (and has
    extensions) on its normal restriction, and Reiter fails somewhere."""
    prop = "failsafe-asymmetry"
    witnesses = []
    seeded = [("turner", TURNER)]
    for tid, t in [*seeded, *corpus(params)]:
        if not Engine(t, CONSTRAINED).is_fail_safe():
            return _fail(tid, prop, t, CONSTRAINED, "constrained not fail-safe")
        normal = normal_restriction(t)
        eng = Engine(normal, REITER)
        if not eng.is_fail_safe():
            return _fail(tid, prop, normal, REITER, "reiter not fail-safe on a normal theory",
                         witness=normal.names(eng.fail_safe_witness()))
        if not eng.extensions():
            return _fail(tid, prop, normal, REITER, "normal theory without extension")
        witness = Engine(t, REITER).fail_safe_witness()
        if witness is not None:
            witnesses.append((tid, t.names(witness)))
    if not witnesses:
        return Report("corpus", prop, False, {"params": asdict(params)},
                      "no corpus theory where Reiter is not fail-safe")
    return Report("corpus", prop, True,
                  detail=f"{params.count} theories; reiter not fail-safe on {len(witnesses)}, "
                         f"first {witnesses[0][0]} at {witnesses[0][1]}")


# ---------------------------------------------------------------------------
# Corpus driver
# ---------------------------------------------------------------------------

CHECKS = ("oracle", "properties", "failsafe", "simulation", "faithful", "almost")


def verify_corpus(params: CorpusParams, checks: Sequence[str] = CHECKS,
                  s: SemanticsSpec | str = REITER) -> Iterator[Report]:
    """Run the named checks over the corpus, yielding reports in theory order.

    Translation checks only look at theories having an extension under
    ``s``; theories over the size guard are reported as skipped.
    """
    s = semantics(s)
    unknown = set(checks) - set(CHECKS)
    if unknown:
        raise ValueError(f"unknown checks: {', '.join(sorted(unknown))}")
    if "failsafe" in checks:
        yield check_failsafe_asymmetry(params)
    for tid, t in corpus(params):
        if "oracle" in checks:
            yield check_oracle(t, tid)
        if "properties" in checks:
            yield check_process_properties(t, s, tid)
        translations = [c for c in ("simulation", "faithful", "almost") if c in checks]
        if not translations or not Engine(t, s).extensions():
            continue
        for name in translations:
            try:
                if name == "simulation":
                    yield check_simulation(t, s, Var("__a"), theory_id=tid)
                elif name == "faithful":
                    yield check_faithful(t, s, tid)
                else:
                    yield check_almost(t, s, theory_id=tid)
            except GuardError as exc:
                yield Report(tid, f"{name}/{s.name}", True, detail=str(exc), skipped=True)


def replay(report: Report) -> Report:
    """Re-run the check recorded in a failing report on its counterexample."""
    if report.passed or report.counterexample is None:
        raise ValueError("only failing reports carry a counterexample")
    cx = report.counterexample
    if "params" in cx:
        return check_failsafe_asymmetry(CorpusParams(**cx["params"]))
    t = parse_theory(cx["theory"])
    s = semantics(cx.get("semantics", "reiter"))
    family = report.property.split("/")[0]
    tid = report.theory_id
    if family == "oracle-equivalence":
        return check_oracle(t, tid)
    if family == "process-properties":
        return check_process_properties(t, s, tid)
    if family == "simulation":
        suite = CheckSuite(tuple(parse(f) for f in cx["checks"]), parse(cx["circuit"]))
        return check_simulation(t, s, parse(cx["F"]), suite, tid)
    if family == "faithful":
        return check_faithful(t, s, tid)
    if family == "almost":
        return check_almost(t, s, [parse(cx["query"])], tid)
    if family == "enumerate":
        return check_enumerate(t, s, tid)
    if family == "failsafe-asymmetry":
        eng = Engine(t, s)
        holds = eng.is_fail_safe() and (s is CONSTRAINED or bool(eng.extensions()))
        return report if not holds else Report(tid, report.property, True)
    raise ValueError(f"no replay for property {report.property!r}")
