"""Inside the simulation: a normal theory that runs another semantics.

We simulate the two-guess theory ``{:b/b, :~b/~b}`` under constrained
semantics.  Every successful and closed process of the simulation has
three phases: one A or N default per source default (the guess), one V
or G default per consistency check (the check outcomes), then z1 or z2
depending on whether the guessed process is successful and closed.

    python demos/simulation.py
"""

from collections import Counter
from pathlib import Path

from dlw import sat
from dlw.logic import Not, Var, to_str
from dlw.process import Engine
from dlw.theory import read_theory
from dlw.translate import build_simulation, extract_simulated

HERE = Path(__file__).parent

source = read_theory(HERE / "theories" / "choice.dlt")
art = build_simulation(source, "constrained", Var("__a"))
sim = art.theory
print(f"source: {len(source.defaults)} defaults; checks: {art.u}; "
      f"simulation: {len(sim.defaults)} defaults, normal={sim.normal}")
for k, check in enumerate(art.checks.checks, 1):
    print(f"  check {k}: {to_str(check)}")
print(f"  circuit: {to_str(art.checks.circuit)}")

engine = Engine(sim, "reiter")
outcomes = Counter()
first_of_kind = {}
for p in engine.iter_processes():
    guessed = extract_simulated(art, p)
    kind = (tuple(source.names(guessed)), sim.defaults[p[-1]].name)
    outcomes[kind] += 1
    first_of_kind.setdefault(kind, p)

print("\nguessed process -> final default (number of orderings)")
for (guess, last), n in sorted(outcomes.items()):
    print(f"  {list(guess)!s:12} -> {last}  ({n})")

print("\none process per outcome, with its phases:")
for (guess, last), p in sorted(first_of_kind.items()):
    names = sim.names(p)
    m, u = art.m, art.u
    print(f"  guess {names[:m]} | checks {names[m:m + u]} | {names[-1]}")

print("\nextensions of the simulation, compared on the source atoms:")
targets = {"b": Var("b"), "~b": Not(Var("b")), "F": art.F}
keep = source.atoms | {"__a"}
for e in engine.extensions():
    label = next(k for k, f in targets.items() if sat.var_equivalent(e.axiom, f, keep))
    print(f"  {label:3} ({len(e.witnesses)} witnesses)")
