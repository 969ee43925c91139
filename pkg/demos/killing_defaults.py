"""Killing defaults and fail-safety.

The Turner theory encodes "h is true initially, unless something forces
otherwise" with two guessing defaults and a third default whose
consequence is ``false``.  Under Reiter's semantics the third default
deletes the branch that guessed ``~h``; under constrained semantics it is
simply never applied.

    python demos/killing_defaults.py
"""

from pathlib import Path

from dlw.logic import to_str
from dlw.errors import StuckError
from dlw.process import Engine
from dlw.theory import DefaultTheory, read_theory

HERE = Path(__file__).parent

turner = read_theory(HERE / "theories" / "turner.dlt")
print(turner)

for name in ("reiter", "constrained"):
    engine = Engine(turner, name)
    exts = engine.extensions()
    print(f"{name}: {len(exts)} extension(s)")
    for e in exts:
        print(f"  {to_str(e.axiom)}  from {[turner.names(p) for p in e.witnesses]}")
    witness = engine.fail_safe_witness()
    if witness is None:
        print("  fail-safe: every successful process can be completed")
    else:
        print(f"  not fail-safe: {turner.names(witness)} is successful but a dead end")

# the dead end in detail: after [d2] the only applicable default is d3,
# and applying it makes the consequences inconsistent
reiter = Engine(turner, "reiter")
for prefix in (["d1"], ["d2"]):
    print(f"completable {prefix}: {reiter.completable(turner.steps(prefix))}")

# greedy construction is safe only for fail-safe semantics; reorder the
# defaults so the greedy loop guesses ~h first
reordered = DefaultTheory(tuple(turner.defaults[i] for i in (1, 0, 2)))
try:
    Engine(reordered, "reiter").construct_extension()
except StuckError as exc:
    print(f"greedy construction on the reordered theory: {exc}")
print("greedy construction under constrained:",
      reordered.names(Engine(reordered, "constrained").construct_extension()))
