"""Checking the translations on a random corpus.

Generates small random theories, keeps those with a Reiter extension, and
runs the simulation, faithful and almost checks on each.  Failing reports
print their counterexample in .dlt syntax, ready to be replayed.

    python demos/corpus_check.py [count] [seed]
"""

import sys
import time
from collections import Counter

from dlw.logic import Var
from dlw.process import Engine
from dlw.verify import (
    CorpusParams,
    check_almost,
    check_faithful,
    check_simulation,
    theories_with_extensions,
)

count = int(sys.argv[1]) if len(sys.argv) > 1 else 40
seed = int(sys.argv[2]) if len(sys.argv) > 2 else 0
params = CorpusParams(max_defaults=2, max_atoms=2, seed=seed, count=10 * count)

start = time.perf_counter()
chosen = theories_with_extensions(params, "reiter", count)
shape = Counter((len(t.defaults), len(Engine(t, "reiter").extensions())) for _, t in chosen)
print(f"{count} theories with extensions (seed {seed})")
for (m, n), k in sorted(shape.items()):
    print(f"  {k:3} with {m} default(s) and {n} extension(s)")

tally = Counter()
for tid, t in chosen:
    for report in (check_simulation(t, "reiter", Var("__a"), theory_id=tid),
                   check_faithful(t, "reiter", tid),
                   check_almost(t, "reiter", theory_id=tid)):
        tally[report.property, report.passed] += 1
        if not report.passed:
            print(report)
            print(report.counterexample["theory"])

for (prop, passed), k in sorted(tally.items()):
    print(f"{prop:22} {'passed' if passed else 'FAILED'} {k}")
print(f"{time.perf_counter() - start:.1f}s")
