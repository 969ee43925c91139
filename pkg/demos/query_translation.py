"""Answering queries through the polynomial translation.

The almost-consequence-preserving translation needs no process search:
guessed processes that fail emit a flag atom instead of an extension.  A
skeptical query q on the source becomes ``flag | q`` on the translation;
a credulous query becomes ``flag & q`` on the dual build, where failed
guesses emit ``~flag`` and successful ones assert the flag.

    python demos/query_translation.py
"""

from pathlib import Path

from dlw.logic import parse, to_str
from dlw.process import Engine
from dlw.theory import Mode, read_theory
from dlw.translate import almost_translate, transform_query

HERE = Path(__file__).parent

cases = [
    ("choice.dlt", "reiter", ["b", "~b", "b | ~b", "false"]),
    ("turner.dlt", "reiter", ["h", "~h"]),
    ("applicability.dlt", "constrained", ["c", "b", "a & c"]),
]

for filename, sem, queries in cases:
    t = read_theory(HERE / "theories" / filename)
    source = Engine(t, sem)
    print(f"{filename} under {sem}: {len(source.extensions())} extension(s)")
    for mode in Mode:
        art, flag = almost_translate(t, sem, mode)
        target = Engine(art.theory, "reiter")
        ask = source.skeptical_entails if mode is Mode.SKEPTICAL else source.credulous_entails
        ask_out = (target.skeptical_entails if mode is Mode.SKEPTICAL
                   else target.credulous_entails)
        print(f"  {mode.value} ({len(art.theory.defaults)} normal defaults)")
        for text in queries:
            q = parse(text)
            q2 = transform_query(q, mode, flag)
            left, right = ask(q), ask_out(q2)
            mark = "ok" if left == right else "MISMATCH"
            print(f"    {text:8} source={left!s:5}  {to_str(q2):14} translation={right!s:5} {mark}")
