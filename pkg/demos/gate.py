"""
==================================================
The theorem gate end to end, from a place file
==================================================

Loads demos/place_proven.json (a genus-one curve, tau the symplectic
2-dimensional irreducible of G(4,3), one real place, one good place p=7 and
one small place p=3 with abelian decomposition model).  It runs the gate
and prints the per-place sign traces.  Then it flips the abelian flag at
p=3 and shows the gate naming the failed hypothesis.
"""
import json
from pathlib import Path

from rootnum.cli import parse_place_file
from rootnum.root_number import theorem_gate

path = Path(__file__).with_name("place_proven.json")
doc = json.loads(path.read_text())
pf = parse_place_file(doc)
verdict = theorem_gate(pf.places, pf.tau)
print(f"verdict: {verdict.status} {verdict.value:+d}")
for trace in verdict.traces:
    print(f"  {trace.place:9} [{trace.branch}] -> {trace.product:+d}")
    for name, exponent, value in trace.factors:
        print(f"      {name:40} exponent {exponent!s:>3}  value {value:+d}")
print(f"  note: {verdict.notes[0]}")

doc["places"][2]["abelian"] = False
pf = parse_place_file(doc)
verdict = theorem_gate(pf.places, pf.tau)
print(f"\nwith a nonabelian model at p=3: {verdict.status} ({verdict.failed}): {verdict.message}")
