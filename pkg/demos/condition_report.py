"""
The ten conditions, side by side
================================

Either they all hold or they all fail.  When they fail, explicit
witnesses come with the report.
"""

import json

from dimerkit.corpus import load, names
from dimerkit.criteria import theorem_report
from dimerkit.model import torus_cover

models = [(n, load(f"corpus:{n}")) for n in names()]
models.append(("fig1 2x1", torus_cover(load("corpus:fig1"), 2, 1)))

for name, q in models:
    rep = theorem_report(q)
    print(f"{name}: {'all hold' if rep.all_hold else 'all fail'}")
    for c in rep.conditions:
        print(f"  ({c.number:2d}) {c.verdict}")

rep = theorem_report(load("corpus:fig1"))
print(json.dumps(rep.witnesses, indent=2, sort_keys=True))
