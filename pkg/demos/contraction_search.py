"""
Searching for cyclic contractions
=================================

Candidates are subsets of the arrows outside every simple matching,
tried largest first.  Each is verified before it is returned.
"""

import time

from dimerkit.contraction import cyclic_contractions, reduce_2cycles
from dimerkit.corpus import load
from dimerkit.model import format_model, torus_cover

q = load("corpus:fig1")
for psi in cyclic_contractions(q):
    print("fig1 cyclic contraction:", q.names(sorted(psi.contracted)))

psi = next(cyclic_contractions(q))
print(format_model(reduce_2cycles(psi.target)))

for k, l in [(2, 1), (2, 2)]:
    cover = torus_cover(q, k, l)
    t0 = time.perf_counter()
    psi = next(cyclic_contractions(cover))
    print(f"{k}x{l} cover: contract {cover.names(sorted(psi.contracted))} "
          f"({time.perf_counter() - t0:.2f} s)")
