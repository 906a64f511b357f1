"""
Perfect and simple matchings
============================

Lists the matchings of each built-in model and writes an SVG of the
figure-1 quiver with one matching highlighted.
"""

from pathlib import Path

from dimerkit.corpus import load, names
from dimerkit.draw import to_svg
from dimerkit.matchings import enumerate_perfect_matchings, qs_arrows

for name in names():
    q = load(f"corpus:{name}")
    pms = enumerate_perfect_matchings(q)
    print(f"{name}: {len(pms)} perfect, {sum(d.simple for d in pms)} simple")
    for d in pms:
        print(f"  {'S' if d.simple else ' '} {' '.join(q.names(sorted(d.arrows)))}")
    # arrows in no simple matching
    print("  outside every simple matching:", q.names(sorted(qs_arrows(q))) or "none")

q = load("corpus:fig1")
first_simple = next(d for d in enumerate_perfect_matchings(q) if d.simple)
out = Path("demo_output")
out.mkdir(exist_ok=True)
(out / "fig1_matching.svg").write_text(to_svg(q, first_simple.arrows))
print("wrote", out / "fig1_matching.svg")
