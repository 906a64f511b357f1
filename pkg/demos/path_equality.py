"""
Equality of paths modulo the dimer relations
=============================================

Rewriting replaces one side of an arrow's relation by the other.  The
matching weight is preserved, which keeps every class finite.
"""

from dimerkit.corpus import load
from dimerkit.paths import eq_class, equal_mod_I, eta_weight, path

hexq = load("corpus:hex")
yz, zy = path(hexq, "y", "z"), path(hexq, "z", "y")
res = equal_mod_I(hexq, yz, zy)
print("hex: yz == zy ?", res.status)
for w in res.chain:
    print("   ", " ".join(hexq.names(w)))

q = load("corpus:fig1")
ab, ba = path(q, "a", "b"), path(q, "b", "a")
print("fig1 weights:", eta_weight(q, ab), eta_weight(q, ba))
print("fig1: ab == ba ?", equal_mod_I(q, ab, ba).status)

# multiplying by the green arrow c on the left makes them equal
cab, cba = ab.then(path(q, "c")), ba.then(path(q, "c"))
res = equal_mod_I(q, cab, cba)
print("fig1: c.ab == c.ba ?", res.status)
for w in res.chain:
    print("   ", " ".join(q.names(w)))

sigma = path(q, *q.names(q.faces[0].boundary))
cls = eq_class(q, sigma)
print(f"class of a unit cycle at {sigma.tail}: {len(cls)} words, "
      f"longest {max(map(len, cls.members))}, weight bound {sum(eta_weight(q, sigma))}")
