"""
Corner rings, the cycle algebra and the homotopy center
=======================================================

For a cancellative model every corner ring is the same monomial
algebra.  The figure-1 model needs a contraction first; its corners then
disagree and R is strictly smaller than S.
"""

from dimerkit.algebras import check_R_equals_S, compare_corner_rings
from dimerkit.contraction import contract
from dimerkit.corpus import load


def show(sg):
    return ", ".join("*".join(f"{k}^{e}" if e > 1 else k for k, e in sg.monomial(g).items())
                     for g in sg.generators)


con = load("corpus:conifold")
cmp = compare_corner_rings(con)
for i, sg in enumerate(cmp.semigroups):
    print(f"conifold corner {i}: {show(sg)}")
print("conifold R = S:", check_R_equals_S(con).status)

q = load("corpus:fig1")
psi = contract(q, ["c"])
print("fig1 weights through the contraction of c, variables", psi.variables)
rs = check_R_equals_S(q, psi)
print("S generators:", show(rs.S))
print("R = S:", rs.status)
print("  witness", rs.S.monomial(rs.witness), "is missing at vertex", rs.missing_vertex)
