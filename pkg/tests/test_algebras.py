import itertools

import pytest

from dimerkit.algebras import (
    CycleAlgebraMismatch,
    MonomialSemigroup,
    check_R_equals_S,
    compare_corner_rings,
    corner_semigroup,
    corner_semigroups,
    cycle_algebra,
    homotopy_center,
    reduced_cycle_exists,
)
from dimerkit.bounds import Bounds
from dimerkit.contraction import contract
from dimerkit.matchings import simple_matchings
from dimerkit.model import torus_cover
from dimerkit.paths import sigma_divides, tau_table

from oracles import brute_corner, irreducibles

CONIFOLD_GENS = {(1, 0, 1, 0), (1, 0, 0, 1), (0, 1, 1, 0), (0, 1, 0, 1)}


def test_hex_corner_is_free(hexq):
    sg = corner_semigroup(hexq, 0)
    assert set(sg.generators) == {(1, 0, 0), (0, 1, 0), (0, 0, 1)}


@pytest.mark.parametrize("d", [3, 4, 5])
def test_hex_corner_stable(hexq, d):
    sg = corner_semigroup(hexq, 0, bounds=Bounds(degree=d))
    assert set(sg.generators) == {(1, 0, 0), (0, 1, 0), (0, 0, 1)}
    assert len(sg.elements()) == len(list(itertools.product(range(d + 1), repeat=3))) - sum(
        1 for v in itertools.product(range(d + 1), repeat=3) if sum(v) > d)


def test_conifold_corners(conifold):
    for i in (0, 1):
        assert set(corner_semigroup(conifold, i).generators) == CONIFOLD_GENS


def test_max_len_zero_is_trivial(fig1, conifold):
    for q in (fig1, conifold):
        sg = corner_semigroup(q, 0, bounds=Bounds(max_len=0))
        assert sg.generators == () and sg.elements() == {sg.zero}


def test_conifold_cycle_algebra_is_balanced(conifold):
    S = cycle_algebra(conifold, bounds=Bounds(degree=6))
    want = {v for v in itertools.product(range(7), repeat=4) if sum(v) <= 6 and v[0] + v[1] == v[2] + v[3]}
    assert S.elements() == want
    assert set(S.generators) == CONIFOLD_GENS


@pytest.mark.parametrize("name", ["hexq", "conifold"])
@pytest.mark.parametrize("cover", [(1, 1), (2, 1), (2, 2)])
def test_corners_against_cycle_enumeration(name, cover, request):
    q = torus_cover(request.getfixturevalue(name), *cover)
    simple = [d.arrows for d in simple_matchings(q)]
    bound = 5
    for i in q.vertices:
        sg = corner_semigroup(q, i, bounds=Bounds(degree=bound))
        assert sg.elements() == brute_corner(q, i, simple, bound)
        assert sorted(sg.generators) == irreducibles(sg.elements())


def test_homotopy_center_equals_S(hexq, conifold):
    for q in (hexq, conifold):
        assert homotopy_center(q).elements() == cycle_algebra(q).elements()


def test_compare_corners(hexq, conifold):
    assert compare_corner_rings(hexq).all_equal
    cmp = compare_corner_rings(conifold)
    assert cmp.all_equal and cmp.first_difference() is None


def test_R_equals_S_cancellative(hexq, conifold):
    for q in (hexq, conifold):
        v = check_R_equals_S(q)
        assert v.status == "equal-at-bound" and v.primary and v.secondary and not v.missing_reduced


def test_conifold_reduced_cycles_at_every_vertex(conifold):
    table = tau_table(conifold)
    for u in [(1, 0), (0, 1), (1, 1), (-1, -1), (1, -1)]:
        for i in conifold.vertices:
            assert reduced_cycle_exists(conifold, table, 4, i, u, 12, 2) is not None


@pytest.fixture
def psi(fig1):
    return contract(fig1, ["c"])


def test_fig1_S_matches_target(fig1, psi):
    S = cycle_algebra(fig1, psi)
    target = cycle_algebra(psi.target)
    assert S.elements() == target.truncated(S.degree_bound)


def test_fig1_R_strictly_smaller(fig1, psi):
    R, S = homotopy_center(fig1, psi), cycle_algebra(fig1, psi)
    assert R.issubset_at_bound(S) and not S.issubset_at_bound(R)
    v = check_R_equals_S(fig1, psi)
    assert v.status == "differ"
    assert v.witness in S.generators and v.witness not in corner_semigroups(fig1, psi)[v.missing_vertex]
    assert v.missing_reduced


def test_fig1_corners_differ(fig1, psi):
    cmp = compare_corner_rings(fig1, psi)
    assert not cmp.all_equal
    i, j, w = cmp.first_difference()
    assert w in cmp.semigroups[i] and w not in cmp.semigroups[j]


def test_mismatch_raises_for_a_bad_contraction(fig1):
    bad = contract(fig1, ["c", "d"])
    with pytest.raises(CycleAlgebraMismatch):
        cycle_algebra(fig1, bad)


@pytest.mark.parametrize("name", ["hexq", "conifold", "fig1"])
def test_sigma_in_every_corner(name, request, fig1):
    q = request.getfixturevalue(name)
    p = contract(fig1, ["c"]) if name == "fig1" else None
    for c in corner_semigroups(q, p):
        assert c.sigma in c


@pytest.mark.parametrize("name", ["hexq", "conifold"])
def test_generator_shape_and_stability(name, request):
    q = request.getfixturevalue(name)
    for i in q.vertices:
        sg = corner_semigroup(q, i)
        assert sg.is_sigma_reduced_shape()
        more = corner_semigroup(q, i, bounds=Bounds(degree=sg.degree_bound + 2))
        assert more.generators == sg.generators


def test_monotone_in_the_bound(fig1, psi):
    small = corner_semigroup(fig1, 0, psi, Bounds(degree=6))
    big = corner_semigroup(fig1, 0, psi, Bounds(degree=9))
    assert small.elements() <= big.elements()
    assert small.elements() == big.truncated(6)


def test_R_inside_every_corner(fig1, psi):
    R = homotopy_center(fig1, psi)
    for c in corner_semigroups(fig1, psi):
        assert R.elements() <= c.truncated(R.degree_bound)


def test_membership_beyond_bound():
    sg = MonomialSemigroup.from_elements([(1, 0), (0, 1)], ("x", "y"), 2)
    assert (5, 7) in sg
    sg = MonomialSemigroup.from_elements([(2, 0), (0, 2)], ("x", "y"), 2)
    assert (4, 6) in sg and (3, 6) not in sg
    assert sg.monomial((2, 0)) == {"x": 2}
    assert sg.to_dict()["generators"] == [{"x": 2}, {"y": 2}]


def test_nonreduced_generators_absent(conifold):
    assert not any(sigma_divides(g) for g in corner_semigroup(conifold, 0).generators)
