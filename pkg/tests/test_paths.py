import random

import pytest

from dimerkit.model import torus_cover, unit_cycle_at
from dimerkit.paths import (
    ClassTooLarge,
    NotComposable,
    PathWord,
    RewriteSystem,
    enumerate_cycles,
    enumerate_paths,
    eq_class,
    equal_mod_I,
    eta_weight,
    has_cyclic_subpath,
    is_sigma_reduced,
    is_single_rewrite,
    path,
    sigma_multiple,
    tau_weight,
)

from oracles import naive_closure


def test_weights_hex(hexq):
    assert eta_weight(hexq, path(hexq, "x")) == (1, 0, 0)
    assert tau_weight(hexq, path(hexq, "x", "y", "z")) == (1, 1, 1)
    assert eta_weight(hexq, PathWord.trivial(0)) == (0, 0, 0)


def test_weight_additive(fig1):
    p, r = path(fig1, "c", "h"), path(fig1, "a", "e")
    assert tau_weight(fig1, p.then(r)) == tuple(x + y for x, y in zip(tau_weight(fig1, p), tau_weight(fig1, r)))


def test_not_composable(hexq, fig1):
    with pytest.raises(NotComposable):
        path(fig1, "c", "a")
    with pytest.raises(NotComposable):
        PathWord.from_arrows(fig1, [])
    with pytest.raises(NotComposable):
        path(fig1, "c").then(path(fig1, "a"))


def test_winding_additive(fig1):
    p = path(fig1, "c", "h", "e")
    assert p.winding == (0, 2) and (p.tail, p.head) == (1, 0)


def test_enumerate_cycles_examples(hexq, conifold):
    assert [c.names(hexq) for c in enumerate_cycles(hexq, 0, (1, 0), 1)] == [["x"]]
    assert enumerate_cycles(hexq, 0, (0, 0), 0) == [PathWord.trivial(0)]
    found = [c.names(conifold) for c in enumerate_cycles(conifold, 0, (1, 1), 2)]
    assert ["a2", "b1"] in found


def test_enumerate_cycles_matches_filter(fig1):
    for i in fig1.vertices:
        for u in [(0, 0), (1, 0), (0, -1), (-1, -1)]:
            got = [c.arrows for c in enumerate_cycles(fig1, i, u, 5)]
            want = sorted(
                (p.arrows for p in enumerate_paths(fig1, 5, start=i) if p.head == i and p.winding == u),
                key=lambda w: (len(w), w),
            )
            if u == (0, 0):
                want = [()] + want
            assert got == want


def test_enumerate_paths_counts(hexq):
    assert sum(1 for _ in enumerate_paths(hexq, 3)) == 3 + 9 + 27
    assert len(list(enumerate_paths(hexq, 2, include_trivial=True))) == 1 + 3 + 9


def test_equal_hex_one_rewrite(hexq):
    eq = equal_mod_I(hexq, path(hexq, "y", "z"), path(hexq, "z", "y"))
    assert eq.equal and len(eq.chain) == 2
    assert is_single_rewrite(hexq, *eq.chain)


def test_equal_reflexive_empty_chain(fig1):
    p = path(fig1, "c", "h")
    eq = equal_mod_I(fig1, p, p)
    assert eq.equal and len(eq.chain) == 1


def test_fig1_ab_ba_distinct(fig1):
    eq = equal_mod_I(fig1, path(fig1, "b", "a"), path(fig1, "a", "b"))
    assert eq.distinct


def test_fig1_cab_cba_equal(fig1):
    eq = equal_mod_I(fig1, path(fig1, "b", "a", "c"), path(fig1, "a", "b", "c"))
    assert eq.equal
    for w1, w2 in zip(eq.chain, eq.chain[1:]):
        assert is_single_rewrite(fig1, w1, w2)


def test_distinct_shortcuts(fig1):
    assert equal_mod_I(fig1, path(fig1, "a"), path(fig1, "b")).reason == "windings differ"
    assert equal_mod_I(fig1, path(fig1, "a"), path(fig1, "c")).reason == "endpoints differ"


def test_unknown_at_cap(fig1):
    s = unit_cycle_at(fig1, 0)
    big = PathWord.from_arrows(fig1, s.arrows * 3)
    cls = eq_class(fig1, big)
    far = max(cls.members, key=lambda w: (len(cls.chain_to(w)), w))
    assert len(cls.chain_to(far)) > 2
    eq = equal_mod_I(fig1, big, PathWord.from_arrows(fig1, far, start=0), cap=1)
    assert eq.status == "unknown" and not eq.distinct
    with pytest.raises(ClassTooLarge):
        eq_class(fig1, big, cap=2)


def test_eq_class_examples(hexq, conifold):
    assert eq_class(hexq, path(hexq, "x")).members == {hexq.ids(["x"])}
    assert eq_class(hexq, path(hexq, "y", "z")).members == {hexq.ids(["y", "z"]), hexq.ids(["z", "y"])}
    plus = path(conifold, "a1", "b1", "a2", "b2")
    minus = path(conifold, "a1", "b2", "a2", "b1")
    assert minus.arrows in eq_class(conifold, plus)


def test_unit_cycles_at_a_vertex_are_one_class(fig1, conifold):
    for q in (fig1, conifold):
        for i in q.vertices:
            rots = [r for f in q.faces for r in PathWord.from_arrows(q, f.boundary).rotations(q) if r.tail == i]
            cls = eq_class(q, rots[0])
            assert all(r.arrows in cls for r in rots)


def test_rewrite_complements_are_unit_cycles(fig1):
    rs = RewriteSystem.of(fig1)
    boundaries = {tuple(f.boundary) for f in fig1.faces}
    rotations = {b[k:] + b[:k] for b in boundaries for k in range(len(b))}
    for a in fig1.arrows:
        assert rs.plus[a.id] + (a.id,) in rotations
        assert rs.minus[a.id] + (a.id,) in rotations


@pytest.mark.parametrize("name", ["hexq", "conifold", "fig1"])
def test_eq_class_against_naive_closure(name, request):
    q = request.getfixturevalue(name)
    rng = random.Random(7)
    paths = list(enumerate_paths(q, 5))
    for p in rng.sample(paths, min(60, len(paths))):
        assert eq_class(q, p).members == naive_closure(q, p.arrows)


def test_chain_to_reconstructs(fig1):
    cls = eq_class(fig1, path(fig1, "b", "a", "c"))
    for w in cls.members:
        chain = cls.chain_to(w)
        assert chain[0] == (1, 0, 2) and chain[-1] == w
        for x, y in zip(chain, chain[1:]):
            assert is_single_rewrite(fig1, x, y)
    assert all(isinstance(p, PathWord) for p in cls.paths(fig1))


def test_sigma_reduced(hexq, conifold):
    assert is_sigma_reduced(hexq, path(hexq, "x"))
    assert not is_sigma_reduced(hexq, path(hexq, "x", "y", "z"))
    assert is_sigma_reduced(conifold, path(conifold, "a2", "b1"))
    assert tau_weight(conifold, path(conifold, "a2", "b1")) == (0, 1, 1, 0)
    assert sigma_multiple((2, 2, 2)) == 2 and sigma_multiple((1, 0)) is None


def test_cyclic_subpath(hexq, conifold):
    assert has_cyclic_subpath(hexq, path(hexq, "x", "y", "z", "x"))
    assert not has_cyclic_subpath(hexq, path(hexq, "x"))
    assert not has_cyclic_subpath(conifold, path(conifold, "a2", "b1", "a2", "b1"))
    assert not has_cyclic_subpath(hexq, path(hexq, "x", "y", "z"))
