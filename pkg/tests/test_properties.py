"""Randomized properties driven by hypothesis."""

from hypothesis import given, settings, strategies as st

from dimerkit.corpus import entry
from dimerkit.model import parse_model, format_model, torus_cover, validate, wadd
from dimerkit.paths import PathWord, add, eq_class, equal_mod_I, eta_weight, tau_weight

MODELS = {name: entry(name).quiver() for name in ("hex", "conifold", "fig1")}


@st.composite
def walks(draw, max_len=6):
    name = draw(st.sampled_from(sorted(MODELS)))
    q = MODELS[name]
    v = draw(st.integers(0, q.num_vertices - 1))
    start = v
    word = []
    for _ in range(draw(st.integers(1, max_len))):
        a = draw(st.sampled_from(q.out_arrows[v]))
        word.append(a)
        v = q.arrows[a].head
    return q, PathWord.from_arrows(q, word, start=start)


@given(walks(), st.integers(1, 5))
@settings(max_examples=60, deadline=None)
def test_weights_are_additive(qp, cut):
    q, p = qp
    cut = min(cut, len(p) - 1)
    if cut < 1:
        return
    a = PathWord.from_arrows(q, p.arrows[:cut])
    b = PathWord.from_arrows(q, p.arrows[cut:])
    assert a.then(b) == p
    assert eta_weight(q, p) == add(eta_weight(q, a), eta_weight(q, b))
    assert tau_weight(q, p) == add(tau_weight(q, a), tau_weight(q, b))
    assert p.winding == wadd(a.winding, b.winding)


@given(walks())
@settings(max_examples=60, deadline=None)
def test_class_members_share_invariants(qp):
    q, p = qp
    cls = eq_class(q, p)
    eta = eta_weight(q, p)
    for r in cls.paths(q):
        assert (r.tail, r.head, r.winding) == (p.tail, p.head, p.winding)
        assert eta_weight(q, r) == eta
        assert len(r) <= sum(eta)


@given(walks(4), walks(4), walks(4))
@settings(max_examples=60, deadline=None)
def test_equality_is_an_equivalence(a, b, c):
    q = a[0]
    ps = [x[1] for x in (a, b, c) if x[0] is q]
    for x in ps:
        assert equal_mod_I(q, x, x).equal
    for x in ps:
        for y in ps:
            assert equal_mod_I(q, x, y).equal == equal_mod_I(q, y, x).equal
            for z in ps:
                if equal_mod_I(q, x, y).equal and equal_mod_I(q, y, z).equal:
                    assert equal_mod_I(q, x, z).equal


@given(st.sampled_from(sorted(MODELS)), st.integers(1, 3), st.integers(1, 2))
@settings(max_examples=15, deadline=None)
def test_covers_are_valid(name, k, l):
    cover = torus_cover(MODELS[name], k, l)
    assert validate(cover).valid
    assert cover.num_vertices == k * l * MODELS[name].num_vertices
    assert parse_model(format_model(cover)) == cover
