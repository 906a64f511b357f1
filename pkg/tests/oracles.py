"""Slow, independent reference implementations used to freeze expected values."""

from __future__ import annotations

import itertools

import networkx as nx


def brute_matchings(q):
    """Every arrow subset meeting every face exactly once (2^|Q1| scan)."""
    n = len(q.arrows)
    faces = [set(f.boundary) for f in q.faces]
    out = []
    for mask in range(1 << n):
        s = {a for a in range(n) if mask >> a & 1}
        if all(len(s & f) == 1 for f in faces):
            out.append(frozenset(s))
    return sorted(out, key=sorted)


def matchings_by_arrow_dfs(q):
    """Include/exclude recursion over arrows in id order; no face heuristic."""
    n = len(q.arrows)
    faces_of = [[f.id for f in q.faces if a in f.boundary] for a in range(n)]
    last_arrow = {f.id: max(f.boundary) for f in q.faces}
    used = [0] * len(q.faces)
    out = []

    def rec(a, chosen):
        if a == n:
            if all(u == 1 for u in used):
                out.append(frozenset(chosen))
            return
        # exclude
        if all(used[f] == 1 or last_arrow[f] != a for f in faces_of[a]):
            rec(a + 1, chosen)
        if all(used[f] == 0 for f in faces_of[a]):
            for f in faces_of[a]:
                used[f] = 1
            chosen.append(a)
            rec(a + 1, chosen)
            chosen.pop()
            for f in faces_of[a]:
                used[f] = 0

    rec(0, [])
    return sorted(out, key=sorted)


def nx_simple(q, matching):
    g = nx.MultiDiGraph()
    g.add_nodes_from(q.vertices)
    for arr in q.arrows:
        if arr.id not in matching:
            g.add_edge(arr.tail, arr.head)
    return nx.is_strongly_connected(g)


def naive_closure(q, word, limit=100000):
    """Equivalence class by literal sub-tuple substitution of complement pairs."""
    pairs = []
    for a in q.arrows:
        comp = {}
        for f in q.faces:
            if a.id in f.boundary:
                k = f.boundary.index(a.id)
                comp[f.sign] = tuple(f.boundary[k + 1:] + f.boundary[:k])
        assert comp["+"] and comp["-"], "oracle does not handle length-one faces"
        pairs.append((comp["+"], comp["-"]))
        pairs.append((comp["-"], comp["+"]))
    seen = {tuple(word)}
    todo = [tuple(word)]
    while todo:
        w = todo.pop()
        for lhs, rhs in pairs:
            m = len(lhs)
            for k in range(len(w) - m + 1):
                if w[k:k + m] == lhs:
                    nw = w[:k] + rhs + w[k + m:]
                    if nw not in seen:
                        seen.add(nw)
                        todo.append(nw)
                        assert len(seen) < limit
    return seen


def naive_cycles(q, i, max_len):
    """All cycles at i of length 1..max_len, by plain recursion."""
    out = []

    def rec(v, word):
        if word and v == i:
            out.append(tuple(word))
        if len(word) == max_len:
            return
        for arr in q.arrows:
            if arr.tail == v:
                word.append(arr.id)
                rec(arr.head, word)
                word.pop()

    rec(i, [])
    return out


def weight_of(word, matchings):
    return tuple(sum(1 for a in word if a in d) for d in matchings)


def closure_to_degree(seeds, nvars, bound):
    elems = {(0,) * nvars}
    frontier = list(elems)
    while frontier:
        new = []
        for e in frontier:
            for s in seeds:
                w = tuple(x + y for x, y in zip(e, s))
                if sum(w) <= bound and w not in elems:
                    elems.add(w)
                    new.append(w)
        frontier = new
    return elems


def irreducibles(elems):
    """Nonzero elements that are not a sum of two nonzero elements."""
    nz = [e for e in elems if sum(e)]
    s = set(nz)
    out = []
    for e in nz:
        if not any(tuple(x - y for x, y in zip(e, f)) in s for f in nz if f != e and all(y <= x for x, y in zip(e, f))):
            out.append(e)
    return sorted(out)


def brute_corner(q, i, simple, bound):
    """Cycle weights at i up to degree ``bound``, valid when every arrow has degree >= 1."""
    ws = {weight_of(c, simple) for c in naive_cycles(q, i, bound)}
    ws = {w for w in ws if sum(w) <= bound}
    return closure_to_degree(ws, len(simple), bound)
