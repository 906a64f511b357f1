"""Monomial semigroups attached to a dimer quiver.

Every semigroup here is an image of cycles under an exponent-vector map, so
it is handled through its finite set of elements up to a total-degree bound.
Cycle weights are found by a breadth-first search over (vertex, weight)
states.  The state space is finite once the degree is bounded, so the
elements up to the bound are computed exactly, independent of path length.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .bounds import Bounds, default_bounds
from .model import ZERO, DimerQuiver, Winding, wadd
from .paths import Weight, add, degree, sigma_divides


class CycleAlgebraMismatch(RuntimeError):
    """The source and target cycle algebras of a contraction disagree at the bound."""


def _leq(u: Weight, v: Weight) -> bool:
    return all(x <= y for x, y in zip(u, v))


def _sub(u: Weight, v: Weight) -> Weight:
    return tuple(x - y for x, y in zip(u, v))


def _sort_key(w: Weight) -> tuple:
    return (degree(w), tuple(-x for x in w))


@dataclass(frozen=True)
class MonomialSemigroup:
    variables: tuple[str, ...]
    generators: tuple[Weight, ...]
    degree_bound: int
    provenance: str = ""
    witnesses: dict = field(default_factory=dict, compare=False, repr=False)
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def zero(self) -> Weight:
        return (0,) * self.nvars

    @property
    def sigma(self) -> Weight:
        return (1,) * self.nvars

    @classmethod
    def from_elements(cls, elements: Iterable[Weight], variables: Sequence[str], degree_bound: int,
                      provenance: str = "", witnesses: dict | None = None) -> "MonomialSemigroup":
        """Minimal generators of a set closed under addition up to the bound.

        An element is a generator iff it is not a generator plus another element.
        Elements are later regenerated from the generators, so an input that is
        not closed is read as the semigroup it generates.
        """
        elems = {tuple(e) for e in elements if degree(e) <= degree_bound}
        elems.add((0,) * len(variables))
        gens: list[Weight] = []
        for w in sorted(elems, key=_sort_key):
            if degree(w) == 0:
                continue
            if not any(_leq(g, w) and _sub(w, g) in elems for g in gens):
                gens.append(w)
        return cls(tuple(variables), tuple(gens), degree_bound, provenance, dict(witnesses or {}))

    def elements(self) -> frozenset[Weight]:
        """Every element of total degree at most the bound."""
        if "elements" not in self._cache:
            seen = {self.zero}
            queue = deque([self.zero])
            while queue:
                w = queue.popleft()
                for g in self.generators:
                    nw = add(w, g)
                    if degree(nw) <= self.degree_bound and nw not in seen:
                        seen.add(nw)
                        queue.append(nw)
            self._cache["elements"] = frozenset(seen)
        return self._cache["elements"]

    def __contains__(self, w: Weight) -> bool:
        w = tuple(w)
        if degree(w) <= self.degree_bound:
            return w in self.elements()
        memo = self._cache.setdefault("member", {})
        return self._member(w, memo)

    def _member(self, w: Weight, memo: dict) -> bool:
        # nonnegative integer combination of the generators
        if w in memo:
            return memo[w]
        if degree(w) == 0:
            return True
        if degree(w) <= self.degree_bound:
            return w in self.elements()
        memo[w] = False
        result = any(_leq(g, w) and self._member(_sub(w, g), memo) for g in self.generators)
        memo[w] = result
        return result

    def truncated(self, bound: int) -> frozenset[Weight]:
        return frozenset(e for e in self.elements() if degree(e) <= bound)

    def issubset_at_bound(self, other: "MonomialSemigroup") -> bool:
        b = min(self.degree_bound, other.degree_bound)
        return self.truncated(b) <= other.truncated(b)

    def equal_at_bound(self, other: "MonomialSemigroup") -> bool:
        b = min(self.degree_bound, other.degree_bound)
        return self.truncated(b) == other.truncated(b)

    def difference_witness(self, other: "MonomialSemigroup") -> Weight | None:
        """Smallest element of ``self`` missing from ``other`` at the common bound."""
        b = min(self.degree_bound, other.degree_bound)
        missing = self.truncated(b) - other.truncated(b)
        return min(missing, key=_sort_key) if missing else None

    def is_sigma_reduced_shape(self) -> bool:
        """Generators are sigma or vectors with a zero entry."""
        return all(g == self.sigma or not sigma_divides(g) for g in self.generators)

    def monomial(self, w: Weight) -> dict[str, int]:
        return {v: x for v, x in zip(self.variables, w) if x}

    def to_dict(self) -> dict:
        return {
            "provenance": self.provenance,
            "degree_bound": self.degree_bound,
            "variables": list(self.variables),
            "generators": [self.monomial(g) for g in self.generators],
        }


# ----------------------------------------------------------------------------
# weight maps


def _weight_setup(q: DimerQuiver, psi) -> tuple[tuple[Weight, ...], tuple[str, ...]]:
    """Per-arrow exponent vectors and variable names, through ``psi`` if given."""
    if psi is not None:
        return psi.source_table(), psi.variables
    from .matchings import simple_matchings
    from .paths import tau_table

    return tau_table(q), tuple(d.name(q) for d in simple_matchings(q))


def _resolve(q: DimerQuiver, bounds: Bounds | None, nvars: int) -> Bounds:
    return (bounds or default_bounds()).resolve(q, nvars)


def cycle_weights(q: DimerQuiver, table: Sequence[Weight], nvars: int, start: int,
                  max_degree: int, max_len: int | None = None) -> dict[Weight, tuple[int, ...]]:
    """Weights of cycles at ``start`` up to ``max_degree``, each with a shortest witness word."""
    zero = (0,) * nvars
    parent: dict[tuple[int, Weight], tuple[tuple[int, Weight], int] | None] = {(start, zero): None}
    frontier = [(start, zero)]
    depth = 0
    while frontier and (max_len is None or depth < max_len):
        depth += 1
        nxt = []
        for v, w in frontier:
            for a in q.out_arrows[v]:
                nw = add(w, table[a])
                if degree(nw) > max_degree:
                    continue
                state = (q.arrows[a].head, nw)
                if state not in parent:
                    parent[state] = ((v, w), a)
                    nxt.append(state)
        frontier = nxt
    out: dict[Weight, tuple[int, ...]] = {}
    for (v, w) in parent:
        if v != start:
            continue
        word = []
        state = (v, w)
        while parent[state] is not None:
            state, a = parent[state]
            word.append(a)
        out[w] = tuple(word[::-1])
    return out


def corner_semigroup(q: DimerQuiver, i: int, psi=None, bounds: Bounds | None = None) -> MonomialSemigroup:
    """Weights of the cycles at ``i`` (through ``psi`` when given), up to the degree bound.

    The degree bound alone makes the search finite and exact, so cycle
    length is capped only when ``bounds.max_len`` is set explicitly.
    """
    table, variables = _weight_setup(q, psi)
    max_len = (bounds or default_bounds()).max_len
    b = _resolve(q, bounds, len(variables))
    key = ("corner", i, id(psi), b.degree, max_len)
    if key in q._memo and (psi is None or q._memo[key][0] is psi):
        return q._memo[key][1]
    found = cycle_weights(q, table, len(variables), i, b.degree, max_len)
    sg = MonomialSemigroup.from_elements(found, variables, b.degree, f"corner at vertex {i}", found)
    q._memo[key] = (psi, sg)
    return sg


def additive_closure(seeds: Iterable[Weight], nvars: int, bound: int) -> set[Weight]:
    zero = (0,) * nvars
    gens = sorted({s for s in seeds if 0 < degree(s) <= bound}, key=_sort_key)
    seen = {zero}
    queue = deque([zero])
    while queue:
        w = queue.popleft()
        for g in gens:
            nw = add(w, g)
            if degree(nw) <= bound and nw not in seen:
                seen.add(nw)
                queue.append(nw)
    return seen


def union_semigroup(parts: Sequence[MonomialSemigroup], provenance: str) -> MonomialSemigroup:
    bound = min(p.degree_bound for p in parts)
    nvars = parts[0].nvars
    witnesses: dict = {}
    seeds: set[Weight] = set()
    for p in parts:
        seeds.update(p.generators)
        for w, word in p.witnesses.items():
            witnesses.setdefault(w, word)
    elems = additive_closure(seeds, nvars, bound)
    return MonomialSemigroup.from_elements(elems, parts[0].variables, bound, provenance, witnesses)


def intersection_semigroup(parts: Sequence[MonomialSemigroup], provenance: str) -> MonomialSemigroup:
    bound = min(p.degree_bound for p in parts)
    common = set(parts[0].truncated(bound))
    for p in parts[1:]:
        common &= p.truncated(bound)
    return MonomialSemigroup.from_elements(common, parts[0].variables, bound, provenance)


def corner_semigroups(q: DimerQuiver, psi=None, bounds: Bounds | None = None) -> list[MonomialSemigroup]:
    return [corner_semigroup(q, i, psi, bounds) for i in q.vertices]


def target_cycle_algebra(psi, bounds: Bounds | None = None) -> MonomialSemigroup:
    """The target's own cycle semigroup, at the degree bound resolved for the source."""
    b = _resolve(psi.source, bounds, len(psi.variables))
    tb = Bounds(**{**b.to_dict(), "max_len": (bounds or default_bounds()).max_len})
    parts = [corner_semigroup(psi.target, i, None, tb) for i in psi.target.vertices]
    return union_semigroup(parts, "cycle algebra of the contracted quiver")


def cycle_algebra(q: DimerQuiver, psi=None, bounds: Bounds | None = None,
                  cross_check: bool = True) -> MonomialSemigroup:
    """The semigroup generated by all corner weights.

    With a contraction, it is cross-checked against the contracted quiver's
    own cycle semigroup; a mismatch raises :class:`CycleAlgebraMismatch`.
    """
    s = union_semigroup(corner_semigroups(q, psi, bounds), "cycle algebra")
    if cross_check and psi is not None and not psi.trivial:
        t = target_cycle_algebra(psi, bounds)
        if not s.equal_at_bound(t):
            w = t.difference_witness(s) or s.difference_witness(t)
            raise CycleAlgebraMismatch(f"cycle algebras differ at {s.monomial(w)}")
    return s


def homotopy_center(q: DimerQuiver, psi=None, bounds: Bounds | None = None) -> MonomialSemigroup:
    """Intersection of all corner semigroups, generators re-extracted."""
    return intersection_semigroup(corner_semigroups(q, psi, bounds), "homotopy center")


@dataclass(frozen=True)
class CornerComparison:
    semigroups: tuple[MonomialSemigroup, ...]
    equal: tuple[tuple[bool, ...], ...]
    witnesses: dict  # (i, j) -> monomial in corner i missing from corner j

    @property
    def all_equal(self) -> bool:
        return all(all(row) for row in self.equal)

    def first_difference(self) -> tuple[int, int, Weight] | None:
        for (i, j), w in sorted(self.witnesses.items(), key=lambda kv: (_sort_key(kv[1]), kv[0])):
            return (i, j, w)
        return None


def compare_corner_rings(q: DimerQuiver, psi=None, bounds: Bounds | None = None) -> CornerComparison:
    corners = corner_semigroups(q, psi, bounds)
    n = len(corners)
    eq = [[True] * n for _ in range(n)]
    witnesses = {}
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            w = corners[i].difference_witness(corners[j])
            if w is not None:
                eq[i][j] = eq[j][i] = False
                witnesses[(i, j)] = w
    return CornerComparison(tuple(corners), tuple(tuple(r) for r in eq), witnesses)


# ----------------------------------------------------------------------------
# R versus S


def reduced_cycle_exists(q: DimerQuiver, table: Sequence[Weight], nvars: int, i: int, u: Winding,
                         max_degree: int, max_winding: int) -> tuple[int, ...] | None:
    """A cycle at ``i`` with winding ``u`` whose weight has a zero entry.

    Searches (vertex, winding, weight) states; weights divisible by the
    all-ones vector are pruned since weights only grow along a path.
    """
    zero = (0,) * nvars
    box = max(max_winding, abs(u[0]), abs(u[1])) + 1
    start = (i, ZERO, zero)
    parent = {start: None}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        v, wind, w = state
        for a in q.out_arrows[v]:
            arr = q.arrows[a]
            nw = add(w, table[a])
            if degree(nw) > max_degree or (nvars and sigma_divides(nw)) or nvars == 0:
                continue
            nwind = wadd(wind, arr.winding)
            if max(abs(nwind[0]), abs(nwind[1])) > box:
                continue
            nstate = (arr.head, nwind, nw)
            if nstate in parent:
                continue
            parent[nstate] = (state, a)
            if arr.head == i and nwind == tuple(u):
                word = []
                s = nstate
                while parent[s] is not None:
                    s, b = parent[s]
                    word.append(b)
                return tuple(word[::-1])
            queue.append(nstate)
    return None


@dataclass(frozen=True)
class RSVerdict:
    status: str  # "equal-at-bound", "differ", "inconclusive"
    S: MonomialSemigroup
    R: MonomialSemigroup
    witness: Weight | None = None  # generator of S outside R
    missing_vertex: int | None = None  # a corner lacking the witness
    missing_reduced: tuple = ()  # (winding, vertex) pairs without a reduced cycle
    primary: bool = True
    secondary: bool = True

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "S": self.S.to_dict(),
            "R": self.R.to_dict(),
            "witness": None if self.witness is None else self.S.monomial(self.witness),
            "missing_vertex": self.missing_vertex,
            "missing_reduced": [{"winding": list(u), "vertex": i} for u, i in self.missing_reduced],
        }


def check_R_equals_S(q: DimerQuiver, psi=None, bounds: Bounds | None = None) -> RSVerdict:
    """Compare the homotopy center with the cycle algebra, two ways.

    Primary: every generator of S lies in every corner semigroup.
    Secondary: for every reduced generator of S, with winding u, each vertex
    carries a reduced cycle of winding u.  The two must agree.
    """
    table, variables = _weight_setup(q, psi)
    b = _resolve(q, bounds, len(variables))
    corners = corner_semigroups(q, psi, bounds)
    S = union_semigroup(corners, "cycle algebra")
    R = intersection_semigroup(corners, "homotopy center")

    witness, missing_vertex = None, None
    for g in S.generators:
        for i, c in enumerate(corners):
            if g not in c:
                witness, missing_vertex = g, i
                break
        if witness is not None:
            break
    primary = witness is None

    missing = []
    for g in S.generators:
        if sigma_divides(g):
            continue
        word = S.witnesses.get(g)
        if word is None:
            continue
        u = ZERO
        for a in word:
            u = wadd(u, q.arrows[a].winding)
        for i in q.vertices:
            if reduced_cycle_exists(q, table, len(variables), i, u, b.degree, b.max_winding) is None:
                missing.append((u, i))
    secondary = not missing

    if primary and secondary:
        status = "equal-at-bound"
    elif not primary and not secondary:
        status = "differ"
    else:
        status = "inconclusive"
    return RSVerdict(status, S, R, witness, missing_vertex, tuple(missing), primary, secondary)
